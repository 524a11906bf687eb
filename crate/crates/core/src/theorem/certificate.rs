use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{build_p, build_p_with, exponent_j, gcd_all, normalize, split_n, Instance};
use crate::error::{Error, Result};
use crate::poly::{Gf2Poly, Kernel};

/// Certificates list every odd exponent when the relevant part of the
/// support is at most this large; otherwise each class is cut to `2^alpha`.
pub const FULL_LISTING_LIMIT: u64 = 1 << 16;

/// Witness that `p` has at least `n` nonzero coefficients.
///
/// With `g = gcd(a)` all listed exponents share one residue mod `g`; for an
/// exponent `e`, its class is `(e / g) mod t`. Each of the `t` classes lists
/// at least `2^alpha` distinct exponents with coefficient 1 in `p`, so the
/// listing has at least `2^alpha t = n` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub g: u64,
    pub alpha: u32,
    pub t: u64,
    #[serde(rename = "J")]
    pub j: Vec<u32>,
    pub residues: Vec<ResidueClass>,
    /// Number of listed exponents.
    pub total: u64,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    pub i: u64,
    pub exponents: Vec<u64>,
}

impl Certificate {
    /// Compact JSON, newline-terminated. Field order is fixed by the struct.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }
}

/// Why [`verify_certificate`] rejected a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditFailure {
    #[error("instance is not valid for the bound: {0}")]
    InvalidInstance(String),
    #[error("n = {n} is not 2^{alpha} * {t} with {t} odd")]
    BadSplit { n: u64, alpha: u32, t: u64 },
    #[error("gcd recorded as {found}, actual {expected}")]
    GcdMismatch { expected: u64, found: u64 },
    #[error("J recorded as {found:?}, recomputed {expected:?}")]
    JMismatch { expected: Vec<u32>, found: Vec<u32> },
    #[error("|J| = {size} is below alpha = {alpha}")]
    JTooSmall { size: usize, alpha: u32 },
    #[error("expected residue classes 0..{t} in order")]
    ClassLayout { t: u64 },
    #[error("class {i} lists {len} exponents, needs {need}")]
    ClassTooSmall { i: u64, len: usize, need: u64 },
    #[error("class {i} is not strictly ascending")]
    NotAscending { i: u64 },
    #[error("exponent {e} listed twice")]
    Duplicate { e: u64 },
    #[error("exponent {e} is in residue {found} mod g, others in {expected}")]
    MixedOffset { e: u64, expected: u64, found: u64 },
    #[error("exponent {e} does not belong to class {i}")]
    WrongClass { e: u64, i: u64 },
    #[error("exponent {e} has coefficient 0 in the product")]
    NotInSupport { e: u64 },
    #[error("total recorded as {found}, listing has {expected}")]
    TotalMismatch { expected: u64, found: u64 },
    #[error("total {total} is below n = {n}")]
    TotalBelowN { total: u64, n: u64 },
    #[error("untruncated certificate omits odd exponents of class {i}")]
    Incomplete { i: u64 },
    #[error("recomputing the product failed: {0}")]
    Compute(Error),
}

/// Builds the certificate for `inst`.
///
/// Exponents are read off the product `p` itself: those congruent to the
/// normalization offset mod `g`, grouped by `(e / g) mod t`. Fails with
/// [`Error::BoundViolated`] if any class is short of `2^alpha` or
/// `|J| < alpha`.
pub fn make_certificate(inst: &Instance) -> Result<Certificate> {
    if !inst.has_odd_v() {
        return Err(Error::InvalidArgument("V must have odd size".into()));
    }
    let norm = normalize(inst)?;
    let (g, offset) = (norm.g, norm.offset);
    let (alpha, t) = split_n(inst.n())?;
    let j = exponent_j(alpha, norm.instance.a())?;
    if (j.len() as u64) < alpha as u64 {
        return Err(Error::BoundViolated(format!("|J| = {} < alpha = {alpha}", j.len())));
    }
    if t > 1 << 32 {
        return Err(Error::BudgetExceeded(format!("{t} residue classes")));
    }

    let p = build_p(inst)?;
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); t as usize];
    for e in p.iter().filter(|e| e % g == offset) {
        classes[((e / g) % t) as usize].push(e);
    }

    let need = 1u64 << alpha;
    for (i, c) in classes.iter().enumerate() {
        if (c.len() as u64) < need {
            return Err(Error::BoundViolated(format!(
                "class {i} mod {t} has {} odd exponents, fewer than 2^{alpha} (n={}, a={:?}, V={})",
                c.len(),
                inst.n(),
                inst.a(),
                inst.v()
            )));
        }
    }

    let listed: u64 = classes.iter().map(|c| c.len() as u64).sum();
    let truncated = listed > FULL_LISTING_LIMIT;
    if truncated {
        for c in &mut classes {
            c.truncate(need as usize);
        }
    }
    let residues: Vec<ResidueClass> = classes
        .into_iter()
        .enumerate()
        .map(|(i, exponents)| ResidueClass { i: i as u64, exponents })
        .collect();
    let total = residues.iter().map(|r| r.exponents.len() as u64).sum();
    Ok(Certificate { g, alpha, t, j, residues, total, truncated })
}

/// Audits `cert` against `inst`, recomputing the product from scratch.
pub fn verify_certificate(inst: &Instance, cert: &Certificate) -> std::result::Result<(), AuditFailure> {
    if !inst.has_odd_v() {
        return Err(AuditFailure::InvalidInstance("V must have odd size".into()));
    }
    let n = inst.n();
    let bad_split = AuditFailure::BadSplit { n, alpha: cert.alpha, t: cert.t };
    if cert.t.is_multiple_of(2) || cert.alpha >= 64 {
        return Err(bad_split);
    }
    match cert.t.checked_mul(1 << cert.alpha) {
        Some(m) if m == n => {}
        _ => return Err(bad_split),
    }

    let g = gcd_all(inst.a());
    if cert.g != g {
        return Err(AuditFailure::GcdMismatch { expected: g, found: cert.g });
    }
    let scaled: Vec<u64> = inst.a().iter().map(|x| x / g).collect();
    let j = exponent_j(cert.alpha, &scaled).map_err(AuditFailure::Compute)?;
    if cert.j != j {
        return Err(AuditFailure::JMismatch { expected: j, found: cert.j.clone() });
    }
    if (j.len() as u64) < cert.alpha as u64 {
        return Err(AuditFailure::JTooSmall { size: j.len(), alpha: cert.alpha });
    }

    if cert.residues.len() as u64 != cert.t
        || cert.residues.iter().enumerate().any(|(i, r)| r.i != i as u64)
    {
        return Err(AuditFailure::ClassLayout { t: cert.t });
    }

    let need = 1u64 << cert.alpha;
    let mut seen = HashSet::new();
    let mut offset = None;
    for class in &cert.residues {
        let i = class.i;
        if (class.exponents.len() as u64) < need {
            return Err(AuditFailure::ClassTooSmall { i, len: class.exponents.len(), need });
        }
        if class.exponents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AuditFailure::NotAscending { i });
        }
        for &e in &class.exponents {
            if !seen.insert(e) {
                return Err(AuditFailure::Duplicate { e });
            }
            let expected = *offset.get_or_insert(e % g);
            if e % g != expected {
                return Err(AuditFailure::MixedOffset { e, expected, found: e % g });
            }
            if (e / g) % cert.t != i {
                return Err(AuditFailure::WrongClass { e, i });
            }
        }
    }

    let listed = seen.len() as u64;
    if cert.total != listed {
        return Err(AuditFailure::TotalMismatch { expected: listed, found: cert.total });
    }
    if cert.total < n {
        return Err(AuditFailure::TotalBelowN { total: cert.total, n });
    }

    let p = recompute_product(inst).map_err(AuditFailure::Compute)?;
    for class in &cert.residues {
        for &e in &class.exponents {
            if !p.coeff(e) {
                return Err(AuditFailure::NotInSupport { e });
            }
        }
    }
    if !cert.truncated {
        let offset = offset.unwrap_or(0);
        let mut per_class = vec![0usize; cert.t as usize];
        for e in p.iter().filter(|e| e % g == offset) {
            per_class[((e / g) % cert.t) as usize] += 1;
        }
        for class in &cert.residues {
            if per_class[class.i as usize] != class.exponents.len() {
                return Err(AuditFailure::Incomplete { i: class.i });
            }
        }
    }
    Ok(())
}

/// Recomputes `p` through the pairwise-sum kernel when that is affordable,
/// so the audit does not reuse the route the certificate was built with.
fn recompute_product(inst: &Instance) -> Result<Gf2Poly> {
    let span: u128 = inst.a().iter().map(|&a| a as u128 * (inst.n() as u128 - 1)).sum::<u128>()
        + inst.v().iter().last().unwrap_or(0) as u128;
    let work = span * inst.n() as u128 * inst.k() as u128;
    if work <= 1 << 30 {
        build_p_with(inst, Kernel::Sparse)
    } else {
        build_p(inst)
    }
}
