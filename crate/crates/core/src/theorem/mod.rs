//! Lower bound for the odd-multiplicity sumset of arithmetic progressions.
//!
//! For positive `n` and `a_1, …, a_k`, and a finite set `V` of odd size, the
//! set `V ⊕ {a_1, …, n a_1} ⊕ … ⊕ {a_k, …, n a_k}` has at least `n` elements.
//! Equivalently the GF(2) polynomial
//!
//! ```text
//! p(x) = p_V(x) · ∏_i (1 + x^{a_i} + … + x^{(n-1) a_i})
//! ```
//!
//! has at least `n` nonzero coefficients. This module computes `p`, exposes
//! each ingredient of the constructive argument (gcd normalization, the
//! split `n = 2^α t`, the factorization `p = q r`, the residue counts, the
//! binary expansion `J` and the tiling), and produces checkable
//! [`Certificate`]s that list at least `2^α` odd coefficients in each
//! residue class modulo `t`.

mod certificate;
pub mod tiling;

pub use certificate::{make_certificate, verify_certificate, AuditFailure, Certificate, ResidueClass};

use serde::Serialize;

use crate::error::{overflow, Error, Result};
use crate::poly::{Gf2Poly, Kernel};
use crate::setops::IntSet;

/// One input `(n, a_1 … a_k, V)`. `V = {0}` is the plain sumset case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: u64,
    a: Vec<u64>,
    v: IntSet,
}

impl Instance {
    pub fn new(n: u64, a: Vec<u64>) -> Result<Self> {
        Self::with_v(n, a, IntSet::new([0]))
    }

    /// Rejects `V` of even size.
    pub fn with_v(n: u64, a: Vec<u64>, v: IntSet) -> Result<Self> {
        if v.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "V must have odd size, got {} elements",
                v.len()
            )));
        }
        Self::exploratory(n, a, v)
    }

    /// Like [`Instance::with_v`] but accepts any nonempty `V`. The lower bound
    /// makes no claim about such instances.
    pub fn exploratory(n: u64, a: Vec<u64>, v: IntSet) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if a.is_empty() {
            return Err(Error::InvalidArgument("need at least one step a_i".into()));
        }
        if a.contains(&0) {
            return Err(Error::InvalidArgument("steps a_i must be positive".into()));
        }
        if v.is_empty() {
            return Err(Error::InvalidArgument("V must be nonempty".into()));
        }
        Ok(Instance { n, a, v })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn v(&self) -> &IntSet {
        &self.v
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn has_odd_v(&self) -> bool {
        self.v.len() % 2 == 1
    }

    pub fn is_plain(&self) -> bool {
        self.v.as_slice() == [0]
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_all(a: &[u64]) -> u64 {
    a.iter().fold(0, |g, &x| gcd(g, x))
}

/// Result of [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    /// Instance with steps `a_i / g` and `V` replaced by `{(v - offset)/g}`
    /// over the elements `v ≡ offset (mod g)`.
    pub instance: Instance,
    pub g: u64,
    /// Residue of `V` modulo `g` that was kept. Always 0 when `V = {0}`.
    pub offset: u64,
}

/// Divides out `g = gcd(a)`.
///
/// `p(x)` splits by exponent residue mod `g` into the pieces
/// `x^c p_{V_c}(x) P(x^g)`, where `V_c` collects the elements of `V` congruent
/// to `c`. The normalized instance is the piece for the smallest `c` whose
/// class has odd size, rescaled by `g`; its product's support maps
/// injectively into `p`'s via `e -> offset + g e`. When every element of `V`
/// shares one residue (in particular `V = {0}`) the support sizes are equal.
pub fn normalize(inst: &Instance) -> Result<Normalized> {
    let g = gcd_all(&inst.a);
    let a: Vec<u64> = inst.a.iter().map(|x| x / g).collect();
    if g == 1 {
        return Ok(Normalized { instance: inst.clone(), g, offset: 0 });
    }
    let mut counts = std::collections::BTreeMap::<u64, usize>::new();
    for v in inst.v.iter() {
        *counts.entry(v % g).or_default() += 1;
    }
    let offset = counts
        .iter()
        .find(|&(_, &c)| c % 2 == 1)
        .map(|(&r, _)| r)
        .ok_or_else(|| Error::InvalidArgument("no residue class of V mod g has odd size".into()))?;
    let v: IntSet = inst.v.iter().filter(|x| x % g == offset).map(|x| (x - offset) / g).collect();
    Ok(Normalized { instance: Instance { n: inst.n, a, v }, g, offset })
}

/// `n = 2^alpha · t` with `t` odd.
pub fn split_n(n: u64) -> Result<(u32, u64)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let alpha = n.trailing_zeros();
    Ok((alpha, n >> alpha))
}

/// `p_V(x) · ∏_i (1 + x^{a_i} + … + x^{(n-1) a_i})`.
pub fn build_p(inst: &Instance) -> Result<Gf2Poly> {
    build_p_with(inst, Kernel::Auto)
}

pub(crate) fn build_p_with(inst: &Instance, kernel: Kernel) -> Result<Gf2Poly> {
    let mut p = Gf2Poly::one();
    for &ai in &inst.a {
        p = p.mul_with(&Gf2Poly::geometric(ai, inst.n)?, kernel)?;
    }
    if !inst.is_plain() {
        p = p.mul_with(&inst.v.to_poly(), kernel)?;
    }
    Ok(p)
}

/// `q = ∏(1 + x^{a_i} + … + x^{(t-1) a_i})` and
/// `r = ∏(1 + x^{t a_i} + … + x^{(2^α - 1) t a_i})`, so that `q r` is the
/// product for `V = {0}`.
pub fn build_qr(inst: &Instance) -> Result<(Gf2Poly, Gf2Poly)> {
    let (alpha, t) = split_n(inst.n)?;
    let mut q = Gf2Poly::one();
    let mut r = Gf2Poly::one();
    for &ai in &inst.a {
        q = q.mul(&Gf2Poly::geometric(ai, t)?)?;
        let step = ai.checked_mul(t).ok_or_else(|| overflow(format!("{ai}*{t}")))?;
        r = r.mul(&Gf2Poly::geometric(step, 1 << alpha)?)?;
    }
    Ok((q, r))
}

/// Number of terms of `q(x) · p_V(x)`, before any cancellation, whose
/// exponent falls in each residue class mod `t`. Entry `b` is `F(b)`.
///
/// When `gcd(a) = 1` the table is constant, equal to `t^{k-1} |V|`. Counts
/// are exact; instances whose term total `t^k |V|` exceeds `u128` are
/// rejected.
pub fn residue_counts(inst: &Instance) -> Result<Vec<u128>> {
    let (_, t) = split_n(inst.n)?;
    let k = u32::try_from(inst.k()).map_err(|_| overflow("too many steps"))?;
    (t as u128)
        .checked_pow(k)
        .and_then(|x| x.checked_mul(inst.v.len() as u128))
        .ok_or_else(|| overflow(format!("{t}^{k} * |V| terms do not fit in 128 bits")))?;
    if t > 1 << 14 {
        return Err(Error::BudgetExceeded(format!("residue table of size {t}")));
    }
    let t_us = t as usize;
    let mut counts = vec![0u128; t_us];
    for v in inst.v.iter() {
        counts[(v % t) as usize] += 1;
    }
    for &ai in &inst.a {
        let step = (ai % t) as usize;
        let mut next = vec![0u128; t_us];
        for (b, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut r = b;
            for _ in 0..t_us {
                next[r] += c;
                r += step;
                if r >= t_us {
                    r -= t_us;
                }
            }
        }
        counts = next;
    }
    Ok(counts)
}

/// 2-adic valuation.
pub fn v2(x: u64) -> u32 {
    x.trailing_zeros()
}

/// Bit positions of `E = (2^alpha - 1) · Σ_i 2^{v2(a_i)}`, ascending.
///
/// `(1+y)^E` is the power of `1+y` that divides `r` after substituting
/// `y = x^t`; `|J| >= alpha` always holds.
pub fn exponent_j(alpha: u32, a: &[u64]) -> Result<Vec<u32>> {
    let e = exponent_e(alpha, a)?;
    Ok((0..128).filter(|&b| e >> b & 1 == 1).collect())
}

/// `E = (2^alpha - 1) · Σ_i 2^{v2(a_i)}`.
pub fn exponent_e(alpha: u32, a: &[u64]) -> Result<u128> {
    if a.contains(&0) {
        return Err(Error::InvalidArgument("steps a_i must be positive".into()));
    }
    let mult = 1u128
        .checked_shl(alpha)
        .ok_or_else(|| overflow(format!("2^{alpha}")))?
        - 1;
    let sum = a
        .iter()
        .try_fold(0u128, |acc, &x| acc.checked_add(1u128 << v2(x)))
        .ok_or_else(|| overflow("sum of 2-power parts"))?;
    mult.checked_mul(sum)
        .ok_or_else(|| overflow(format!("(2^{alpha}-1)*{sum}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Report {
    pub support_size: u64,
    pub n: u64,
    pub pass: bool,
}

/// Checks `|⊕_i {a_i, …, n a_i}| >= n`.
pub fn verify_thm1(inst: &Instance) -> Result<Report> {
    if !inst.is_plain() {
        return Err(Error::InvalidArgument("plain sumset check needs V = {0}".into()));
    }
    report(inst)
}

/// Checks `|V ⊕ ⊕_i {a_i, …, n a_i}| >= n` for `|V|` odd.
pub fn verify_thm2(inst: &Instance) -> Result<Report> {
    if !inst.has_odd_v() {
        return Err(Error::InvalidArgument(format!(
            "V must have odd size, got {} elements",
            inst.v.len()
        )));
    }
    report(inst)
}

fn report(inst: &Instance) -> Result<Report> {
    let size = build_p(inst)?.support_size() as u64;
    Ok(Report { support_size: size, n: inst.n, pass: size >= inst.n })
}
