//! Polynomials over GF(2) with nonnegative exponents.
//!
//! A [`Gf2Poly`] is identified with its support, the set of exponents whose
//! coefficient is 1. Addition is symmetric difference of supports and
//! multiplication keeps the exponents that arise as `e + f` an odd number of
//! times, so `p_{A ⊕ B} = p_A · p_B` for the odd-representation sumset.
//!
//! Two storage forms are used internally. Sets built from user input stay
//! sparse (sorted exponent list). Products whose exponent span is small are
//! computed and stored densely, one bit per exponent in 64-bit words. The
//! form never leaks through the API: equality, hashing and rendering are all
//! defined on the support.

pub mod kernel;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::collections::HashSet;

use crate::error::{overflow, Error, Result};

/// Products whose exponent span is below this many bits are computed densely.
pub const DENSE_SPAN_LIMIT: u64 = 1 << 26;

/// Below this many term pairs the sparse path is used regardless of span.
const SPARSE_PAIR_LIMIT: u64 = 1 << 12;

/// Largest support `pow_one_plus_y` will materialize (2^26 exponents).
const MAX_SUBSET_SUM_BITS: u32 = 26;

#[derive(Clone)]
enum Repr {
    /// Strictly increasing exponents.
    Sparse(Vec<u64>),
    /// Bit `b` of `words[w]` is the coefficient of `x^(64 (base + w) + b)`.
    /// Neither the first nor the last word is zero; empty polynomials are
    /// always stored sparse.
    Dense { base: u64, words: Vec<u64> },
}

/// A polynomial over GF(2), identified with its support.
#[derive(Clone)]
pub struct Gf2Poly {
    repr: Repr,
}

/// Which multiplication route to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kernel {
    /// Pick by result span and operand sizes.
    #[default]
    Auto,
    /// Word-level carry-less product (requires span below [`DENSE_SPAN_LIMIT`]).
    Dense,
    /// Pairwise exponent sums with hash-set parity toggling.
    Sparse,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { repr: Repr::Sparse(Vec::new()) }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(e: u64) -> Self {
        Gf2Poly { repr: Repr::Sparse(vec![e]) }
    }

    /// The polynomial `Σ_{s ∈ S} x^s`. Repeated elements are collapsed, so the
    /// support is exactly the set of distinct inputs.
    pub fn from_set<I: IntoIterator<Item = u64>>(set: I) -> Self {
        let mut v: Vec<u64> = set.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Gf2Poly { repr: Repr::Sparse(v) }
    }

    /// Builds from an already strictly increasing exponent list.
    pub(crate) fn from_sorted_support(v: Vec<u64>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Gf2Poly { repr: Repr::Sparse(v) }
    }

    /// Builds from little-endian words: bit `b` of `words[w]` is the
    /// coefficient of `x^(64 w + b)`.
    pub fn from_le_words(words: Vec<u64>) -> Self {
        Self::from_words(0, words)
    }

    fn from_words(base: u64, mut words: Vec<u64>) -> Self {
        let trailing = words.iter().rev().take_while(|&&w| w == 0).count();
        words.truncate(words.len() - trailing);
        let leading = words.iter().take_while(|&&w| w == 0).count();
        if words.is_empty() {
            return Self::zero();
        }
        if leading > 0 {
            words.drain(..leading);
        }
        Gf2Poly { repr: Repr::Dense { base: base + leading as u64, words } }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Sparse(v) => v.is_empty(),
            Repr::Dense { .. } => false,
        }
    }

    /// Highest exponent, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        match &self.repr {
            Repr::Sparse(v) => v.last().copied(),
            Repr::Dense { base, words } => {
                let last = *words.last()?;
                Some(64 * (base + words.len() as u64 - 1) + 63 - last.leading_zeros() as u64)
            }
        }
    }

    /// Lowest exponent, `None` for the zero polynomial.
    pub fn min_exponent(&self) -> Option<u64> {
        match &self.repr {
            Repr::Sparse(v) => v.first().copied(),
            Repr::Dense { base, words } => Some(64 * base + words[0].trailing_zeros() as u64),
        }
    }

    /// Coefficient of `x^e`.
    pub fn coeff(&self, e: u64) -> bool {
        match &self.repr {
            Repr::Sparse(v) => v.binary_search(&e).is_ok(),
            Repr::Dense { base, words } => {
                let w = e / 64;
                if w < *base {
                    return false;
                }
                match words.get((w - base) as usize) {
                    Some(word) => word >> (e % 64) & 1 == 1,
                    None => false,
                }
            }
        }
    }

    /// Exponents with coefficient 1, ascending.
    pub fn iter(&self) -> SupportIter<'_> {
        match &self.repr {
            Repr::Sparse(v) => SupportIter::Sparse(v.iter()),
            Repr::Dense { base, words } => SupportIter::Dense {
                base: *base,
                words,
                index: 0,
                current: words[0],
            },
        }
    }

    pub fn support(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Sparse(v) => v.clone(),
            Repr::Dense { .. } => self.iter().collect(),
        }
    }

    /// Number of nonzero coefficients.
    pub fn support_size(&self) -> usize {
        match &self.repr {
            Repr::Sparse(v) => v.len(),
            Repr::Dense { words, .. } => words.iter().map(|w| w.count_ones() as usize).sum(),
        }
    }

    /// `p(1)` over GF(2): the parity of the support size.
    pub fn eval_at_one(&self) -> bool {
        match &self.repr {
            Repr::Sparse(v) => v.len() % 2 == 1,
            Repr::Dense { words, .. } => words.iter().fold(0u32, |acc, w| acc ^ w.count_ones()) & 1 == 1,
        }
    }

    /// Coefficientwise XOR.
    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        match (&self.repr, &other.repr) {
            (Repr::Sparse(a), Repr::Sparse(b)) => Self::from_sorted_support(merge_xor(a, b)),
            _ => {
                if self.is_zero() {
                    return other.clone();
                }
                if other.is_zero() {
                    return self.clone();
                }
                let (wa, _) = self.word_range();
                let (wb, _) = other.word_range();
                let lo = wa.min(wb);
                let hi = self.word_range().1.max(other.word_range().1);
                if (hi - lo).saturating_mul(64) < DENSE_SPAN_LIMIT {
                    let mut words = self.to_words(lo, hi);
                    other.xor_into_words(lo, &mut words);
                    Self::from_words(lo, words)
                } else {
                    Self::from_sorted_support(merge_xor(&self.support(), &other.support()))
                }
            }
        }
    }

    /// Product over GF(2). Fails if the top exponent would exceed `u64`.
    pub fn mul(&self, other: &Gf2Poly) -> Result<Gf2Poly> {
        self.mul_with(other, Kernel::Auto)
    }

    /// Product over GF(2) through an explicitly chosen kernel.
    pub fn mul_with(&self, other: &Gf2Poly, kernel: Kernel) -> Result<Gf2Poly> {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Ok(Self::zero());
        };
        da.checked_add(db)
            .ok_or_else(|| overflow(format!("product degree {da} + {db} exceeds u64")))?;
        let lo = self.min_exponent().unwrap() + other.min_exponent().unwrap();
        let span = da + db - lo;

        let kernel = match kernel {
            Kernel::Auto => {
                let pairs = (self.support_size() as u64).saturating_mul(other.support_size() as u64);
                if span >= DENSE_SPAN_LIMIT || pairs <= SPARSE_PAIR_LIMIT {
                    Kernel::Sparse
                } else {
                    Kernel::Dense
                }
            }
            Kernel::Dense if span >= DENSE_SPAN_LIMIT => {
                return Err(Error::InvalidArgument(format!(
                    "dense kernel needs a result span below 2^26 bits, got {span}"
                )));
            }
            k => k,
        };
        Ok(match kernel {
            Kernel::Sparse => self.mul_sparse(other),
            _ => self.mul_dense(other),
        })
    }

    fn mul_sparse(&self, other: &Gf2Poly) -> Gf2Poly {
        let (small, large) = if self.support_size() <= other.support_size() {
            (self, other)
        } else {
            (other, self)
        };
        let mut odd: HashSet<u64> = HashSet::new();
        let large: Vec<u64> = large.iter().collect();
        for e in small.iter() {
            for &f in &large {
                let s = e + f;
                if !odd.remove(&s) {
                    odd.insert(s);
                }
            }
        }
        let mut v: Vec<u64> = odd.into_iter().collect();
        v.sort_unstable();
        Self::from_sorted_support(v)
    }

    fn mul_dense(&self, other: &Gf2Poly) -> Gf2Poly {
        let (la, ha) = self.word_range();
        let (lb, hb) = other.word_range();
        let (wa, wb) = ((ha - la) as usize, (hb - lb) as usize);
        let base = la + lb;
        let (pa, pb) = (self.support_size(), other.support_size());

        // Shift-XOR per term of the sparser operand costs about one word op
        // per (term, word); a carry-less word product is several times that.
        let term_cost = (pa.min(pb) as f64) * (if pa <= pb { wb } else { wa }) as f64;
        let word_cost = 6.0 * kernel::word_product_cost(wa, wb);

        let words = if term_cost <= word_cost {
            let (sparse, dense, lo_sparse, lo_dense, hi_dense) = if pa <= pb {
                (self, other, la, lb, hb)
            } else {
                (other, self, lb, la, ha)
            };
            let dense_words = dense.to_words(lo_dense, hi_dense);
            let mut out = vec![0u64; wa + wb + 1];
            let shift = 64 * lo_sparse;
            kernel::mul_by_terms(&dense_words, sparse.iter().map(|e| e - shift), &mut out);
            out
        } else {
            let a = self.to_words(la, ha);
            let b = other.to_words(lb, hb);
            kernel::mul_words(&a, &b)
        };
        Self::from_words(base, words)
    }

    /// Substitutes `x -> x^d`.
    pub fn inflate(&self, d: u64) -> Result<Gf2Poly> {
        if d == 0 {
            return Err(Error::InvalidArgument("inflation factor must be positive".into()));
        }
        if let Some(deg) = self.degree() {
            deg.checked_mul(d)
                .ok_or_else(|| overflow(format!("inflating degree {deg} by {d}")))?;
        }
        if d == 1 {
            return Ok(self.clone());
        }
        Ok(Self::from_sorted_support(self.iter().map(|e| e * d).collect()))
    }

    /// Multiplies by `x^s`.
    pub fn shift(&self, s: u64) -> Result<Gf2Poly> {
        if let Some(deg) = self.degree() {
            deg.checked_add(s)
                .ok_or_else(|| overflow(format!("shifting degree {deg} by {s}")))?;
        }
        Ok(match &self.repr {
            Repr::Sparse(v) => Self::from_sorted_support(v.iter().map(|e| e + s).collect()),
            Repr::Dense { base, words } if s.is_multiple_of(64) => Gf2Poly {
                repr: Repr::Dense { base: base + s / 64, words: words.clone() },
            },
            Repr::Dense { .. } => Self::from_sorted_support(self.iter().map(|e| e + s).collect()),
        })
    }

    /// Splits `p(x) = Σ_{i<t} x^i q_i(x^t)` and returns `[q_0, …, q_{t-1}]`.
    pub fn residue_split(&self, t: u64) -> Result<Vec<Gf2Poly>> {
        if t == 0 {
            return Err(Error::InvalidArgument("residue modulus must be positive".into()));
        }
        if t > 1 << 32 {
            return Err(Error::InvalidArgument(format!("modulus {t} too large")));
        }
        let mut parts = vec![Vec::new(); t as usize];
        for e in self.iter() {
            parts[(e % t) as usize].push(e / t);
        }
        Ok(parts.into_iter().map(Self::from_sorted_support).collect())
    }

    /// `1 + x^a + x^{2a} + … + x^{(n-1)a}`.
    pub fn geometric(a: u64, n: u64) -> Result<Gf2Poly> {
        if a == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "geometric series needs positive step and length, got a={a}, n={n}"
            )));
        }
        let top = (n - 1)
            .checked_mul(a)
            .ok_or_else(|| overflow(format!("geometric series top exponent ({n}-1)*{a}")))?;
        if top < DENSE_SPAN_LIMIT && n > 64 {
            let mut words = vec![0u64; (top / 64 + 1) as usize];
            for i in 0..n {
                let e = i * a;
                words[(e / 64) as usize] |= 1 << (e % 64);
            }
            return Ok(Self::from_words(0, words));
        }
        Ok(Self::from_sorted_support((0..n).map(|i| i * a).collect()))
    }

    /// `(1+y)^E` over GF(2). By Lucas' theorem the support is the set of
    /// submasks of `E`, so the size is `2^popcount(E)`.
    pub fn pow_one_plus_y(exponent: u64) -> Result<Gf2Poly> {
        let bits = exponent.count_ones();
        if bits > MAX_SUBSET_SUM_BITS {
            return Err(Error::BudgetExceeded(format!(
                "(1+y)^{exponent} has 2^{bits} terms"
            )));
        }
        let mut v = Vec::with_capacity(1 << bits);
        let mut s = 0u64;
        loop {
            v.push(s);
            if s == exponent {
                break;
            }
            // next submask in increasing order
            s = (s.wrapping_sub(exponent)) & exponent;
        }
        Ok(Self::from_sorted_support(v))
    }

    /// Half-open word index range `[lo, hi)` that covers the support.
    fn word_range(&self) -> (u64, u64) {
        match &self.repr {
            Repr::Sparse(v) => match (v.first(), v.last()) {
                (Some(a), Some(b)) => (a / 64, b / 64 + 1),
                _ => (0, 0),
            },
            Repr::Dense { base, words } => (*base, base + words.len() as u64),
        }
    }

    fn to_words(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut words = vec![0u64; (hi - lo) as usize];
        self.xor_into_words(lo, &mut words);
        words
    }

    fn xor_into_words(&self, lo: u64, words: &mut [u64]) {
        match &self.repr {
            Repr::Sparse(v) => {
                for &e in v {
                    words[(e / 64 - lo) as usize] ^= 1 << (e % 64);
                }
            }
            Repr::Dense { base, words: src } => {
                let off = (base - lo) as usize;
                for (d, s) in words[off..off + src.len()].iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
    }
}

fn merge_xor(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Ascending iterator over the support of a [`Gf2Poly`].
pub enum SupportIter<'a> {
    Sparse(std::slice::Iter<'a, u64>),
    Dense { base: u64, words: &'a [u64], index: usize, current: u64 },
}

impl Iterator for SupportIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        match self {
            SupportIter::Sparse(it) => it.next().copied(),
            SupportIter::Dense { base, words, index, current } => {
                while *current == 0 {
                    *index += 1;
                    *current = *words.get(*index)?;
                }
                let bit = current.trailing_zeros() as u64;
                *current &= *current - 1;
                Some(64 * (*base + *index as u64) + bit)
            }
        }
    }
}

impl PartialEq for Gf2Poly {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Sparse(a), Repr::Sparse(b)) => a == b,
            (Repr::Dense { base: ba, words: wa }, Repr::Dense { base: bb, words: wb }) => {
                ba == bb && wa == wb
            }
            _ => self.support_size() == other.support_size() && self.iter().eq(other.iter()),
        }
    }
}

impl Eq for Gf2Poly {}

impl Hash for Gf2Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for e in self.iter() {
            e.hash(state);
        }
        self.support_size().hash(state);
    }
}

impl Default for Gf2Poly {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "x^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::ops::Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        Gf2Poly::add(self, rhs)
    }
}

impl FromIterator<u64> for Gf2Poly {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self::from_set(iter)
    }
}
