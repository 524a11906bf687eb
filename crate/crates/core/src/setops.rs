//! Dilation, iterated symmetric difference, and the odd-representation
//! sumset `⊕` and productset `∇`.
//!
//! The default route for every parity operator goes through [`Gf2Poly`];
//! [`crate::oracle`] holds independent counting implementations of the same
//! operators.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{overflow, Error, Result};
use crate::poly::Gf2Poly;

/// Finite set of nonnegative integers, sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u64>", from = "Vec<u64>")]
pub struct IntSet(Vec<u64>);

impl IntSet {
    pub fn new<I: IntoIterator<Item = u64>>(elements: I) -> Self {
        let mut v: Vec<u64> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IntSet(v)
    }

    pub fn empty() -> Self {
        IntSet(Vec::new())
    }

    /// `{lo, lo+1, …, hi}`; empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        IntSet((lo..=hi).collect())
    }

    /// `{a, 2a, …, na}`.
    pub fn arithmetic(a: u64, n: u64) -> Result<Self> {
        n.checked_mul(a).ok_or_else(|| overflow(format!("{n}*{a}")))?;
        Ok(IntSet((1..=n).map(|i| i * a).collect()))
    }

    pub(crate) fn from_sorted(v: Vec<u64>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        IntSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn to_poly(&self) -> Gf2Poly {
        Gf2Poly::from_sorted_support(self.0.clone())
    }

    pub fn from_poly(p: &Gf2Poly) -> Self {
        IntSet(p.support())
    }
}

impl From<Vec<u64>> for IntSet {
    fn from(v: Vec<u64>) -> Self {
        IntSet::new(v)
    }
}

impl From<IntSet> for Vec<u64> {
    fn from(s: IntSet) -> Self {
        s.0
    }
}

impl FromIterator<u64> for IntSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        IntSet::new(iter)
    }
}

/// Comma-joined elements in ascending order; the empty set renders as "".
impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Parses `"1,2,3"`. `""` and `"{}"` are the empty set; duplicates collapse.
impl FromStr for IntSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(s).trim();
        if s.is_empty() {
            return Ok(IntSet::empty());
        }
        s.split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad set element {tok:?}: {e}")))
            })
            .collect()
    }
}

/// Finite set of integer tuples of one fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridSet {
    dim: usize,
    elements: BTreeSet<Vec<i64>>,
}

impl GridSet {
    pub fn empty(dim: usize) -> Self {
        GridSet { dim, elements: BTreeSet::new() }
    }

    pub fn new<I: IntoIterator<Item = Vec<i64>>>(dim: usize, points: I) -> Result<Self> {
        let mut elements = BTreeSet::new();
        for pt in points {
            if pt.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: pt.len() });
            }
            elements.insert(pt);
        }
        Ok(GridSet { dim, elements })
    }

    /// The cube `{0,1}^r`.
    pub fn cube(r: usize) -> Self {
        let points = (0..1u64 << r).map(|m| (0..r).map(|c| ((m >> c) & 1) as i64).collect());
        GridSet { dim: r, elements: points.collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, pt: &[i64]) -> bool {
        self.elements.contains(pt)
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.elements.iter().map(Vec::as_slice)
    }

    fn bounds(&self) -> Option<Vec<(i64, i64)>> {
        let mut it = self.elements.iter();
        let first = it.next()?;
        let mut b: Vec<(i64, i64)> = first.iter().map(|&x| (x, x)).collect();
        for pt in it {
            for (c, &x) in b.iter_mut().zip(pt) {
                c.0 = c.0.min(x);
                c.1 = c.1.max(x);
            }
        }
        Some(b)
    }
}

/// `(0,0),(1,0)`; dimension-zero points render as `()`.
impl fmt::Display for GridSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, pt) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("(")?;
            for (j, x) in pt.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl GridSet {
    /// Parses `"(0,0),(1,0)"`. The dimension is taken from the first tuple,
    /// or from `dim` when given (needed for the empty set).
    pub fn parse(s: &str, dim: Option<usize>) -> Result<Self> {
        let mut points = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in grid literal at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::Parse("unterminated tuple in grid literal".into()))?;
            let inner = body[..close].trim();
            let pt: Vec<i64> = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::Parse(format!("bad coordinate {t:?}: {e}")))
                    })
                    .collect::<Result<_>>()?
            };
            points.push(pt);
            rest = body[close + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
            } else if !rest.is_empty() {
                return Err(Error::Parse(format!("expected ',' between tuples at {rest:?}")));
            }
        }
        let dim = match (dim, points.first()) {
            (Some(d), _) => d,
            (None, Some(p)) => p.len(),
            (None, None) => return Err(Error::Parse("cannot infer dimension of empty grid set".into())),
        };
        GridSet::new(dim, points)
    }
}

impl FromStr for GridSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridSet::parse(s, None)
    }
}

/// `{i·a : a ∈ A}`.
pub fn dilate(a: &IntSet, i: u64) -> Result<IntSet> {
    if i == 0 {
        return Err(Error::InvalidArgument("dilation factor must be positive".into()));
    }
    let v = a
        .iter()
        .map(|x| x.checked_mul(i).ok_or_else(|| overflow(format!("{i}*{x}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntSet::from_sorted(v))
}

/// Elements that belong to an odd number of the given sets.
pub fn symdiff(sets: &[IntSet]) -> IntSet {
    let acc = sets.iter().fold(Gf2Poly::zero(), |acc, s| acc.add(&s.to_poly()));
    IntSet::from_poly(&acc)
}

/// Values representable as `a + b` (`a ∈ A`, `b ∈ B`) an odd number of times.
pub fn oplus(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    Ok(IntSet::from_poly(&a.to_poly().mul(&b.to_poly())?))
}

/// Left fold of [`oplus`]; the empty fold is `{0}`.
pub fn oplus_all(sets: &[IntSet]) -> Result<IntSet> {
    let mut acc = Gf2Poly::one();
    for s in sets {
        acc = acc.mul(&s.to_poly())?;
    }
    Ok(IntSet::from_poly(&acc))
}

/// Values representable as `a · b` an odd number of times. Computed as the
/// symmetric difference of the dilations `a·B`, `a ∈ A`.
pub fn nabla(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    require_positive(a)?;
    require_positive(b)?;
    let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let dilations = outer.iter().map(|x| dilate(inner, x)).collect::<Result<Vec<_>>>()?;
    Ok(symdiff(&dilations))
}

pub(crate) fn require_positive(a: &IntSet) -> Result<()> {
    if a.contains(0) {
        return Err(Error::InvalidArgument("productset operands must be positive".into()));
    }
    Ok(())
}

/// `⊕` on grid sets. Routes through a mixed-radix packing into a single
/// polynomial when it fits, otherwise counts representations directly.
pub fn oplus_grid(a: &GridSet, b: &GridSet) -> Result<GridSet> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    let (Some(ba), Some(bb)) = (a.bounds(), b.bounds()) else {
        return Ok(GridSet::empty(a.dim));
    };
    match GridPacking::new(&ba, &bb) {
        Some(pack) => {
            let pa = Gf2Poly::from_set(a.elements.iter().map(|p| pack.encode(p, &pack.lo_a)));
            let pb = Gf2Poly::from_set(b.elements.iter().map(|p| pack.encode(p, &pack.lo_b)));
            let prod = pa.mul(&pb)?;
            let points = prod.iter().map(|code| pack.decode(code));
            GridSet::new(a.dim, points)
        }
        None => oplus_grid_counting(a, b),
    }
}

fn oplus_grid_counting(a: &GridSet, b: &GridSet) -> Result<GridSet> {
    let mut counts: HashMap<Vec<i64>, u32> = HashMap::new();
    for p in &a.elements {
        for q in &b.elements {
            let s = p
                .iter()
                .zip(q)
                .map(|(x, y)| x.checked_add(*y).ok_or_else(|| overflow("grid coordinate sum")))
                .collect::<Result<Vec<_>>>()?;
            *counts.entry(s).or_default() ^= 1;
        }
    }
    GridSet::new(a.dim, counts.into_iter().filter(|&(_, c)| c == 1).map(|(p, _)| p))
}

/// Packs tuples into integers, coordinate `c` at radix position `c`, with each
/// radix wide enough that sums never carry between coordinates.
struct GridPacking {
    lo_a: Vec<i64>,
    lo_b: Vec<i64>,
    radix: Vec<u64>,
}

impl GridPacking {
    fn new(ba: &[(i64, i64)], bb: &[(i64, i64)]) -> Option<Self> {
        let mut radix = Vec::with_capacity(ba.len());
        let mut total: u64 = 1;
        for (&(la, ha), &(lb, hb)) in ba.iter().zip(bb) {
            let width = (ha.abs_diff(la)).checked_add(hb.abs_diff(lb))?.checked_add(1)?;
            total = total.checked_mul(width)?;
            radix.push(width);
        }
        if total >= crate::poly::DENSE_SPAN_LIMIT {
            return None;
        }
        Some(GridPacking {
            lo_a: ba.iter().map(|b| b.0).collect(),
            lo_b: bb.iter().map(|b| b.0).collect(),
            radix,
        })
    }

    fn encode(&self, p: &[i64], lo: &[i64]) -> u64 {
        p.iter().zip(lo).zip(&self.radix).rev().fold(0u64, |acc, ((&x, &l), &r)| {
            acc * r + x.abs_diff(l)
        })
    }

    fn decode(&self, mut code: u64) -> Vec<i64> {
        self.radix
            .iter()
            .enumerate()
            .map(|(c, &r)| {
                let digit = code % r;
                code /= r;
                self.lo_a[c] + self.lo_b[c] + digit as i64
            })
            .collect()
    }
}
