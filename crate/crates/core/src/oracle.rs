//! Brute-force counting versions of the parity operators.
//!
//! Nothing here touches [`crate::poly`]: every result is obtained by tallying
//! representations in a hash map and keeping the odd tallies. Used by tests
//! and by the CLI `--oracle` flag to cross-check the polynomial route.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{overflow, Result};
use crate::setops::{require_positive, GridSet, IntSet};

fn odd_keys<K: Hash + Eq>(counts: HashMap<K, u64>) -> impl Iterator<Item = K> {
    counts.into_iter().filter(|&(_, c)| c % 2 == 1).map(|(k, _)| k)
}

pub fn symdiff(sets: &[IntSet]) -> IntSet {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for s in sets {
        for x in s.iter() {
            *counts.entry(x).or_default() += 1;
        }
    }
    odd_keys(counts).collect()
}

pub fn oplus(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for x in a.iter() {
        for y in b.iter() {
            let s = x.checked_add(y).ok_or_else(|| overflow(format!("{x}+{y}")))?;
            *counts.entry(s).or_default() += 1;
        }
    }
    Ok(odd_keys(counts).collect())
}

/// Odd-multiplicity values of the full k-fold multiset sumset, counting
/// every one of the `∏|S_i|` terms (no intermediate parity reduction).
pub fn oplus_all(sets: &[IntSet]) -> Result<IntSet> {
    let mut counts: HashMap<u64, u64> = HashMap::from([(0, 1)]);
    for s in sets {
        let mut next: HashMap<u64, u64> = HashMap::new();
        for (&x, &c) in &counts {
            for y in s.iter() {
                let sum = x.checked_add(y).ok_or_else(|| overflow(format!("{x}+{y}")))?;
                let slot = next.entry(sum).or_default();
                *slot = slot.checked_add(c).ok_or_else(|| overflow("representation count"))?;
            }
        }
        counts = next;
    }
    Ok(odd_keys(counts).collect())
}

pub fn nabla(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    require_positive(a)?;
    require_positive(b)?;
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for x in a.iter() {
        for y in b.iter() {
            let p = x.checked_mul(y).ok_or_else(|| overflow(format!("{x}*{y}")))?;
            *counts.entry(p).or_default() += 1;
        }
    }
    Ok(odd_keys(counts).collect())
}

pub fn oplus_grid(a: &GridSet, b: &GridSet) -> Result<GridSet> {
    if a.dim() != b.dim() {
        return Err(crate::Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let mut counts: HashMap<Vec<i64>, u64> = HashMap::new();
    for p in a.iter() {
        for q in b.iter() {
            let s = p
                .iter()
                .zip(q)
                .map(|(x, y)| x.checked_add(*y).ok_or_else(|| overflow("grid coordinate sum")))
                .collect::<Result<Vec<_>>>()?;
            *counts.entry(s).or_default() += 1;
        }
    }
    GridSet::new(a.dim(), odd_keys(counts))
}
