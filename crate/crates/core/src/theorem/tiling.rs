//! The tiling `Z≥0 = S ⊕ R` and the colouring it induces.
//!
//! For a set `J` of bit positions, `S` is the set of subset sums of
//! `{2^β : β ∈ J}` (the support of `(1+y)^E`) and `R` is the set of integers
//! with every bit of `J` clear. Each `m >= 0` is uniquely `s + r` with
//! `s ∈ S`, `r ∈ R`; the colour of `m` is that `s`. Every translate `S + v`
//! meets each colour class exactly once, so an odd number of translates
//! leaves at least one element of every colour in their symmetric
//! difference.

use crate::error::{Error, Result};
use crate::setops::IntSet;

/// Mask of the positions in `J`. Positions at or above 64 never occur in a
/// `u64` and are dropped.
pub fn j_mask(j: &[u32]) -> u64 {
    j.iter().filter(|&&b| b < 64).fold(0, |m, &b| m | 1 << b)
}

/// `S`: all sums of distinct powers `2^β`, `β ∈ J`.
pub fn subset_sums(j: &[u32]) -> Result<IntSet> {
    if j.iter().any(|&b| b >= 64) {
        return Err(Error::Overflow("bit position above 63 in J".into()));
    }
    let mask = j_mask(j);
    if mask.count_ones() > 26 {
        return Err(Error::BudgetExceeded(format!("2^{} subset sums", mask.count_ones())));
    }
    let mut out = Vec::with_capacity(1 << mask.count_ones());
    let mut s = 0u64;
    loop {
        out.push(s);
        if s == mask {
            break;
        }
        s = s.wrapping_sub(mask) & mask;
    }
    Ok(IntSet::new(out))
}

/// `R ∩ [0, bound)`.
pub fn tiling_complement(j: &[u32], bound: u64) -> IntSet {
    let mask = j_mask(j);
    let mut out = Vec::new();
    let mut r = 0u64;
    while r < bound {
        out.push(r);
        // smallest integer above r with all mask bits clear
        match (r | mask).checked_add(1) {
            Some(next) => r = next & !mask,
            None => break,
        }
    }
    IntSet::new(out)
}

/// The `S`-part of `m`.
pub fn color_of(m: u64, j: &[u32]) -> u64 {
    m & j_mask(j)
}

/// `(s, r)` with `m = s + r`, `s ∈ S`, `r ∈ R`.
pub fn decompose(m: u64, j: &[u32]) -> (u64, u64) {
    let s = color_of(m, j);
    (s, m - s)
}
