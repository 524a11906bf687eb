//! Word-level carry-less multiplication kernels.
//!
//! Polynomials are little-endian `u64` word slices: bit `b` of word `w` is the
//! coefficient of `x^(64 w + b)`.

/// Operand length (in words) at or below which Karatsuba falls back to the
/// schoolbook product.
const KARATSUBA_CUTOFF: usize = 24;

/// Carry-less 64x64 -> 128 bit product, returned as `(low, high)`.
#[inline]
pub fn clmul64(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: feature presence checked at runtime just above.
            return unsafe { clmul64_pclmul(a, b) };
        }
    }
    clmul64_soft(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul64_pclmul(a: u64, b: u64) -> (u64, u64) {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi128_si64, _mm_cvtsi64_si128, _mm_unpackhi_epi64};
    let x = _mm_cvtsi64_si128(a as i64);
    let y = _mm_cvtsi64_si128(b as i64);
    let p = _mm_clmulepi64_si128(x, y, 0x00);
    let lo = _mm_cvtsi128_si64(p) as u64;
    let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(p, p)) as u64;
    (lo, hi)
}

/// Portable carry-less product using a 4-bit window over `b`.
pub fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let a = a as u128;
    let mut table = [0u128; 16];
    for i in 1..16usize {
        table[i] = if i & 1 == 1 {
            table[i - 1] ^ a
        } else {
            table[i >> 1] << 1
        };
    }
    let mut acc = 0u128;
    for nibble in (0..16).rev() {
        acc <<= 4;
        acc ^= table[((b >> (4 * nibble)) & 0xf) as usize];
    }
    (acc as u64, (acc >> 64) as u64)
}

/// Schoolbook product accumulated (XOR) into `out`, which must hold at least
/// `a.len() + b.len()` words.
fn schoolbook_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let (lo, hi) = clmul64(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Karatsuba for equal-length operands; XOR-accumulates into `out[..2n]`.
fn karatsuba_into(a: &[u64], b: &[u64], out: &mut [u64]) {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n <= KARATSUBA_CUTOFF {
        schoolbook_into(a, b, out);
        return;
    }
    let m = n / 2;
    let h = n - m;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);

    let mut z0 = vec![0u64; 2 * m];
    karatsuba_into(a0, b0, &mut z0);
    let mut z2 = vec![0u64; 2 * h];
    karatsuba_into(a1, b1, &mut z2);

    let mut sa = a1.to_vec();
    xor_into(&mut sa, a0);
    let mut sb = b1.to_vec();
    xor_into(&mut sb, b0);
    let mut z1 = vec![0u64; 2 * h];
    karatsuba_into(&sa, &sb, &mut z1);
    xor_into(&mut z1, &z0);
    xor_into(&mut z1, &z2);

    xor_into(&mut out[..2 * m], &z0);
    xor_into(&mut out[m..m + 2 * h], &z1);
    xor_into(&mut out[2 * m..2 * m + 2 * h], &z2);
}

/// Full carry-less product of two word slices. The result has exactly
/// `a.len() + b.len()` words (possibly with trailing zeros).
pub fn mul_words(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    if a.is_empty() || b.is_empty() {
        return out;
    }
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if short.len() <= KARATSUBA_CUTOFF {
        schoolbook_into(long, short, &mut out);
        return out;
    }
    // Unbalanced operands: cut the longer one into chunks of the shorter's
    // length so every Karatsuba call is square.
    let width = short.len();
    let mut padded = vec![0u64; width];
    for (ci, chunk) in long.chunks(width).enumerate() {
        let off = ci * width;
        if chunk.len() == width {
            karatsuba_into(chunk, short, &mut out[off..off + 2 * width]);
        } else {
            padded[..chunk.len()].copy_from_slice(chunk);
            padded[chunk.len()..].fill(0);
            let mut tmp = vec![0u64; 2 * width];
            karatsuba_into(&padded, short, &mut tmp);
            let tail = out.len() - off;
            xor_into(&mut out[off..], &tmp[..tail.min(2 * width)]);
        }
    }
    out
}

/// XOR `src * x^shift` into `out`. `out` must be long enough to hold the
/// shifted words.
pub fn xor_shifted(out: &mut [u64], src: &[u64], shift: u64) {
    let w = (shift / 64) as usize;
    let s = (shift % 64) as u32;
    if s == 0 {
        xor_into(&mut out[w..w + src.len()], src);
        return;
    }
    let mut carry = 0u64;
    for (j, &word) in src.iter().enumerate() {
        out[w + j] ^= (word << s) | carry;
        carry = word >> (64 - s);
    }
    if carry != 0 {
        out[w + src.len()] ^= carry;
    }
}

/// Product computed as one shifted XOR of `dense` per set bit of `sparse`.
pub fn mul_by_terms(dense: &[u64], sparse_terms: impl Iterator<Item = u64>, out: &mut [u64]) {
    for e in sparse_terms {
        xor_shifted(out, dense, e);
    }
}

/// Rough relative cost of [`mul_words`] in word-pair operations.
pub fn word_product_cost(la: usize, lb: usize) -> f64 {
    let (long, short) = if la >= lb { (la, lb) } else { (lb, la) };
    if short <= KARATSUBA_CUTOFF {
        return (long * short) as f64;
    }
    let chunks = long.div_ceil(short) as f64;
    let levels = (short as f64 / KARATSUBA_CUTOFF as f64).log2();
    chunks * 3f64.powf(levels) * (KARATSUBA_CUTOFF * KARATSUBA_CUTOFF) as f64
}
