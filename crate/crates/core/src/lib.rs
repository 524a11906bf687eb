//! Odd-multiplicity sumsets and GF(2) polynomial products.
//!
//! A finite set `S ⊆ Z≥0` is encoded as `p_S(x) = Σ_{s∈S} x^s` over GF(2).
//! Symmetric difference becomes addition and the odd-representation sumset
//! `A ⊕ B` becomes multiplication, so parity questions about sumsets reduce
//! to counting nonzero coefficients of products.
//!
//! - [`poly`]: the [`Gf2Poly`] type and its carry-less multiplication kernels.
//! - [`setops`]: dilation, `Δ`, `⊕`, `∇` on integer and grid sets.
//! - [`oracle`]: brute-force counting versions of the same operators.
//! - [`theorem`]: the `n`-term lower bound for sumsets of arithmetic
//!   progressions, with certificates.
//! - [`pilz`]: symmetric differences of dilations and exhaustive scans.

pub mod error;
pub mod oracle;
pub mod pilz;
pub mod poly;
pub mod setops;
pub mod theorem;

pub use error::{Error, Result};
pub use pilz::{ScanConfig, ScanRecord, ScanSummary};
pub use poly::{Gf2Poly, Kernel};
pub use setops::{GridSet, IntSet};
pub use theorem::{Certificate, Instance, Report};
