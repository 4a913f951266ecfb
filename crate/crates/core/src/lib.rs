//! Exact computational machinery for a binomial family of Boolean functions
//! over GF(2^n), n = 2m with m ≡ 2 (mod 4):
//!
//!   f_{a,b}(x) = Tr_1^n(a x^(2^m-1)) + Tr_1^4(b x^((2^n-1)/5)),
//!
//! with a in GF(2^m) and b in GF(16). The crate provides binary fields up to
//! degree 32, univariate polynomial factorization patterns over their
//! subfields, Kloosterman and degree-5 Weil sums with Artin-Schreier curve
//! point counts, Dickson polynomials, Walsh-Hadamard spectra with bentness
//! and hyper-bentness oracles, character-sum evaluation of the family by
//! independent routes, and a bounded solver for generalized Ramanujan-Nagell
//! equations.

pub mod boolfn;
pub mod dickson;
pub mod error;
pub mod expsums;
pub mod family;
pub mod field;
pub mod poly;
pub mod rnagell;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement, FieldSpec};
