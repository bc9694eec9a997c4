//! Search for and certify Carmichael numbers of the form `k*2^n + 1`,
//! reproduce the finite computations behind the smallest admissible `k`,
//! and evaluate the effective constants bounding the exponent `n`.
//!
//! Module map:
//! - [`arith`]: exact integer primitives (primality, orders, divisors,
//!   perfect powers).
//! - [`factor`]: special-form candidate enumeration and factorization of
//!   `k*2^n + 1`, with the four-class tagging of factors.
//! - [`korselt`]: Carmichael certification, structural and brute-force.
//! - [`sieve`]: forced congruence classes for `n`, CRT compatibility, and
//!   the empirical quadratic-reciprocity filters.
//! - [`lemmas`]: executable factor-size facts and the partition report.
//! - [`bounds`]: the effective-constant report and counting bounds.
//! - [`claims`]: the claim table reproducing the published case analysis.

pub mod arith;
pub mod bounds;
pub mod claims;
pub mod error;
pub mod factor;
pub mod korselt;
pub mod lemmas;
pub mod sieve;

pub use error::{Error, Result};
pub use factor::{FactorClass, SequenceTarget, SpecialFactor};
pub use korselt::{certify, CarmichaelCertificate, Rejection, Verdict};
