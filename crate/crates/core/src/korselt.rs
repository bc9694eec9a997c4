//! Carmichael certification.
//!
//! The structural route runs the special-form factorization and applies
//! Korselt's criterion: `N` is Carmichael iff it is composite, squarefree,
//! and `p - 1 | N - 1` for every prime factor. The brute-force route
//! ([`brute_is_carmichael`]) applies the same criterion to a full
//! trial-division factorization and exists to cross-validate the
//! structural one; the two must agree everywhere both are defined.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::factorize_u64;
use crate::error::{domain, range, Result};
use crate::factor::{classify_factor, FactorClass, Factorizer, SequenceTarget};

/// Why a target failed certification. Ordered so the first applicable
/// reason is reported, which keeps tests deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// `N` itself is prime.
    Prime,
    /// Some special-form prime divides `N` more than once.
    NonSquarefree,
    /// Part of `N` is not a product of special-form primes.
    CofactorRemains,
    /// Fewer than three prime factors (no squarefree Korselt-passing
    /// number with two factors exists; hitting this indicates a bug).
    TooFewFactors,
    /// A factor with `p - 1` not dividing `N - 1` (structurally impossible
    /// for special-form factors; kept as a defensive check).
    KorseltFails,
}

impl Rejection {
    pub fn as_str(self) -> &'static str {
        match self {
            Rejection::Prime => "prime",
            Rejection::NonSquarefree => "non_squarefree",
            Rejection::CofactorRemains => "cofactor_remains",
            Rejection::TooFewFactors => "too_few_factors",
            Rejection::KorseltFails => "korselt_fails",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Carmichael,
    NotCarmichael(Rejection),
}

impl Verdict {
    pub fn is_carmichael(self) -> bool {
        matches!(self, Verdict::Carmichael)
    }
}

/// Per-factor evidence attached to a certificate.
#[derive(Debug, Clone)]
pub struct CertifiedFactor {
    pub p: BigUint,
    pub d: u64,
    pub m: u32,
    pub multiplicity: u32,
    /// `p - 1 | N - 1`.
    pub korselt_divides: bool,
    /// Primality of `p` is certificate-backed, not probabilistic.
    pub proven: bool,
    /// Structural class; populated on Carmichael verdicts.
    pub class: Option<FactorClass>,
}

/// Complete certification record for one target.
#[derive(Debug, Clone)]
pub struct CarmichaelCertificate {
    pub target: SequenceTarget,
    pub factors: Vec<CertifiedFactor>,
    pub cofactor: BigUint,
    pub verdict: Verdict,
}

impl CarmichaelCertificate {
    /// True when every factor's primality was proven deterministically.
    pub fn proven_primality(&self) -> bool {
        self.factors.iter().all(|f| f.proven)
    }
}

/// Certify a single target. All failure modes are verdicts, not errors.
pub fn certify(target: &SequenceTarget) -> Result<CarmichaelCertificate> {
    certify_with(&Factorizer::new(target.k(), target.n())?, target.n())
}

/// Certify `k*2^n + 1` reusing a cached candidate set (the fast path for
/// scans over many `n`).
pub fn certify_with(factorizer: &Factorizer, n: u32) -> Result<CarmichaelCertificate> {
    let outcome = factorizer.factorize(n)?;
    let target = outcome.target.clone();
    let n_minus_1 = target.value() - 1u32;

    let mut factors: Vec<CertifiedFactor> = outcome
        .factors
        .iter()
        .map(|(f, mult)| {
            let p_minus_1 = &f.p - 1u32;
            CertifiedFactor {
                p: f.p.clone(),
                d: f.d,
                m: f.m,
                multiplicity: *mult,
                korselt_divides: (&n_minus_1 % &p_minus_1).is_zero(),
                proven: f.proven,
                class: None,
            }
        })
        .collect();

    let verdict = if factors.iter().any(|f| f.p == *target.value()) {
        Verdict::NotCarmichael(Rejection::Prime)
    } else if factors.iter().any(|f| f.multiplicity > 1) {
        Verdict::NotCarmichael(Rejection::NonSquarefree)
    } else if !outcome.cofactor.is_one() {
        Verdict::NotCarmichael(Rejection::CofactorRemains)
    } else if factors.len() < 3 {
        Verdict::NotCarmichael(Rejection::TooFewFactors)
    } else if !factors.iter().all(|f| f.korselt_divides) {
        Verdict::NotCarmichael(Rejection::KorseltFails)
    } else {
        Verdict::Carmichael
    };

    if verdict.is_carmichael() {
        for f in &mut factors {
            let sf = crate::factor::SpecialFactor {
                p: f.p.clone(),
                d: f.d,
                m: f.m,
                proven: f.proven,
            };
            f.class = Some(classify_factor(&sf, &target)?);
        }
    }

    Ok(CarmichaelCertificate {
        target,
        factors,
        cofactor: outcome.cofactor,
        verdict,
    })
}

/// Upper limit for the brute-force oracle; trial division stays exact and
/// fast below it.
pub const BRUTE_ORACLE_LIMIT: u64 = 1_000_000_000_000;

/// Independent Carmichael test by full factorization, for `N` up to
/// [`BRUTE_ORACLE_LIMIT`]. Makes no use of the special-form machinery.
pub fn brute_is_carmichael(n: &BigUint) -> Result<bool> {
    if *n < BigUint::from(3u32) {
        return domain(format!("need N >= 3, got {n}"));
    }
    let v = match n.to_u64() {
        Some(v) if v <= BRUTE_ORACLE_LIMIT => v,
        _ => {
            return range(format!(
                "brute oracle is documented for N <= {BRUTE_ORACLE_LIMIT}, got {n}"
            ))
        }
    };
    Ok(brute_is_carmichael_u64(v))
}

pub(crate) fn brute_is_carmichael_u64(v: u64) -> bool {
    if v % 2 == 0 {
        return false;
    }
    let fs = factorize_u64(v);
    if fs.len() < 2 {
        return false; // prime or prime power with one base
    }
    if fs.iter().any(|&(_, e)| e > 1) {
        return false;
    }
    fs.iter().all(|&(p, _)| (v - 1) % (p - 1) == 0)
}
