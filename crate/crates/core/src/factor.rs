//! Special-form factorization of `N = k*2^n + 1`.
//!
//! A Carmichael number of this shape factors entirely into primes
//! `p = d*2^m + 1` with `d | k` and `1 <= m <= n`, because Korselt's
//! condition forces `p - 1 | N - 1 = k*2^n`. This module enumerates those
//! candidate primes, divides them out, and classifies the hits into the
//! four structural classes used by the factor-size bounds: Fermat primes
//! (`d = 1`), the at-most-one prime whose `d*2^m` is multiplicatively
//! dependent on `k*2^n`, primes with unusually small exponent `m`, and the
//! generic rest.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{
    divisors, mult_dependent, pow_mod_u64, primality, tau, Primality,
};
use crate::error::{domain, Error, Result};

/// A pair `(k, n)` denoting the sequence member `N = k*2^n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTarget {
    k: u64,
    n: u32,
    value: BigUint,
}

impl SequenceTarget {
    /// Build a target with the standing assumptions `k` odd, `k >= 3`,
    /// `n >= 1`. Even `k` is rejected with a normalization hint instead of
    /// being silently rewritten.
    pub fn new(k: u64, n: u32) -> Result<Self> {
        if k % 2 == 0 {
            let shift = k.trailing_zeros();
            return domain(format!(
                "k must be odd; rewrite k={k}, n={n} as k'={}, n'={}",
                k >> shift,
                n as u64 + shift as u64
            ));
        }
        if k < 3 {
            return domain(format!("k must be >= 3, got {k}"));
        }
        Self::new_allowing_unit_k(k, n)
    }

    /// Like [`SequenceTarget::new`] but admits `k = 1`, which the library
    /// itself needs when certifying arbitrary odd `N` written as
    /// `N - 1 = k*2^n`.
    pub fn new_allowing_unit_k(k: u64, n: u32) -> Result<Self> {
        if k % 2 == 0 || k == 0 {
            return domain(format!("k must be odd and positive, got {k}"));
        }
        if n == 0 {
            return domain("n must be >= 1".to_string());
        }
        let value = (BigUint::from(k) << n) + 1u32;
        Ok(Self { k, n, value })
    }

    /// Recover the target from an odd `N >= 3` via `N - 1 = k*2^n`.
    pub fn from_value(n_value: &BigUint) -> Result<Self> {
        if n_value.is_even() || *n_value < BigUint::from(3u32) {
            return domain(format!("need odd N >= 3, got {n_value}"));
        }
        let pred = n_value - 1u32;
        let n = pred.trailing_zeros().expect("N - 1 > 0") as u32;
        let k = (&pred >> n)
            .to_u64()
            .ok_or_else(|| Error::Range(format!("odd part of {n_value} - 1 exceeds u64")))?;
        Self::new_allowing_unit_k(k, n)
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The integer `N = k*2^n + 1` itself.
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// `k * 2^n = N - 1`.
    pub fn shifted_k(&self) -> BigUint {
        BigUint::from(self.k) << self.n
    }
}

impl std::fmt::Display for SequenceTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}*2^{}+1", self.k, self.n)
    }
}

/// The four structural classes of special-form prime factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorClass {
    /// `d = 1`, so `p = 2^(2^alpha) + 1`.
    Fermat,
    /// `d*2^m` and `k*2^n` are multiplicatively dependent (at most one such).
    Dependent,
    /// Exponent below the `sqrt(n) / (2 sqrt(tau(k)))` cutoff.
    SmallExponent,
    /// Everything else.
    Generic,
}

impl FactorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorClass::Fermat => "fermat",
            FactorClass::Dependent => "dependent",
            FactorClass::SmallExponent => "small_exponent",
            FactorClass::Generic => "generic",
        }
    }
}

/// A prime `p = d*2^m + 1` with odd `d` dividing the ambient `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialFactor {
    pub p: BigUint,
    pub d: u64,
    pub m: u32,
    /// Whether the primality of `p` carries a deterministic certificate.
    pub proven: bool,
}

impl SpecialFactor {
    #[cfg(test)]
    fn from_parts(d: u64, m: u32, proven: bool) -> Self {
        let p = (BigUint::from(d) << m) + 1u32;
        SpecialFactor { p, d, m, proven }
    }
}

/// Result of dividing `N` by every special-form candidate.
///
/// `cofactor * prod p_i^mult_i = N` exactly. A cofactor above 1 already
/// refutes Carmichael-ness, so it is never factored further.
#[derive(Debug, Clone)]
pub struct FactorizationOutcome {
    pub target: SequenceTarget,
    pub factors: Vec<(SpecialFactor, u32)>,
    pub cofactor: BigUint,
}

impl FactorizationOutcome {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn is_squarefree_part(&self) -> bool {
        self.factors.iter().all(|(_, mult)| *mult == 1)
    }

    pub fn proven(&self) -> bool {
        self.factors.iter().all(|(f, _)| f.proven)
    }
}

/// All primes `p = d*2^m + 1` with `d | k` and `1 <= m <= n_max`, in
/// ascending order. `k` must be odd and positive (`k = 1` is allowed; it
/// yields the Fermat primes up to the horizon).
pub fn candidate_primes(k: u64, n_max: u32) -> Result<Vec<SpecialFactor>> {
    if k == 0 || k % 2 == 0 {
        return domain(format!("candidate_primes requires odd k >= 1, got {k}"));
    }
    let mut out = Vec::new();
    for d in divisors(k) {
        for m in 1..=n_max {
            let p = (BigUint::from(d) << m) + 1u32;
            let cert = primality(&p);
            if cert.is_prime() {
                out.push(SpecialFactor {
                    p,
                    d,
                    m,
                    proven: cert == Primality::ProvenPrime,
                });
            }
        }
    }
    // distinct (d, m) pairs give distinct p, since d is odd and m = nu2(p-1)
    out.sort_by(|a, b| a.p.cmp(&b.p));
    Ok(out)
}

/// Reusable factorization context holding the candidate primes for one `k`
/// up to a fixed exponent horizon. Scanning many `n` for the same `k`
/// should go through this instead of re-enumerating candidates per target.
#[derive(Debug, Clone)]
pub struct Factorizer {
    k: u64,
    n_max: u32,
    candidates: Vec<SpecialFactor>,
}

impl Factorizer {
    pub fn new(k: u64, n_max: u32) -> Result<Self> {
        Ok(Factorizer {
            k,
            n_max,
            candidates: candidate_primes(k, n_max)?,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn candidates(&self) -> &[SpecialFactor] {
        &self.candidates
    }

    /// Factor `N = k*2^n + 1` against the cached candidates. `n` must not
    /// exceed the horizon this context was built for.
    pub fn factorize(&self, n: u32) -> Result<FactorizationOutcome> {
        if n == 0 || n > self.n_max {
            return domain(format!(
                "n = {n} outside factorizer horizon 1..={}",
                self.n_max
            ));
        }
        let target = SequenceTarget::new_allowing_unit_k(self.k, n)?;
        let mut remaining = target.value().clone();
        let mut factors = Vec::new();
        for cand in &self.candidates {
            if cand.m > n {
                continue;
            }
            if !divides_target(cand, self.k, n) {
                continue;
            }
            // candidate hits: divide out of N, recording true multiplicity
            let mut mult = 0u32;
            loop {
                let (q, r) = remaining.div_rem(&cand.p);
                if !r.is_zero() {
                    break;
                }
                remaining = q;
                mult += 1;
            }
            debug_assert!(mult >= 1, "divisibility precheck lied for p = {}", cand.p);
            factors.push((cand.clone(), mult));
        }
        Ok(FactorizationOutcome {
            target,
            factors,
            cofactor: remaining,
        })
    }
}

/// Does `p = d*2^m + 1` divide `k*2^n + 1`? Tested as
/// `2^n * k ≡ -1 (mod p)` so the full `N` is only touched on a hit.
fn divides_target(cand: &SpecialFactor, k: u64, n: u32) -> bool {
    if let Some(p) = cand.p.to_u64() {
        let r = mul_add_one_mod(pow_mod_u64(2, n as u64, p), k % p, p);
        return r == 0;
    }
    let p = &cand.p;
    let two_pow = BigUint::from(2u32).modpow(&BigUint::from(n), p);
    let r = (two_pow * k + 1u32) % p;
    r.is_zero()
}

fn mul_add_one_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128 + 1) % m as u128) as u64
}

/// One-shot version of [`Factorizer::factorize`] for a single target.
pub fn special_factorize(target: &SequenceTarget) -> Result<FactorizationOutcome> {
    Factorizer::new(target.k(), target.n())?.factorize(target.n())
}

/// Assign the structural class of a factor of `N`, first match in order:
/// Fermat, then dependent, then small-exponent, then generic. The
/// small-exponent cutoff `m < sqrt(n)/(2 sqrt(tau(k)))` is decided exactly
/// as `4 * tau(k) * m^2 < n`.
pub fn classify_factor(f: &SpecialFactor, target: &SequenceTarget) -> Result<FactorClass> {
    if f.d == 0 || target.k() % f.d != 0 {
        return domain(format!("d = {} does not divide k = {}", f.d, target.k()));
    }
    if !(target.value() % &f.p).is_zero() {
        return domain(format!("p = {} does not divide N = {}", f.p, target.value()));
    }
    if f.d == 1 {
        return Ok(FactorClass::Fermat);
    }
    let shifted_d = BigUint::from(f.d) << f.m;
    if mult_dependent(&shifted_d, &target.shifted_k())?.is_some() {
        return Ok(FactorClass::Dependent);
    }
    let t = tau(target.k());
    if 4 * t * (f.m as u64) * (f.m as u64) < target.n() as u64 {
        return Ok(FactorClass::SmallExponent);
    }
    Ok(FactorClass::Generic)
}
