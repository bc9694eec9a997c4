//! Executable forms of the structural facts about special-form factors:
//! the Fermat-factor size bound, the uniqueness and size of the
//! multiplicatively dependent factor, the pigeonhole exponent bound, the
//! four-class partition of a certified number, and the `(U, V1, V2)`
//! divisibility triple behind the counting argument.
//!
//! Real-valued cutoffs are compared exactly in integers whenever possible
//! (`m < sqrt(n)/(2 sqrt(tau))` becomes `4 tau m^2 < n`, cube bounds are
//! cubed); only genuinely transcendental thresholds go through floating
//! point, and never close to a tie for inputs in range.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{perfect_power_base, primality, tau};
use crate::error::{domain, Error, Result};
use crate::factor::{classify_factor, FactorClass, SequenceTarget, SpecialFactor};
use crate::korselt::{CarmichaelCertificate, Verdict};

/// Natural log of a big integer, via the leading 64 bits of the mantissa.
pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(!x.is_zero());
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let top = (x >> (bits - 64)).to_u64().unwrap();
    (top as f64).ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

/// Outcome of a named inequality check. Preconditions that fail make a
/// check vacuous rather than failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckOutcome {
    Holds,
    Fails,
    Vacuous,
}

impl CheckOutcome {
    pub fn from_bool(b: bool) -> Self {
        if b {
            CheckOutcome::Holds
        } else {
            CheckOutcome::Fails
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckOutcome::Holds => "holds",
            CheckOutcome::Fails => "FAILS",
            CheckOutcome::Vacuous => "vacuous",
        }
    }
}

// ---------------------------------------------------------------------------
// Fermat factors
// ---------------------------------------------------------------------------

/// All Fermat primes `2^(2^alpha) + 1` below `k^2`. Composite Fermat
/// numbers (the fifth onward, as far as anyone knows) are filtered by an
/// actual primality test, not assumed.
pub fn fermat_prime_candidates(k: u64) -> Result<Vec<u64>> {
    if k < 3 || k % 2 == 0 {
        return domain(format!("need odd k >= 3, got {k}"));
    }
    let k_sq = BigUint::from(k) * k;
    let mut out = Vec::new();
    let mut alpha = 0u32;
    loop {
        let p = (BigUint::one() << (1u32 << alpha)) + 1u32;
        if p >= k_sq {
            break;
        }
        if primality(&p).is_prime() {
            out.push(p.to_u64().expect("prime Fermat numbers below k^2 fit a word"));
        }
        alpha += 1;
    }
    Ok(out)
}

/// The Fermat-factor size bound: a prime `2^(2^alpha) + 1` dividing
/// `k*2^n + 1` must be below `k^2`.
pub fn fermat_factor_bound(f: &SpecialFactor, target: &SequenceTarget) -> Result<bool> {
    if f.d != 1 {
        return domain(format!("factor {} is not of Fermat shape (d = {})", f.p, f.d));
    }
    if !(target.value() % &f.p).is_zero() {
        return domain(format!("p = {} does not divide N = {}", f.p, target.value()));
    }
    let k_sq = BigUint::from(target.k()) * target.k();
    Ok(f.p < k_sq)
}

// ---------------------------------------------------------------------------
// The dependent factor
// ---------------------------------------------------------------------------

/// The unique possible prime factor `p` of `N` with `p - 1` and `N - 1`
/// multiplicatively dependent: writing `k*2^n = rho^u` with minimal base,
/// `u = 2^alpha * u1`, the only candidate is `rho^(2^alpha) + 1`, and only
/// when `u1 >= 3`. Returns it iff it is prime, divides `N`, and satisfies
/// the cube-root size bound.
pub fn dependent_factor(target: &SequenceTarget) -> Result<Option<BigUint>> {
    let shifted = target.shifted_k();
    let decomp = perfect_power_base(&shifted)?;
    let alpha = decomp.exponent.trailing_zeros();
    let u1 = decomp.exponent >> alpha;
    if u1 < 3 {
        return Ok(None);
    }
    let p = decomp.base.pow(1u32 << alpha) + 1u32;
    if !primality(&p).is_prime() {
        return Ok(None);
    }
    if !(target.value() % &p).is_zero() {
        return Ok(None);
    }
    // p <= 2^(n/3) k^(1/3) + 1, exactly: (p-1)^3 <= 2^n k
    let cubed = (&p - 1u32).pow(3);
    if cubed > shifted {
        return Ok(None);
    }
    Ok(Some(p))
}

// ---------------------------------------------------------------------------
// Pigeonhole pair
// ---------------------------------------------------------------------------

/// A coprime pair `(u, v)` with small coordinates making `u*m + v*n`
/// small: `max(|u|, |v|) <= sqrt(X)` for `X = n / ln k`, and
/// `|u*m + v*n| <= 3 sqrt(n ln k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PigeonholePair {
    pub u: i64,
    pub v: i64,
    pub combined: i64,
}

/// Exhaustive search of the pigeonhole box for the minimizing coprime
/// pair. Ties break to the lexicographically smallest `(|u|, |v|)`, then
/// to positive `u`, then positive `v`, so the result is deterministic.
/// Requires `n > 3 ln k` and `m <= n` (factors of a certified number
/// always satisfy the latter, and the size guarantee depends on it).
pub fn pigeonhole_pair(m: u32, n: u32, k: u64) -> Result<PigeonholePair> {
    if k < 3 {
        return domain(format!("need k >= 3, got {k}"));
    }
    if m == 0 || m > n {
        return domain(format!("need 1 <= m <= n, got m = {m}, n = {n}"));
    }
    let ln_k = (k as f64).ln();
    if (n as f64) <= 3.0 * ln_k {
        return domain(format!("need n > 3 ln k = {:.4}, got n = {n}", 3.0 * ln_k));
    }
    let x = n as f64 / ln_k;
    let mut bound = x.sqrt().floor() as i64;
    while (bound as f64) * (bound as f64) > x {
        bound -= 1; // guard against an upward-rounded sqrt
    }
    let mut best: Option<(i64, i64, i64)> = None;
    for u in -bound..=bound {
        for v in -bound..=bound {
            if u == 0 && v == 0 {
                continue;
            }
            if u.unsigned_abs().gcd(&v.unsigned_abs()) != 1 {
                continue;
            }
            let combined = u * m as i64 + v * n as i64;
            let cand = (combined.abs(), u.abs(), v.abs(), u, v);
            let better = match best {
                None => true,
                Some((c, bu, bv)) => {
                    let cur = (c.abs(), bu.abs(), bv.abs(), bu, bv);
                    (cand.0, cand.1, cand.2, cand.3 < 0, cand.4 < 0)
                        < (cur.0, cur.1, cur.2, cur.3 < 0, cur.4 < 0)
                }
            };
            if better {
                best = Some((combined, u, v));
            }
        }
    }
    let (combined, u, v) =
        best.ok_or_else(|| Error::Invariant("empty pigeonhole box".into()))?;
    let limit = 3.0 * ((n as f64) * ln_k).sqrt();
    if (combined.abs() as f64) > limit {
        return Err(Error::Invariant(format!(
            "pigeonhole bound violated: |{combined}| > {limit}"
        )));
    }
    Ok(PigeonholePair { u, v, combined })
}

/// Exponent bound for factors independent of `k*2^n`: `m < 7 sqrt(n ln k)`
/// whenever `n > 3 ln k`. Vacuous when the factor class or the size
/// precondition puts the factor out of scope.
pub fn generic_exponent_bound(
    f: &SpecialFactor,
    class: FactorClass,
    target: &SequenceTarget,
) -> CheckOutcome {
    if !matches!(class, FactorClass::Generic | FactorClass::SmallExponent) {
        return CheckOutcome::Vacuous;
    }
    let ln_k = (target.k() as f64).ln();
    if (target.n() as f64) <= 3.0 * ln_k {
        return CheckOutcome::Vacuous;
    }
    CheckOutcome::from_bool((f.m as f64) < 7.0 * ((target.n() as f64) * ln_k).sqrt())
}

// ---------------------------------------------------------------------------
// Four-class partition
// ---------------------------------------------------------------------------

/// Products of the factor classes of a certified Carmichael number,
/// together with the named size inequalities each class must satisfy.
#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub n1: BigUint,
    pub n2: BigUint,
    pub n3: BigUint,
    pub n4: BigUint,
    /// Small-exponent cutoff `sqrt(n) / (2 sqrt(tau(k)))`.
    pub n0: f64,
    /// `64 tau(k) (ln k)^2`; the quarter/third power checks and the
    /// class-4 count bound only bind above it.
    pub n_threshold: f64,
    pub thresholds_in_force: bool,
    pub checks: Vec<(&'static str, CheckOutcome)>,
}

impl PartitionReport {
    pub fn check(&self, name: &str) -> Option<CheckOutcome> {
        self.checks.iter().find(|(n, _)| *n == name).map(|&(_, o)| o)
    }

    pub fn all_hold_or_vacuous(&self) -> bool {
        self.checks.iter().all(|&(_, o)| o != CheckOutcome::Fails)
    }
}

impl std::fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "class products: fermat={} dependent={} small_exponent={} generic={}",
            self.n1, self.n2, self.n3, self.n4
        )?;
        for (name, outcome) in &self.checks {
            writeln!(f, "  {name}: {}", outcome.as_str())?;
        }
        if !self.thresholds_in_force {
            writeln!(
                f,
                "  (the quarter/third-power and factor-count checks bind only for \
                 n > {:.1}, far beyond any feasible scan; they are vacuous here)",
                self.n_threshold
            )?;
        }
        Ok(())
    }
}

/// Group the factors of a certified Carmichael number by class, multiply,
/// and evaluate the per-class size bounds. The quarter/third power checks
/// apply only above `n > 64 tau (ln k)^2`, far beyond any feasible scan;
/// below it they are reported as vacuous rather than silently dropped.
pub fn partition_products(cert: &CarmichaelCertificate) -> Result<PartitionReport> {
    if cert.verdict != Verdict::Carmichael {
        return domain(format!("{} is not certified Carmichael", cert.target));
    }
    let target = &cert.target;
    let (k, n) = (target.k(), target.n());
    let mut products = [BigUint::one(), BigUint::one(), BigUint::one(), BigUint::one()];
    let mut class4_count = 0u64;
    for f in &cert.factors {
        let class = f
            .class
            .ok_or_else(|| Error::Invariant(format!("unclassified factor {}", f.p)))?;
        let idx = match class {
            FactorClass::Fermat => 0,
            FactorClass::Dependent => 1,
            FactorClass::SmallExponent => 2,
            FactorClass::Generic => {
                class4_count += 1;
                3
            }
        };
        products[idx] *= &f.p;
    }
    let [n1, n2, n3, n4] = products;

    let t = tau(k);
    let ln_k = (k as f64).ln();
    let n0 = (n as f64).sqrt() / (2.0 * (t as f64).sqrt());
    let n_threshold = 64.0 * t as f64 * ln_k * ln_k;
    let in_force = (n as f64) > n_threshold;

    let two_pow_n = BigUint::one() << n;
    let k4 = BigUint::from(k).pow(4);
    let mut checks = Vec::new();
    checks.push(("fermat_product_below_k4", CheckOutcome::from_bool(n1 < k4)));
    // N2 <= 2^(n/3) k^(1/3) + 1, cubed to stay in integers
    let n2_ok = n2.is_one() || (&n2 - 1u32).pow(3) <= target.shifted_k();
    checks.push(("dependent_factor_cube_bound", CheckOutcome::from_bool(n2_ok)));
    checks.push((
        "small_exponent_product_below_quarter_power",
        if in_force {
            CheckOutcome::from_bool(n3.pow(4) < two_pow_n)
        } else {
            CheckOutcome::Vacuous
        },
    ));
    checks.push((
        "generic_product_above_third_power",
        if in_force {
            CheckOutcome::from_bool(n4.pow(3) > two_pow_n)
        } else {
            CheckOutcome::Vacuous
        },
    ));
    checks.push((
        "generic_factor_count_lower_bound",
        if in_force {
            let need = (n as f64).sqrt() / (24.0 * ln_k.sqrt());
            CheckOutcome::from_bool(class4_count as f64 >= need)
        } else {
            CheckOutcome::Vacuous
        },
    ));

    Ok(PartitionReport {
        n1,
        n2,
        n3,
        n4,
        n0,
        n_threshold,
        thresholds_in_force: in_force,
        checks,
    })
}

// ---------------------------------------------------------------------------
// Division triple
// ---------------------------------------------------------------------------

/// The triple `U = d*2^m`, `V1 = d^q`, `V2 = (-1)^q k 2^r` from the
/// division with remainder `n = q*m + r`, `0 <= r < m`. When
/// `p = U + 1` divides `N`, it divides `V1 + V2`, and the sum is nonzero
/// for factors independent of `k*2^n`.
#[derive(Debug, Clone)]
pub struct DivisionTriple {
    pub u_value: BigUint,
    pub v1: BigUint,
    pub v2: BigInt,
    pub q: u64,
    pub r: u32,
    /// `U > |V1 + V2|^delta2` with `delta2 = 1/(20 tau(k) ln k)`.
    pub u_exceeds_v_pow_delta2: bool,
}

pub fn division_triple(f: &SpecialFactor, target: &SequenceTarget) -> Result<DivisionTriple> {
    if !(target.value() % &f.p).is_zero() {
        return domain(format!("p = {} does not divide N = {}", f.p, target.value()));
    }
    let class = classify_factor(f, target)?;
    if !matches!(class, FactorClass::Generic | FactorClass::SmallExponent) {
        return domain(format!(
            "division triple needs a multiplicatively independent factor, {} is {:?}",
            f.p, class
        ));
    }
    let n = target.n();
    let q = (n / f.m) as u64;
    let r = n % f.m;
    let u_value = BigUint::from(f.d) << f.m;
    let v1 = BigUint::from(f.d).pow(q as u32);
    let magnitude = BigUint::from(target.k()) << r;
    let sign = if q % 2 == 0 { Sign::Plus } else { Sign::Minus };
    let v2 = BigInt::from_biguint(sign, magnitude);
    let v_sum = BigInt::from(v1.clone()) + &v2;
    if v_sum.is_zero() {
        return Err(Error::Invariant(format!(
            "V1 + V2 = 0 for independent factor {} of {}",
            f.p, target
        )));
    }
    let p_int = BigInt::from(f.p.clone());
    if !(&v_sum % &p_int).is_zero() {
        return Err(Error::Invariant(format!(
            "(U+1) does not divide V1+V2 for factor {} of {}",
            f.p, target
        )));
    }
    let delta2 = 1.0 / (20.0 * tau(target.k()) as f64 * (target.k() as f64).ln());
    let ln_u = ln_biguint(&u_value);
    let ln_v = ln_biguint(v_sum.magnitude());
    Ok(DivisionTriple {
        u_value,
        v1,
        v2,
        q,
        r,
        u_exceeds_v_pow_delta2: ln_u > delta2 * ln_v,
    })
}
