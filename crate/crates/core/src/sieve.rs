//! Congruence constraints on the exponent `n` forced by a fixed prime.
//!
//! For an odd prime `p` coprime to `2k`, the divisibility `p | k*2^n + 1`
//! holds exactly when `2^n ≡ -k^{-1} (mod p)`, which pins `n` to at most
//! one residue class modulo `ord_p(2)`. Collecting such classes and
//! intersecting them (CRT) reproduces the incompatibility arguments used
//! to rule out small prime factors, and powers the scanner's pre-filter.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{
    factorize_u64, inv_mod_u64, is_prime_u64, mult_order, pow_mod_u64, primality,
};
use crate::error::{domain, Error, Result};

/// The set of exponents `n` (mod `ord_p(2)`) with `p | k*2^n + 1`:
/// either empty or a single residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceClass {
    pub prime: u64,
    /// `ord_p(2)`.
    pub modulus: u64,
    pub residue: Option<u64>,
}

impl CongruenceClass {
    pub fn contains(&self, n: u64) -> bool {
        self.residue.map_or(false, |r| n % self.modulus == r)
    }
}

impl std::fmt::Display for CongruenceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.residue {
            Some(r) => write!(f, "p={}: n ≡ {} (mod {})", self.prime, r, self.modulus),
            None => write!(f, "p={}: no exponent", self.prime),
        }
    }
}

/// Multiplicative order of 2 modulo an odd prime `p`, word-sized path.
pub(crate) fn ord2_u64(p: u64) -> u64 {
    let mut e = p - 1;
    for (q, _) in factorize_u64(p - 1) {
        while e % q == 0 && pow_mod_u64(2, e / q, p) == 1 {
            e /= q;
        }
    }
    e
}

/// Solve `2^n * k ≡ -1 (mod p)` for `n`. Requires `p` an odd prime not
/// dividing `2k`. The residue is found by walking the power cycle of 2,
/// which has length `ord_p(2)` — small for the primes this is used on.
pub fn residues_for_prime(p: u64, k: u64) -> Result<CongruenceClass> {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return domain(format!("need an odd prime, got {p}"));
    }
    if k % p == 0 {
        return domain(format!("p = {p} divides 2k (k = {k})"));
    }
    let modulus = ord2_u64(p);
    let k_inv = inv_mod_u64(k % p, p).expect("p does not divide k");
    let target = p - k_inv; // -k^{-1} mod p; k_inv != 0
    let mut x: u64 = 1;
    let mut residue = None;
    for i in 0..modulus {
        if x == target {
            residue = Some(i);
            break;
        }
        x = (x << 1) % p;
    }
    Ok(CongruenceClass { prime: p, modulus, residue })
}

/// A satisfiable intersection of congruence classes: the least witness
/// residue modulo the lcm of the moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrtWitness {
    pub residue: u64,
    pub modulus: u64,
}

/// Intersect the classes. `None` means no exponent satisfies them all
/// (including the case where some class is empty outright).
pub fn compatible(classes: &[CongruenceClass]) -> Result<Option<CrtWitness>> {
    let mut acc = CrtWitness { residue: 0, modulus: 1 };
    for class in classes {
        let r = match class.residue {
            Some(r) => r,
            None => return Ok(None),
        };
        match merge(acc, CrtWitness { residue: r, modulus: class.modulus })? {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

fn merge(a: CrtWitness, b: CrtWitness) -> Result<Option<CrtWitness>> {
    let g = a.modulus.gcd(&b.modulus);
    let (lo, hi) = if a.modulus <= b.modulus { (a, b) } else { (b, a) };
    if (hi.residue as i128 - lo.residue as i128).rem_euclid(g as i128) != 0 {
        return Ok(None);
    }
    let lcm = (a.modulus / g)
        .checked_mul(b.modulus)
        .ok_or_else(|| Error::Range("lcm of congruence moduli exceeds u64".into()))?;
    // walk hi's class; at most lo.modulus/g steps to the common solution
    let mut x = hi.residue as u128;
    let step = hi.modulus as u128;
    let lo_mod = lo.modulus as u128;
    while x % lo_mod != lo.residue as u128 {
        x += step;
        debug_assert!(x < lcm as u128 + step);
    }
    Ok(Some(CrtWitness { residue: x as u64, modulus: lcm }))
}

/// Caller-selected polarity for [`admissible_n`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Keep only `n` where the prime divides `k*2^n + 1`.
    Divides,
    /// Keep only `n` where it does not.
    NotDivides,
}

/// All `n` in the range consistent with every `(prime, polarity)`
/// requirement. Primes must be coprime to `2k`.
pub fn admissible_n(
    k: u64,
    constraints: &[(u64, Polarity)],
    n_range: RangeInclusive<u64>,
) -> Result<Vec<u64>> {
    let classes: Vec<(CongruenceClass, Polarity)> = constraints
        .iter()
        .map(|&(p, pol)| residues_for_prime(p, k).map(|c| (c, pol)))
        .collect::<Result<_>>()?;
    Ok(n_range
        .filter(|&n| {
            classes.iter().all(|(c, pol)| match pol {
                Polarity::Divides => c.contains(n),
                Polarity::NotDivides => !c.contains(n),
            })
        })
        .collect())
}

/// Is `t` in the cyclic subgroup generated by 2 modulo the prime `p`?
/// Membership is equivalent to `t^ord_p(2) ≡ 1`, which stays cheap even
/// when the order itself is astronomically large.
pub(crate) fn orbit_of_two_contains(p: &BigUint, t: &BigUint) -> Result<bool> {
    let e = mult_order(&BigUint::from(2u32), p)?;
    Ok(t.modpow(&e, p).is_one())
}

/// Empirical shadow of the quadratic-reciprocity filters: the residues
/// `b mod modulus` for which some prime `p = d*2^b + 1` with
/// `b_min <= b <= b_max` actually divides a term of the sequence for `k`.
///
/// The reciprocity arguments predict a superset of this set; the filter is
/// therefore tested as a containment, with the lower cutoff `b_min`
/// matching each argument's "from now on" threshold.
pub fn qr_allowed_exponents(
    k: u64,
    d: u64,
    modulus: u64,
    b_min: u32,
    b_max: u32,
) -> Result<BTreeSet<u64>> {
    if d == 0 || k % d != 0 {
        return domain(format!("d = {d} must divide k = {k}"));
    }
    if modulus == 0 {
        return domain("modulus must be positive".to_string());
    }
    let mut out = BTreeSet::new();
    let kb = BigUint::from(k);
    for b in b_min..=b_max {
        let p = (BigUint::from(d) << b) + 1u32;
        if !primality(&p).is_prime() {
            continue;
        }
        if (&kb % &p).is_zero() {
            continue; // p | k: p never divides k*2^n + 1
        }
        // t = -k^{-1} mod p via Fermat inversion
        let k_inv = kb.modpow(&(&p - 2u32), &p);
        let t = &p - k_inv;
        if orbit_of_two_contains(&p, &t)? {
            out.insert(b as u64 % modulus);
        }
    }
    Ok(out)
}
