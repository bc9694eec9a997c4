//! Cross-validation of the structural machinery against independent
//! brute-force oracles over exhaustive ranges.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use carmichael::arith::{is_prime_u64, mult_dependent, perfect_power_base};
use carmichael::factor::{Factorizer, SequenceTarget};
use carmichael::korselt::{brute_is_carmichael, certify_with};

const SWEEP_LIMIT: u64 = 1_000_000;

/// Smallest-prime-factor table for [0, limit].
fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf: Vec<u32> = vec![0; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn factorize_with_spf(spf: &[u32], mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n as usize] as u64;
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

#[test]
fn primality_matches_sieve_to_one_million() {
    let spf = spf_table(SWEEP_LIMIT as usize);
    for n in 0..=SWEEP_LIMIT {
        let expect = n >= 2 && spf[n as usize] as u64 == n;
        assert_eq!(is_prime_u64(n), expect, "primality disagreement at {n}");
    }
}

#[test]
fn certification_matches_brute_oracle_to_one_million() {
    let spf = spf_table(SWEEP_LIMIT as usize);
    let mut carmichael_count = 0u32;
    let mut n_odd = 3u64;
    while n_odd <= SWEEP_LIMIT {
        let target = SequenceTarget::from_value(&BigUint::from(n_odd)).unwrap();
        let fz = Factorizer::new(target.k(), target.n()).unwrap();
        let structural = certify_with(&fz, target.n()).unwrap().verdict.is_carmichael();
        let brute = {
            let fs = factorize_with_spf(&spf, n_odd);
            fs.len() >= 2
                && fs.iter().all(|&(_, e)| e == 1)
                && fs.iter().all(|&(p, _)| (n_odd - 1) % (p - 1) == 0)
        };
        assert_eq!(structural, brute, "certification disagreement at N = {n_odd}");
        if structural {
            carmichael_count += 1;
        }
        n_odd += 2;
    }
    // count fixed by the oracle run itself
    assert_eq!(carmichael_count, 43);
}

#[test]
fn brute_oracle_function_agrees_with_spf_route() {
    let spf = spf_table(100_000);
    for n in (3u64..100_000).step_by(2) {
        let fs = factorize_with_spf(&spf, n);
        let direct = fs.len() >= 2
            && fs.iter().all(|&(_, e)| e == 1)
            && fs.iter().all(|&(p, _)| (n - 1) % (p - 1) == 0);
        assert_eq!(brute_is_carmichael(&BigUint::from(n)).unwrap(), direct, "N = {n}");
    }
}

#[test]
fn special_factor_sets_match_brute_enumeration() {
    // for every odd composite N <= 10^6, the factor set found structurally
    // equals the set of special-shape primes dividing N
    let spf = spf_table(SWEEP_LIMIT as usize);
    let mut n_odd = 9u64;
    while n_odd <= SWEEP_LIMIT {
        let full = factorize_with_spf(&spf, n_odd);
        if full.len() == 1 && full[0].1 == 1 {
            n_odd += 2;
            continue; // prime
        }
        let target = SequenceTarget::from_value(&BigUint::from(n_odd)).unwrap();
        let (k, n) = (target.k(), target.n());
        let expected: Vec<(u64, u32)> = full
            .iter()
            .copied()
            .filter(|&(p, _)| {
                let m = (p - 1).trailing_zeros();
                let d = (p - 1) >> m;
                m >= 1 && m <= n && d != 0 && k % d == 0
            })
            .collect();
        let fz = Factorizer::new(k, n).unwrap();
        let got: Vec<(u64, u32)> = fz
            .factorize(n)
            .unwrap()
            .factors
            .iter()
            .map(|(f, mult)| (f.p.to_u64().unwrap(), *mult))
            .collect();
        assert_eq!(got, expected, "factor set mismatch at N = {n_odd}");
        n_odd += 2;
    }
}

#[test]
fn perfect_power_matches_exhaustive_enumeration() {
    // independent oracle: enumerate every perfect power below the limit
    use std::collections::HashMap;
    let mut best: HashMap<u64, (u64, u32)> = HashMap::new();
    for base in 2u64..=1000 {
        let mut val = base * base;
        let mut exp = 2u32;
        while val <= SWEEP_LIMIT {
            let entry = best.entry(val).or_insert((base, exp));
            if exp > entry.1 {
                *entry = (base, exp);
            }
            match val.checked_mul(base) {
                Some(next) => val = next,
                None => break,
            }
            exp += 1;
        }
    }
    for x in 2..=SWEEP_LIMIT {
        let d = perfect_power_base(&BigUint::from(x)).unwrap();
        let (base, exp) = best.get(&x).copied().unwrap_or((x, 1));
        assert_eq!(
            (d.base.to_u64().unwrap(), d.exponent),
            (base, exp),
            "decomposition mismatch at {x}"
        );
    }
}

#[test]
fn mult_dependent_matches_power_collision_classes() {
    // independent oracle: two numbers are dependent iff their power
    // towers collide; build the collision classes by union-find
    const LIMIT: u64 = 4096;
    const MAX_EXP: u32 = 64;

    let mut parent: Vec<u16> = (0..=LIMIT as usize).map(|i| i as u16).collect();
    fn find(parent: &mut [u16], i: u16) -> u16 {
        let mut i = i;
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    fn union(parent: &mut [u16], a: u16, b: u16) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi as usize] = lo;
        }
    }

    use std::collections::HashMap;
    let mut seen: HashMap<BigUint, u16> = HashMap::new();
    for a in 2..=LIMIT {
        let ab = BigUint::from(a);
        let mut val = BigUint::one();
        for _ in 1..=MAX_EXP {
            val *= &ab;
            match seen.get(&val) {
                Some(&first) => union(&mut parent, first, a as u16),
                None => {
                    seen.insert(val.clone(), a as u16);
                }
            }
        }
    }

    // the collision partition must equal the minimal-base partition
    for a in 2..=LIMIT {
        for b in [a + 1, a * 2, a * a] {
            if b < 2 || b > LIMIT {
                continue;
            }
            let dependent = find(&mut parent, a as u16) == find(&mut parent, b as u16);
            let result = mult_dependent(&BigUint::from(a), &BigUint::from(b)).unwrap();
            assert_eq!(result.is_some(), dependent, "dependence mismatch for ({a}, {b})");
            if let Some((i, j)) = result {
                assert!(i <= 64 && j <= 64);
                assert_eq!(BigUint::from(a).pow(i), BigUint::from(b).pow(j));
            }
        }
    }

    // full pairwise agreement at the level of class representatives
    use std::collections::BTreeMap;
    let mut by_base: BTreeMap<BigUint, Vec<u64>> = BTreeMap::new();
    for a in 2..=LIMIT {
        let base = perfect_power_base(&BigUint::from(a)).unwrap().base;
        by_base.entry(base).or_default().push(a);
    }
    let mut by_root: BTreeMap<u16, Vec<u64>> = BTreeMap::new();
    for a in 2..=LIMIT {
        let root = find(&mut parent, a as u16);
        by_root.entry(root).or_default().push(a);
    }
    let classes_a: Vec<Vec<u64>> = by_base.into_values().collect();
    let mut classes_b: Vec<Vec<u64>> = by_root.into_values().collect();
    classes_b.sort_by_key(|c| c[0]);
    let mut classes_a = classes_a;
    classes_a.sort_by_key(|c| c[0]);
    assert_eq!(classes_a, classes_b);
}
