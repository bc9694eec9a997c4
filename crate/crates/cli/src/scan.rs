//! The scan driver: a worker pool over independent per-`k` tasks, each of
//! which prunes its exponent range with the congruence pre-filter and
//! certifies the survivors. Results are collected block by block in `k`
//! order, so the finding stream is identical for any worker count.

use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;

use carmichael::arith::is_prime_u64;
use carmichael::factor::Factorizer;
use carmichael::korselt::certify_with;
use carmichael::sieve::residues_for_prime;

use crate::config::ScanConfig;
use crate::output::Finding;

/// Number of `k` values processed per block; the checkpoint advances one
/// block at a time.
pub const BLOCK_K: usize = 64;

#[derive(Debug, Default, Clone, Copy)]
pub struct ScanStats {
    pub k_scanned: u64,
    pub n_certified: u64,
    pub n_pruned: u64,
    pub findings: u64,
}

/// The first `count` odd primes that do not divide `k`.
fn sieve_primes_for(k: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = 3u64;
    while out.len() < count {
        if is_prime_u64(candidate) && k % candidate != 0 {
            out.push(candidate);
        }
        candidate += 2;
    }
    out
}

/// Exponents in `1..=n_max` that survive the congruence pre-filter: `n` is
/// removed only when some sieve prime is forced to divide `k*2^n + 1`
/// without being an admissible factor of a Carmichael number there
/// (its odd part does not divide `k`, or its 2-power exceeds `n`). Such an
/// `n` can never certify, so pruning is conservative.
pub fn admissible_exponents(k: u64, n_max: u32, sieve_prime_count: usize) -> Vec<u32> {
    let mut alive = vec![true; n_max as usize + 1];
    for q in sieve_primes_for(k, sieve_prime_count) {
        let class = match residues_for_prime(q, k) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let Some(r) = class.residue else { continue };
        let m_q = (q - 1).trailing_zeros();
        let d_q = (q - 1) >> m_q;
        let special = d_q != 0 && k % d_q == 0;
        let mut n = if r == 0 { class.modulus } else { r };
        while n <= n_max as u64 {
            // q | k*2^n + 1 here; fatal unless q is special-form for this n
            if !(special && (m_q as u64) <= n) {
                alive[n as usize] = false;
            }
            n += class.modulus;
        }
    }
    (1..=n_max).filter(|&n| alive[n as usize]).collect()
}

/// Scan a single `k`, returning its findings in ascending `n`.
pub fn scan_one_k(k: u64, config: &ScanConfig) -> Result<(Vec<Finding>, ScanStats)> {
    let mut stats = ScanStats { k_scanned: 1, ..Default::default() };
    let admissible = admissible_exponents(k, config.n_max, config.sieve_primes);
    stats.n_pruned = config.n_max as u64 - admissible.len() as u64;
    let mut findings = Vec::new();
    if admissible.is_empty() {
        return Ok((findings, stats));
    }
    let horizon = *admissible.last().expect("nonempty");
    let factorizer = Factorizer::new(k, horizon).map_err(|e| anyhow!("{e}"))?;
    for n in admissible {
        let started = Instant::now();
        let cert = certify_with(&factorizer, n).map_err(|e| anyhow!("{e}"))?;
        stats.n_certified += 1;
        if cert.verdict.is_carmichael() {
            let wall = config
                .emit_timings
                .then(|| started.elapsed().as_millis() as u64);
            findings.push(Finding::from_certificate(&cert, wall, config.emit_certificates));
            stats.findings += 1;
        }
    }
    Ok((findings, stats))
}

/// Run the scan over `start_after+2 ..= k_max` (odd values), invoking
/// `on_block` with each completed block's findings in ascending `(k, n)`
/// order together with the highest `k` now fully completed. A worker pool
/// of the requested size executes the per-`k` tasks; a panic inside one
/// task is isolated by rayon and surfaces as an error for that block.
pub fn run(
    config: &ScanConfig,
    workers: usize,
    start_after: Option<u64>,
    mut on_block: impl FnMut(u64, Vec<Finding>) -> Result<()>,
) -> Result<ScanStats> {
    config.validate().map_err(|e| anyhow!(e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;

    let first_k = match start_after {
        Some(done) => done + 2,
        None => config.k_min,
    };
    let ks: Vec<u64> = (first_k..=config.k_max).step_by(2).collect();
    let mut totals = ScanStats::default();
    for block in ks.chunks(BLOCK_K) {
        let results: Vec<(Vec<Finding>, ScanStats)> = pool.install(|| {
            block
                .par_iter()
                .map(|&k| {
                    // a panicking task must not take down its siblings;
                    // it is logged and turned into an error for the block,
                    // leaving the previous checkpoint intact
                    std::panic::catch_unwind(|| scan_one_k(k, config)).unwrap_or_else(
                        |payload| {
                            let msg = panic_message(&payload);
                            eprintln!("task for k = {k} panicked: {msg}");
                            Err(anyhow!("task for k = {k} panicked: {msg}"))
                        },
                    )
                })
                .collect::<Result<_>>()
        })?;
        let mut findings = Vec::new();
        for (mut f, s) in results {
            findings.append(&mut f);
            totals.k_scanned += s.k_scanned;
            totals.n_certified += s.n_certified;
            totals.n_pruned += s.n_pruned;
            totals.findings += s.findings;
        }
        on_block(*block.last().expect("nonempty block"), findings)?;
    }
    Ok(totals)
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

/// Convenience wrapper collecting every finding in memory.
pub fn collect_findings(config: &ScanConfig, workers: usize) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    run(config, workers, None, |_, mut block| {
        out.append(&mut block);
        Ok(())
    })?;
    Ok(out)
}
