//! Scan configuration and its content hash.
//!
//! The hash covers exactly the fields that determine the finding set, so a
//! resumed scan can be rejected when it would not reproduce the original
//! run. Worker count and paths are excluded: they change the schedule and
//! the plumbing, never the results.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub k_min: u64,
    pub k_max: u64,
    pub n_max: u32,
    /// Number of small odd primes used by the congruence pre-filter.
    pub sieve_primes: usize,
    /// Attach per-factor Korselt evidence to each emitted finding.
    pub emit_certificates: bool,
    /// Attach per-finding certification wall time. Off by default: timing
    /// is nondeterministic and would break byte-reproducible output.
    pub emit_timings: bool,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.k_min % 2 == 0 || self.k_max % 2 == 0 {
            return Err(format!(
                "k bounds must be odd, got {}..={}",
                self.k_min, self.k_max
            ));
        }
        if self.k_min < 3 {
            return Err(format!("k_min must be at least 3, got {}", self.k_min));
        }
        if self.k_min > self.k_max {
            return Err(format!("empty k range {}..={}", self.k_min, self.k_max));
        }
        if self.n_max == 0 {
            return Err("n_max must be at least 1".to_string());
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON encoding of the semantic fields.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Human-readable field-by-field diff against another config.
    pub fn diff(&self, other: &ScanConfig) -> Vec<String> {
        let mut out = Vec::new();
        let a = serde_json::to_value(self).expect("config serializes");
        let b = serde_json::to_value(other).expect("config serializes");
        if let (Some(a), Some(b)) = (a.as_object(), b.as_object()) {
            for (key, va) in a {
                match b.get(key) {
                    Some(vb) if va == vb => {}
                    Some(vb) => out.push(format!("{key}: {va} != {vb}")),
                    None => out.push(format!("{key}: missing in checkpoint")),
                }
            }
        }
        out
    }
}

pub fn parse_workers(requested: Option<usize>) -> Result<usize, String> {
    // environment override takes precedence over the flag
    if let Ok(raw) = std::env::var("CARMICHAEL_WORKERS") {
        let parsed: usize = raw
            .parse()
            .map_err(|e| format!("CARMICHAEL_WORKERS={raw}: {e}"))?;
        if parsed == 0 {
            return Err("CARMICHAEL_WORKERS must be at least 1".to_string());
        }
        return Ok(parsed);
    }
    match requested {
        Some(0) => Err("--workers must be at least 1".to_string()),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map(|c| c.get()).unwrap_or(1)),
    }
}
