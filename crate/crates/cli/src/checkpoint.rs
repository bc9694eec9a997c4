//! Crash-safe progress persistence: a small JSON file recording the scan
//! configuration (and its hash) plus the last fully completed `k`, always
//! written via temp-file-then-rename so a torn write can never be loaded.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::ScanConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    pub config: ScanConfig,
    pub k_completed_through: u64,
    /// Unix seconds at write time; informational only.
    pub timestamp: u64,
}

impl Checkpoint {
    pub fn new(config: &ScanConfig, k_completed_through: u64) -> Self {
        Checkpoint {
            config_hash: config.content_hash(),
            config: config.clone(),
            k_completed_through,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

pub fn save(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let body = serde_json::to_string_pretty(checkpoint)?;
    write_atomic(path, body.as_bytes())
}

pub fn load(path: &Path) -> Result<Option<Checkpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let body = fs::read_to_string(path)
        .with_context(|| format!("reading checkpoint {}", path.display()))?;
    let cp: Checkpoint = serde_json::from_str(&body)
        .with_context(|| format!("parsing checkpoint {}", path.display()))?;
    Ok(Some(cp))
}

/// Validate a loaded checkpoint against the current config; a mismatch is
/// refused with the exact differing fields.
pub fn validate(checkpoint: &Checkpoint, config: &ScanConfig) -> Result<()> {
    let current = config.content_hash();
    if checkpoint.config_hash != current {
        let diff = config.diff(&checkpoint.config);
        bail!(
            "checkpoint was written by a different configuration; refusing to resume.\n\
             differing fields:\n  {}",
            if diff.is_empty() {
                "(hash mismatch only)".to_string()
            } else {
                diff.join("\n  ")
            }
        );
    }
    Ok(())
}

/// Write through a sibling temp file and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("renaming {} into place", tmp.display()))?;
    Ok(())
}
