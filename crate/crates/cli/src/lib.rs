//! Scan shell around the `carmichael` library: configuration, the block
//! scheduler with its congruence pre-filter, JSONL output, and crash-safe
//! checkpointing. The `carmichael` binary in this crate exposes all of it
//! plus the certification, sieve, bound, and verification commands.

pub mod checkpoint;
pub mod config;
pub mod output;
pub mod scan;

pub use config::ScanConfig;
pub use output::Finding;
