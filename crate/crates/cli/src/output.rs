//! The JSONL finding schema: one JSON object per line, big integers as
//! decimal strings, field order fixed by the struct so identical finding
//! sets serialize to identical bytes.

use std::io::{BufRead, Write};

use anyhow::{Context, Result};
use num_traits::One;
use serde::{Deserialize, Serialize};

use carmichael::korselt::CarmichaelCertificate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub p: String,
    pub d: u64,
    pub m: u32,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KorseltCheck {
    pub p: String,
    pub korselt_divides: bool,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub k: u64,
    pub n: u32,
    #[serde(rename = "N")]
    pub value: String,
    pub factors: Vec<FactorEntry>,
    pub proven_primality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub korselt_checks: Option<Vec<KorseltCheck>>,
}

impl Finding {
    /// Build a finding from a Carmichael certificate. Panics if the
    /// certificate is not a Carmichael verdict; callers filter first.
    pub fn from_certificate(
        cert: &CarmichaelCertificate,
        wall_time_ms: Option<u64>,
        with_checks: bool,
    ) -> Finding {
        assert!(cert.verdict.is_carmichael(), "findings are Carmichael only");
        assert!(cert.cofactor.is_one());
        Finding {
            k: cert.target.k(),
            n: cert.target.n(),
            value: cert.target.value().to_string(),
            factors: cert
                .factors
                .iter()
                .map(|f| FactorEntry {
                    p: f.p.to_string(),
                    d: f.d,
                    m: f.m,
                    class: f.class.expect("certified factors are classified").as_str().into(),
                })
                .collect(),
            proven_primality: cert.proven_primality(),
            wall_time_ms,
            korselt_checks: with_checks.then(|| {
                cert.factors
                    .iter()
                    .map(|f| KorseltCheck {
                        p: f.p.to_string(),
                        korselt_divides: f.korselt_divides,
                        multiplicity: f.multiplicity,
                    })
                    .collect()
            }),
        }
    }
}

pub fn write_jsonl(sink: &mut dyn Write, finding: &Finding) -> Result<()> {
    let line = serde_json::to_string(finding).context("serializing finding")?;
    sink.write_all(line.as_bytes())?;
    sink.write_all(b"\n")?;
    Ok(())
}

pub fn read_jsonl(source: &mut dyn BufRead) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let finding: Finding = serde_json::from_str(&line)
            .with_context(|| format!("parsing finding on line {}", idx + 1))?;
        out.push(finding);
    }
    Ok(out)
}
