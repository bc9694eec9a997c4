use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use carmichael::bounds::{bound_report_with_precision, minimum_m_over_valid_k};
use carmichael::claims::minimal_k_report;
use carmichael::factor::{special_factorize, SequenceTarget};
use carmichael::korselt::{certify, Rejection, Verdict};
use carmichael::lemmas::partition_products;
use carmichael::sieve::{compatible, residues_for_prime, CongruenceClass};

use carmichael_cli::checkpoint::{self, Checkpoint};
use carmichael_cli::config::{parse_workers, ScanConfig};
use carmichael_cli::output::{read_jsonl, write_jsonl, Finding};
use carmichael_cli::scan;

/// Search for and certify Carmichael numbers of the form k*2^n + 1.
#[derive(Parser)]
#[command(name = "carmichael", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify k*2^n + 1 and print the full certificate.
    Check { k: u64, n: u32 },
    /// Print the special-form factorization of k*2^n + 1.
    Factor { k: u64, n: u32 },
    /// Print the congruence class each prime forces on n, and whether the
    /// system is satisfiable.
    Sieve {
        k: u64,
        #[arg(required = true)]
        primes: Vec<u64>,
    },
    /// Print the effective-constant report for k.
    Bound {
        k: u64,
        /// Working precision in bits (>= 128).
        #[arg(long, default_value_t = 192)]
        precision: usize,
    },
    /// Re-run every finite computation behind the smallest-k result and
    /// exit nonzero if any claim fails.
    #[command(name = "verify-paper")]
    VerifyPaper {
        /// Also write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Scan a k-range, streaming findings as JSONL.
    Scan {
        #[arg(long, value_name = "ODD")]
        k_min: u64,
        #[arg(long, value_name = "ODD")]
        k_max: u64,
        #[arg(long)]
        n_max: u32,
        /// Worker threads (default: all cores; CARMICHAEL_WORKERS overrides).
        #[arg(long)]
        workers: Option<usize>,
        /// Findings file (JSONL). Stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checkpoint file for crash-safe progress (requires --out).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Resume from the checkpoint if it exists and matches.
        #[arg(long)]
        resume: bool,
        /// Small primes used by the congruence pre-filter.
        #[arg(long, default_value_t = 25)]
        sieve_primes: usize,
        /// Attach per-factor Korselt evidence to findings.
        #[arg(long)]
        certificates: bool,
        /// Attach certification wall time to findings (nondeterministic;
        /// breaks byte-identical reproducibility).
        #[arg(long)]
        timings: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Check { k, n } => {
            let target = SequenceTarget::new(k, n).map_err(|e| anyhow!("{e}"))?;
            print_certificate(&target)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Factor { k, n } => {
            let target = SequenceTarget::new(k, n).map_err(|e| anyhow!("{e}"))?;
            let out = special_factorize(&target).map_err(|e| anyhow!("{e}"))?;
            println!("target: {} = {}", target, target.value());
            for (f, mult) in &out.factors {
                println!(
                    "  p={} = {}*2^{}+1  multiplicity={}  proven={}",
                    f.p, f.d, f.m, mult, f.proven
                );
            }
            println!("cofactor: {}", out.cofactor);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sieve { k, primes } => {
            if k % 2 == 0 {
                bail!("k must be odd, got {k}");
            }
            let mut classes: Vec<CongruenceClass> = Vec::new();
            for p in primes {
                let class = residues_for_prime(p, k).map_err(|e| anyhow!("{e}"))?;
                println!("{class}");
                classes.push(class);
            }
            match compatible(&classes).map_err(|e| anyhow!("{e}"))? {
                Some(w) => println!("system: n ≡ {} (mod {})", w.residue, w.modulus),
                None => println!("system: unsatisfiable"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { k, precision } => {
            let report =
                bound_report_with_precision(k, precision).map_err(|e| anyhow!("{e}"))?;
            report.check_identities().map_err(|e| anyhow!("{e}"))?;
            print!("{report}");
            println!("minimum_m_over_valid_k = {}", minimum_m_over_valid_k());
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper { json } => verify_paper(json),
        Command::Scan {
            k_min,
            k_max,
            n_max,
            workers,
            out,
            checkpoint,
            resume,
            sieve_primes,
            certificates,
            timings,
        } => {
            let config = ScanConfig {
                k_min,
                k_max,
                n_max,
                sieve_primes,
                emit_certificates: certificates,
                emit_timings: timings,
            };
            let workers = parse_workers(workers).map_err(|e| anyhow!(e))?;
            run_scan(&config, workers, out, checkpoint, resume)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_certificate(target: &SequenceTarget) -> Result<()> {
    let cert = certify(target).map_err(|e| anyhow!("{e}"))?;
    println!("target: {} = {}", target, target.value());
    match cert.verdict {
        Verdict::Carmichael => println!("verdict: carmichael"),
        Verdict::NotCarmichael(reason) => {
            println!("verdict: not carmichael ({})", reason.as_str());
        }
    }
    if !cert.factors.is_empty() {
        println!("special-form factors:");
        for f in &cert.factors {
            let class = f.class.map(|c| c.as_str()).unwrap_or("-");
            println!(
                "  p={} = {}*2^{}+1  multiplicity={}  class={}  korselt={}  proven={}",
                f.p,
                f.d,
                f.m,
                f.multiplicity,
                class,
                if f.korselt_divides { "yes" } else { "no" },
                f.proven
            );
        }
    }
    if cert.verdict == Verdict::NotCarmichael(Rejection::CofactorRemains) {
        println!("cofactor without special-form divisor: {}", cert.cofactor);
    }
    println!(
        "proven primality: {}",
        if cert.proven_primality() { "yes" } else { "no" }
    );
    if cert.verdict == Verdict::Carmichael {
        print!("{}", partition_products(&cert).map_err(|e| anyhow!("{e}"))?);
    }
    Ok(())
}

fn verify_paper(json: Option<PathBuf>) -> Result<ExitCode> {
    let report = minimal_k_report().map_err(|e| anyhow!("{e}"))?;
    for row in &report.claims.results {
        println!(
            "claim {:<28} [{:<13}] {}  ... {}",
            row.id,
            row.kind,
            row.statement,
            if row.pass { "pass" } else { "FAIL" }
        );
        if !row.pass {
            println!("    {}", row.detail);
        }
    }
    if report.claims.missing() > 0 {
        println!("claims missing from table: {}", report.claims.missing());
    }
    println!(
        "small scan (odd k <= 25, n <= 256): {} hits  ... {}",
        report.small_scan_hits.len(),
        if report.small_scan_hits.is_empty() { "pass" } else { "FAIL" }
    );
    println!(
        "restricted product list: {} entries verified, exclusion justified  ... {}",
        report.wright.entries.len(),
        if report.wright.pass { "pass" } else { "FAIL" }
    );
    println!(
        "first member 27*2^6+1 certified  ... {}",
        if report.first_member_certified { "pass" } else { "FAIL" }
    );
    println!("analytic steps beyond finite checking:");
    for step in &report.analytic_steps {
        println!("  - {step}");
    }
    println!("overall: {}", if report.pass { "PASS" } else { "FAIL" });

    if let Some(path) = json {
        let doc = machine_report(&report);
        checkpoint::write_atomic(&path, serde_json::to_string_pretty(&doc)?.as_bytes())?;
        eprintln!("wrote {}", path.display());
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn machine_report(report: &carmichael::claims::MinimalKReport) -> serde_json::Value {
    serde_json::json!({
        "pass": report.pass,
        "small_scan_hits": report.small_scan_hits,
        "first_member_certified": report.first_member_certified,
        "claims": report.claims.results.iter().map(|r| serde_json::json!({
            "id": r.id,
            "kind": r.kind,
            "statement": r.statement,
            "pass": r.pass,
            "detail": r.detail,
        })).collect::<Vec<_>>(),
        "restricted_list": {
            "pass": report.wright.pass,
            "entries": report.wright.entries.iter().map(|e| serde_json::json!({
                "factors": e.factors,
                "value": e.value.to_string(),
                "is_carmichael": e.is_carmichael,
                "odd_part_of_pred": e.odd_part_of_pred.to_string(),
                "matches_prime_k_form": e.matches_prime_k_form,
            })).collect::<Vec<_>>(),
            "excluded_is_carmichael": report.wright.excluded_is_carmichael,
            "excluded_fermat_factor": report.wright.excluded_fermat_factor,
            "excluded_fermat_exceeds_23_sq": report.wright.excluded_fermat_exceeds_23_sq,
        },
        "analytic_steps": report.analytic_steps,
    })
}

enum Sink {
    Stdout(io::Stdout),
    File(BufWriter<File>),
}

impl Sink {
    fn write_finding(&mut self, finding: &Finding) -> Result<()> {
        match self {
            Sink::Stdout(out) => write_jsonl(&mut out.lock(), finding),
            Sink::File(w) => write_jsonl(w, finding),
        }
    }

    fn flush(&mut self) -> Result<()> {
        match self {
            Sink::Stdout(out) => out.lock().flush()?,
            Sink::File(w) => w.flush()?,
        }
        Ok(())
    }
}

fn run_scan(
    config: &ScanConfig,
    workers: usize,
    out: Option<PathBuf>,
    checkpoint_path: Option<PathBuf>,
    resume: bool,
) -> Result<()> {
    config.validate().map_err(|e| anyhow!(e))?;
    if checkpoint_path.is_some() && out.is_none() {
        bail!("--checkpoint requires --out so resumed runs can deduplicate findings");
    }

    // resolve the resume point before touching the output file
    let mut start_after: Option<u64> = None;
    if let (Some(cp_path), true) = (&checkpoint_path, resume) {
        if let Some(cp) = checkpoint::load(cp_path)? {
            checkpoint::validate(&cp, config)?;
            start_after = Some(cp.k_completed_through);
            eprintln!("resuming after k = {}", cp.k_completed_through);
        } else {
            eprintln!("no checkpoint at {}; starting fresh", cp_path.display());
        }
    }

    let mut sink = match &out {
        None => Sink::Stdout(io::stdout()),
        Some(path) => {
            if let Some(done_through) = start_after {
                // drop any findings past the checkpoint (written by an
                // interrupted block) so nothing is emitted twice
                let kept: Vec<Finding> = if path.exists() {
                    let mut reader = BufReader::new(
                        File::open(path).with_context(|| format!("opening {}", path.display()))?,
                    );
                    read_jsonl(&mut reader)?
                        .into_iter()
                        .filter(|f| f.k <= done_through)
                        .collect()
                } else {
                    Vec::new()
                };
                let mut buf = Vec::new();
                for f in &kept {
                    write_jsonl(&mut buf, f)?;
                }
                checkpoint::write_atomic(path, &buf)?;
                let file = OpenOptions::new().append(true).open(path)?;
                Sink::File(BufWriter::new(file))
            } else {
                Sink::File(BufWriter::new(
                    File::create(path).with_context(|| format!("creating {}", path.display()))?,
                ))
            }
        }
    };

    let stats = scan::run(config, workers, start_after, |k_done, findings| {
        for finding in &findings {
            sink.write_finding(finding)?;
        }
        sink.flush()?;
        if let Some(cp_path) = &checkpoint_path {
            checkpoint::save(cp_path, &Checkpoint::new(config, k_done))?;
        }
        Ok(())
    })?;

    eprintln!(
        "scan complete: {} k values, {} certifications, {} exponents pruned, {} findings",
        stats.k_scanned, stats.n_certified, stats.n_pruned, stats.findings
    );
    Ok(())
}
