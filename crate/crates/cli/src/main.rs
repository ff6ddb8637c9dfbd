//! `ekr`: parameters, single trials, sweeps and verification suites for
//! intersecting families in random k-uniform hypergraphs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ekr_core::indep::DEFAULT_BUDGET;
use ekr_core::kneser::kneser_params;
use ekr_core::regimes::{classify_and_predict, thresholds, RegimeOptions};
use ekr_core::suites::{run_suite, Suite};
use ekr_core::trial::{run_trial, summarize, summary_table, SweepConfig, TrialOptions, TrialRecord, CSV_HEADER};
use ekr_core::Error;

#[derive(Parser)]
#[command(name = "ekr", version, about = "Erdős–Ko–Rado for random hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact Kneser parameters and regime thresholds.
    Params {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        regime: RegimeArgs,
    },
    /// Run one trial and print it as a CSV row.
    Trial {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        regime: RegimeArgs,
        /// Record wall-clock runtime (rows stop being reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a JSON-configured sweep; CSV to --out (or stdout), summary table alongside.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite: hoffman, supersat, containers, ekr, chernoff or all.
    Verify {
        suite: String,
    },
}

#[derive(Args)]
struct RegimeArgs {
    #[arg(long, default_value_t = RegimeOptions::default().margin)]
    margin: f64,
    #[arg(long, default_value_t = RegimeOptions::default().epsilon)]
    epsilon: f64,
    #[arg(long = "bigC", default_value_t = RegimeOptions::default().c)]
    big_c: f64,
}

impl RegimeArgs {
    fn options(&self) -> RegimeOptions {
        RegimeOptions { epsilon: self.epsilon, c: self.big_c, margin: self.margin }
    }
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
    Runtime(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Parse { .. } => Failure::Usage(e.into()),
            other => Failure::Runtime(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Params { n, k, regime } => params(n, k, &regime.options()),
        Command::Trial { n, k, p, seed, budget, regime, timing, out } => {
            let opts = TrialOptions { budget, regime: regime.options(), timing };
            let rec = run_trial(n, k, p, seed, &opts)?;
            emit(out.as_deref(), &csv(std::slice::from_ref(&rec)))
        }
        Command::Sweep { config, workers, out } => sweep(&config, workers, out.as_deref()),
        Command::Verify { suite } => verify(&suite),
    }
}

fn params(n: u32, k: u32, opts: &RegimeOptions) -> Result<(), Failure> {
    opts.validate()?;
    let kp = kneser_params(n, k)?;
    let th = thresholds(n, k, opts.epsilon, opts.c)?;
    println!("K({n},{k})");
    println!(
        "N={} D={} lambda_min={} edges={} star={}",
        kp.vertices,
        kp.degree,
        kp.lambda_min,
        kp.edge_count,
        kp.star_size()
    );
    println!("p1={:.6e} p2={:.6e} p3={:.6e} p4={:.6e}", th.p1, th.p2, th.p3, th.p4);
    let at_one = classify_and_predict(n, k, 1.0, opts)?;
    println!("regime at p=1: {} predicted={}", at_one.regime, at_one.predicted_size);
    Ok(())
}

fn csv(records: &[TrialRecord]) -> String {
    let mut s = String::with_capacity(64 * (records.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.to_csv_row());
        s.push('\n');
    }
    s
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Runtime),
        None => io::stdout().write_all(text.as_bytes()).context("writing stdout").map_err(Failure::Runtime),
    }
}

fn sweep(config: &Path, workers: usize, out: Option<&Path>) -> Result<(), Failure> {
    if workers == 0 {
        return Err(Failure::Usage(anyhow::anyhow!("--workers must be at least 1")));
    }
    let text = fs::read_to_string(config)
        .with_context(|| format!("reading {}", config.display()))
        .map_err(Failure::Usage)?;
    let cfg = SweepConfig::from_json(&text).map_err(|e| Failure::Usage(anyhow::Error::new(e).context(config.display().to_string())))?;
    let opts = cfg.trial_options();
    let jobs = cfg.jobs();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("starting worker pool")
        .map_err(Failure::Runtime)?;
    let mut slots: Vec<Option<ekr_core::Result<TrialRecord>>> = vec![None; jobs.len()];
    pool.install(|| {
        slots.par_iter_mut().zip(jobs.par_iter()).for_each(|(slot, job)| {
            *slot = Some(run_trial(cfg.n, cfg.k, job.p, job.seed, &opts));
        });
    });
    let records = slots
        .into_iter()
        .map(|s| s.expect("every slot is filled"))
        .collect::<ekr_core::Result<Vec<_>>>()?;
    let table = summary_table(&summarize(&records));
    emit(out, &csv(&records))?;
    if out.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    Ok(())
}

fn verify(name: &str) -> Result<(), Failure> {
    let suites: Vec<Suite> = if name == "all" { Suite::ALL.to_vec() } else { vec![name.parse()?] };
    let mut failed = Vec::new();
    for suite in suites {
        let report = run_suite(suite)?;
        print!("{report}");
        if !report.passed() {
            failed.extend(report.failures().map(|c| format!("[{suite}] {}: {}", c.name, c.detail)));
        }
    }
    match failed.first() {
        None => Ok(()),
        Some(first) => Err(Failure::Verification(format!("{} check(s) failed; first: {first}", failed.len()))),
    }
}
