//! `hamflow`: run and verify generalized Hamiltonian scenarios described in
//! JSON.
//!
//! Exit status: 0 when every check passes, 2 when any check fails, 1 on a
//! configuration, domain or I/O error.

pub mod builtins;
pub mod checks;
pub mod error;
pub mod output;
pub mod report;
pub mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::checks::{simulate, Check};
use crate::error::CliError;
use crate::report::{CheckRecord, Report, Status};
use crate::scenario::{Model, Scenario};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_CHECK_FAILED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "hamflow", version, about = "Integrate and verify generalized Hamiltonian scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a scenario, run its checks, and write the trajectory CSV and report JSON.
    Run {
        /// Scenario JSON file or built-in scenario name.
        config: String,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Checks evaluated concurrently.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
    },
    /// Run only the pointwise checks and print the report JSON.
    Verify {
        /// Scenario JSON file or built-in scenario name.
        config: String,
    },
    /// List the built-in scenarios.
    List,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    let outcome = match cli.command {
        Command::Run { config, out, jobs } => run(&config, &out, jobs as usize),
        Command::Verify { config } => verify(&config),
        Command::List => {
            list();
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("hamflow: {e}");
            EXIT_ERROR
        }
    }
}

fn list() {
    let width = builtins::BUILTINS.iter().map(|b| b.name.len()).max().unwrap_or(0);
    for b in &builtins::BUILTINS {
        println!("{:width$}  {}", b.name, b.summary);
    }
}

/// Reads a scenario from a file, falling back to a built-in of that name.
pub fn load(config: &str) -> Result<Model, CliError> {
    let path = Path::new(config);
    let text = if path.exists() {
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?
    } else if let Some(b) = builtins::find(config) {
        b.source.to_string()
    } else {
        return Err(CliError::Config(format!("`{config}` is neither a readable file nor a built-in scenario")));
    };
    Scenario::from_json(&text)?.compile()
}

/// Evaluates `checks` on a pool of `jobs` threads, keeping request order.
fn evaluate(model: &Model, trajectory: Option<&hamflow_core::Trajectory64>, jobs: usize) -> Result<Vec<CheckRecord>, CliError> {
    let one = |check: &Check| -> Result<CheckRecord, CliError> {
        let tolerance = model.tolerance(*check);
        if trajectory.is_none() && check.needs_integration() {
            return Ok(CheckRecord::skipped(check.name(), tolerance));
        }
        Ok(CheckRecord::judged(check.name(), check.measure(model, trajectory)?, tolerance))
    };
    if jobs <= 1 {
        return model.checks.iter().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    pool.install(|| model.checks.par_iter().map(one).collect())
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn file_stem(name: &str) -> String {
    let stem: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    if stem.is_empty() {
        "scenario".into()
    } else {
        stem
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn summarize(report: &Report) {
    let mut err = std::io::stderr().lock();
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let measured = c.measured.map_or_else(|| "-".to_string(), |m| format!("{m:.3e}"));
        let _ = writeln!(err, "{status} {} measured={measured} tolerance={:e}", c.name, c.tolerance);
    }
}

/// `hamflow run`: returns whether every check passed.
pub fn run(config: &str, out: &Path, jobs: usize) -> Result<bool, CliError> {
    let model = load(config)?;
    let trajectory = simulate(&model)?;
    std::fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.to_path_buf(), source })?;

    let stem = file_stem(&model.name);
    let csv_name = format!("{stem}.csv");
    let hamiltonian = model.normal_form().map(|nf| &nf.hamiltonian);
    write(&out.join(&csv_name), &output::trajectory_csv(&trajectory, hamiltonian)?)?;

    let report = Report {
        scenario: model.name.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: model.seed,
        trajectory: Some(csv_name),
        checks: evaluate(&model, Some(&trajectory), jobs)?,
        timestamp: timestamp(),
    };
    write(&out.join(format!("{stem}.report.json")), &report.to_json())?;
    summarize(&report);
    Ok(report.all_passed())
}

/// `hamflow verify`: prints the report to stdout; integration checks are
/// listed as skipped.
pub fn verify(config: &str) -> Result<bool, CliError> {
    let model = load(config)?;
    let report = Report {
        scenario: model.name.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: model.seed,
        trajectory: None,
        checks: evaluate(&model, None, 1)?,
        timestamp: timestamp(),
    };
    print!("{}", report.to_json());
    summarize(&report);
    Ok(report.all_passed())
}
