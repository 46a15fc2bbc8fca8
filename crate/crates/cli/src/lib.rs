//! Batch front end for `degenheat-core`: reads problem-spec files, runs the
//! coefficient checks, grid solves, verification and tolerance sweeps, and
//! writes CSV or JSON reports.

pub mod error;
pub mod report;
pub mod run;
pub mod spec_file;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use degenheat_core::solver::{DuhamelForm, GridSpec};

pub use error::CliError;
pub use report::{Format, Table};
pub use run::{run, Command, RunConfig, RunOutcome};
pub use spec_file::{parse_spec, parse_spec_str, render_spec, SpecFile};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "DEGENHEAT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "degenheat", version, about = "Kernel solver for p(t) u_t = u_xx + f with complex p")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Problem-spec file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "degenheat-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Smallest admissible Re omega.
    #[arg(long = "rho-min")]
    pub rho_min: Option<f64>,
    #[arg(long = "duhamel-form", value_parser = parse_form)]
    pub duhamel_form: Option<DuhamelForm>,
    /// Relative width of the near-diagonal Duhamel slice.
    #[arg(long = "eps-split")]
    pub eps_split: Option<f64>,
    /// `T0:T1:NT,X0:X1:NX`
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
}

fn parse_form(s: &str) -> Result<DuhamelForm, String> {
    DuhamelForm::parse(s).ok_or_else(|| format!("`{s}` is not paper|corrected"))
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    spec_file::parse_grid_override(s).map_err(|e| e.to_string())
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        RunConfig {
            command: c.command,
            spec: c.spec,
            out: c.out,
            format: c.format,
            grid: c.grid,
            tol: c.tol,
            rho_min: c.rho_min,
            eps_split: c.eps_split,
            duhamel_form: c.duhamel_form,
        }
    }
}

fn thread_cap(value: Option<String>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

fn run_capped(config: &RunConfig, threads: Option<usize>) -> Result<RunOutcome, CliError> {
    match threads {
        None => run(config),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| run(config)),
    }
}

/// Runs the CLI on `args` and returns the process exit code. Errors are
/// reported as a single JSON line on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return error::EXIT_PASS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").to_string();
            eprintln!("{}", CliError::Usage(first).record());
            return error::EXIT_INPUT;
        }
    };
    let config = RunConfig::from(cli);
    let result = thread_cap(std::env::var(THREADS_ENV).ok()).and_then(|n| run_capped(&config, n));
    match result {
        Ok(outcome) => {
            println!(
                "{} {}: {} file(s) in {}",
                config.command.name(),
                if outcome.passed { "pass" } else { "fail" },
                outcome.artifacts.len(),
                config.out.display()
            );
            if outcome.passed {
                error::EXIT_PASS
            } else {
                error::EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
