//! `pswedge`: command-line driver for the wedge solver.

mod commands;
mod config;
mod output;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pswedge::{Error, Result};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::Output;
use crate::repro::Figure;

#[derive(Parser)]
#[command(name = "pswedge", version, about = "Wedge of point scatterers: Wiener-Hopf plus iteration")]
struct Cli {
    /// JSON run configuration, or the sidecar of an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed of the held-out sample draw in the rational fit.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Proceed, with a warning, when the configuration is resonant.
    #[arg(long, global = true)]
    allow_resonant: bool,
    /// Accepted for compatibility; execution is sequential.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel samples on the unit circle.
    Kernel,
    /// Rational fit, factor roots and a check against the Cauchy factorisation.
    Factor,
    /// Coefficients of the reciprocal split factor.
    Lambda,
    /// Semi-infinite array coefficients.
    Semi,
    /// Spectral radius of the scheme over a sweep of wedge angles.
    Rho,
    /// Run the iterative scheme.
    Wedge,
    /// Field of the converged scheme on the configured grid.
    Field,
    /// Dense solve of the truncated wedge.
    Oracle,
    /// Compare two field CSV files, or the scheme with the oracle.
    Compare {
        #[arg(long, requires = "b")]
        a: Option<PathBuf>,
        #[arg(long, requires = "a")]
        b: Option<PathBuf>,
    },
    /// Regenerate the data behind a figure.
    Repro {
        #[arg(value_enum)]
        figure: Figure,
    },
}

impl Cli {
    fn run_config(&self) -> Result<RunConfig> {
        let path = self
            .config
            .as_ref()
            .ok_or_else(|| Error::Config("this subcommand needs --config".into()))?;
        let mut run = RunConfig::load(path)?;
        if let Some(seed) = self.seed {
            run.aaa.seed = seed;
        }
        Ok(run)
    }
}

fn execute(cli: &Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads != 1 {
            commands::warn(&format!("--threads {threads} ignored; execution is sequential"));
        }
    }
    let out = Output::new(&cli.out)?;
    let allow = cli.allow_resonant;
    match &cli.command {
        Command::Kernel => commands::kernel_cmd(&cli.run_config()?, &out),
        Command::Factor => commands::factor_cmd(&cli.run_config()?, &out),
        Command::Lambda => commands::lambda_cmd(&cli.run_config()?, &out),
        Command::Semi => commands::semi_cmd(&cli.run_config()?, &out, allow),
        Command::Rho => commands::rho_cmd(&cli.run_config()?, &out),
        Command::Wedge => commands::wedge_cmd(&cli.run_config()?, &out, allow),
        Command::Field => commands::field_cmd(&cli.run_config()?, &out, allow),
        Command::Oracle => commands::oracle_cmd(&cli.run_config()?, &out),
        Command::Compare { a, b } => {
            let files = a.as_deref().zip(b.as_deref());
            let run = match files {
                Some(_) => None,
                None => Some(cli.run_config()?),
            };
            commands::compare_cmd(run.as_ref(), files, &out, allow)
        }
        Command::Repro { figure } => repro::run(*figure, &out, cli.seed),
    }
}

fn exit_code(error: &Error) -> u8 {
    if error.is_numerical() {
        2
    } else {
        1
    }
}

fn details(error: &Error) -> Value {
    match error {
        Error::Resonance(report) => json!(report),
        Error::Divergence { history } => json!(history),
        Error::ApproximationFailure { attempts, defect } => json!({ "attempts": attempts, "defect": defect }),
        _ => Value::Null,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) if !error.use_stderr() => {
            let _ = error.print();
            return ExitCode::SUCCESS;
        }
        Err(error) => {
            let report = json!({
                "error": "usage",
                "message": error.render().to_string().trim_end(),
                "exit_code": 1,
                "details": Value::Null,
            });
            eprintln!("{report}");
            return ExitCode::from(1);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            let code = exit_code(&error);
            let report = json!({
                "error": error.kind(),
                "message": error.to_string(),
                "exit_code": code,
                "details": details(&error),
            });
            eprintln!("{report}");
            ExitCode::from(code)
        }
    }
}
