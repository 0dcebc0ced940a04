//! `ahlfors` — Ahlfors functions, analytic capacity and property checks
//! from the command line.
//!
//! Exit codes: 0 ok, 1 I/O, 2 bad input, 3 no convergence, 4 failed checks.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ahlfors",
    version,
    about = "Ahlfors functions and analytic capacity"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Domain description (JSON).
    #[arg(long)]
    domain: PathBuf,
    /// Base point `re,im` or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Truncation degree of the solver basis.
    #[arg(long)]
    degree: Option<usize>,
    /// Boundary samples per component.
    #[arg(long)]
    samples: Option<usize>,
    /// Grid resolution per axis (`grid` only).
    #[arg(long, default_value_t = 128)]
    resolution: usize,
    /// Target value `re,im` (`valence` only).
    #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
    value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Compute,
    Capacity,
    Valence,
    Verify,
    Grid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::Request::from_args(
        &cli.domain,
        cli.point.as_deref(),
        cli.out.clone(),
        cli.degree,
        cli.samples,
    )
    .and_then(|req| match cli.command {
        Command::Compute => commands::compute(&req),
        Command::Capacity => commands::capacity(&req),
        Command::Valence => commands::valence(&req, &cli.value),
        Command::Verify => commands::verify(&req),
        Command::Grid => commands::grid(&req, cli.resolution),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ahlfors: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
