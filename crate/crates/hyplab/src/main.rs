use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyplab::{emit_csv_path, load_spec, run_convergence, run_nuij, RunConfig};

#[derive(Parser)]
#[command(
    name = "hyplab",
    about = "Convergence experiments for families of real-rooted polynomials",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the convergence experiment described by a family file.
    Run {
        /// family definition file (flat key = value format)
        #[arg(long)]
        spec: PathBuf,
        /// output CSV path
        #[arg(long)]
        out: PathBuf,
        /// override the grid cell count
        #[arg(long)]
        grid: Option<usize>,
        /// seed for the Hölder pair subsample
        #[arg(long)]
        seed: Option<u64>,
        /// worker threads over the sequence indices (output is identical
        /// for any value)
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Apply the root-separation operator to the limit family for each s.
    Nuij {
        #[arg(long)]
        spec: PathBuf,
        /// comma-separated perturbation sizes, e.g. 0.1,0.01,0.001
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the built-in invariant corpus; exit code 0/1.
    Check,
}

fn write_result(
    result: &hyplab::ExperimentResult,
    out: &PathBuf,
) -> Result<(), Box<dyn std::error::Error>> {
    emit_csv_path(result, out)?;
    Ok(())
}

fn run() -> Result<bool, Box<dyn std::error::Error>> {
    match Cli::parse().command {
        Command::Run {
            spec,
            out,
            grid,
            seed,
            parallel,
        } => {
            let family = load_spec(&spec)?;
            let cfg = RunConfig {
                grid,
                seed: seed.unwrap_or(hypcore::curve::DEFAULT_SUBSAMPLE_SEED),
                parallel,
            };
            let result = run_convergence(&family, &cfg)?;
            write_result(&result, &out)?;
            eprintln!("wrote {} rows to {}", result.rows.len(), out.display());
            Ok(true)
        }
        Command::Nuij {
            spec,
            s,
            out,
            grid,
            seed,
        } => {
            let family = load_spec(&spec)?;
            let cfg = RunConfig {
                grid,
                seed: seed.unwrap_or(hypcore::curve::DEFAULT_SUBSAMPLE_SEED),
                parallel: 1,
            };
            let result = run_nuij(&family, &s, &cfg)?;
            write_result(&result, &out)?;
            eprintln!("wrote {} rows to {}", result.rows.len(), out.display());
            Ok(true)
        }
        Command::Check => Ok(hyplab::check::run_check()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
