//! Command-line front end: `qfilter <solve|oracle-check|simulate|sweep|embed>`.
//!
//! Exit codes: 0 on success, 1 when an oracle check exceeds its tolerance,
//! 2 on parse or validation errors. Results go to stdout or `--out`;
//! diagnostics go to stderr. The environment variable `QFILTER_SEED`
//! overrides `--seed` when set.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

use crate::ensemble::{Ensemble, RawState, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::io;
use crate::oracle;
use crate::sim::{simulate, SimConfig};
use crate::solver::{solve, DetectionPair};
use crate::{embed_raw, families};

/// Loads and validates an ensemble file, embedding raw states when present.
pub fn load_ensemble(path: &std::path::Path) -> Result<Ensemble> {
    io::load_ensemble(path, DEFAULT_RANK_TOL)
}

#[derive(Parser)]
#[command(
    name = "qfilter",
    about = "Minimum-error discrimination between two subsets of pure quantum states in 2D",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EnsembleArg {
    /// Path to the ensemble JSON file.
    #[arg(long)]
    ensemble: PathBuf,

    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the optimal measurement and its error probability.
    Solve {
        #[command(flatten)]
        io: EnsembleArg,
    },
    /// Verify the closed form against the grid and Helstrom oracles.
    OracleCheck {
        #[command(flatten)]
        io: EnsembleArg,

        /// Grid resolution per axis (at least 8).
        #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(8..))]
        steps: u64,

        /// Maximum tolerated oracle gap; larger gaps exit with code 1.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Monte Carlo estimate of the error rate of a measurement.
    Simulate {
        #[command(flatten)]
        io: EnsembleArg,

        /// Number of preparation-measurement trials (at least 1).
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,

        /// RNG seed (overridden by QFILTER_SEED when set).
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Detection mixing angle; defaults to the solver optimum.
        #[arg(long, requires = "chi")]
        phi: Option<f64>,

        /// Detection relative phase; defaults to the solver optimum.
        #[arg(long, requires = "phi")]
        chi: Option<f64>,
    },
    /// Sweep the symmetric three-state family and compare error probabilities.
    Sweep {
        #[arg(long)]
        beta_min: f64,

        #[arg(long)]
        beta_max: f64,

        /// Number of grid points.
        #[arg(long)]
        points: usize,

        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-express an ensemble in canonical 2D coordinates.
    Embed {
        #[command(flatten)]
        io: EnsembleArg,

        /// Rank tolerance for the 2D-span check.
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn seed_override(seed: u64) -> Result<u64> {
    match std::env::var("QFILTER_SEED") {
        Ok(text) => text.parse::<u64>().map_err(|_| {
            Error::Schema(format!(
                "QFILTER_SEED is not a 64-bit unsigned integer: {text:?}"
            ))
        }),
        Err(_) => Ok(seed),
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve { io: paths } => {
            let ensemble = load_ensemble(&paths.ensemble)?;
            let solution = solve(&ensemble)?;
            emit(&paths.out, &io::filter_solution_json(&solution))?;
            Ok(0)
        }
        Command::OracleCheck {
            io: paths,
            steps,
            tol,
        } => {
            let ensemble = load_ensemble(&paths.ensemble)?;
            let report = oracle::cross_check(&ensemble, steps as usize)?;
            emit(&paths.out, &io::oracle_report_json(&report))?;
            if report.max_abs_gap < tol {
                Ok(0)
            } else {
                eprintln!(
                    "oracle gap {:e} exceeds tolerance {:e}",
                    report.max_abs_gap, tol
                );
                Ok(1)
            }
        }
        Command::Simulate {
            io: paths,
            trials,
            seed,
            phi,
            chi,
        } => {
            let ensemble = load_ensemble(&paths.ensemble)?;
            let config = SimConfig {
                trials,
                seed: seed_override(seed)?,
            };
            let result = match (phi, chi) {
                (Some(phi), Some(chi)) => {
                    let detection = DetectionPair::from_angles(&ensemble, phi, chi);
                    simulate(&ensemble, &detection, &config)
                }
                _ => {
                    let solution = solve(&ensemble)?;
                    simulate(&ensemble, solution.detection(), &config)
                }
            };
            emit(&paths.out, &io::sim_result_json(&result))?;
            Ok(0)
        }
        Command::Sweep {
            beta_min,
            beta_max,
            points,
            out,
        } => {
            let sweep = families::ratio_sweep(beta_min, beta_max, points)?;
            emit(&out, &io::sweep_csv(&sweep))?;
            Ok(0)
        }
        Command::Embed { io: paths, tol } => {
            let ensemble = io::load_ensemble(&paths.ensemble, tol)?;
            // Re-run the embedding on the (already 2D) states so that any
            // input basis is reduced to the same canonical coordinates.
            let raw: Vec<RawState> = ensemble.states().iter().map(|&s| s.into()).collect();
            let embedded = embed_raw(&raw, tol)?;
            let canonical =
                Ensemble::new(embedded, ensemble.priors().to_vec(), ensemble.subset_size())?;
            emit(&paths.out, &io::ensemble_json(&canonical))?;
            Ok(0)
        }
    }
}

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
