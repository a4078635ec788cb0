//! Command-line driver.
//!
//! Exit codes: 0 success, 1 validation/usage error, 2 runtime abort
//! (stability refusal or detected instability), 3 non-convergence (a
//! velocity scan where nothing converged, or a degenerate growth fit).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use phasefield::analysis::{fit_sqrt_growth, neumann_beta, FitOutcome};
use phasefield::config::{parse_config, ModelParams};
use phasefield::models::{moving_frame_relax, MovingFrameParams};
use phasefield::output::read_timeseries_csv;
use phasefield::run::{artifact_paths, run_simulation};
use phasefield::{Error, Result};

#[derive(Parser)]
#[command(
    name = "phasefield",
    version,
    about = "Explicit finite-difference phase-field solvers with CSV diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the simulation described by a config file
    Run {
        /// Path to a line-oriented `key = value` config file
        config: PathBuf,
    },
    /// Fit s(t) = beta*sqrt(t - t0) to the interface_pos column of a
    /// time-series CSV
    Fit {
        /// Path to a CSV written by `run`
        timeseries: PathBuf,
    },
    /// Print reference values from closed-form solutions
    Oracle {
        #[command(subcommand)]
        oracle: OracleCommand,
    },
    /// Relax the steady traveling-wave problem across a grid of frame
    /// velocities
    ScanVelocity {
        /// Path to a moving_frame_1d config file (its velocity is replaced
        /// by each scan point; nsteps caps the iterations, params.tol is the
        /// convergence tolerance)
        config: PathBuf,
        /// Lowest velocity in the scan
        #[arg(long, allow_negative_numbers = true)]
        vmin: f64,
        /// Highest velocity in the scan
        #[arg(long, allow_negative_numbers = true)]
        vmax: f64,
        /// Number of evenly spaced velocities
        #[arg(long)]
        nv: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Similarity-growth coefficient beta of the classical one-phase
    /// melting problem, from its error-function relation
    Neumann {
        /// Stefan number (dimensionless superheat), > 0
        #[arg(long)]
        stefan: f64,
    },
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn cmd_run(config: &Path) -> Result<i32> {
    let cfg = parse_config(&read_text(config)?)?;
    let records = run_simulation(&cfg)?;
    let last = records.last().expect("a run always produces records");
    println!(
        "model = {}  grid = {}x{}  steps = {}  records = {}",
        cfg.model.name(),
        cfg.grid.nx(),
        cfg.grid.ny(),
        cfg.nsteps,
        records.len()
    );
    for path in artifact_paths(&cfg) {
        println!("wrote {}", path.display());
    }
    println!(
        "final: step {}  time {:.6e}  volume {:.6e}",
        last.step, last.time, last.volume
    );
    Ok(0)
}

fn cmd_fit(timeseries: &Path) -> Result<i32> {
    let records = read_timeseries_csv(timeseries)?;
    let mut times = Vec::new();
    let mut positions = Vec::new();
    for r in &records {
        if let Some(p) = r.interface_pos {
            times.push(r.time);
            positions.push(p);
        }
    }
    match fit_sqrt_growth(&times, &positions)? {
        FitOutcome::Fit(fit) => {
            println!("beta = {:.12e}", fit.beta);
            println!("t0 = {:.12e}", fit.t0);
            println!("r_squared = {:.12e}", fit.r_squared);
            Ok(0)
        }
        FitOutcome::Degenerate { slope, r_squared } => {
            eprintln!(
                "fit is degenerate: non-positive growth slope {slope:.6e} \
                 (r_squared = {r_squared:.6e}); no square-root growth law fits"
            );
            Ok(3)
        }
    }
}

fn cmd_scan_velocity(config: &Path, vmin: f64, vmax: f64, nv: usize) -> Result<i32> {
    let cfg = parse_config(&read_text(config)?)?;
    let ModelParams::MovingFrame(base) = cfg.params else {
        return Err(Error::Usage(format!(
            "scan-velocity needs a moving_frame_1d config, got model = {}",
            cfg.model.name()
        )));
    };
    if nv == 0 {
        return Err(Error::Usage("--nv must be at least 1".into()));
    }
    if !vmin.is_finite() || !vmax.is_finite() || vmin > vmax {
        return Err(Error::Usage(format!(
            "invalid velocity range [{vmin}, {vmax}]"
        )));
    }
    let mut any_converged = false;
    for k in 0..nv {
        let v = if nv == 1 {
            vmin
        } else {
            vmin + (vmax - vmin) * k as f64 / (nv - 1) as f64
        };
        let p = MovingFrameParams { velocity: v, ..base };
        let out = moving_frame_relax(&p, cfg.grid, cfg.tol, cfg.nsteps)?;
        any_converged |= out.converged;
        println!(
            "v = {v:+.6e}  residual = {:.6e}  iterations = {}  converged = {}",
            out.residual, out.iterations, out.converged
        );
    }
    if any_converged {
        Ok(0)
    } else {
        eprintln!(
            "no velocity in [{vmin:.6e}, {vmax:.6e}] reached residual {:.3e} \
             within {} iterations",
            cfg.tol, cfg.nsteps
        );
        Ok(3)
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Fit { timeseries } => cmd_fit(&timeseries),
        Command::Oracle { oracle } => match oracle {
            OracleCommand::Neumann { stefan } => {
                let beta = neumann_beta(stefan)?;
                println!("beta = {:.12e}", beta);
                Ok(0)
            }
        },
        Command::ScanVelocity { config, vmin, vmax, nv } => {
            cmd_scan_velocity(&config, vmin, vmax, nv)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            // --help and --version are not usage errors.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let _ = e.print();
            std::process::exit(1);
        }
    };
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
