//! Experiment driver: seeds fields from a [`RunConfig`], advances the
//! selected model, collects per-record diagnostics, and writes the CSV
//! artifacts.
//!
//! Per model, the time series records:
//! - volume of the tracked phase (the −1 phase, or the φ = 1 phase on the
//!   [0, 1] convention),
//! - interface position — the mid-level crossing on 1D grids, the mean
//!   eight-ray radius on 2D grids (absent when detection fails),
//! - 10–90% interface width — measured directly on 1D grids, along the
//!   center row from the domain center rightward on 2D grids,
//! - total enthalpy for the heat-coupled conserving model (absent
//!   otherwise).
//!
//! Records are taken at step 0, every `output_every` steps, and at the final
//! step. Snapshots of every field are written at step 0 and the final step
//! only; the time series carries everything in between. A run aborts before
//! the first step if an explicit `dt` exceeds the stability bound, and
//! mid-run (with the offending step index) if any field stops being finite.

use std::path::{Path, PathBuf};

use crate::analysis::{
    interface_position_1d, interface_width, mean_radius, phase_volume, total_enthalpy,
    PhaseConvention, TimeSeriesRecord,
};
use crate::config::{DtSpec, Model, ModelParams, RunConfig, SeedSpec};
use crate::error::{Error, Result};
use crate::grid::{seed_disk, seed_front_1d, Field, GridSpec};
use crate::models::{
    allen_cahn_step, apply_frame_boundary, caginalp_step, dissolution_step, karma_rappel_step,
    moving_frame_residual,
};
use crate::output::{write_snapshot, write_timeseries_csv};
use crate::stencils::cfl_max_dt;

/// Diffusivity of the stiffest operator in the configured model; sets the
/// CFL bound (matching what each stepper enforces internally).
fn stiffest_diffusivity(params: &ModelParams) -> f64 {
    match params {
        ModelParams::Caginalp(_) => 1.0,
        ModelParams::AllenCahn(p) => p.mobility,
        ModelParams::KarmaRappel(p) => p.max_diffusivity(),
        ModelParams::MovingFrame(p) => p.base.max_diffusivity(),
        ModelParams::Dissolution(p) => (1.0 / p.peclet).max(1.0),
    }
}

/// Resolves `dt = auto` to half the CFL bound. An explicit dt above the
/// bound is refused here, before any stepping or file output.
pub fn resolve_dt(cfg: &RunConfig) -> Result<f64> {
    let bound = cfl_max_dt(stiffest_diffusivity(&cfg.params), &cfg.grid)?;
    match cfg.dt {
        DtSpec::Auto => Ok(0.5 * bound),
        DtSpec::Fixed(dt) => {
            if dt > bound {
                Err(Error::Stability { dt, dt_max: bound })
            } else {
                Ok(dt)
            }
        }
    }
}

fn seed_phi(cfg: &RunConfig) -> Result<Field> {
    let spec = cfg.grid;
    let mut phi = Field::new(spec, 0.0);
    match cfg.seed {
        SeedSpec::Front1d { x0, left, right, width } => {
            seed_front_1d(&mut phi, x0, left, right, width)?;
        }
        SeedSpec::Disk { cx, cy, radius, inside, outside, smooth_width } => {
            let fits_x = cx - radius >= 0.0 && cx + radius <= spec.lx();
            let fits_y = spec.is_1d() || (cy - radius >= 0.0 && cy + radius <= spec.ly());
            if !fits_x || !fits_y {
                eprintln!(
                    "warning: seed disk (center ({cx}, {cy}), radius {radius}) extends \
                     beyond the {} x {} domain",
                    spec.lx(),
                    spec.ly()
                );
            }
            seed_disk(&mut phi, cx, cy, radius, inside, outside, smooth_width)?;
        }
    }
    phi.apply_boundary(cfg.bc);
    Ok(phi)
}

/// Level conventions for the diagnostics of one model family.
struct Diagnostics {
    convention: PhaseConvention,
    level: f64,
    lo: f64,
    hi: f64,
}

fn diagnostics_for(model: Model) -> Diagnostics {
    match model {
        Model::AllenCahn => Diagnostics {
            convention: PhaseConvention::UnitInterval,
            level: 0.5,
            lo: 0.1,
            hi: 0.9,
        },
        _ => Diagnostics {
            convention: PhaseConvention::SolidMinusOne,
            level: 0.0,
            lo: -0.8,
            hi: 0.8,
        },
    }
}

/// 10–90% front width along the center row, from the domain center to the
/// +x wall, in physical units — the 1D width measurement applied to a radial
/// half-profile.
fn center_row_width(phi: &Field, lo: f64, hi: f64) -> Option<f64> {
    let spec = phi.spec();
    let (nx, ny) = (spec.nx(), spec.ny());
    let half_n = nx - nx / 2;
    if half_n < 3 {
        return None;
    }
    let row_j = ny / 2 + 1;
    let line = GridSpec::new_1d(half_n, spec.dx()).ok()?;
    let mut row = Field::new(line, 0.0);
    for (k, i) in ((nx / 2 + 1)..=nx).enumerate() {
        row.set(k + 1, 1, phi.get(i, row_j));
    }
    interface_width(&row, lo, hi).ok()
}

fn make_record(
    cfg: &RunConfig,
    diag: &Diagnostics,
    step: u64,
    time: f64,
    phi: &Field,
    aux: Option<&Field>,
) -> TimeSeriesRecord {
    let (interface_pos, width) = if cfg.grid.is_1d() {
        (
            interface_position_1d(phi, diag.level).ok(),
            interface_width(phi, diag.lo, diag.hi).ok(),
        )
    } else {
        (
            mean_radius(phi, diag.level).ok(),
            center_row_width(phi, diag.lo, diag.hi),
        )
    };
    let enthalpy = match (&cfg.params, aux) {
        (ModelParams::Caginalp(p), Some(u)) => total_enthalpy(u, phi, p.latent_heat).ok(),
        _ => None,
    };
    TimeSeriesRecord {
        step,
        time,
        volume: phase_volume(phi, diag.convention),
        interface_pos,
        interface_width: width,
        enthalpy,
    }
}

/// Executes one configured experiment end to end: seed, step, record,
/// write. Returns the full diagnostic series (also written to
/// `<outdir>/timeseries.csv`). Identical configs produce byte-identical
/// artifacts.
pub fn run_simulation(cfg: &RunConfig) -> Result<Vec<TimeSeriesRecord>> {
    let dt = resolve_dt(cfg)?;
    let outdir = PathBuf::from(&cfg.outdir);
    let diag = diagnostics_for(cfg.model);

    let mut phi = seed_phi(cfg)?;
    // The auxiliary unknown: temperature u or concentration c, uniform at
    // the configured background value. The interface-only model has none.
    let mut aux = match cfg.model {
        Model::AllenCahn => None,
        _ => Some(Field::new(cfg.grid, cfg.background)),
    };
    let aux_name = if cfg.model == Model::Dissolution { "c" } else { "u" };
    if let (ModelParams::MovingFrame(p), Some(u)) = (&cfg.params, aux.as_mut()) {
        // The steady-frame problem carries its own boundary values.
        apply_frame_boundary(&mut phi, u, p.u_far);
    } else if let Some(u) = aux.as_mut() {
        u.apply_boundary(cfg.bc);
    }

    let mut records = vec![make_record(cfg, &diag, 0, 0.0, &phi, aux.as_ref())];
    write_snapshot(&phi, "phi", 0, &outdir)?;
    if let Some(a) = &aux {
        write_snapshot(a, aux_name, 0, &outdir)?;
    }

    for step in 1..=cfg.nsteps {
        match &cfg.params {
            ModelParams::Caginalp(p) => {
                let u = aux.as_mut().expect("heat-coupled model carries u");
                let (u_next, phi_next) = caginalp_step(u, &phi, p, dt, cfg.bc)?;
                *u = u_next;
                phi = phi_next;
            }
            ModelParams::AllenCahn(p) => {
                phi = allen_cahn_step(&phi, p, dt, cfg.bc)?;
            }
            ModelParams::KarmaRappel(p) => {
                let u = aux.as_mut().expect("heat-coupled model carries u");
                let (phi_next, u_next) = karma_rappel_step(&phi, u, p, dt, cfg.bc)?;
                phi = phi_next;
                *u = u_next;
            }
            ModelParams::MovingFrame(p) => {
                // Pseudo-time relaxation of the frame residuals, one Euler
                // step per simulation step.
                let u = aux.as_mut().expect("frame model carries u");
                apply_frame_boundary(&mut phi, u, p.u_far);
                let (r_phi, r_u) = moving_frame_residual(&phi, u, p)?;
                let nx = cfg.grid.nx();
                for i in 1..=nx {
                    phi.set(i, 1, phi.get(i, 1) + dt / p.base.tau * r_phi.get(i, 1));
                    u.set(i, 1, u.get(i, 1) + dt * r_u.get(i, 1));
                }
            }
            ModelParams::Dissolution(p) => {
                let c = aux.as_mut().expect("concentration model carries c");
                let (phi_next, c_next) = dissolution_step(&phi, c, p, dt, cfg.bc)?;
                phi = phi_next;
                *c = c_next;
            }
        }
        if !phi.all_finite() || aux.as_ref().is_some_and(|a| !a.all_finite()) {
            return Err(Error::NumericalInstability { step });
        }
        if step % cfg.output_every == 0 || step == cfg.nsteps {
            records.push(make_record(cfg, &diag, step, step as f64 * dt, &phi, aux.as_ref()));
        }
    }

    write_snapshot(&phi, "phi", cfg.nsteps, &outdir)?;
    if let Some(a) = &aux {
        write_snapshot(a, aux_name, cfg.nsteps, &outdir)?;
    }
    write_timeseries_csv(&records, &outdir.join("timeseries.csv"))?;
    Ok(records)
}

/// Convenience for callers that need the artifact paths a run produced.
pub fn artifact_paths(cfg: &RunConfig) -> Vec<PathBuf> {
    let outdir = Path::new(&cfg.outdir);
    let aux_name = if cfg.model == Model::Dissolution { "c" } else { "u" };
    let mut paths = vec![outdir.join("timeseries.csv")];
    for step in [0, cfg.nsteps] {
        paths.push(outdir.join(crate::output::snapshot_filename("phi", step)));
        if cfg.model != Model::AllenCahn {
            paths.push(outdir.join(crate::output::snapshot_filename(aux_name, step)));
        }
    }
    paths
}
