//! Line-oriented experiment configuration.
//!
//! Format: UTF-8 text, one `key = value` pair per line, `#` starts a
//! comment, keys are dot-namespaced (`grid.nx`, `params.latent_heat`,
//! `seed.kind`). Every key must belong to the selected model's vocabulary —
//! a parameter key from a different model is an unknown-key error, as are
//! duplicate keys and missing required keys.
//!
//! Documented defaults: `bc = zero_flux`, `dt = auto` (half the CFL bound),
//! `output_every = nsteps`, `outdir = out`, `grid.ny = 1`, `grid.dy =
//! grid.dx`, model parameters with a canonical value of 1, and seed phase
//! values matching the model's phase range (−1/+1, or 1/0 on the [0, 1]
//! convention).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, GridSpec};
use crate::models::{
    AllenCahnParams, CaginalpParams, DissolutionParams, KarmaRappelParams, MovingFrameParams,
};

/// Which solver a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Caginalp,
    AllenCahn,
    KarmaRappel1d,
    MovingFrame1d,
    Dissolution,
}

impl Model {
    /// The config-file spelling of this model.
    pub fn name(self) -> &'static str {
        match self {
            Model::Caginalp => "caginalp",
            Model::AllenCahn => "allen_cahn",
            Model::KarmaRappel1d => "karma_rappel_1d",
            Model::MovingFrame1d => "moving_frame_1d",
            Model::Dissolution => "dissolution",
        }
    }
}

/// Parameter set for the selected model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    Caginalp(CaginalpParams),
    AllenCahn(AllenCahnParams),
    KarmaRappel(KarmaRappelParams),
    MovingFrame(MovingFrameParams),
    Dissolution(DissolutionParams),
}

/// Time step: an explicit value, or `auto` = half the CFL bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtSpec {
    Auto,
    Fixed(f64),
}

/// Initial-condition descriptor for the phase field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedSpec {
    /// Planar front in x: `left` for x << x0, `right` for x >> x0, tanh ramp
    /// of the given width (sharp step at width 0).
    Front1d { x0: f64, left: f64, right: f64, width: f64 },
    /// Circular inclusion of `inside` in a bath of `outside`.
    Disk {
        cx: f64,
        cy: f64,
        radius: f64,
        inside: f64,
        outside: f64,
        smooth_width: f64,
    },
}

/// A fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub grid: GridSpec,
    pub bc: BoundaryCondition,
    pub params: ModelParams,
    pub dt: DtSpec,
    pub nsteps: u64,
    pub seed: SeedSpec,
    /// Initial uniform value of the auxiliary field (`seed.u0` for the
    /// heat-coupled models, `seed.c0` for the concentration model; unused by
    /// the interface-only model).
    pub background: f64,
    /// Residual tolerance for the steady-frame relaxation (`params.tol`,
    /// steady-frame model only; defaults to 1e-3).
    pub tol: f64,
    pub output_every: u64,
    pub outdir: String,
}

fn invalid(key: &str, message: impl Into<String>) -> Error {
    Error::ConfigInvalid {
        key: key.to_string(),
        message: message.into(),
    }
}

fn require_positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be > 0, got {v}")))
    }
}

fn require_nonnegative(key: &str, v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be >= 0, got {v}")))
    }
}

fn f64_value(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| invalid(key, format!("`{raw}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("must be finite, got {raw}")))
    }
}

/// Tokenized key/value pairs; parsing consumes keys so that whatever is left
/// at the end is unknown by construction.
struct Keys {
    map: BTreeMap<String, (usize, String)>,
}

impl Keys {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    message: "empty key before `=`".to_string(),
                });
            }
            if value.is_empty() {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    message: format!("empty value for key `{key}`"),
                });
            }
            if map.insert(key.clone(), (line_no, value)).is_some() {
                return Err(Error::ConfigSyntax {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Keys { map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key).map(|(_, v)| v)
    }

    fn required(&mut self, key: &str) -> Result<String> {
        self.take(key).ok_or_else(|| Error::ConfigMissingKey {
            key: key.to_string(),
        })
    }

    fn f64_required(&mut self, key: &str) -> Result<f64> {
        let raw = self.required(key)?;
        f64_value(key, &raw)
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            Some(raw) => f64_value(key, &raw),
            None => Ok(default),
        }
    }

    fn u64_required(&mut self, key: &str) -> Result<u64> {
        let raw = self.required(key)?;
        raw.parse()
            .map_err(|_| invalid(key, format!("`{raw}` is not a non-negative integer")))
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.take(key) {
            Some(raw) => raw
                .parse()
                .map_err(|_| invalid(key, format!("`{raw}` is not a non-negative integer"))),
            None => Ok(default),
        }
    }

    /// Errors if any key was never consumed, listing them all.
    fn finish(self) -> Result<()> {
        if self.map.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.map.keys().map(|s| s.as_str()).collect();
            Err(Error::ConfigUnknownKey {
                keys: keys.join(", "),
            })
        }
    }
}

fn parse_bc(raw: &str) -> Result<BoundaryCondition> {
    match raw {
        "zero_flux" => Ok(BoundaryCondition::ZeroFluxNeumann),
        "periodic" => Ok(BoundaryCondition::Periodic),
        other => match other.strip_prefix("dirichlet:") {
            Some(v) => Ok(BoundaryCondition::Dirichlet(f64_value("bc", v.trim())?)),
            None => Err(invalid(
                "bc",
                format!("expected zero_flux, periodic, or dirichlet:<value>, got `{other}`"),
            )),
        },
    }
}

/// Parses and validates a complete run configuration.
///
/// Errors carry a line number (syntax) or the offending key name
/// (validation); unknown keys are reported all at once.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut keys = Keys::parse(text)?;

    let model_raw = keys.required("model")?;
    let model = match model_raw.as_str() {
        "caginalp" => Model::Caginalp,
        "allen_cahn" => Model::AllenCahn,
        "karma_rappel_1d" => Model::KarmaRappel1d,
        "moving_frame_1d" => Model::MovingFrame1d,
        "dissolution" => Model::Dissolution,
        other => {
            return Err(invalid(
                "model",
                format!(
                    "unknown model `{other}` (expected caginalp, allen_cahn, \
                     karma_rappel_1d, moving_frame_1d, or dissolution)"
                ),
            ))
        }
    };

    let nx = keys.u64_required("grid.nx")? as usize;
    let ny = keys.u64_or("grid.ny", 1)? as usize;
    let dx = require_positive("grid.dx", keys.f64_required("grid.dx")?)?;
    let dy = match keys.take("grid.dy") {
        Some(raw) => require_positive("grid.dy", f64_value("grid.dy", &raw)?)?,
        None => dx,
    };
    if nx < 3 {
        return Err(invalid("grid.nx", format!("needs at least 3 cells, got {nx}")));
    }
    if ny != 1 && ny < 3 {
        return Err(invalid(
            "grid.ny",
            format!("must be 1 (one-dimensional) or at least 3, got {ny}"),
        ));
    }
    if matches!(model, Model::KarmaRappel1d | Model::MovingFrame1d) && ny != 1 {
        return Err(invalid(
            "grid.ny",
            format!("model {} is one-dimensional; set grid.ny = 1", model.name()),
        ));
    }
    if model == Model::Dissolution && ny == 1 {
        return Err(invalid(
            "grid.ny",
            "model dissolution is two-dimensional; set grid.ny >= 3",
        ));
    }
    let grid = GridSpec::new(nx, ny, dx, dy)?;

    let bc = match keys.take("bc") {
        None => BoundaryCondition::ZeroFluxNeumann,
        Some(raw) => {
            if model == Model::MovingFrame1d {
                return Err(invalid(
                    "bc",
                    "the steady-frame model uses fixed frame boundaries (phase \
                     pinned to -1/+1, temperature to 0/u_far); remove this key",
                ));
            }
            parse_bc(&raw)?
        }
    };

    let mut tol = 1e-3;
    let params = match model {
        Model::Caginalp => ModelParams::Caginalp(CaginalpParams {
            latent_heat: require_positive(
                "params.latent_heat",
                keys.f64_required("params.latent_heat")?,
            )?,
        }),
        Model::AllenCahn => {
            let mobility =
                require_positive("params.mobility", keys.f64_or("params.mobility", 1.0)?)?;
            let beta = keys.f64_required("params.beta")?;
            if beta.abs() >= 0.5 {
                return Err(invalid(
                    "params.beta",
                    format!("|beta| must be < 0.5 so all potential roots stay in [0, 1], got {beta}"),
                ));
            }
            let g_const =
                require_positive("params.g_const", keys.f64_or("params.g_const", 1.0)?)?;
            ModelParams::AllenCahn(AllenCahnParams {
                mobility,
                beta,
                g_const,
            })
        }
        Model::KarmaRappel1d | Model::MovingFrame1d => {
            let base = KarmaRappelParams {
                tau: require_positive("params.tau", keys.f64_or("params.tau", 1.0)?)?,
                width: require_positive("params.width", keys.f64_or("params.width", 1.0)?)?,
                lambda: require_nonnegative("params.lambda", keys.f64_or("params.lambda", 1.0)?)?,
                diffusivity: require_positive(
                    "params.diffusivity",
                    keys.f64_or("params.diffusivity", 1.0)?,
                )?,
            };
            if model == Model::MovingFrame1d {
                let velocity = keys.f64_required("params.velocity")?;
                let u_far = keys.f64_or("params.u_far", 0.0)?;
                tol = require_positive("params.tol", keys.f64_or("params.tol", 1e-3)?)?;
                ModelParams::MovingFrame(MovingFrameParams {
                    base,
                    velocity,
                    u_far,
                })
            } else {
                ModelParams::KarmaRappel(base)
            }
        }
        Model::Dissolution => ModelParams::Dissolution(DissolutionParams {
            peclet: require_positive("params.peclet", keys.f64_or("params.peclet", 1.0)?)?,
            lambda: keys.f64_required("params.lambda")?,
            alpha: keys.f64_required("params.alpha")?,
            damkohler: require_positive(
                "params.damkohler",
                keys.f64_or("params.damkohler", 1.0)?,
            )?,
            eps_grad: require_positive(
                "params.eps_grad",
                keys.f64_or("params.eps_grad", 1e-8)?,
            )?,
        }),
    };

    let dt = match keys.take("dt") {
        None => DtSpec::Auto,
        Some(raw) if raw == "auto" => DtSpec::Auto,
        Some(raw) => DtSpec::Fixed(require_positive("dt", f64_value("dt", &raw)?)?),
    };

    let nsteps = keys.u64_required("nsteps")?;
    if nsteps == 0 {
        return Err(invalid("nsteps", "must be >= 1"));
    }
    let output_every = keys.u64_or("output_every", nsteps)?;
    if output_every == 0 {
        return Err(invalid("output_every", "must be >= 1"));
    }
    if output_every > nsteps {
        return Err(invalid(
            "output_every",
            format!("must be <= nsteps ({nsteps}), got {output_every}"),
        ));
    }

    // Seed defaults follow the model's phase range: the [0, 1] convention
    // puts phase 1 on the left/inside; the others put the -1 phase there.
    let unit_interval = model == Model::AllenCahn;
    let kind = keys.required("seed.kind")?;
    let seed = match kind.as_str() {
        "front_1d" => {
            let x0 = keys.f64_required("seed.x0")?;
            let width = require_nonnegative("seed.width", keys.f64_required("seed.width")?)?;
            let (dl, dr) = if unit_interval { (1.0, 0.0) } else { (-1.0, 1.0) };
            SeedSpec::Front1d {
                x0,
                left: keys.f64_or("seed.left", dl)?,
                right: keys.f64_or("seed.right", dr)?,
                width,
            }
        }
        "disk" => {
            let cx = keys.f64_required("seed.cx")?;
            let cy = keys.f64_required("seed.cy")?;
            let radius = require_positive("seed.radius", keys.f64_required("seed.radius")?)?;
            let (di, dout) = if unit_interval { (1.0, 0.0) } else { (-1.0, 1.0) };
            SeedSpec::Disk {
                cx,
                cy,
                radius,
                inside: keys.f64_or("seed.inside", di)?,
                outside: keys.f64_or("seed.outside", dout)?,
                smooth_width: require_nonnegative(
                    "seed.smooth_width",
                    keys.f64_or("seed.smooth_width", std::f64::consts::SQRT_2)?,
                )?,
            }
        }
        other => {
            return Err(invalid(
                "seed.kind",
                format!("expected front_1d or disk, got `{other}`"),
            ))
        }
    };

    let background = match model {
        Model::AllenCahn => 0.0,
        Model::Dissolution => keys.f64_or("seed.c0", 0.0)?,
        _ => keys.f64_or("seed.u0", 0.0)?,
    };

    let outdir = keys.take("outdir").unwrap_or_else(|| "out".to_string());

    keys.finish()?;

    // Belt-and-braces: the inline checks above already pin every field to
    // its range with key attribution, so these cannot fail.
    match &params {
        ModelParams::Caginalp(p) => p.validate()?,
        ModelParams::AllenCahn(p) => p.validate()?,
        ModelParams::KarmaRappel(p) => p.validate()?,
        ModelParams::MovingFrame(p) => p.validate()?,
        ModelParams::Dissolution(p) => p.validate()?,
    }

    Ok(RunConfig {
        model,
        grid,
        bc,
        params,
        dt,
        nsteps,
        seed,
        background,
        tol,
        output_every,
        outdir,
    })
}
