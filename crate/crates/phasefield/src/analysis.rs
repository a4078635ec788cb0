//! Run diagnostics: phase volumes, interface position/width, conserved
//! enthalpy, the square-root-of-time growth fit, the classical one-phase
//! front-coefficient oracle, and radial symmetry measurement for disk runs.

use crate::error::{Error, Result};
use crate::grid::Field;

/// Which value range the phase variable uses, and which phase counts as the
/// measured one.
///
/// - `SolidMinusOne`: phase in [-1, 1], measured fraction `(1 - phi)/2`
///   (the -1 phase).
/// - `SolidOne`: phase in [-1, 1], measured fraction `(1 + phi)/2`
///   (the +1 phase).
/// - `UnitInterval`: phase in [0, 1], measured fraction `phi` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    SolidMinusOne,
    SolidOne,
    UnitInterval,
}

/// Per-record diagnostics of a simulation run. Diagnostics that do not apply
/// to a model (or whose detection failed on a given record) are `None` and
/// render as empty CSV cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesRecord {
    pub step: u64,
    pub time: f64,
    pub volume: f64,
    pub interface_pos: Option<f64>,
    pub interface_width: Option<f64>,
    pub enthalpy: Option<f64>,
}

/// Result of a square-root growth fit `s(t) ~ beta·sqrt(t - t0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtFit {
    pub beta: f64,
    pub t0: f64,
    pub r_squared: f64,
}

/// Outcome of [`fit_sqrt_growth`]: either a usable fit or a flagged
/// degenerate regression (non-positive slope of s² versus t, so no real
/// growth coefficient exists).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitOutcome {
    Fit(SqrtFit),
    Degenerate { slope: f64, r_squared: f64 },
}

/// Integrates the measured phase fraction over interior cells, times the
/// cell measure dx·dy (dx alone on 1D grids).
pub fn phase_volume(phi: &Field, convention: PhaseConvention) -> f64 {
    let area = phi.spec().cell_area();
    let sum = match convention {
        PhaseConvention::SolidMinusOne => phi.interior_sum(|v| 0.5 * (1.0 - v)),
        PhaseConvention::SolidOne => phi.interior_sum(|v| 0.5 * (1.0 + v)),
        PhaseConvention::UnitInterval => phi.interior_sum(|v| v),
    };
    sum * area
}

/// Locates the unique crossing of `level` in a 1D profile by linear
/// interpolation between the two bracketing cell centers. Zero or multiple
/// crossings are a detection error carrying the crossing count.
pub fn interface_position_1d(phi: &Field, level: f64) -> Result<f64> {
    let spec = phi.spec();
    if !spec.is_1d() {
        return Err(Error::Usage(
            "interface_position_1d requires a 1D field (ny = 1)".into(),
        ));
    }
    let nx = spec.nx();
    let mut found: Option<f64> = None;
    let mut crossings = 0usize;
    for i in 1..nx {
        let a = phi.get(i, 1) - level;
        let b = phi.get(i + 1, 1) - level;
        let crossing = if a == 0.0 {
            Some(spec.x(i))
        } else if a * b < 0.0 {
            Some(spec.x(i) + spec.dx() * a / (a - b))
        } else {
            None
        };
        if let Some(x) = crossing {
            crossings += 1;
            found = Some(x);
        }
    }
    if phi.get(nx, 1) == level {
        crossings += 1;
        found = Some(spec.x(nx));
    }
    match (crossings, found) {
        (1, Some(x)) => Ok(x),
        _ => Err(Error::InterfaceDetection { crossings }),
    }
}

/// Distance between the `lo`-level and `hi`-level crossings of a monotone 1D
/// front profile. Callers pick the levels from the phase range; 10%/90% of
/// the range quantifies front sharpness.
pub fn interface_width(phi: &Field, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::Usage(format!(
            "interface_width: lo must be < hi, got lo={lo}, hi={hi}"
        )));
    }
    let x_lo = interface_position_1d(phi, lo)?;
    let x_hi = interface_position_1d(phi, hi)?;
    Ok((x_hi - x_lo).abs())
}

/// Discrete conserved quantity of the heat-coupled phase model:
/// `sum(u + (latent_heat/2)·phi) · dx·dy` over interior cells.
pub fn total_enthalpy(u: &Field, phi: &Field, latent_heat: f64) -> Result<f64> {
    if u.spec() != phi.spec() {
        return Err(Error::Usage(
            "total_enthalpy: u and phi must share a grid".into(),
        ));
    }
    let spec = u.spec();
    let half_l = 0.5 * latent_heat;
    let mut acc = 0.0;
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            acc += u.get(i, j) + half_l * phi.get(i, j);
        }
    }
    Ok(acc * spec.cell_area())
}

/// Least-squares fit of `s² = beta²·(t - t0)`: linear regression of the
/// squared positions on time. `beta = sqrt(slope)`, `t0 = -intercept/slope`.
/// A non-positive slope cannot be converted to a growth coefficient and is
/// flagged as a degenerate outcome rather than an error.
pub fn fit_sqrt_growth(times: &[f64], positions: &[f64]) -> Result<FitOutcome> {
    if times.len() != positions.len() {
        return Err(Error::Usage(format!(
            "fit_sqrt_growth: {} times but {} positions",
            times.len(),
            positions.len()
        )));
    }
    if times.len() < 3 {
        return Err(Error::Usage(format!(
            "fit_sqrt_growth: need at least 3 samples, got {}",
            times.len()
        )));
    }
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Usage(
            "fit_sqrt_growth: times must be strictly increasing".into(),
        ));
    }
    if positions.iter().any(|&s| !(s >= 0.0)) {
        return Err(Error::Usage(
            "fit_sqrt_growth: positions must be non-negative".into(),
        ));
    }
    let n = times.len() as f64;
    let ys: Vec<f64> = positions.iter().map(|&s| s * s).collect();
    let t_mean = times.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sty = 0.0;
    for (&t, &y) in times.iter().zip(&ys) {
        stt += (t - t_mean) * (t - t_mean);
        sty += (t - t_mean) * (y - y_mean);
    }
    let slope = sty / stt;
    let intercept = y_mean - slope * t_mean;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&t, &y) in times.iter().zip(&ys) {
        let fit = slope * t + intercept;
        ss_res += (y - fit) * (y - fit);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r_squared = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    if slope <= 0.0 {
        return Ok(FitOutcome::Degenerate { slope, r_squared });
    }
    Ok(FitOutcome::Fit(SqrtFit {
        beta: slope.sqrt(),
        t0: -intercept / slope,
        r_squared,
    }))
}

/// Front coefficient of the classical one-phase freezing problem: solves
///
/// `sqrt(pi) · (beta/2) · exp((beta/2)²) · erf(beta/2) = St`
///
/// for `beta` by bisection on [1e-6, 10] to an interval width of 1e-10. This
/// is the independent benchmark for the square-root growth law.
pub fn neumann_beta(stefan_number: f64) -> Result<f64> {
    if !(stefan_number > 0.0) {
        return Err(Error::Usage(format!(
            "neumann_beta: Stefan number must be > 0, got {stefan_number}"
        )));
    }
    let relation = |beta: f64| {
        let half = 0.5 * beta;
        std::f64::consts::PI.sqrt() * half * (half * half).exp() * libm::erf(half)
    };
    let (mut lo, mut hi) = (1e-6, 10.0);
    let (flo, fhi) = (relation(lo) - stefan_number, relation(hi) - stefan_number);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Usage(format!(
            "neumann_beta: Stefan number {stefan_number} outside the bracket [{:.3e}, {:.3e}]",
            relation(lo),
            relation(hi)
        )));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if relation(mid) - stefan_number <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Level-crossing radii along the 4 grid axes and 4 diagonals from the
/// domain center, found by marching with bilinear interpolation. Radii are
/// returned in ray order (E, N, W, S, NE, NW, SW, SE). Any ray that leaves
/// the sampled region without crossing is a detection error.
pub fn ray_radii(phi: &Field, level: f64) -> Result<[f64; 8]> {
    let spec = phi.spec();
    if spec.is_1d() {
        return Err(Error::Usage("ray_radii requires a 2D field".into()));
    }
    let (cx, cy) = (0.5 * spec.lx(), 0.5 * spec.ly());
    let dirs: [(f64, f64); 8] = {
        let d = 0.5f64.sqrt();
        [
            (1.0, 0.0),
            (0.0, 1.0),
            (-1.0, 0.0),
            (0.0, -1.0),
            (d, d),
            (-d, d),
            (-d, -d),
            (d, -d),
        ]
    };
    let dt = 0.25 * spec.dx().min(spec.dy());
    // Bilinear interpolation is defined on the rectangle spanned by the
    // outermost cell centers.
    let sample = |x: f64, y: f64| -> Option<f64> {
        let fx = x / spec.dx() + 0.5; // fractional interior index
        let fy = y / spec.dy() + 0.5;
        let i = fx.floor() as isize;
        let j = fy.floor() as isize;
        if i < 1 || j < 1 || i as usize >= spec.nx() || j as usize >= spec.ny() {
            return None;
        }
        let (i, j) = (i as usize, j as usize);
        let wx = fx - i as f64;
        let wy = fy - j as f64;
        let v00 = phi.get(i, j);
        let v10 = phi.get(i + 1, j);
        let v01 = phi.get(i, j + 1);
        let v11 = phi.get(i + 1, j + 1);
        Some(
            v00 * (1.0 - wx) * (1.0 - wy)
                + v10 * wx * (1.0 - wy)
                + v01 * (1.0 - wx) * wy
                + v11 * wx * wy,
        )
    };
    let mut radii = [0.0f64; 8];
    for (k, (ux, uy)) in dirs.iter().enumerate() {
        let mut t_prev = 0.0f64;
        let mut v_prev = match sample(cx, cy) {
            Some(v) => v - level,
            None => return Err(Error::InterfaceDetection { crossings: 0 }),
        };
        let mut t = dt;
        let mut found = None;
        loop {
            let (x, y) = (cx + t * ux, cy + t * uy);
            let v = match sample(x, y) {
                Some(v) => v - level,
                None => break,
            };
            if v_prev == 0.0 {
                found = Some(t_prev);
                break;
            }
            if v_prev * v < 0.0 {
                found = Some(t_prev + (t - t_prev) * v_prev / (v_prev - v));
                break;
            }
            t_prev = t;
            v_prev = v;
            t += dt;
        }
        match found {
            Some(r) => radii[k] = r,
            None => return Err(Error::InterfaceDetection { crossings: 0 }),
        }
    }
    Ok(radii)
}

/// Spread of the 8 ray radii of a closed level contour around the domain
/// center: `(max - min)/mean`. Zero for a perfect circle; the 8 radii are
/// sorted before reduction so the value is exactly invariant under grid
/// rotations that permute the rays.
pub fn radial_asymmetry(phi: &Field, level: f64) -> Result<f64> {
    let mut radii = ray_radii(phi, level)?;
    radii.sort_by(|a, b| a.partial_cmp(b).expect("radii are finite"));
    let mean = radii.iter().sum::<f64>() / 8.0;
    Ok((radii[7] - radii[0]) / mean)
}

/// Mean of the 8 ray radii: the "mean radius" diagnostic for disk runs.
pub fn mean_radius(phi: &Field, level: f64) -> Result<f64> {
    let mut radii = ray_radii(phi, level)?;
    radii.sort_by(|a, b| a.partial_cmp(b).expect("radii are finite"));
    Ok(radii.iter().sum::<f64>() / 8.0)
}
