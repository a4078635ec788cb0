//! Centered finite-difference operators on ghost-padded fields, plus the
//! explicit-Euler stability bound.
//!
//! Every operator writes interior cells only; ghost cells of the output are
//! unspecified and must not be read (re-apply a boundary condition first if
//! the output is fed back in as a field).
//!
//! All stencils are written in mirror-symmetric groupings — for example
//! `(E + W) - 2C` rather than `E - 2C + W` — so that mirroring or rotating
//! the input field permutes floating-point operands only through exact
//! operations (commutative adds of sibling cells, exact negation). This makes
//! the symmetry properties of the steppers hold to exact value equality, not
//! just to round-off.

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec};

/// An operator result: a `Field` whose interior holds the stencil values and
/// whose ghost layer is unspecified.
pub type StencilOutput = Field;

/// Stencil axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Safety factor applied to the explicit-Euler diffusion stability limit.
pub const CFL_SAFETY: f64 = 0.9;

/// Five-point Laplacian: `((E + W) - 2C)/dx² + ((N + S) - 2C)/dy²`.
/// The y contribution is omitted on 1D grids. Exact on quadratics.
pub fn laplacian_5pt(phi: &Field) -> StencilOutput {
    let spec = phi.spec();
    let (nx, ny) = (spec.nx(), spec.ny());
    let inv_dx2 = 1.0 / (spec.dx() * spec.dx());
    let inv_dy2 = 1.0 / (spec.dy() * spec.dy());
    let mut out = Field::new(spec, 0.0);
    for j in 1..=ny {
        for i in 1..=nx {
            let c = phi.get(i, j);
            let mut v = ((phi.get(i + 1, j) + phi.get(i - 1, j)) - 2.0 * c) * inv_dx2;
            if ny > 1 {
                v += ((phi.get(i, j + 1) + phi.get(i, j - 1)) - 2.0 * c) * inv_dy2;
            }
            out.set(i, j, v);
        }
    }
    out
}

/// Second derivative along one axis: `((l + r) - 2c)/h²`. Exact on
/// quadratics in the chosen coordinate.
pub fn second_derivative(phi: &Field, axis: Axis) -> Result<StencilOutput> {
    let spec = phi.spec();
    if axis == Axis::Y && spec.is_1d() {
        return Err(Error::Usage(
            "second_derivative along y requires a 2D grid (ny >= 3)".into(),
        ));
    }
    let (nx, ny) = (spec.nx(), spec.ny());
    let h = match axis {
        Axis::X => spec.dx(),
        Axis::Y => spec.dy(),
    };
    let inv_h2 = 1.0 / (h * h);
    let mut out = Field::new(spec, 0.0);
    for j in 1..=ny {
        for i in 1..=nx {
            let (lo, hi) = match axis {
                Axis::X => (phi.get(i - 1, j), phi.get(i + 1, j)),
                Axis::Y => (phi.get(i, j - 1), phi.get(i, j + 1)),
            };
            out.set(i, j, ((hi + lo) - 2.0 * phi.get(i, j)) * inv_h2);
        }
    }
    Ok(out)
}

/// Central first derivative along one axis: `(r - l)/(2h)`.
pub fn first_derivative(phi: &Field, axis: Axis) -> Result<StencilOutput> {
    let spec = phi.spec();
    if axis == Axis::Y && spec.is_1d() {
        return Err(Error::Usage(
            "first_derivative along y requires a 2D grid (ny >= 3)".into(),
        ));
    }
    let (nx, ny) = (spec.nx(), spec.ny());
    let inv_2h = match axis {
        Axis::X => 0.5 / spec.dx(),
        Axis::Y => 0.5 / spec.dy(),
    };
    let mut out = Field::new(spec, 0.0);
    for j in 1..=ny {
        for i in 1..=nx {
            let (lo, hi) = match axis {
                Axis::X => (phi.get(i - 1, j), phi.get(i + 1, j)),
                Axis::Y => (phi.get(i, j - 1), phi.get(i, j + 1)),
            };
            out.set(i, j, (hi - lo) * inv_2h);
        }
    }
    Ok(out)
}

/// Central-difference gradient magnitude:
/// `sqrt(((E-W)/(2dx))² + ((N-S)/(2dy))²)`; the y term is omitted on 1D
/// grids. Exact on linear fields.
pub fn grad_magnitude(phi: &Field) -> StencilOutput {
    let spec = phi.spec();
    let (nx, ny) = (spec.nx(), spec.ny());
    let inv_2dx = 0.5 / spec.dx();
    let inv_2dy = 0.5 / spec.dy();
    let mut out = Field::new(spec, 0.0);
    for j in 1..=ny {
        for i in 1..=nx {
            let gx = (phi.get(i + 1, j) - phi.get(i - 1, j)) * inv_2dx;
            let g2 = if ny > 1 {
                let gy = (phi.get(i, j + 1) - phi.get(i, j - 1)) * inv_2dy;
                gx * gx + gy * gy
            } else {
                gx * gx
            };
            out.set(i, j, g2.sqrt());
        }
    }
    out
}

/// Mean curvature of the level sets, `div(grad(phi)/|grad(phi)|)`, from
/// central differences:
///
/// `kappa = (phi_xx·phi_y² - 2·phi_x·phi_y·phi_xy + phi_yy·phi_x²) / |grad phi|³`
///
/// with `phi_xy` from the 4-point cross stencil. Cells where
/// `|grad phi| < eps_grad` return 0 (bulk-phase regularization). On 1D grids
/// all y derivatives vanish, so the result is identically 0.
pub fn curvature(phi: &Field, eps_grad: f64) -> Result<StencilOutput> {
    if !(eps_grad > 0.0) {
        return Err(Error::Usage(format!(
            "curvature: eps_grad must be > 0, got {eps_grad}"
        )));
    }
    let spec = phi.spec();
    let (nx, ny) = (spec.nx(), spec.ny());
    let inv_2dx = 0.5 / spec.dx();
    let inv_2dy = 0.5 / spec.dy();
    let inv_dx2 = 1.0 / (spec.dx() * spec.dx());
    let inv_dy2 = 1.0 / (spec.dy() * spec.dy());
    let inv_4dxdy = 0.25 / (spec.dx() * spec.dy());
    let mut out = Field::new(spec, 0.0);
    if ny == 1 {
        return Ok(out); // level sets of a 1D field are planes: zero curvature
    }
    for j in 1..=ny {
        for i in 1..=nx {
            let c = phi.get(i, j);
            let px = (phi.get(i + 1, j) - phi.get(i - 1, j)) * inv_2dx;
            let py = (phi.get(i, j + 1) - phi.get(i, j - 1)) * inv_2dy;
            let g2 = px * px + py * py;
            if g2.sqrt() < eps_grad {
                out.set(i, j, 0.0);
                continue;
            }
            let pxx = ((phi.get(i + 1, j) + phi.get(i - 1, j)) - 2.0 * c) * inv_dx2;
            let pyy = ((phi.get(i, j + 1) + phi.get(i, j - 1)) - 2.0 * c) * inv_dy2;
            // Grouped so an x-mirror negates the value exactly.
            let pxy = ((phi.get(i + 1, j + 1) + phi.get(i - 1, j - 1))
                - (phi.get(i - 1, j + 1) + phi.get(i + 1, j - 1)))
                * inv_4dxdy;
            // (t1 + t3) + t2 so a 90-degree rotation (which swaps t1 and t3
            // and fixes t2) reproduces the same value exactly.
            let t1 = pxx * (py * py);
            let t2 = -2.0 * px * py * pxy;
            let t3 = pyy * (px * px);
            let denom = g2 * g2.sqrt(); // |grad|^3
            out.set(i, j, ((t1 + t3) + t2) / denom);
        }
    }
    Ok(out)
}

/// Forward-Euler update on interior cells: `phi + dt·rhs`. The ghost layer is
/// copied from `phi` unchanged (stale); the caller re-applies the boundary
/// condition.
pub fn euler_step(phi: &Field, rhs: &StencilOutput, dt: f64) -> Field {
    let spec = phi.spec();
    let mut out = phi.clone();
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            out.set(i, j, phi.get(i, j) + dt * rhs.get(i, j));
        }
    }
    out
}

/// Largest stable forward-Euler step for a diffusion coefficient `diff_coeff`
/// on `spec`: `0.9 · h² / (2 · d · diff_coeff)` with `d` the number of active
/// dimensions and `h` the smallest active spacing.
pub fn cfl_max_dt(diff_coeff: f64, spec: &GridSpec) -> Result<f64> {
    if !(diff_coeff > 0.0) {
        return Err(Error::Usage(format!(
            "cfl_max_dt: diffusion coefficient must be > 0, got {diff_coeff}"
        )));
    }
    let d = spec.active_dims() as f64;
    let h = if spec.is_1d() {
        spec.dx()
    } else {
        spec.dx().min(spec.dy())
    };
    Ok(CFL_SAFETY * h * h / (2.0 * d * diff_coeff))
}
