//! Time steppers for the interface models, plus the moving-frame steady solver.
//!
//! Four explicit forward-Euler steppers share a common shape: clone the input
//! field(s), refresh ghost cells from the boundary condition, evaluate the
//! right-hand side with centered stencils, update interior cells, and re-apply
//! the boundary to the outputs. Every stepper validates its parameters and
//! refuses time steps above the diffusive CFL bound of its stiffest operator.
//!
//! * [`caginalp_step`] — conserved-heat solidification: a double-well phase
//!   equation driven by temperature, coupled so the discrete enthalpy
//!   Σ(u + ℓφ/2) is exactly conserved under zero-flux boundaries.
//! * [`allen_cahn_step`] — curvature-driven fronts on the [0, 1] convention
//!   with a driving-force bias `beta` that selects the advancing phase.
//! * [`karma_rappel_step`] — a 1D thin-interface solidification model whose
//!   temperature equation absorbs half the phase increment per step.
//! * [`dissolution_step`] — 2D dissolution/precipitation: phase relaxation
//!   with a curvature penalty, coupled to a concentration field carrying a
//!   reaction-rate correction scaled by a Damköhler number.
//! * [`moving_frame_residual`] / [`moving_frame_relax`] — the steady
//!   traveling-wave problem in a frame moving at velocity `V`, solved by
//!   pseudo-time relaxation with far-field Dirichlet conditions.

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Field, GridSpec};
use crate::stencils::{
    cfl_max_dt, curvature, first_derivative, grad_magnitude, laplacian_5pt, Axis, StencilOutput,
};

/// Parameters of the conserved-heat solidification model ([`caginalp_step`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaginalpParams {
    /// Dimensionless latent heat ℓ > 0: the heat released per unit phase
    /// change, sunk into the temperature equation as −(ℓ/2)φ_t.
    pub latent_heat: f64,
}

impl CaginalpParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("latent_heat", self.latent_heat)
    }
}

/// Parameters of the biased curvature-driven front model ([`allen_cahn_step`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllenCahnParams {
    /// Mobility of the order parameter, > 0.
    pub mobility: f64,
    /// Driving-force bias, |beta| < 0.5. The sign selects which well of the
    /// quartic potential grows; |beta| >= 0.5 would destabilize one well.
    pub beta: f64,
    /// Constant amplitude of the potential term, > 0.
    pub g_const: f64,
}

impl AllenCahnParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("mobility", self.mobility)?;
        ensure_positive("g_const", self.g_const)?;
        ensure_finite("beta", self.beta)?;
        if self.beta.abs() >= 0.5 {
            return Err(Error::Usage(format!(
                "beta must satisfy |beta| < 0.5 so both potential wells are \
                 locally stable (got {})",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Parameters of the 1D thin-interface solidification model
/// ([`karma_rappel_step`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KarmaRappelParams {
    /// Phase relaxation time τ > 0.
    pub tau: f64,
    /// Interface width W > 0.
    pub width: f64,
    /// Thermal coupling strength λ >= 0 (0 decouples the phase equation).
    pub lambda: f64,
    /// Thermal diffusivity D > 0.
    pub diffusivity: f64,
}

impl KarmaRappelParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("tau", self.tau)?;
        ensure_positive("width", self.width)?;
        ensure_positive("diffusivity", self.diffusivity)?;
        ensure_finite("lambda", self.lambda)?;
        if self.lambda < 0.0 {
            return Err(Error::Usage(format!(
                "lambda must be non-negative (got {})",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Diffusivity of the stiffest operator in the coupled system; sets the
    /// CFL bound shared by the time stepper and the relaxation solver.
    pub fn max_diffusivity(&self) -> f64 {
        (self.width * self.width / self.tau).max(self.diffusivity)
    }
}

/// Parameters of the steady traveling-wave problem ([`moving_frame_relax`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingFrameParams {
    /// The underlying thin-interface model.
    pub base: KarmaRappelParams,
    /// Frame velocity V (any finite sign; the profile is steady in a frame
    /// moving at this speed).
    pub velocity: f64,
    /// Far-field temperature on the liquid side.
    pub u_far: f64,
}

impl MovingFrameParams {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        ensure_finite("velocity", self.velocity)?;
        ensure_finite("u_far", self.u_far)
    }
}

/// Parameters of the 2D dissolution/precipitation model
/// ([`dissolution_step`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissolutionParams {
    /// Péclet number Pe > 0; the phase equation relaxes at rate 1/Pe.
    pub peclet: f64,
    /// Concentration coupling in the reaction term; λc shifts the potential.
    pub lambda: f64,
    /// Concentration released per unit phase change.
    pub alpha: f64,
    /// Damköhler number Da > 0; scales the interface reaction correction.
    pub damkohler: f64,
    /// Gradient threshold > 0 below which curvature and the reaction
    /// correction are treated as bulk (set to zero).
    pub eps_grad: f64,
}

impl DissolutionParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("peclet", self.peclet)?;
        ensure_positive("damkohler", self.damkohler)?;
        ensure_positive("eps_grad", self.eps_grad)?;
        ensure_finite("lambda", self.lambda)?;
        ensure_finite("alpha", self.alpha)
    }
}

/// Result of [`moving_frame_relax`]. Non-convergence is an ordinary outcome
/// (`converged == false` with the last residual), not an error: the caller
/// scanning over velocities needs the residual magnitude, not an abort.
#[derive(Debug, Clone)]
pub struct RelaxOutcome {
    /// Relaxed phase profile (ghost cells hold the far-field conditions).
    pub phi: Field,
    /// Relaxed temperature profile.
    pub u: Field,
    /// Max-norm of the steady-state residual at the last evaluation.
    pub residual: f64,
    /// Number of residual evaluations performed (the iteration at which the
    /// solver stopped).
    pub iterations: u64,
    /// Whether `residual <= tol` was reached within `max_iters`.
    pub converged: bool,
}

fn ensure_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Usage(format!(
            "{name} must be positive and finite (got {v})"
        )));
    }
    Ok(())
}

fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::Usage(format!("{name} must be finite (got {v})")));
    }
    Ok(())
}

fn ensure_same_spec(a: &Field, b: &Field) -> Result<()> {
    if a.spec() != b.spec() {
        return Err(Error::Usage(
            "coupled fields must share one grid".to_string(),
        ));
    }
    Ok(())
}

fn ensure_1d(spec: &GridSpec, what: &str) -> Result<()> {
    if !spec.is_1d() {
        return Err(Error::Usage(format!("{what} requires a 1D grid (ny = 1)")));
    }
    Ok(())
}

/// Validates an explicit time step against a CFL bound.
fn check_dt(dt: f64, dt_max: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Usage(format!(
            "time step must be positive and finite (got {dt})"
        )));
    }
    if dt > dt_max {
        return Err(Error::Stability { dt, dt_max });
    }
    Ok(())
}

/// One forward-Euler step of the conserved-heat solidification system
///
/// ```text
/// φ_t = Δφ + ½(φ − φ³) + 2u
/// u_t = Δu − (ℓ/2) φ_t
/// ```
///
/// on the [−1, +1] phase convention (−1 solid, +1 liquid). The phase field is
/// advanced first and its increment feeds the latent-heat sink, so the
/// discrete enthalpy Σ(u + ℓφ/2) is conserved exactly (to round-off) under
/// zero-flux boundaries. Both unit diffusivities share one CFL bound.
///
/// Returns the updated `(u, phi)` in input order, ghosts refreshed.
pub fn caginalp_step(
    u: &Field,
    phi: &Field,
    p: &CaginalpParams,
    dt: f64,
    bc: BoundaryCondition,
) -> Result<(Field, Field)> {
    p.validate()?;
    ensure_same_spec(u, phi)?;
    let spec = phi.spec();
    check_dt(dt, cfl_max_dt(1.0, &spec)?)?;

    let mut phi_n = phi.clone();
    phi_n.apply_boundary(bc);
    let mut u_n = u.clone();
    u_n.apply_boundary(bc);

    let lap_phi = laplacian_5pt(&phi_n);
    let mut phi_next = phi_n.clone();
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            let f = phi_n.get(i, j);
            let rhs = lap_phi.get(i, j) + 0.5 * (f - f * f * f) + 2.0 * u_n.get(i, j);
            phi_next.set(i, j, f + dt * rhs);
        }
    }

    let lap_u = laplacian_5pt(&u_n);
    let half_latent = 0.5 * p.latent_heat;
    let mut u_next = u_n.clone();
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            let phi_increment = phi_next.get(i, j) - phi_n.get(i, j);
            let v = u_n.get(i, j) + dt * lap_u.get(i, j) - half_latent * phi_increment;
            u_next.set(i, j, v);
        }
    }

    phi_next.apply_boundary(bc);
    u_next.apply_boundary(bc);
    Ok((u_next, phi_next))
}

/// One forward-Euler step of the biased curvature-driven front model
///
/// ```text
/// φ_t = M [Δφ + 4 g φ(1 − φ)(φ − ½ + β)]
/// ```
///
/// on the [0, 1] phase convention. `β > 0` makes the φ = 1 phase advance.
pub fn allen_cahn_step(
    phi: &Field,
    p: &AllenCahnParams,
    dt: f64,
    bc: BoundaryCondition,
) -> Result<Field> {
    p.validate()?;
    let spec = phi.spec();
    check_dt(dt, cfl_max_dt(p.mobility, &spec)?)?;

    let mut phi_n = phi.clone();
    phi_n.apply_boundary(bc);

    let lap = laplacian_5pt(&phi_n);
    let four_g = 4.0 * p.g_const;
    let mut out = phi_n.clone();
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            let f = phi_n.get(i, j);
            let rhs = lap.get(i, j) + four_g * f * (1.0 - f) * (f - 0.5 + p.beta);
            out.set(i, j, f + dt * p.mobility * rhs);
        }
    }

    out.apply_boundary(bc);
    Ok(out)
}

/// One forward-Euler step of the 1D thin-interface solidification system
///
/// ```text
/// τ φ_t = W² φ_xx + (φ − λu(1 − φ²))(1 − φ²)
///   u_t = D u_xx + ½ φ_t
/// ```
///
/// on the [−1, +1] convention. The phase field is advanced first; its
/// increment supplies the ½φ_t source in the temperature update. The CFL
/// bound uses the stiffer of the two diffusivities, W²/τ and D.
///
/// Returns the updated `(phi, u)` in input order.
pub fn karma_rappel_step(
    phi: &Field,
    u: &Field,
    p: &KarmaRappelParams,
    dt: f64,
    bc: BoundaryCondition,
) -> Result<(Field, Field)> {
    p.validate()?;
    ensure_same_spec(phi, u)?;
    let spec = phi.spec();
    ensure_1d(&spec, "karma_rappel_step")?;
    check_dt(dt, cfl_max_dt(p.max_diffusivity(), &spec)?)?;

    let mut phi_n = phi.clone();
    phi_n.apply_boundary(bc);
    let mut u_n = u.clone();
    u_n.apply_boundary(bc);

    let w2 = p.width * p.width;
    let lap_phi = laplacian_5pt(&phi_n);
    let mut phi_next = phi_n.clone();
    for i in 1..=spec.nx() {
        let f = phi_n.get(i, 1);
        let wall = 1.0 - f * f;
        let rhs = w2 * lap_phi.get(i, 1) + (f - p.lambda * u_n.get(i, 1) * wall) * wall;
        phi_next.set(i, 1, f + dt / p.tau * rhs);
    }

    let lap_u = laplacian_5pt(&u_n);
    let mut u_next = u_n.clone();
    for i in 1..=spec.nx() {
        let phi_increment = phi_next.get(i, 1) - phi_n.get(i, 1);
        let v = u_n.get(i, 1) + dt * p.diffusivity * lap_u.get(i, 1) + 0.5 * phi_increment;
        u_next.set(i, 1, v);
    }

    phi_next.apply_boundary(bc);
    u_next.apply_boundary(bc);
    Ok((phi_next, u_next))
}

/// Pointwise residuals of the steady traveling-wave equations in a frame
/// moving at velocity `V`:
///
/// ```text
/// R_φ = τV φ_x + W² φ_xx + (φ − λu(1 − φ²))(1 − φ²)
/// R_u =  V u_x + D u_xx − (V/2) φ_x
/// ```
///
/// Both vanish (to discretization error) on a true traveling-wave profile.
/// Ghost cells are used as-is: callers choose the far-field closure (the
/// relaxation solver pins Dirichlet values; a lab-frame snapshot keeps its
/// own boundary condition).
pub fn moving_frame_residual(
    phi: &Field,
    u: &Field,
    p: &MovingFrameParams,
) -> Result<(StencilOutput, StencilOutput)> {
    p.validate()?;
    ensure_same_spec(phi, u)?;
    let spec = phi.spec();
    ensure_1d(&spec, "moving_frame_residual")?;

    let b = &p.base;
    let w2 = b.width * b.width;
    let phi_x = first_derivative(phi, Axis::X)?;
    let phi_xx = laplacian_5pt(phi);
    let u_x = first_derivative(u, Axis::X)?;
    let u_xx = laplacian_5pt(u);

    let mut r_phi = Field::new(spec, 0.0);
    let mut r_u = Field::new(spec, 0.0);
    for i in 1..=spec.nx() {
        let f = phi.get(i, 1);
        let wall = 1.0 - f * f;
        let reaction = (f - b.lambda * u.get(i, 1) * wall) * wall;
        r_phi.set(
            i,
            1,
            b.tau * p.velocity * phi_x.get(i, 1) + w2 * phi_xx.get(i, 1) + reaction,
        );
        r_u.set(
            i,
            1,
            p.velocity * u_x.get(i, 1) + b.diffusivity * u_xx.get(i, 1)
                - 0.5 * p.velocity * phi_x.get(i, 1),
        );
    }
    Ok((r_phi, r_u))
}

/// Writes the far-field Dirichlet ghosts of the moving-frame problem:
/// solid end (left) φ → −1, u → 0; liquid end (right) φ → +1, u → `u_far`.
pub(crate) fn apply_frame_boundary(phi: &mut Field, u: &mut Field, u_far: f64) {
    let nx = phi.spec().nx();
    phi.set(0, 1, -2.0 - phi.get(1, 1));
    phi.set(nx + 1, 1, 2.0 - phi.get(nx, 1));
    u.set(0, 1, -u.get(1, 1));
    u.set(nx + 1, 1, 2.0 * u_far - u.get(nx, 1));
}

/// True when φ has a sign change (or exact zero) whose first occurrence lies
/// in the middle half of the interior, `[nx/4, 3nx/4]`.
fn front_in_middle_half(phi: &Field) -> bool {
    let nx = phi.spec().nx();
    let (lo, hi) = (nx / 4, 3 * nx / 4);
    for i in 1..nx {
        let a = phi.get(i, 1);
        let b = phi.get(i + 1, 1);
        if a == 0.0 || a * b < 0.0 {
            return (lo..=hi).contains(&i);
        }
    }
    false
}

/// Solves the steady traveling-wave equations (see
/// [`moving_frame_residual`]) by pseudo-time relaxation
///
/// ```text
/// φ ← φ + (dt_pseudo/τ) R_φ,   u ← u + dt_pseudo R_u
/// ```
///
/// from a tanh front / boundary-layer initial guess centered in the domain,
/// with far-field Dirichlet conditions (φ → −1, u → 0 at the solid end;
/// φ → +1, u → `u_far` at the liquid end). The velocity `V` is a fixed input;
/// scanning over `V` is the caller's loop.
///
/// Stops the first time `max(|R_φ|, |R_u|) <= tol` (before that iteration's
/// update, so the returned profiles are exactly the ones whose residual is
/// reported). Two outcomes end the iteration early without convergence, both
/// returned as explicit results carrying the last residual:
///
/// * the iteration budget `max_iters` runs out;
/// * the front escapes — the zero crossing of φ leaves the middle half of
///   the domain or vanishes, which happens when `V` is incompatible with a
///   steady profile and the front accelerates away instead of settling.
pub fn moving_frame_relax(
    p: &MovingFrameParams,
    spec: GridSpec,
    tol: f64,
    max_iters: u64,
) -> Result<RelaxOutcome> {
    p.validate()?;
    ensure_1d(&spec, "moving_frame_relax")?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Usage(format!(
            "tol must be positive and finite (got {tol})"
        )));
    }
    if max_iters == 0 {
        return Err(Error::Usage("max_iters must be at least 1".to_string()));
    }

    let b = p.base;
    let center = 0.5 * spec.lx();
    let tanh_scale = b.width * std::f64::consts::SQRT_2;
    // Degenerate-rate guard so the V = 0 guess stays finite; the relaxation
    // still converges from it, just from a cruder start.
    let rate = p.velocity.abs().max(1e-12) / b.diffusivity;
    let u_far = p.u_far;

    let mut phi = Field::from_fn(spec, |x, _| ((x - center) / tanh_scale).tanh());
    // Liquid side: far-field plateau with an exponential dip of depth 1 at
    // the front (the steady-state jump). Solid side: plateau u_far − 1 with a
    // boundary layer down to the wall value 0.
    let mut u = Field::from_fn(spec, |x, _| {
        if x >= center {
            u_far - (-(x - center) * rate).exp()
        } else {
            (u_far - 1.0) * (1.0 - (-x * rate).exp())
        }
    });

    let dt_pseudo = 0.4 * spec.dx() * spec.dx() / (2.0 * b.max_diffusivity());
    let mut iterations = 0u64;
    let mut residual = f64::INFINITY;
    while iterations < max_iters {
        iterations += 1;
        apply_frame_boundary(&mut phi, &mut u, u_far);
        let (r_phi, r_u) = moving_frame_residual(&phi, &u, p)?;
        residual = r_phi.max_abs().max(r_u.max_abs());
        if !residual.is_finite() {
            return Err(Error::NumericalInstability { step: iterations });
        }
        let converged = residual <= tol;
        if converged || !front_in_middle_half(&phi) {
            return Ok(RelaxOutcome {
                phi,
                u,
                residual,
                iterations,
                converged,
            });
        }
        for i in 1..=spec.nx() {
            phi.set(i, 1, phi.get(i, 1) + dt_pseudo / b.tau * r_phi.get(i, 1));
            u.set(i, 1, u.get(i, 1) + dt_pseudo * r_u.get(i, 1));
        }
    }
    apply_frame_boundary(&mut phi, &mut u, u_far);
    Ok(RelaxOutcome {
        phi,
        u,
        residual,
        iterations,
        converged: false,
    })
}

/// One forward-Euler step of the 2D dissolution/precipitation system
///
/// ```text
/// Pe φ_t = ∇²φ + (1 − φ²)(φ − λc) − κ|∇φ|
///    c_t = ∇²c + α φ_t + (∇²φ − φ_t)(α φ_t) / (Da |∇φ|)
/// ```
///
/// on the [−1, +1] convention (−1 solid, +1 fluid), with κ the mean curvature
/// of the φ level sets. The φ update is computed first; its realized rate
/// (φⁿ⁺¹ − φⁿ)/dt drives the concentration sources. The reaction correction
/// (the Da term) is set to zero wherever |∇φ| < `eps_grad`, i.e. away from
/// the interface. The CFL bound covers both diffusivities, 1/Pe and 1.
///
/// Returns the updated `(phi, c)` in input order.
pub fn dissolution_step(
    phi: &Field,
    c: &Field,
    p: &DissolutionParams,
    dt: f64,
    bc: BoundaryCondition,
) -> Result<(Field, Field)> {
    p.validate()?;
    ensure_same_spec(phi, c)?;
    let spec = phi.spec();
    if spec.is_1d() {
        return Err(Error::Usage(
            "dissolution_step requires a 2D grid (ny >= 3)".to_string(),
        ));
    }
    let stiffest = (1.0 / p.peclet).max(1.0);
    check_dt(dt, cfl_max_dt(stiffest, &spec)?)?;

    let mut phi_n = phi.clone();
    phi_n.apply_boundary(bc);
    let mut c_n = c.clone();
    c_n.apply_boundary(bc);

    let lap_phi = laplacian_5pt(&phi_n);
    let grad = grad_magnitude(&phi_n);
    let kappa = curvature(&phi_n, p.eps_grad)?;
    let inv_pe = 1.0 / p.peclet;

    let mut phi_next = phi_n.clone();
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            let f = phi_n.get(i, j);
            let rhs = lap_phi.get(i, j) + (1.0 - f * f) * (f - p.lambda * c_n.get(i, j))
                - kappa.get(i, j) * grad.get(i, j);
            phi_next.set(i, j, f + dt * inv_pe * rhs);
        }
    }

    let lap_c = laplacian_5pt(&c_n);
    let mut c_next = c_n.clone();
    for j in 1..=spec.ny() {
        for i in 1..=spec.nx() {
            let phi_t = (phi_next.get(i, j) - phi_n.get(i, j)) / dt;
            let g = grad.get(i, j);
            let correction = if g < p.eps_grad {
                0.0
            } else {
                (lap_phi.get(i, j) - phi_t) * (p.alpha * phi_t) / (p.damkohler * g)
            };
            let rhs = lap_c.get(i, j) + p.alpha * phi_t + correction;
            c_next.set(i, j, c_n.get(i, j) + dt * rhs);
        }
    }

    phi_next.apply_boundary(bc);
    c_next.apply_boundary(bc);
    Ok((phi_next, c_next))
}
