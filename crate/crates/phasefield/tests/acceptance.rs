//! End-to-end acceptance suite.
//!
//! Each test exercises one numbered acceptance criterion and prints a single
//! `ACCEPTANCE criterion NN (<name>): PASS/FAIL — details` line (visible with
//! `cargo test --test acceptance -- --nocapture`, or automatically on
//! failure) before asserting.
//!
//! Criterion 3 is a known, documented failure: its comment carries the
//! analysis of why the stated tolerance cannot be met at the pinned
//! discretization. It is kept faithful rather than loosened.

use std::path::PathBuf;

use phasefield::analysis::{
    fit_sqrt_growth, interface_width, mean_radius, neumann_beta, phase_volume, radial_asymmetry,
    total_enthalpy, FitOutcome, PhaseConvention,
};
use phasefield::config::parse_config;
use phasefield::run::run_simulation;
use phasefield::Error;
use phasefield::grid::{seed_disk, BoundaryCondition, Field, GridSpec};
use phasefield::models::{
    allen_cahn_step, caginalp_step, dissolution_step, karma_rappel_step, moving_frame_relax,
    moving_frame_residual, AllenCahnParams, CaginalpParams, DissolutionParams, KarmaRappelParams,
    MovingFrameParams,
};
use phasefield::stencils::{
    cfl_max_dt, first_derivative, grad_magnitude, laplacian_5pt, second_derivative, Axis,
};

const ZF: BoundaryCondition = BoundaryCondition::ZeroFluxNeumann;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn report(number: u32, name: &str, pass: bool, details: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE criterion {number:02} ({name}): {verdict} — {details}");
}

/// SplitMix64; deterministic test-data generator.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Dyadic rational in [-2, 2] with denominator 16: exactly representable,
    /// so polynomial test fields evaluate without rounding.
    fn coeff(&mut self) -> f64 {
        ((self.next_u64() % 65) as i64 - 32) as f64 / 16.0
    }
}

fn linear_fit_r2(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    (sxy * sxy) / (sxx * syy)
}

/// Criterion 1 — stencil exactness. Second-difference stencils must be exact
/// (to <= 1e-12 relative) on quadratics, and the gradient magnitude exact on
/// linear fields. Dyadic spacings and coefficients keep polynomial evaluation
/// itself rounding-free, so stencil error is the only error observed.
#[test]
fn criterion_01_stencil_exactness() {
    let spec = GridSpec::new(12, 12, 0.25, 0.25).unwrap();
    let mut rng = SplitMix64(101);
    let mut worst: f64 = 0.0;

    for _ in 0..100 {
        let (a, b, c, d, e, g) = (
            rng.coeff(),
            rng.coeff(),
            rng.coeff(),
            rng.coeff(),
            rng.coeff(),
            rng.coeff(),
        );
        let f = Field::from_fn(spec, |x, y| {
            a + b * x + c * y + d * x * x + e * x * y + g * y * y
        });
        let lap = laplacian_5pt(&f);
        let dxx = second_derivative(&f, Axis::X).unwrap();
        let dyy = second_derivative(&f, Axis::Y).unwrap();
        for j in 1..=spec.ny() {
            for i in 1..=spec.nx() {
                let exact_lap = 2.0 * d + 2.0 * g;
                let rel = |err: f64, exact: f64| err.abs() / exact.abs().max(1.0);
                worst = worst.max(rel(lap.get(i, j) - exact_lap, exact_lap));
                worst = worst.max(rel(dxx.get(i, j) - 2.0 * d, 2.0 * d));
                worst = worst.max(rel(dyy.get(i, j) - 2.0 * g, 2.0 * g));
            }
        }
    }

    let mut worst_grad: f64 = 0.0;
    for _ in 0..100 {
        let (a, b, c) = (rng.coeff(), rng.coeff(), rng.coeff());
        let f = Field::from_fn(spec, |x, y| a + b * x + c * y);
        let grad = grad_magnitude(&f);
        let exact = (b * b + c * c).sqrt();
        for j in 1..=spec.ny() {
            for i in 1..=spec.nx() {
                worst_grad =
                    worst_grad.max((grad.get(i, j) - exact).abs() / exact.abs().max(1.0));
            }
        }
    }

    let pass = worst <= 1e-12 && worst_grad <= 1e-12;
    report(
        1,
        "stencil exactness",
        pass,
        &format!(
            "worst quadratic relative error {worst:.3e}, worst linear gradient \
             relative error {worst_grad:.3e} (tolerance 1e-12)"
        ),
    );
    assert!(pass, "stencils not exact: {worst:.3e} / {worst_grad:.3e}");
}

/// Criterion 2 — observed order of accuracy. On f = sin(x)sin(y) over
/// [0, 2π]², halving the spacing must shrink the max interior Laplacian
/// error by a factor in [3.6, 4.4] (second order).
#[test]
fn criterion_02_order_of_accuracy() {
    let err_at = |n: usize| -> f64 {
        let dx = std::f64::consts::TAU / n as f64;
        let spec = GridSpec::new(n, n, dx, dx).unwrap();
        let f = Field::from_fn(spec, |x, y| x.sin() * y.sin());
        let lap = laplacian_5pt(&f);
        let mut worst: f64 = 0.0;
        for j in 1..=n {
            for i in 1..=n {
                let exact = -2.0 * spec.x(i).sin() * spec.y(j).sin();
                worst = worst.max((lap.get(i, j) - exact).abs());
            }
        }
        worst
    };
    let coarse = err_at(48);
    let fine = err_at(96);
    let ratio = coarse / fine;
    let pass = (3.6..=4.4).contains(&ratio);
    report(
        2,
        "order of accuracy",
        pass,
        &format!("max errors {coarse:.3e} -> {fine:.3e}, ratio {ratio:.3} (need 3.6..4.4)"),
    );
    assert!(pass, "observed convergence ratio {ratio}");
}

/// Criterion 3 — stationary-profile fidelity. KNOWN FAILURE, kept faithful.
///
/// The sampled continuum kink tanh(x/2) solves the continuum equation
/// exactly, but on the dx = 0.2 grid pinned by this criterion it is NOT the
/// stationary state of the discrete operator: the run relaxes toward the
/// nearby *discrete* kink, which sits ~5.2e-4 away in max norm — five times
/// the 1e-4 tolerance. Measurements behind that conclusion:
///
/// * the drift is monotone in time toward a fixed profile (a relaxation, not
///   an instability), and its size scales as dx² (1.3e-4 at dx = 0.1,
///   3.2e-5 at dx = 0.05) — meeting 1e-4 needs dx <~ 0.09 or a fourth-order
///   stencil, both of which contradict the pinned discretization;
/// * sweeping the latent heat up to 50 floors the drift at 1.8e-4 (stiffer
///   coupling pins the front but not the profile shape); larger values hit
///   the coupling instability (latent_heat * dt >~ 0.5 diverges) below the
///   diffusive CFL bound, so no stable parameter choice reaches 1e-4.
///
/// The enthalpy half of the criterion passes and is asserted; conservation
/// is measured against the field scale Σ(|u| + ℓ|φ|/2)·dx because the signed
/// total Σ(u + ℓφ/2)·dx of an odd profile is ~0, making a ratio to it
/// meaningless.
#[test]
fn criterion_03_stationary_profile_fidelity() {
    let dx = 0.2;
    let spec = GridSpec::new_1d(200, dx).unwrap(); // x - 20 spans [-20, 20]
    let p = CaginalpParams { latent_heat: 1.0 };
    let mut phi = Field::from_fn(spec, |x, _| ((x - 20.0) / 2.0).tanh());
    phi.apply_boundary(ZF);
    let mut u = Field::new(spec, 0.0);
    let phi0 = phi.clone();

    let scale: f64 = u.interior_sum(f64::abs) * spec.cell_area()
        + 0.5 * p.latent_heat * phi.interior_sum(f64::abs) * spec.cell_area();
    let h0 = total_enthalpy(&u, &phi, p.latent_heat).unwrap();

    let dt = 0.5 * cfl_max_dt(1.0, &spec).unwrap();
    for _ in 0..1000 {
        let (u1, phi1) = caginalp_step(&u, &phi, &p, dt, ZF).unwrap();
        u = u1;
        phi = phi1;
    }

    let mut drift: f64 = 0.0;
    for i in 1..=spec.nx() {
        drift = drift.max((phi.get(i, 1) - phi0.get(i, 1)).abs());
    }
    let h1 = total_enthalpy(&u, &phi, p.latent_heat).unwrap();
    let enthalpy_rel = (h1 - h0).abs() / scale;

    let drift_ok = drift <= 1e-4;
    let enthalpy_ok = enthalpy_rel <= 1e-10;
    report(
        3,
        "stationary-profile fidelity",
        drift_ok && enthalpy_ok,
        &format!(
            "max drift {drift:.3e} (tolerance 1e-4; fails: the sampled kink \
             relaxes to the discrete kink ~5.2e-4 away at dx = 0.2); \
             enthalpy drift {enthalpy_rel:.3e} relative to field scale \
             (tolerance 1e-10, passes)"
        ),
    );
    assert!(
        enthalpy_ok,
        "enthalpy conservation failed: {enthalpy_rel:.3e}"
    );
    assert!(
        drift_ok,
        "known failure (see comment): drift {drift:.3e} > 1e-4 at the pinned dx = 0.2"
    );
}

/// One symmetric double-front melt run: liquid (phi = +1, u = 1) near both
/// walls, solid (phi = -1, u = 0) in the middle, so the single Dirichlet(+1)
/// boundary value is consistent for both fields. Returns ~400 samples of
/// (time, melted depth per front).
fn melt_front_history(stefan: f64, dx: f64, t_end: f64) -> (Vec<f64>, Vec<f64>) {
    let p = CaginalpParams {
        latent_heat: 1.0 / stefan,
    };
    let beta_target = neumann_beta(stefan).unwrap();
    let x0 = 4.0;
    let half_len = x0 + beta_target * t_end.sqrt() + 12.0;
    let nx = (2.0 * half_len / dx).round() as usize;
    let spec = GridSpec::new_1d(nx, dx).unwrap();
    let far_wall = 2.0 * half_len - x0;

    let profile =
        |x: f64| ((x0 - x) / 2.0).tanh() + ((x - far_wall) / 2.0).tanh() + 1.0;
    let mut phi = Field::from_fn(spec, |x, _| profile(x));
    let mut u = Field::from_fn(spec, |x, _| 0.5 * (1.0 + profile(x)));
    let bc = BoundaryCondition::Dirichlet(1.0);
    phi.apply_boundary(bc);
    u.apply_boundary(bc);

    let dt = 0.5 * cfl_max_dt(1.0, &spec).unwrap();
    let nsteps = (t_end / dt).round() as u64;
    let record_every = (nsteps / 400).max(1);

    let mut times = Vec::new();
    let mut fronts = Vec::new();
    for step in 1..=nsteps {
        let (u1, phi1) = caginalp_step(&u, &phi, &p, dt, bc).unwrap();
        u = u1;
        phi = phi1;
        if step % record_every == 0 {
            // The +1 phase is the liquid; two fronts share the melted volume.
            let melted = phase_volume(&phi, PhaseConvention::SolidOne);
            times.push(step as f64 * dt);
            fronts.push(melted / 2.0);
        }
    }
    (times, fronts)
}

fn sqrt_law_error(stefan: f64, dx: f64, t_end: f64) -> (f64, f64) {
    let (times, fronts) = melt_front_history(stefan, dx, t_end);
    let cut = 0.5 * times[times.len() - 1];
    let keep: Vec<usize> = (0..times.len()).filter(|&k| times[k] >= cut).collect();
    let ts: Vec<f64> = keep.iter().map(|&k| times[k]).collect();
    let ss: Vec<f64> = keep.iter().map(|&k| fronts[k]).collect();
    match fit_sqrt_growth(&ts, &ss).unwrap() {
        FitOutcome::Fit(fit) => {
            let target = neumann_beta(stefan).unwrap();
            ((fit.beta - target).abs() / target, fit.r_squared)
        }
        FitOutcome::Degenerate { slope, .. } => {
            panic!("melt front did not grow (slope {slope})")
        }
    }
}

/// Criterion 4 — square-root-of-time front law. A melting run's front depth
/// must follow s(t) ~ beta sqrt(t) with r² > 0.99, beta within 20% of the
/// classical similarity constant for the run's Stefan number, and the match
/// must improve when dx is halved.
#[test]
fn criterion_04_sqrt_front_law() {
    let mut all_pass = true;
    let mut details = String::new();
    for (stefan, t_end) in [(0.1, 1600.0), (0.5, 800.0)] {
        let (err_coarse, r2_coarse) = sqrt_law_error(stefan, 0.4, t_end);
        let (err_fine, r2_fine) = sqrt_law_error(stefan, 0.2, t_end);
        let pass = r2_coarse > 0.99
            && r2_fine > 0.99
            && err_coarse < 0.20
            && err_fine < 0.20
            && err_fine <= err_coarse;
        all_pass &= pass;
        details.push_str(&format!(
            "St={stefan}: beta error {:.2}% -> {:.2}% on refinement (need < 20%, \
             improving), r² {:.5}/{:.5}; ",
            100.0 * err_coarse,
            100.0 * err_fine,
            r2_coarse,
            r2_fine
        ));
    }
    report(4, "sqrt-of-time front law", all_pass, details.trim_end());
    assert!(all_pass, "{details}");
}

/// Shared run for criteria 5 and 6: a biased-front disk on the [0, 1]
/// convention grows over 100 steps; volumes and 10-90% interface widths
/// (in cells) are sampled every 20 steps.
fn disk_growth_run() -> (Vec<(u64, f64)>, Vec<(u64, f64)>) {
    let spec = GridSpec::new(100, 100, 0.4, 0.4).unwrap();
    let p = AllenCahnParams {
        mobility: 1.0,
        beta: 0.1,
        g_const: 1.0,
    };
    let mut phi = Field::new(spec, 0.0);
    seed_disk(&mut phi, 20.0, 20.0, 10.0, 1.0, 0.0, SQRT_2).unwrap();
    phi.apply_boundary(ZF);

    let dt = 0.5 * cfl_max_dt(p.mobility, &spec).unwrap();
    let mut volumes = Vec::new();
    let mut widths = Vec::new();
    for step in 1..=100u64 {
        phi = allen_cahn_step(&phi, &p, dt, ZF).unwrap();
        if step % 20 == 0 {
            volumes.push((step, phase_volume(&phi, PhaseConvention::UnitInterval)));
            widths.push((step, center_row_width_cells(&phi)));
        }
    }
    (volumes, widths)
}

/// 10-90% interface width along the center row, from the disk center
/// rightward, in units of cells. The half-row is monotone from ~1 at the
/// center to ~0 at the wall, so both level crossings are unique.
fn center_row_width_cells(phi: &Field) -> f64 {
    let spec = phi.spec();
    let (nx, ny) = (spec.nx(), spec.ny());
    let row_j = ny / 2 + 1;
    let half_n = nx - nx / 2;
    let line = GridSpec::new_1d(half_n, spec.dx()).unwrap();
    let mut row = Field::new(line, 0.0);
    for (k, i) in ((nx / 2 + 1)..=nx).enumerate() {
        row.set(k + 1, 1, phi.get(i, row_j));
    }
    row.apply_boundary(ZF);
    interface_width(&row, 0.1, 0.9).unwrap() / spec.dx()
}

/// Criterion 5 — volume growth trend. The biased-front disk's volume must
/// increase strictly at every 20-step sample with a linear-in-step fit of
/// r² > 0.99 (constant growth rate, matching the reported trend of roughly
/// equal per-interval volume increments).
#[test]
fn criterion_05_disk_volume_growth_trend() {
    let (volumes, _) = disk_growth_run();
    let monotone = volumes.windows(2).all(|w| w[1].1 > w[0].1);
    let steps: Vec<f64> = volumes.iter().map(|&(s, _)| s as f64).collect();
    let vols: Vec<f64> = volumes.iter().map(|&(_, v)| v).collect();
    let r2 = linear_fit_r2(&steps, &vols);
    let pass = monotone && r2 > 0.99;
    report(
        5,
        "disk volume growth trend",
        pass,
        &format!(
            "volumes {:?} (strictly increasing: {monotone}), linear r² = {r2:.6} \
             (need > 0.99)",
            vols.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>()
        ),
    );
    assert!(pass, "volumes {vols:?}, monotone {monotone}, r² {r2}");
}

/// Criterion 6 — interface sharpness. In the same run, the 10-90% interface
/// width must stay below 10 cells and must not grow after the first 20% of
/// the steps (the profile is relaxed by then; a quarter-cell allowance
/// covers contour-sampling wiggle).
#[test]
fn criterion_06_interface_stays_sharp() {
    let (_, widths) = disk_growth_run();
    let bounded = widths.iter().all(|&(_, w)| w < 10.0);
    let reference = widths[0].1; // sample at step 20 = first 20% of the run
    let no_growth = widths[1..].iter().all(|&(_, w)| w <= reference + 0.25);
    let pass = bounded && no_growth;
    report(
        6,
        "interface stays sharp",
        pass,
        &format!(
            "widths (cells) {:?}; all < 10: {bounded}; none above the step-20 \
             width {reference:.2} + 0.25: {no_growth}",
            widths.iter().map(|&(_, w)| (w * 100.0).round() / 100.0).collect::<Vec<_>>()
        ),
    );
    assert!(pass, "widths {widths:?}");
}

/// Front speed from a single 1D snapshot: the level-set identity
/// V = −φ_t/φ_x evaluated at the zero-crossing cell, with φ_t taken from the
/// model's own discrete right-hand side and φ_x from the central difference —
/// the same operators the moving-frame residual uses, so the estimate is
/// discretization-consistent with the steady-frame equations.
fn pointwise_front_speed(phi: &Field, u: &Field, p: &KarmaRappelParams) -> f64 {
    let frozen = MovingFrameParams {
        base: *p,
        velocity: 0.0,
        u_far: 0.0,
    };
    // At V = 0 the frame residual is exactly tau * phi_t of the lab equation.
    let (r_phi, _) = moving_frame_residual(phi, u, &frozen).unwrap();
    let phi_x = first_derivative(phi, Axis::X).unwrap();
    let nx = phi.spec().nx();
    let mut cell = None;
    for i in 1..nx {
        let a = phi.get(i, 1);
        let b = phi.get(i + 1, 1);
        if a == 0.0 || a * b < 0.0 {
            cell = Some(if a.abs() <= b.abs() { i } else { i + 1 });
            break;
        }
    }
    let i = cell.expect("no zero crossing in the profile");
    let phi_t = r_phi.get(i, 1) / p.tau;
    -phi_t / phi_x.get(i, 1)
}

/// Criterion 7 — moving-frame consistency. A thin-interface lab run with a
/// superheated far field settles to steady front motion; its measured speed
/// must be a velocity at which the steady-frame relaxation converges
/// (max residual <= 1e-3), while double that velocity must leave the
/// residual at least 10x larger on the same iteration budget.
#[test]
fn criterion_07_moving_frame_consistency() {
    let p = KarmaRappelParams {
        tau: 1.0,
        width: 1.0,
        lambda: 1.0,
        diffusivity: 1.0,
    };

    // Lab run: superheated liquid (u_far = 1.5) drives steady solidification;
    // by t = 80 the front speed has settled to four digits.
    let u_far = 1.5;
    let spec = GridSpec::new_1d(1000, 0.1).unwrap(); // domain [0, 100]
    let x0 = 20.0;
    let mut phi = Field::from_fn(spec, |x, _| ((x - x0) / SQRT_2).tanh());
    let mut u = Field::from_fn(spec, |x, _| u_far * 0.5 * (1.0 + ((x - x0) / SQRT_2).tanh()));
    phi.apply_boundary(ZF);
    u.apply_boundary(ZF);

    let stiffest = (p.width * p.width / p.tau).max(p.diffusivity);
    let dt = 0.5 * cfl_max_dt(stiffest, &spec).unwrap();
    let steps = (80.0 / dt).round() as u64;
    for _ in 0..steps {
        let (phi1, u1) = karma_rappel_step(&phi, &u, &p, dt, ZF).unwrap();
        phi = phi1;
        u = u1;
    }
    let v_meas = pointwise_front_speed(&phi, &u, &p);

    // Steady-frame relaxation at the measured velocity must converge.
    let relax_spec = GridSpec::new_1d(600, 0.1).unwrap(); // domain [0, 60]
    let tol = 1e-3;
    let at_v = MovingFrameParams {
        base: p,
        velocity: v_meas,
        u_far,
    };
    let converged = moving_frame_relax(&at_v, relax_spec, tol, 200_000).unwrap();

    // At twice the velocity, the same iteration budget must leave the
    // residual at least an order of magnitude larger.
    let at_2v = MovingFrameParams {
        velocity: 2.0 * v_meas,
        ..at_v
    };
    let doubled = moving_frame_relax(&at_2v, relax_spec, tol, converged.iterations).unwrap();

    let ratio = doubled.residual / converged.residual;
    let pass = converged.converged && converged.residual <= tol && ratio >= 10.0;
    report(
        7,
        "moving-frame consistency",
        pass,
        &format!(
            "V_meas = {v_meas:.6}; relax residual {:.3e} in {} iterations \
             (converged: {}); at 2V residual {:.3e} after {} iterations; \
             ratio {:.1}x (need >= 10x)",
            converged.residual,
            converged.iterations,
            converged.converged,
            doubled.residual,
            doubled.iterations,
            ratio
        ),
    );
    assert!(
        converged.converged && converged.residual <= tol,
        "relaxation did not converge at V_meas = {v_meas}: residual {}",
        converged.residual
    );
    assert!(
        ratio >= 10.0,
        "doubled velocity should be clearly non-steady; residual ratio {ratio}"
    );
}

/// One dissolution/precipitation run from a centered solid disk in a uniform
/// concentration bath. Returns (mean radii, asymmetries) every 50 steps.
fn dissolution_history(c0: f64) -> (Vec<f64>, Vec<f64>) {
    let spec = GridSpec::new(120, 120, 0.4, 0.4).unwrap();
    let p = DissolutionParams {
        peclet: 1.0,
        lambda: 2.0,
        alpha: 0.2,
        damkohler: 1.0,
        eps_grad: 1e-8,
    };
    let mut phi = Field::new(spec, 1.0);
    seed_disk(&mut phi, 24.0, 24.0, 10.0, -1.0, 1.0, SQRT_2).unwrap();
    phi.apply_boundary(ZF);
    let mut c = Field::new(spec, c0);

    let stiffest = (1.0 / p.peclet).max(1.0);
    let dt = 0.5 * cfl_max_dt(stiffest, &spec).unwrap();
    let mut radii = Vec::new();
    let mut asyms = Vec::new();
    for step in 1..=500u32 {
        let (phi1, c1) = dissolution_step(&phi, &c, &p, dt, ZF).unwrap();
        phi = phi1;
        c = c1;
        if step % 50 == 0 {
            radii.push(mean_radius(&phi, 0.0).unwrap());
            asyms.push(radial_asymmetry(&phi, 0.0).unwrap());
        }
    }
    (radii, asyms)
}

/// Criterion 8 — dissolution symmetry and monotone radius. A centered solid
/// disk must stay radially symmetric (asymmetry <= 0.05 at every sample over
/// 500 steps) while its mean radius shrinks monotonically in an
/// undersaturated bath and grows monotonically in a supersaturated one.
#[test]
fn criterion_08_dissolution_symmetry_and_monotone_radius() {
    let (shrink, shrink_asym) = dissolution_history(-0.15);
    let (grow, grow_asym) = dissolution_history(0.15);

    let shrinks = shrink.windows(2).all(|w| w[1] < w[0]);
    let grows = grow.windows(2).all(|w| w[1] > w[0]);
    let worst_asym = shrink_asym
        .iter()
        .chain(grow_asym.iter())
        .fold(0.0f64, |m, &a| m.max(a));
    let pass = shrinks && grows && worst_asym <= 0.05;
    report(
        8,
        "dissolution symmetry",
        pass,
        &format!(
            "undersaturated radius {:.2} -> {:.2} (monotone shrink: {shrinks}); \
             supersaturated {:.2} -> {:.2} (monotone growth: {grows}); worst \
             asymmetry {worst_asym:.4} (need <= 0.05)",
            shrink[0],
            shrink[shrink.len() - 1],
            grow[0],
            grow[grow.len() - 1]
        ),
    );
    assert!(pass, "shrink {shrink:?}, grow {grow:?}, asym {worst_asym}");
}

/// Unique scratch directory for driver-level criteria, removed on drop.
struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!(
            "phasefield_acceptance_{tag}_{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn outdir(&self) -> String {
        self.0.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

const GUARD_BASE: &str = "\
model = caginalp
grid.nx = 64
grid.dx = 0.25
params.latent_heat = 1.0
nsteps = 10000
output_every = 1000
seed.kind = front_1d
seed.x0 = 8.0
seed.width = 1.0
";

/// Criterion 9 — stability guard. A run with an explicit dt at twice the CFL
/// bound must refuse to start (or abort on the finiteness detector), while
/// dt at half the bound must complete 10^4 steps with every field finite.
#[test]
fn criterion_09_stability_guard() {
    let spec = GridSpec::new_1d(64, 0.25).unwrap();
    let bound = cfl_max_dt(1.0, &spec).unwrap();

    let reckless_dir = Scratch::new("c09_reckless");
    let reckless = parse_config(&format!(
        "{GUARD_BASE}dt = {}\noutdir = {}\n",
        2.0 * bound,
        reckless_dir.outdir()
    ))
    .unwrap();
    let outcome = run_simulation(&reckless);
    let guarded = matches!(
        outcome,
        Err(Error::Stability { .. }) | Err(Error::NumericalInstability { .. })
    );

    let safe_dir = Scratch::new("c09_safe");
    let safe = parse_config(&format!(
        "{GUARD_BASE}dt = {}\noutdir = {}\n",
        0.5 * bound,
        safe_dir.outdir()
    ))
    .unwrap();
    let records = run_simulation(&safe);
    let completed = match &records {
        Ok(rs) => {
            rs.len() == 11
                && rs.last().is_some_and(|r| r.step == 10_000)
                && rs.iter().all(|r| {
                    r.volume.is_finite()
                        && r.enthalpy.is_some_and(f64::is_finite)
                })
        }
        Err(_) => false,
    };

    let pass = guarded && completed;
    report(
        9,
        "stability guard",
        pass,
        &format!(
            "dt = 2x bound: {} (need refusal or abort); dt = 0.5x bound: \
             10^4 steps {} with finite fields",
            match &outcome {
                Err(e) => format!("refused ({e})"),
                Ok(_) => "ran to completion".to_string(),
            },
            if completed { "completed" } else { "did not complete" }
        ),
    );
    assert!(pass, "guarded: {guarded}, completed: {completed}");
}

/// Criterion 10 — determinism. Two runs of an identical config (differing
/// only in output directory) must produce byte-identical CSV artifacts.
#[test]
fn criterion_10_byte_identical_reruns() {
    let make = |dir: &Scratch| {
        parse_config(&format!(
            "model = caginalp\n\
             grid.nx = 96\n\
             grid.dx = 0.25\n\
             params.latent_heat = 2.0\n\
             nsteps = 200\n\
             output_every = 20\n\
             seed.kind = front_1d\n\
             seed.x0 = 12.0\n\
             seed.width = 1.0\n\
             seed.u0 = 0.25\n\
             outdir = {}\n",
            dir.outdir()
        ))
        .unwrap()
    };
    let d1 = Scratch::new("c10_first");
    let d2 = Scratch::new("c10_second");
    run_simulation(&make(&d1)).unwrap();
    run_simulation(&make(&d2)).unwrap();

    let artifacts = [
        "timeseries.csv",
        "phi_000000.csv",
        "phi_000200.csv",
        "u_000000.csv",
        "u_000200.csv",
    ];
    let mut all_equal = true;
    for name in artifacts {
        let a = std::fs::read(d1.0.join(name)).unwrap();
        let b = std::fs::read(d2.0.join(name)).unwrap();
        all_equal &= a == b;
    }
    report(
        10,
        "byte-identical reruns",
        all_equal,
        &format!(
            "{} artifacts compared byte-for-byte across two runs of the same \
             config",
            artifacts.len()
        ),
    );
    assert!(all_equal, "artifacts differ between identical runs");
}
