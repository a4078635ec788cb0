//! Finite-difference phase-field solvers for interface-motion problems.
//!
//! The crate couples a smooth order parameter ("phase field") to a diffusing
//! scalar (temperature or concentration) on uniform 1D/2D grids and provides:
//!
//! * [`grid`] — grid geometry, ghost-padded fields, boundary conditions, and
//!   initial-condition seeding helpers;
//! * [`stencils`] — centered finite-difference operators (Laplacian,
//!   derivatives, gradient magnitude, curvature), explicit Euler updates, and
//!   the diffusive CFL bound;
//! * [`models`] — time steppers for four interface models (conserved-heat
//!   solidification, curvature-driven fronts with bias, a thin-interface
//!   solidification model, and dissolution/precipitation with a reaction-rate
//!   correction) plus a moving-frame steady-profile relaxation solver;
//! * [`analysis`] — diagnostics: phase volume, interface position/width,
//!   enthalpy, square-root-of-time growth fits, the classical one-phase
//!   similarity constant, and radial shape metrics;
//! * [`config`] — key/value run-configuration parsing;
//! * [`output`] — CSV writers/readers for time series and field snapshots;
//! * [`run`] — the simulation driver that wires the above together.
//!
//! All solvers are explicit in time, deterministic, and refuse time steps
//! that violate the diffusive stability bound.

pub mod analysis;
pub mod config;
pub mod error;
pub mod grid;
pub mod models;
pub mod output;
pub mod run;
pub mod stencils;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
