//! Pseudo-spectral solver core for the inviscid alpha-regularized surface
//! quasi-geostrophic (SQG) equation on the periodic unit square.
//!
//! The regularized system evolves the filtered scalar `theta_tilde = (1 - alpha^2 Delta) theta`:
//!
//! ```text
//! d/dt theta_tilde + div(v theta) = 0
//! (1 - alpha^2 Delta) theta       = theta_tilde
//! (-Delta)^{1/2} psi              = theta
//! v                               = (-d/dy psi, d/dx psi)
//! ```
//!
//! All operators are Fourier multipliers in the basis `exp(2 pi i k . x)` on
//! `[0,1]^2`, so the physical wavevector of integer mode `k` is `2 pi k`.
//! Instead of dissipating small scales, the Helmholtz filter penalizes them
//! energetically: the quantity `int theta^2 + alpha^2 |grad theta|^2` is
//! conserved exactly by the semi-discrete dynamics, which is what makes the
//! `alpha -> 0` indicator `alpha * ||grad theta||_{L2}` usable as a finite-time
//! singularity test for the unregularized equation.
//!
//! This crate is `no_std` (with `alloc`); all IO, file formats and the CLI
//! live in the companion `sqg-cli` crate.

#![no_std]
// Guards of the form `!(x > 0.0)` are deliberate: they reject NaN together
// with out-of-range values, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod blowup;
pub mod diagnostics;
pub mod error;
pub mod field;
mod fft;
pub mod grid;
pub mod model;
pub mod timestepper;

pub use blowup::{blowup_verdict, epsilon_sup, estimate_liminf, LiminfEstimate, Verdict};
pub use diagnostics::DiagnosticsRecord;
pub use error::Error;
pub use field::{PhysicalField, SpectralField};
pub use grid::Grid;
pub use model::{ModelParams, State};
pub use timestepper::IntegratorConfig;
