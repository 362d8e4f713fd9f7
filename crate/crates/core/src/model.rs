//! Right-hand side of the regularized SQG system.
//!
//! The prognostic variable is the filtered scalar `theta_tilde`; each
//! evaluation recovers `theta` through the Helmholtz filter, derives the
//! divergence-free velocity from the mean-free part of `theta`, and forms
//! the transport term `div(v theta)` pseudo-spectrally with 2/3-rule
//! dealiasing. At `alpha = 0` this reduces to the plain (Galerkin-truncated)
//! SQG right-hand side.

use alloc::format;

use crate::error::Error;
use crate::field::{PhysicalField, SpectralField};
use crate::grid::Grid;

/// Model parameters: the regularization length `alpha` and whether the
/// quadratic term is dealiased (kept on except for experiments).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub dealias_nonlinearity: bool,
}

impl ModelParams {
    /// `alpha` must lie in `[0, 1]`; `alpha = 0` selects the unregularized
    /// equations.
    pub fn new(alpha: f64) -> Result<Self, Error> {
        if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Config(format!("alpha={alpha} outside [0, 1]")));
        }
        Ok(ModelParams { alpha, dealias_nonlinearity: true })
    }

    pub fn without_dealiasing(mut self) -> Self {
        self.dealias_nonlinearity = false;
        self
    }
}

/// Prognostic state: `theta_tilde` in spectral form plus the simulation time.
#[derive(Debug, Clone)]
pub struct State {
    pub theta_tilde: SpectralField,
    pub t: f64,
    pub params: ModelParams,
}

impl State {
    pub fn new(theta_tilde: SpectralField, params: ModelParams) -> Self {
        State { theta_tilde, t: 0.0, params }
    }

    /// Builds the state from the unfiltered initial scalar `theta0`, i.e.
    /// `theta_tilde(0) = (1 - alpha^2 Delta) theta0`.
    pub fn from_initial_theta(theta0: &SpectralField, params: ModelParams) -> Self {
        State { theta_tilde: theta0.helmholtz_apply(params.alpha), t: 0.0, params }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        self.theta_tilde.grid()
    }
}

/// `theta = (1 - alpha^2 Delta)^{-1} theta_tilde`; the identity at alpha = 0.
pub fn recover_theta(state: &State) -> SpectralField {
    state.theta_tilde.helmholtz_inverse(state.params.alpha)
}

/// Velocity from the scalar: `v = perp_grad((-Delta)^{-1/2} theta)`, using
/// the mean-free part of `theta`. Divergence-free and mean-free by
/// construction.
pub fn velocity(theta: &SpectralField) -> (SpectralField, SpectralField) {
    theta.inv_frac_laplacian_half().perp_gradient()
}

/// Pseudo-spectral `div(v theta)`: inverse-transform the inputs, multiply
/// pointwise, transform back and apply the spectral divergence. Inputs are
/// expected band-limited to the dealias mask; with `dealias_output` the
/// result is truncated to the mask as well, making the quadratic term an
/// exact Galerkin truncation. The zero mode of the output vanishes
/// identically, so the mean of the scalar is conserved in floating point.
pub fn nonlinear_divergence(
    theta: &SpectralField,
    velocity: (&SpectralField, &SpectralField),
    dealias_output: bool,
) -> Result<SpectralField, Error> {
    let (vx, vy) = velocity;
    let grid = theta.grid().clone();
    let theta_p = theta.inverse()?;
    let vx_p = vx.inverse()?;
    let vy_p = vy.inverse()?;

    let n = grid.n();
    let mut prod_x = alloc::vec::Vec::with_capacity(n * n);
    let mut prod_y = alloc::vec::Vec::with_capacity(n * n);
    let mut finite = true;
    for i in 0..n * n {
        let px = vx_p.values()[i] * theta_p.values()[i];
        let py = vy_p.values()[i] * theta_p.values()[i];
        finite &= px.is_finite() && py.is_finite();
        prod_x.push(px);
        prod_y.push(py);
    }
    if !finite {
        return Err(Error::overflow());
    }

    let fx = PhysicalField::from_values(&grid, prod_x)?.forward();
    let fy = PhysicalField::from_values(&grid, prod_y)?.forward();
    let (dx, _) = fx.gradient();
    let (_, dy) = fy.gradient();
    let div = dx.add_scaled(1.0, &dy);
    Ok(if dealias_output { div.dealias() } else { div })
}

/// The full right-hand side `F(theta_tilde) = -div(v theta)`.
pub fn rhs(state: &State) -> Result<SpectralField, Error> {
    let dealias = state.params.dealias_nonlinearity;
    let theta = recover_theta(state);
    let theta = if dealias { theta.dealias() } else { theta };
    let (vx, vy) = velocity(&theta);
    let div = nonlinear_divergence(&theta, (&vx, &vy), dealias)
        .map_err(|e| e.map_overflow(|info| info.at_time(state.t)))?;
    Ok(div.scale(-1.0))
}
