//! Scalar functionals of the solution: the filtered energy, norms,
//! maximum-principle tracking, the blow-up indicator and the strong
//! convergence error metric.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::model::{recover_theta, State};

/// Per-time scalar diagnostics of a run. Serialized downstream as one CSV
/// row with the columns in this exact order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `E(t) = int theta^2 + alpha^2 |grad theta|^2 dx`; conserved by the
    /// semi-discrete dynamics.
    pub energy_modified: f64,
    pub l2: f64,
    pub grad_l2: f64,
    pub linf_max: f64,
    pub linf_min: f64,
    /// `alpha * ||grad theta||_{L2}` — the quantity whose positive
    /// `alpha -> 0` limit signals finite-time blow-up.
    pub blowup_indicator: f64,
    /// Squared form `alpha^2 ||grad theta||^2_{L2}`.
    pub blowup_indicator_sq: f64,
    pub mean: f64,
}

impl DiagnosticsRecord {
    /// Measures every diagnostic of `state` (pointwise extrema are taken on
    /// the physical grid after an inverse transform).
    pub fn measure(state: &State) -> Result<Self, Error> {
        let alpha = state.params.alpha;
        let theta = recover_theta(state);
        let l2_sq = theta.l2_norm_sq();
        let grad_sq = theta.grad_norm_sq();
        let phys = theta.inverse()?;
        let record = DiagnosticsRecord {
            t: state.t,
            energy_modified: l2_sq + alpha * alpha * grad_sq,
            l2: libm::sqrt(l2_sq),
            grad_l2: libm::sqrt(grad_sq),
            linf_max: phys.max(),
            linf_min: phys.min(),
            blowup_indicator: alpha * libm::sqrt(grad_sq),
            blowup_indicator_sq: alpha * alpha * grad_sq,
            mean: theta.mean(),
        };
        if !record.is_finite() {
            return Err(Error::overflow().map_overflow(|i| i.at_time(state.t)));
        }
        Ok(record)
    }

    pub fn is_finite(&self) -> bool {
        [
            self.t,
            self.energy_modified,
            self.l2,
            self.grad_l2,
            self.linf_max,
            self.linf_min,
            self.blowup_indicator,
            self.blowup_indicator_sq,
            self.mean,
        ]
        .iter()
        .all(|v| v.is_finite())
    }

    /// `max(|theta|)` over the grid at this time.
    pub fn linf(&self) -> f64 {
        self.linf_max.abs().max(self.linf_min.abs())
    }
}

/// `int theta^2 + alpha^2 |grad theta|^2 dx`, evaluated spectrally.
pub fn modified_energy(theta: &SpectralField, alpha: f64) -> f64 {
    theta.l2_norm_sq() + alpha * alpha * theta.grad_norm_sq()
}

/// The linear blow-up indicator `alpha * ||grad theta||_{L2}`.
pub fn blowup_indicator(theta: &SpectralField, alpha: f64) -> Result<f64, Error> {
    if !(alpha > 0.0) {
        return Err(Error::Config(format!("blowup indicator needs alpha > 0, got {alpha}")));
    }
    Ok(alpha * theta.grad_norm())
}

/// Squared form `alpha^2 ||grad theta||^2_{L2}`.
pub fn blowup_indicator_sq(theta: &SpectralField, alpha: f64) -> Result<f64, Error> {
    if !(alpha > 0.0) {
        return Err(Error::Config(format!("blowup indicator needs alpha > 0, got {alpha}")));
    }
    Ok(alpha * alpha * theta.grad_norm_sq())
}

/// Outcome of checking a diagnostics series against the maximum principle
/// `||theta(t)||_inf <= ||theta_0||_inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxPrincipleReport {
    /// Largest `||theta(t)||_inf` seen along the series.
    pub sup_linf: f64,
    /// `sup_linf - ||theta_0||_inf`; positive values are violations.
    pub violation: f64,
    /// Most negative value attained, reported when the series starts from
    /// nonnegative data (where the principle also asserts positivity).
    pub positivity_floor: Option<f64>,
}

impl MaxPrincipleReport {
    pub fn violated(&self, tolerance: f64) -> bool {
        self.violation > tolerance
    }
}

/// Scans a diagnostics series for maximum-principle violations relative to
/// `theta0_linf`.
pub fn max_principle_report(
    series: &[DiagnosticsRecord],
    theta0_linf: f64,
) -> Result<MaxPrincipleReport, Error> {
    if series.is_empty() {
        return Err(Error::Config("max principle report needs a nonempty series".into()));
    }
    let sup_linf = series.iter().fold(0.0f64, |m, r| m.max(r.linf()));
    let initial_min = series[0].linf_min;
    let positivity_floor = if initial_min >= 0.0 {
        Some(series.iter().fold(f64::INFINITY, |m, r| m.min(r.linf_min)))
    } else {
        None
    };
    Ok(MaxPrincipleReport { sup_linf, violation: sup_linf - theta0_linf, positivity_floor })
}

/// Strong-convergence error functional
/// `||a - b||^2_{L2} + alpha^2 ||grad(a - b)||^2_{L2}`.
pub fn convergence_metric(
    theta_a: &SpectralField,
    theta_b: &SpectralField,
    alpha: f64,
) -> Result<f64, Error> {
    if !theta_a.grid().compatible(theta_b.grid()) {
        return Err(Error::Config(format!(
            "grid mismatch: n={} vs n={} (pad one field first)",
            theta_a.grid().n(),
            theta_b.grid().n()
        )));
    }
    let diff = theta_a.sub(theta_b);
    Ok(modified_energy(&diff, alpha))
}

/// Zero-padded embedding of a field into a finer grid; physical samples at
/// common points are preserved (Nyquist content is split evenly between the
/// `+n/2` and `-n/2` lines of the target so the embedded field stays real).
pub fn spectral_pad(field: &SpectralField, n_target: usize) -> Result<SpectralField, Error> {
    let n = field.grid().n();
    if n_target < n {
        return Err(Error::Config(format!(
            "spectral_pad cannot shrink n={n} to n_target={n_target}"
        )));
    }
    if n_target == n {
        return Ok(field.clone());
    }
    let target_grid = Grid::new(n_target)?;
    let mut out = SpectralField::zeros(&target_grid);
    let nyq = -(n as i64) / 2;
    // Per-axis images of a source wavenumber on the target grid.
    let images = |k: i64| -> ([(i64, f64); 2], usize) {
        if k == nyq {
            ([(nyq, 0.5), (-nyq, 0.5)], 2)
        } else {
            ([(k, 1.0), (0, 0.0)], 1)
        }
    };
    for a in 0..n {
        for b in 0..n {
            let (k1, k2) = field.grid().wavevector(a, b);
            let c = field.coeffs()[a * n + b];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let (im1, n1) = images(k1);
            let (im2, n2) = images(k2);
            for &(t1, w1) in &im1[..n1] {
                for &(t2, w2) in &im2[..n2] {
                    let prev = out.coeff(t1, t2);
                    out.set_coeff(t1, t2, prev + c * (w1 * w2));
                }
            }
        }
    }
    Ok(out)
}

/// Isotropic shell sums `E_m = sum_{m - 1/2 <= |k| < m + 1/2} |theta_hat(k)|^2`
/// for `m = 1 .. n/2`.
pub fn energy_spectrum(theta: &SpectralField) -> Vec<(usize, f64)> {
    let n = theta.grid().n();
    let mut shells = alloc::vec![0.0f64; n / 2 + 1];
    for a in 0..n {
        for b in 0..n {
            let (k1, k2) = theta.grid().wavevector(a, b);
            if k1 == 0 && k2 == 0 {
                continue;
            }
            let mag = libm::sqrt((k1 * k1 + k2 * k2) as f64);
            let m = libm::floor(mag + 0.5) as usize;
            if (1..=n / 2).contains(&m) {
                shells[m] += theta.coeffs()[a * n + b].norm_sqr();
            }
        }
    }
    (1..=n / 2).map(|m| (m, shells[m])).collect()
}
