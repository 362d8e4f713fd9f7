//! Real fields on the grid and their Fourier-space counterparts, together
//! with every multiplier operator the regularized dynamics needs.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::error::Error;
use crate::grid::Grid;

const TWO_PI: f64 = 2.0 * PI;
/// Conjugate-symmetry defects beyond this are rejected by `inverse`.
const SYMMETRY_TOL: f64 = 1e-10;

/// Real scalar sampled at the grid points `(i*dx, j*dx)`, row-major in `i`.
#[derive(Debug, Clone)]
pub struct PhysicalField {
    grid: Grid,
    values: Vec<f64>,
}

impl PhysicalField {
    pub fn zeros(grid: &Grid) -> Self {
        PhysicalField { grid: grid.clone(), values: vec![0.0; grid.n() * grid.n()] }
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let dx = grid.dx();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            let x = i as f64 * dx;
            for j in 0..n {
                values.push(f(x, j as f64 * dx));
            }
        }
        PhysicalField { grid: grid.clone(), values }
    }

    /// Wraps raw samples; all values must be finite.
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self, Error> {
        let n = grid.n();
        if values.len() != n * n {
            return Err(Error::Config(format!(
                "expected {} samples for n={}, got {}",
                n * n,
                n,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::DataIntegrity("non-finite sample in physical field".into()));
        }
        Ok(PhysicalField { grid: grid.clone(), values })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n() + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Forward transform, normalized so that `cos(2 pi k . x)` maps to the
    /// pair of coefficients `1/2` at `k` and `-k`. With this scaling the
    /// discrete Parseval identity reads `int f^2 dx = sum_k |fhat(k)|^2`.
    pub fn forward(&self) -> SpectralField {
        let n = self.grid.n();
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.grid.fft().transform_2d(&mut buf, false);
        let scale = 1.0 / (n * n) as f64;
        for c in &mut buf {
            *c *= scale;
        }
        SpectralField { grid: self.grid.clone(), coeffs: buf }
    }
}

/// Fourier coefficients of a real field; conjugate-symmetric by contract.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n() * grid.n()],
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of integer wavevector `(k1, k2)`.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        let a = self.grid.slot_of(k1);
        let b = self.grid.slot_of(k2);
        self.coeffs[a * self.grid.n() + b]
    }

    /// Overwrites the coefficient of `(k1, k2)`. The caller is responsible
    /// for keeping the field conjugate-symmetric; `inverse` checks.
    pub fn set_coeff(&mut self, k1: i64, k2: i64, value: Complex64) {
        let a = self.grid.slot_of(k1);
        let b = self.grid.slot_of(k2);
        let n = self.grid.n();
        self.coeffs[a * n + b] = value;
    }

    /// Sets the conjugate pair `coeff(k) = value`, `coeff(-k) = conj(value)`.
    pub fn set_mode_pair(&mut self, k1: i64, k2: i64, value: Complex64) {
        self.set_coeff(k1, k2, value);
        let n = self.grid.n() as i64;
        let neg = |k: i64| if k == -n / 2 { k } else { -k };
        let (m1, m2) = (neg(k1), neg(k2));
        if (m1, m2) != (k1, k2) {
            self.set_coeff(m1, m2, value.conj());
        }
    }

    /// Mean of the underlying field (the zero-mode coefficient).
    #[inline]
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest defect of `coeff(-k) - conj(coeff(k))` over all slots.
    pub fn conjugate_symmetry_error(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0f64;
        for a in 0..n {
            let am = (n - a) % n;
            for b in 0..n {
                let bm = (n - b) % n;
                let defect = (self.coeffs[am * n + bm] - self.coeffs[a * n + b].conj()).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    /// Inverse transform back to physical samples. The imaginary residue of a
    /// conjugate-symmetric input is at roundoff level and is discarded.
    ///
    /// The symmetry tolerance scales with the coefficient amplitude above 1,
    /// so a run with legitimately growing amplitudes keeps transforming until
    /// it overflows instead of tripping a spurious integrity error.
    pub fn inverse(&self) -> Result<PhysicalField, Error> {
        let defect = self.conjugate_symmetry_error();
        if !defect.is_finite() {
            return Err(Error::overflow());
        }
        let amp = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.re.abs()).max(c.im.abs()));
        if defect > SYMMETRY_TOL * amp.max(1.0) {
            return Err(Error::DataIntegrity(format!(
                "conjugate symmetry violated by {defect:e} (tolerance {SYMMETRY_TOL:e})"
            )));
        }
        let mut buf = self.coeffs.clone();
        self.grid.fft().transform_2d(&mut buf, true);
        let values: Vec<f64> = buf.iter().map(|c| c.re).collect();
        Ok(PhysicalField { grid: self.grid.clone(), values })
    }

    /// Applies a diagonal multiplier `m(k1, k2)` to every coefficient.
    fn map_modes(&self, m: impl Fn(i64, i64) -> Complex64) -> SpectralField {
        let n = self.grid.n();
        let mut coeffs = Vec::with_capacity(n * n);
        for a in 0..n {
            let k1 = self.grid.wavenumber(a);
            for b in 0..n {
                let k2 = self.grid.wavenumber(b);
                coeffs.push(self.coeffs[a * n + b] * m(k1, k2));
            }
        }
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    /// `(-Delta)^{1/2}`: multiplies mode `k` by `2 pi |k|`.
    pub fn frac_laplacian_half(&self) -> SpectralField {
        self.map_modes(|k1, k2| {
            let mag = TWO_PI * libm::sqrt((k1 * k1 + k2 * k2) as f64);
            Complex64::new(mag, 0.0)
        })
    }

    /// `(-Delta)^{-1/2}` on the mean-free subspace: divides mode `k != 0` by
    /// `2 pi |k|` and projects the zero mode to zero (stream functions are
    /// mean-free by convention).
    pub fn inv_frac_laplacian_half(&self) -> SpectralField {
        self.map_modes(|k1, k2| {
            if k1 == 0 && k2 == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0 / (TWO_PI * libm::sqrt((k1 * k1 + k2 * k2) as f64)), 0.0)
            }
        })
    }

    /// The Helmholtz operator `1 - alpha^2 Delta`: multiplier
    /// `1 + 4 pi^2 alpha^2 |k|^2`.
    pub fn helmholtz_apply(&self, alpha: f64) -> SpectralField {
        let c = TWO_PI * TWO_PI * alpha * alpha;
        self.map_modes(|k1, k2| Complex64::new(1.0 + c * (k1 * k1 + k2 * k2) as f64, 0.0))
    }

    /// The Helmholtz filter `(1 - alpha^2 Delta)^{-1}`; the identity at
    /// `alpha = 0`, and a contraction in L2 for every `alpha >= 0`.
    pub fn helmholtz_inverse(&self, alpha: f64) -> SpectralField {
        let c = TWO_PI * TWO_PI * alpha * alpha;
        self.map_modes(|k1, k2| Complex64::new(1.0 / (1.0 + c * (k1 * k1 + k2 * k2) as f64), 0.0))
    }

    /// Gradient `(d/dx, d/dy)` via multipliers `(2 pi i k1, 2 pi i k2)`.
    pub fn gradient(&self) -> (SpectralField, SpectralField) {
        let gx = self.map_modes(|k1, _| Complex64::new(0.0, TWO_PI * k1 as f64));
        let gy = self.map_modes(|_, k2| Complex64::new(0.0, TWO_PI * k2 as f64));
        (gx, gy)
    }

    /// Perpendicular gradient `(-d/dy, d/dx)`; applied to a stream function
    /// it produces a velocity that is divergence-free mode by mode.
    pub fn perp_gradient(&self) -> (SpectralField, SpectralField) {
        let vx = self.map_modes(|_, k2| Complex64::new(0.0, -TWO_PI * k2 as f64));
        let vy = self.map_modes(|k1, _| Complex64::new(0.0, TWO_PI * k1 as f64));
        (vx, vy)
    }

    /// Zeroes every mode outside the 2/3-rule mask; a projection.
    pub fn dealias(&self) -> SpectralField {
        let n = self.grid.n();
        let mut coeffs = self.coeffs.clone();
        for a in 0..n {
            for b in 0..n {
                if !self.grid.dealias_keeps(a, b) {
                    coeffs[a * n + b] = Complex64::new(0.0, 0.0);
                }
            }
        }
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    /// Projects the zero mode to zero.
    pub fn project_mean_free(&self) -> SpectralField {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::new(0.0, 0.0);
        out
    }

    /// `sum_k |c_k|^2 = int f^2 dx` by Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.l2_norm_sq())
    }

    /// `sum_k 4 pi^2 |k|^2 |c_k|^2 = int |grad f|^2 dx`.
    pub fn grad_norm_sq(&self) -> f64 {
        let n = self.grid.n();
        let mut acc = 0.0;
        for a in 0..n {
            let k1 = self.grid.wavenumber(a);
            for b in 0..n {
                let k2 = self.grid.wavenumber(b);
                let ksq = (k1 * k1 + k2 * k2) as f64;
                acc += TWO_PI * TWO_PI * ksq * self.coeffs[a * n + b].norm_sqr();
            }
        }
        acc
    }

    pub fn grad_norm(&self) -> f64 {
        libm::sqrt(self.grad_norm_sq())
    }

    /// L2 pairing `int f g dx` computed spectrally.
    pub fn l2_pairing(&self, other: &SpectralField) -> f64 {
        debug_assert!(self.grid.compatible(&other.grid));
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a * b.conj()).re).sum()
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: f64, other: &SpectralField) -> SpectralField {
        debug_assert!(self.grid.compatible(&other.grid));
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b * s).collect();
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, s: f64) -> SpectralField {
        let coeffs = self.coeffs.iter().map(|c| c * s).collect();
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    /// Largest coefficient difference against `other`.
    pub fn max_coeff_diff(&self, other: &SpectralField) -> f64 {
        debug_assert!(self.grid.compatible(&other.grid));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }
}
