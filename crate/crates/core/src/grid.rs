//! The periodic unit-square grid and its wavevector tables.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fft::Fft;

/// Uniform n x n grid on `[0,1]^2` with integer wavevector tables and the
/// 2/3-rule dealias mask. Cheap to clone (shared interior).
///
/// Spectral slot `(a, b)` carries the integer wavevector
/// `(k1, k2) = (wavenumber(a), wavenumber(b))` with components in
/// `{-n/2, ..., n/2 - 1}`; the physical wavevector is `2 pi (k1, k2)`.
#[derive(Debug, Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

#[derive(Debug)]
struct GridInner {
    n: usize,
    dx: f64,
    /// Slot index -> signed integer wavenumber along one axis.
    wavenumbers: Vec<i64>,
    /// Row-major n x n table; true where both |k1| and |k2| <= floor(n/3).
    dealias_keep: Vec<bool>,
    kmax_dealias: i64,
    fft: Fft,
}

impl Grid {
    /// Builds the grid tables for an even `n >= 8`.
    pub fn new(n: usize) -> Result<Grid, Error> {
        if n < 8 {
            return Err(Error::Config(format!("grid size n={n} too small; need n >= 8")));
        }
        if n % 2 != 0 {
            return Err(Error::Config(format!("grid size n={n} must be even")));
        }
        let wavenumbers: Vec<i64> =
            (0..n).map(|a| if a < n / 2 { a as i64 } else { a as i64 - n as i64 }).collect();
        let kmax = (n / 3) as i64;
        let mut dealias_keep = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let keep = wavenumbers[a].abs() <= kmax && wavenumbers[b].abs() <= kmax;
                dealias_keep.push(keep);
            }
        }
        Ok(Grid {
            inner: Arc::new(GridInner {
                n,
                dx: 1.0 / n as f64,
                wavenumbers,
                dealias_keep,
                kmax_dealias: kmax,
                fft: Fft::new(n),
            }),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.inner.dx
    }

    /// Largest integer wavenumber magnitude kept by the dealias mask.
    #[inline]
    pub fn dealias_kmax(&self) -> i64 {
        self.inner.kmax_dealias
    }

    /// Signed integer wavenumber of slot index `a` along one axis.
    #[inline]
    pub fn wavenumber(&self, a: usize) -> i64 {
        self.inner.wavenumbers[a]
    }

    /// Integer wavevector of spectral slot `(a, b)`.
    #[inline]
    pub fn wavevector(&self, a: usize, b: usize) -> (i64, i64) {
        (self.inner.wavenumbers[a], self.inner.wavenumbers[b])
    }

    /// Slot index of integer wavenumber `k` (which must lie in
    /// `-n/2 .. n/2 - 1`).
    #[inline]
    pub fn slot_of(&self, k: i64) -> usize {
        let n = self.inner.n as i64;
        debug_assert!(k >= -n / 2 && k < n / 2, "wavenumber {k} out of range for n={n}");
        k.rem_euclid(n) as usize
    }

    #[inline]
    pub fn dealias_keeps(&self, a: usize, b: usize) -> bool {
        self.inner.dealias_keep[a * self.inner.n + b]
    }

    /// Grids are interchangeable iff they have the same resolution.
    #[inline]
    pub fn compatible(&self, other: &Grid) -> bool {
        self.inner.n == other.inner.n
    }

    #[inline]
    pub(crate) fn fft(&self) -> &Fft {
        &self.inner.fft
    }
}
