//! Shared helpers for the integration tests: a small deterministic PRNG and
//! a direct O(n^4) convolution oracle, kept independent of the solver's
//! pseudo-spectral product path.

// Each integration-test target includes this module and uses a subset of it.
#![allow(dead_code)]

use num_complex::Complex64;
use sqg_core::{Grid, PhysicalField, SpectralField};

/// splitmix64; deterministic and dependency-free.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

pub fn random_physical(grid: &Grid, rng: &mut TestRng) -> PhysicalField {
    let n = grid.n();
    let values: Vec<f64> = (0..n * n).map(|_| rng.next_symmetric()).collect();
    PhysicalField::from_values(grid, values).unwrap()
}

/// Random conjugate-symmetric field truncated to the dealias mask.
pub fn random_band_limited(grid: &Grid, rng: &mut TestRng) -> SpectralField {
    random_physical(grid, rng).forward().dealias()
}

pub fn max_abs_diff(a: &PhysicalField, b: &PhysicalField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn in_band(grid: &Grid, k1: i64, k2: i64) -> bool {
    let kmax = grid.dealias_kmax();
    k1.abs() <= kmax && k2.abs() <= kmax
}

/// Exact truncated convolution of two band-limited fields: the transform of
/// the pointwise product `a * b`, restricted to the dealias mask, computed
/// as an explicit double sum over wavevectors.
pub fn product_oracle(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let grid = a.grid().clone();
    let kmax = grid.dealias_kmax();
    let mut out = SpectralField::zeros(&grid);
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            let mut acc = Complex64::new(0.0, 0.0);
            for q1 in -kmax..=kmax {
                for q2 in -kmax..=kmax {
                    let (r1, r2) = (k1 - q1, k2 - q2);
                    if in_band(&grid, r1, r2) {
                        acc += a.coeff(q1, q2) * b.coeff(r1, r2);
                    }
                }
            }
            out.set_coeff(k1, k2, acc);
        }
    }
    out
}

/// Direct-sum oracle for `div(v theta)` on band-limited inputs, restricted to
/// the dealias mask.
pub fn divergence_oracle(
    theta: &SpectralField,
    vx: &SpectralField,
    vy: &SpectralField,
) -> SpectralField {
    let grid = theta.grid().clone();
    let kmax = grid.dealias_kmax();
    let px = product_oracle(vx, theta);
    let py = product_oracle(vy, theta);
    let mut out = SpectralField::zeros(&grid);
    let two_pi = 2.0 * std::f64::consts::PI;
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            let d = Complex64::new(0.0, two_pi * k1 as f64) * px.coeff(k1, k2)
                + Complex64::new(0.0, two_pi * k2 as f64) * py.coeff(k1, k2);
            out.set_coeff(k1, k2, d);
        }
    }
    out
}
