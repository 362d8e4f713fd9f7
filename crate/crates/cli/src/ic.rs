//! Initial-condition library.
//!
//! All named data are analytic except `random_smooth`, whose phases are
//! drawn per wavevector from a splitmix64 hash of `(seed, k)`. Hashing by
//! wavevector rather than by slot keeps the draw independent of resolution:
//! two grids sharing a mode see the same phase for it.

use num_complex::Complex64;
use sqg_core::{Grid, PhysicalField, SpectralField};
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::error::AppError;
use crate::snapshot::Snapshot;

const TWO_PI: f64 = 2.0 * PI;

/// Identifier of the random-field generator, recorded in run metadata.
pub const RANDOM_GENERATOR_ID: &str = "splitmix64-mode-hash-v1";

#[derive(Debug, Clone, PartialEq)]
pub enum IcSpec {
    Zero,
    /// `cos(2 pi (k1 x + k2 y))`.
    SingleMode { k1: i64, k2: i64 },
    /// The classical front-forming datum `sin(2 pi x) sin(2 pi y) + cos(2 pi y)`.
    Cmt,
    /// Mean-free random field with spectrum `|theta_hat(k)| ~ exp(-|k|^2/k0^2)`,
    /// normalized to unit L2 norm.
    RandomSmooth { seed: u64, k0: f64 },
    /// Physical scalar loaded from a snapshot file.
    Snapshot { path: PathBuf },
}

impl IcSpec {
    pub fn from_name(
        name: &str,
        k1: Option<i64>,
        k2: Option<i64>,
        seed: Option<u64>,
        k0: Option<f64>,
    ) -> Result<IcSpec, AppError> {
        match name {
            "zero" => Ok(IcSpec::Zero),
            "single_mode" => Ok(IcSpec::SingleMode { k1: k1.unwrap_or(0), k2: k2.unwrap_or(1) }),
            "cmt" => Ok(IcSpec::Cmt),
            "random_smooth" => {
                let k0 = k0.unwrap_or(4.0);
                if !(k0 > 0.0) {
                    return Err(AppError::config(format!("ic.k0={k0} must be positive")));
                }
                Ok(IcSpec::RandomSmooth { seed: seed.unwrap_or(0), k0 })
            }
            other => Err(AppError::config(format!(
                "unknown initial condition '{other}' (known: zero, single_mode, cmt, random_smooth)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IcSpec::Zero => "zero",
            IcSpec::SingleMode { .. } => "single_mode",
            IcSpec::Cmt => "cmt",
            IcSpec::RandomSmooth { .. } => "random_smooth",
            IcSpec::Snapshot { .. } => "snapshot",
        }
    }

    /// Generator identifier for metadata, when randomness is involved.
    pub fn generator(&self) -> Option<&'static str> {
        match self {
            IcSpec::RandomSmooth { .. } => Some(RANDOM_GENERATOR_ID),
            _ => None,
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Uniform phase in `[0, 2 pi)` for mode `k`, independent of grid size.
fn mode_phase(seed: u64, k1: i64, k2: i64) -> f64 {
    let packed = ((k1 as u64) << 32) ^ (k2 as u64 & 0xffff_ffff);
    let h = splitmix64(splitmix64(seed) ^ packed);
    TWO_PI * ((h >> 11) as f64 / (1u64 << 53) as f64)
}

fn random_smooth(grid: &Grid, seed: u64, k0: f64) -> Result<PhysicalField, AppError> {
    let n = grid.n() as i64;
    let mut field = SpectralField::zeros(grid);
    // Canonical half-space; Nyquist lines are left empty so every mode has a
    // clean conjugate partner.
    for k1 in -(n / 2 - 1)..n / 2 {
        for k2 in -(n / 2 - 1)..n / 2 {
            let canonical = k1 > 0 || (k1 == 0 && k2 > 0);
            if !canonical {
                continue;
            }
            let ksq = (k1 * k1 + k2 * k2) as f64;
            let amp = (-ksq / (k0 * k0)).exp();
            let phase = mode_phase(seed, k1, k2);
            let c = Complex64::from_polar(amp, phase);
            field.set_mode_pair(k1, k2, c);
        }
    }
    let norm = field.l2_norm();
    let field = field.scale(1.0 / norm);
    Ok(field.inverse()?)
}

/// Builds the named initial scalar on `grid`. Snapshot data must match the
/// grid resolution.
pub fn make_initial_condition(spec: &IcSpec, grid: &Grid) -> Result<PhysicalField, AppError> {
    match spec {
        IcSpec::Zero => Ok(PhysicalField::zeros(grid)),
        IcSpec::SingleMode { k1, k2 } => {
            let (a, b) = (*k1 as f64, *k2 as f64);
            Ok(PhysicalField::from_fn(grid, |x, y| (TWO_PI * (a * x + b * y)).cos()))
        }
        IcSpec::Cmt => Ok(PhysicalField::from_fn(grid, |x, y| {
            (TWO_PI * x).sin() * (TWO_PI * y).sin() + (TWO_PI * y).cos()
        })),
        IcSpec::RandomSmooth { seed, k0 } => random_smooth(grid, *seed, *k0),
        IcSpec::Snapshot { path } => {
            let snap = Snapshot::read(path)?;
            if snap.n != grid.n() {
                return Err(AppError::config(format!(
                    "snapshot '{}' has n={}, expected n={}",
                    path.display(),
                    snap.n,
                    grid.n()
                )));
            }
            Ok(PhysicalField::from_values(grid, snap.theta)?)
        }
    }
}
