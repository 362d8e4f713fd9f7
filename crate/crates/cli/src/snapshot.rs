//! Binary snapshots of the physical scalar.
//!
//! Layout (all little-endian), 24-byte header followed by the samples:
//!
//! ```text
//! offset  size  field
//!      0     4  magic "SQGA"
//!      4     2  format version (u16, currently 1)
//!      6     2  grid size n (u16)
//!      8     8  alpha (f64)
//!     16     8  t (f64)
//!     24  8n^2  theta values, row-major f64
//! ```
//!
//! Snapshots store the physical (unfiltered) scalar rather than
//! `theta_tilde` or spectral coefficients: the payload is inspectable with
//! any array tool, resolution conversion is a pad away, and `theta_tilde`
//! is recovered exactly by applying the Helmholtz operator on load.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use sqg_core::model::recover_theta;
use sqg_core::{Grid, ModelParams, PhysicalField, State};

use crate::error::AppError;

pub const MAGIC: [u8; 4] = *b"SQGA";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 24;

#[derive(Debug)]
pub enum SnapshotError {
    Io(std::io::Error),
    BadMagic([u8; 4]),
    UnsupportedVersion(u16),
    /// File length does not match the header's grid size.
    Truncated { expected: usize, actual: usize },
    BadField(String),
}

impl fmt::Display for SnapshotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnapshotError::Io(e) => write!(f, "io error: {e}"),
            SnapshotError::BadMagic(m) => write!(f, "bad magic {m:?}, expected \"SQGA\""),
            SnapshotError::UnsupportedVersion(v) => {
                write!(f, "unsupported format version {v}, expected {VERSION}")
            }
            SnapshotError::Truncated { expected, actual } => {
                write!(f, "payload length mismatch: expected {expected} bytes, found {actual}")
            }
            SnapshotError::BadField(msg) => write!(f, "bad field: {msg}"),
        }
    }
}

impl std::error::Error for SnapshotError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub alpha: f64,
    pub t: f64,
    /// Row-major physical samples of theta.
    pub theta: Vec<f64>,
}

impl Snapshot {
    /// Captures the physical scalar of a state.
    pub fn from_state(state: &State) -> Result<Snapshot, sqg_core::Error> {
        let theta = recover_theta(state).inverse()?;
        Ok(Snapshot {
            n: state.grid().n(),
            alpha: state.params.alpha,
            t: state.t,
            theta: theta.values().to_vec(),
        })
    }

    /// Rebuilds a solver state, filtering the stored scalar with `alpha`
    /// (which may differ from the alpha recorded in the file).
    pub fn into_state(&self, alpha: f64) -> Result<State, AppError> {
        let grid = Grid::new(self.n)?;
        let theta0 = PhysicalField::from_values(&grid, self.theta.clone())?;
        let mut state = State::from_initial_theta(&theta0.forward(), ModelParams::new(alpha)?);
        state.t = self.t;
        Ok(state)
    }

    pub fn file_len(n: usize) -> usize {
        HEADER_LEN + 8 * n * n
    }

    pub fn write(&self, path: &Path) -> Result<(), AppError> {
        let wrap = |e: std::io::Error| AppError::Io(path.to_path_buf(), e);
        if self.n > u16::MAX as usize {
            return Err(AppError::Snapshot(
                path.to_path_buf(),
                SnapshotError::BadField(format!("n={} exceeds the format limit", self.n)),
            ));
        }
        if self.theta.len() != self.n * self.n {
            return Err(AppError::Snapshot(
                path.to_path_buf(),
                SnapshotError::BadField(format!(
                    "expected {} samples, got {}",
                    self.n * self.n,
                    self.theta.len()
                )),
            ));
        }
        let mut buf = Vec::with_capacity(Self::file_len(self.n));
        buf.extend_from_slice(&MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.n as u16).to_le_bytes());
        buf.extend_from_slice(&self.alpha.to_le_bytes());
        buf.extend_from_slice(&self.t.to_le_bytes());
        for v in &self.theta {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(wrap)?;
            }
        }
        let mut file = fs::File::create(path).map_err(wrap)?;
        file.write_all(&buf).map_err(wrap)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Snapshot, AppError> {
        let wrap = |e: SnapshotError| AppError::Snapshot(path.to_path_buf(), e);
        let bytes = fs::read(path).map_err(|e| wrap(SnapshotError::Io(e)))?;
        if bytes.len() < HEADER_LEN {
            return Err(wrap(SnapshotError::Truncated {
                expected: HEADER_LEN,
                actual: bytes.len(),
            }));
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(wrap(SnapshotError::BadMagic(magic)));
        }
        let version = u16::from_le_bytes(bytes[4..6].try_into().unwrap());
        if version != VERSION {
            return Err(wrap(SnapshotError::UnsupportedVersion(version)));
        }
        let n = u16::from_le_bytes(bytes[6..8].try_into().unwrap()) as usize;
        let expected = Self::file_len(n);
        if bytes.len() != expected {
            return Err(wrap(SnapshotError::Truncated { expected, actual: bytes.len() }));
        }
        let alpha = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let t = f64::from_le_bytes(bytes[16..24].try_into().unwrap());
        let theta: Vec<f64> = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Snapshot { n, alpha, t, theta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_snapshot(n: usize) -> Snapshot {
        let theta = (0..n * n).map(|i| (i as f64 * 0.37).sin()).collect();
        Snapshot { n, alpha: 0.1, t: 2.25, theta }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = std::env::temp_dir().join("sqg_snapshot_roundtrip");
        let path = dir.join("s.snap");
        let snap = sample_snapshot(16);
        snap.write(&path).unwrap();
        let back = Snapshot::read(&path).unwrap();
        assert_eq!(back.n, snap.n);
        assert_eq!(back.alpha.to_bits(), snap.alpha.to_bits());
        assert_eq!(back.t.to_bits(), snap.t.to_bits());
        for (a, b) in back.theta.iter().zip(&snap.theta) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn file_size_matches_the_header_arithmetic() {
        let dir = std::env::temp_dir().join("sqg_snapshot_size");
        let path = dir.join("s.snap");
        sample_snapshot(16).write(&path).unwrap();
        let len = std::fs::metadata(&path).unwrap().len();
        assert_eq!(len, 2072);
        assert_eq!(Snapshot::file_len(16), 2072);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn distinct_parse_errors() {
        let dir = std::env::temp_dir().join("sqg_snapshot_errors");
        std::fs::create_dir_all(&dir).unwrap();

        let bad_magic = dir.join("magic.snap");
        let mut bytes = vec![];
        sample_snapshot(8).write(&bad_magic).unwrap();
        bytes.extend(std::fs::read(&bad_magic).unwrap());
        bytes[0..4].copy_from_slice(b"XXXX");
        std::fs::write(&bad_magic, &bytes).unwrap();
        match Snapshot::read(&bad_magic) {
            Err(AppError::Snapshot(_, SnapshotError::BadMagic(m))) => assert_eq!(&m, b"XXXX"),
            other => panic!("unexpected {other:?}"),
        }

        let bad_version = dir.join("version.snap");
        let mut bytes = std::fs::read(dir.join("magic.snap")).unwrap();
        bytes[0..4].copy_from_slice(&MAGIC);
        bytes[4..6].copy_from_slice(&9u16.to_le_bytes());
        std::fs::write(&bad_version, &bytes).unwrap();
        match Snapshot::read(&bad_version) {
            Err(AppError::Snapshot(_, SnapshotError::UnsupportedVersion(9))) => {}
            other => panic!("unexpected {other:?}"),
        }

        let truncated = dir.join("short.snap");
        let mut bytes = std::fs::read(dir.join("version.snap")).unwrap();
        bytes[4..6].copy_from_slice(&VERSION.to_le_bytes());
        bytes.truncate(bytes.len() - 8);
        std::fs::write(&truncated, &bytes).unwrap();
        match Snapshot::read(&truncated) {
            Err(AppError::Snapshot(_, SnapshotError::Truncated { expected, actual })) => {
                assert_eq!(expected, Snapshot::file_len(8));
                assert_eq!(actual, Snapshot::file_len(8) - 8);
            }
            other => panic!("unexpected {other:?}"),
        }

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn state_round_trip_preserves_the_scalar() {
        let grid = Grid::new(16).unwrap();
        let theta0 = PhysicalField::from_fn(&grid, |x, y| {
            (2.0 * std::f64::consts::PI * (x + y)).cos()
        });
        let state = State::from_initial_theta(&theta0.forward(), ModelParams::new(0.2).unwrap());
        let snap = Snapshot::from_state(&state).unwrap();
        let restored = snap.into_state(0.2).unwrap();
        let diff = restored.theta_tilde.max_coeff_diff(&state.theta_tilde);
        assert!(diff < 1e-12);
        assert_eq!(restored.t, state.t);
    }
}
