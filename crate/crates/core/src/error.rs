//! Error type shared by the solver core.

use alloc::string::String;
use core::fmt;

/// Context attached to a numerical overflow (the discrete run blew up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverflowInfo {
    /// Simulation time of the failing evaluation, when known.
    pub t: Option<f64>,
    /// Runge-Kutta stage (1-4) that produced the non-finite value, when known.
    pub stage: Option<u8>,
    /// Last time at which the integrator delivered a good state.
    pub last_checkpoint: Option<f64>,
}

impl OverflowInfo {
    pub fn new() -> Self {
        OverflowInfo { t: None, stage: None, last_checkpoint: None }
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn at_stage(mut self, stage: u8) -> Self {
        self.stage = Some(stage);
        self
    }

    pub fn with_checkpoint(mut self, t: f64) -> Self {
        self.last_checkpoint = Some(t);
        self
    }
}

impl Default for OverflowInfo {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid configuration or parameters (odd grid size, alpha out of range, ...).
    Config(String),
    /// A field violated a structural invariant (conjugate symmetry, finiteness).
    DataIntegrity(String),
    /// The discrete run produced non-finite values; expected for unstable
    /// parameter choices and reported rather than clamped.
    Overflow(OverflowInfo),
    /// Not enough data points for an estimate.
    InsufficientData(String),
}

impl Error {
    pub fn overflow() -> Self {
        Error::Overflow(OverflowInfo::new())
    }

    /// Attach overflow context, leaving other variants untouched.
    pub fn map_overflow(self, f: impl FnOnce(OverflowInfo) -> OverflowInfo) -> Self {
        match self {
            Error::Overflow(info) => Error::Overflow(f(info)),
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::DataIntegrity(msg) => write!(f, "data integrity error: {msg}"),
            Error::Overflow(info) => {
                write!(f, "numerical overflow")?;
                if let Some(t) = info.t {
                    write!(f, " at t={t}")?;
                }
                if let Some(stage) = info.stage {
                    write!(f, " (stage {stage})")?;
                }
                if let Some(cp) = info.last_checkpoint {
                    write!(f, "; last good checkpoint t={cp}")?;
                }
                Ok(())
            }
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
