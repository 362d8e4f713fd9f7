//! IO companion to `sqg-core`: configuration files, the snapshot and CSV
//! formats, the initial-condition library, single-run and alpha-sweep
//! orchestration, and gnuplot script emission.

// Guards of the form `!(x > 0.0)` are deliberate: they reject NaN together
// with out-of-range values, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv;
pub mod error;
pub mod ic;
pub mod plot;
pub mod runner;
pub mod snapshot;
pub mod sweep;

pub use error::AppError;
