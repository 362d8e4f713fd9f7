//! Orchestration of single integrations: diagnostics emission, snapshot
//! checkpoints and run metadata.

use std::cell::RefCell;
use std::fs;
use std::path::PathBuf;

use sqg_core::timestepper::integrate;
use sqg_core::{
    DiagnosticsRecord, Grid, IntegratorConfig, ModelParams, PhysicalField, State,
};

use crate::config::RunConfig;
use crate::csv::SeriesWriter;
use crate::error::AppError;
use crate::ic::{make_initial_condition, IcSpec};
use crate::snapshot::Snapshot;

/// Grid, initial scalar and start time implied by a run configuration.
pub fn resolve_initial(cfg: &RunConfig) -> Result<(Grid, PhysicalField, f64), AppError> {
    match &cfg.ic {
        IcSpec::Snapshot { path } => {
            let snap = Snapshot::read(path)?;
            if let Some(n) = cfg.n {
                if n != snap.n {
                    return Err(AppError::config(format!(
                        "config asks for n={n} but snapshot '{}' has n={}",
                        path.display(),
                        snap.n
                    )));
                }
            }
            let grid = Grid::new(snap.n)?;
            let theta = PhysicalField::from_values(&grid, snap.theta.clone())?;
            Ok((grid, theta, snap.t))
        }
        other => {
            let n = cfg.n.expect("validated by RunConfig::parse");
            let grid = Grid::new(n)?;
            let theta = make_initial_condition(other, &grid)?;
            Ok((grid, theta, 0.0))
        }
    }
}

pub struct RunOutcome {
    pub records: Vec<DiagnosticsRecord>,
    pub final_state: State,
    pub csv_path: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

/// Executes a configured run, writing `diagnostics.csv`, optional snapshot
/// checkpoints and `run.json` into the output directory.
///
/// On numerical overflow the rows and snapshots emitted so far stay on disk
/// and the overflow (with its last good checkpoint time) is returned.
pub fn execute_run(cfg: &RunConfig) -> Result<RunOutcome, AppError> {
    let (_, theta0, t0) = resolve_initial(cfg)?;
    let params = ModelParams::new(cfg.alpha)?;
    let mut state = State::from_initial_theta(&theta0.forward(), params);
    state.t = t0;

    fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| AppError::Io(cfg.output_dir.clone(), e))?;
    write_run_metadata(cfg)?;

    let csv_path = cfg.output_dir.join("diagnostics.csv");
    let writer = RefCell::new(SeriesWriter::create(&csv_path)?);
    let records: RefCell<Vec<DiagnosticsRecord>> = RefCell::new(Vec::new());
    let snapshots: RefCell<Vec<PathBuf>> = RefCell::new(Vec::new());
    let sink_error: RefCell<Option<AppError>> = RefCell::new(None);
    let mut next_snap = 0u64;

    let out_dir = cfg.output_dir.clone();
    let snapshot_interval = cfg.snapshot_interval;
    let mut callback = |s: &State| {
        if sink_error.borrow().is_some() {
            return;
        }
        let mut fallible = || -> Result<(), AppError> {
            let record = DiagnosticsRecord::measure(s)?;
            writer.borrow_mut().push(&record)?;
            records.borrow_mut().push(record);
            if let Some(interval) = snapshot_interval {
                // Checkpoints piggyback on the diagnostics schedule: one is
                // written at the first callback at or past each multiple.
                while s.t + 1e-12 >= t0 + next_snap as f64 * interval {
                    let path = out_dir.join(format!("snap_{next_snap:04}.snap"));
                    Snapshot::from_state(s)?.write(&path)?;
                    snapshots.borrow_mut().push(path);
                    next_snap += 1;
                }
            }
            Ok(())
        };
        if let Err(e) = fallible() {
            *sink_error.borrow_mut() = Some(e);
        }
    };

    let result = integrate(state, &cfg.integrator, &mut callback);
    if let Some(e) = sink_error.into_inner() {
        return Err(e);
    }
    let final_state = result?;

    // Make sure the final time is on record even when it is not a callback
    // multiple.
    let mut records = records.into_inner();
    if records.last().map(|r| r.t) != Some(final_state.t) {
        let record = DiagnosticsRecord::measure(&final_state)?;
        writer.borrow_mut().push(&record)?;
        records.push(record);
    }

    Ok(RunOutcome { records, final_state, csv_path, snapshots: snapshots.into_inner() })
}

fn write_run_metadata(cfg: &RunConfig) -> Result<(), AppError> {
    let path = cfg.output_dir.join("run.json");
    let meta = serde_json::json!({
        "ic": ic_json(&cfg.ic),
        "alpha": cfg.alpha,
        "n": cfg.n,
        "integrator": {
            "courant": cfg.integrator.courant,
            "dt_max": cfg.integrator.dt_max,
            "dt_fixed": cfg.integrator.dt_fixed,
            "t_end": cfg.integrator.t_end,
            "callback_interval": cfg.integrator.callback_interval,
        },
        "snapshot_interval": cfg.snapshot_interval,
        "code_version": env!("CARGO_PKG_VERSION"),
    });
    fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&meta).unwrap()))
        .map_err(|e| AppError::Io(path, e))
}

pub fn ic_json(ic: &IcSpec) -> serde_json::Value {
    match ic {
        IcSpec::Zero | IcSpec::Cmt => serde_json::json!({ "name": ic.name() }),
        IcSpec::SingleMode { k1, k2 } => {
            serde_json::json!({ "name": ic.name(), "k1": k1, "k2": k2 })
        }
        IcSpec::RandomSmooth { seed, k0 } => serde_json::json!({
            "name": ic.name(),
            "seed": seed,
            "k0": k0,
            "generator": crate::ic::RANDOM_GENERATOR_ID,
        }),
        IcSpec::Snapshot { path } => {
            serde_json::json!({ "name": ic.name(), "path": path.display().to_string() })
        }
    }
}

/// Result of sampling one trajectory at prescribed times.
pub struct SampledSeries {
    /// One record per completed sample time, in order.
    pub records: Vec<DiagnosticsRecord>,
    /// Time of the last good checkpoint when the run overflowed.
    pub truncated_at: Option<f64>,
}

/// Integrates segment by segment so that every requested time is hit
/// exactly, recording diagnostics at each. An overflow truncates the series
/// instead of failing it.
pub fn sample_series(
    mut state: State,
    base: &IntegratorConfig,
    sample_times: &[f64],
) -> Result<SampledSeries, AppError> {
    let mut records = Vec::with_capacity(sample_times.len());
    for &t in sample_times {
        if t < state.t {
            return Err(AppError::config(format!(
                "sample time {t} precedes the state time {}",
                state.t
            )));
        }
        if t > state.t {
            let mut cfg = *base;
            cfg.t_end = t;
            // Callbacks are unused here; keep the schedule out of the way.
            cfg.callback_interval = (t - state.t).max(base.dt_max);
            match integrate(state.clone(), &cfg, &mut |_| {}) {
                Ok(next) => state = next,
                Err(sqg_core::Error::Overflow(info)) => {
                    return Ok(SampledSeries {
                        records,
                        truncated_at: Some(info.last_checkpoint.unwrap_or(state.t)),
                    });
                }
                Err(e) => return Err(e.into()),
            }
        }
        records.push(DiagnosticsRecord::measure(&state)?);
    }
    Ok(SampledSeries { records, truncated_at: None })
}

/// Convenience wrapper used by tests and the sweep: build a state from an
/// analytic initial condition at a given resolution.
pub fn state_from_ic(ic: &IcSpec, n: usize, alpha: f64) -> Result<State, AppError> {
    let grid = Grid::new(n)?;
    let theta0 = make_initial_condition(ic, &grid)?;
    Ok(State::from_initial_theta(&theta0.forward(), ModelParams::new(alpha)?))
}
