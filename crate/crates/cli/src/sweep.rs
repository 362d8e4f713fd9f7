//! Alpha-sweep orchestration: independent runs over a decreasing alpha
//! ladder, indicator aggregation, liminf extrapolation and the blow-up
//! verdict.

use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use sqg_core::{blowup_verdict, epsilon_sup, estimate_liminf, DiagnosticsRecord, Verdict};

use crate::config::{resolution_for, SweepSpec};
use crate::csv;
use crate::error::AppError;
use crate::runner::{ic_json, sample_series, state_from_ic};

/// One completed (possibly truncated) run of the ladder.
#[derive(Debug, Clone)]
pub struct AlphaRun {
    pub alpha: f64,
    pub n: usize,
    /// Records at the leading `sample_times` the run completed.
    pub records: Vec<DiagnosticsRecord>,
    pub truncated_at: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct TimeEstimate {
    pub t: f64,
    pub epsilon_hat: f64,
    pub fit_residual: f64,
    /// Number of alpha levels that contributed.
    pub levels: usize,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub runs: Vec<AlphaRun>,
    pub estimates: Vec<TimeEstimate>,
    /// Sample times with fewer than three surviving levels.
    pub skipped_times: Vec<f64>,
    pub verdict: Verdict,
    pub eps_sup: f64,
    pub threshold: f64,
    /// H1 norm of the initial scalar (on the finest grid of the ladder).
    pub theta0_h1: f64,
}

/// Runs the ladder with a bounded worker pool. Every run is deterministic
/// and independent, so the result does not depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome, AppError> {
    let resolutions: Vec<usize> =
        spec.alphas.iter().map(|&a| resolution_for(a, spec.cells_per_alpha)).collect();

    // H1 norm of theta0 on the finest grid; analytic data make this
    // resolution-independent in practice.
    let finest = *resolutions.iter().max().expect("nonempty ladder");
    let theta0_h1 = {
        let grid = sqg_core::Grid::new(finest)?;
        let theta0 = crate::ic::make_initial_condition(&spec.ic, &grid)?.forward();
        (theta0.l2_norm_sq() + theta0.grad_norm_sq()).sqrt()
    };
    let threshold = spec.threshold.unwrap_or(0.05 * theta0_h1);

    let jobs = spec.alphas.len();
    let results: Mutex<Vec<Option<Result<AlphaRun, AppError>>>> =
        Mutex::new((0..jobs).map(|_| None).collect());
    let cursor = AtomicUsize::new(0);
    let workers = spec.parallelism.min(jobs).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = cursor.fetch_add(1, Ordering::Relaxed);
                if idx >= jobs {
                    break;
                }
                let alpha = spec.alphas[idx];
                let n = resolutions[idx];
                let run = (|| -> Result<AlphaRun, AppError> {
                    let state = state_from_ic(&spec.ic, n, alpha)?;
                    let base = spec.base_integrator(spec.t_end);
                    let sampled = sample_series(state, &base, &spec.sample_times)?;
                    Ok(AlphaRun {
                        alpha,
                        n,
                        records: sampled.records,
                        truncated_at: sampled.truncated_at,
                    })
                })();
                results.lock().unwrap()[idx] = Some(run);
            });
        }
    });

    let mut runs = Vec::with_capacity(jobs);
    for slot in results.into_inner().unwrap() {
        runs.push(slot.expect("worker pool covered every job")?);
    }

    let mut estimates = Vec::new();
    let mut skipped = Vec::new();
    for (j, &t) in spec.sample_times.iter().enumerate() {
        let samples: Vec<(f64, f64)> = runs
            .iter()
            .filter_map(|r| r.records.get(j).map(|rec| (r.alpha, rec.blowup_indicator)))
            .collect();
        match estimate_liminf(&samples) {
            Ok(est) => estimates.push(TimeEstimate {
                t,
                epsilon_hat: est.epsilon_hat,
                fit_residual: est.fit_residual,
                levels: samples.len(),
            }),
            Err(sqg_core::Error::InsufficientData(_)) => skipped.push(t),
            Err(e) => return Err(e.into()),
        }
    }

    let core_estimates: Vec<sqg_core::LiminfEstimate> = estimates
        .iter()
        .map(|e| sqg_core::LiminfEstimate { epsilon_hat: e.epsilon_hat, fit_residual: e.fit_residual })
        .collect();
    let (verdict, eps_sup) = if core_estimates.is_empty() {
        (Verdict::Inconclusive, 0.0)
    } else {
        let (_, sup) = epsilon_sup(&core_estimates).expect("nonempty");
        (blowup_verdict(&core_estimates, threshold)?, sup)
    };

    Ok(SweepOutcome { runs, estimates, skipped_times: skipped, verdict, eps_sup, threshold, theta0_h1 })
}

/// File name of the per-alpha series inside a sweep directory.
pub fn alpha_csv_name(alpha: f64) -> String {
    format!("alpha_{alpha}.csv")
}

/// Persists a sweep as a directory: `sweep.json` plus one diagnostics CSV
/// per alpha level.
pub fn write_sweep_result(
    dir: &Path,
    spec: &SweepSpec,
    outcome: &SweepOutcome,
    wall_clock_seconds: f64,
) -> Result<(), AppError> {
    fs::create_dir_all(dir).map_err(|e| AppError::Io(dir.to_path_buf(), e))?;
    for run in &outcome.runs {
        csv::write_series(&dir.join(alpha_csv_name(run.alpha)), &run.records)?;
    }

    let truncated: Vec<serde_json::Value> = outcome
        .runs
        .iter()
        .filter_map(|r| {
            r.truncated_at
                .map(|t| serde_json::json!({ "alpha": r.alpha, "t_last": t }))
        })
        .collect();
    let json = serde_json::json!({
        "config": {
            "alphas": spec.alphas,
            "resolutions": outcome.runs.iter().map(|r| r.n).collect::<Vec<_>>(),
            "t_end": spec.t_end,
            "sample_times": spec.sample_times,
            "ic": ic_json(&spec.ic),
            "parallelism": spec.parallelism,
            "cells_per_alpha": spec.cells_per_alpha,
            "courant": spec.courant,
            "dt_max": spec.dt_max,
            "dt_fixed": spec.dt_fixed,
            "threshold": outcome.threshold,
        },
        "theta0_h1": outcome.theta0_h1,
        "liminf_estimates": outcome.estimates.iter().map(|e| serde_json::json!({
            "t": e.t,
            "epsilon_hat": e.epsilon_hat,
            "fit_residual": e.fit_residual,
            "levels": e.levels,
        })).collect::<Vec<_>>(),
        "skipped_sample_times": outcome.skipped_times,
        "truncated_runs": truncated,
        "verdict": outcome.verdict.to_string(),
        "eps_sup": outcome.eps_sup,
        "metadata": {
            "code_version": env!("CARGO_PKG_VERSION"),
            "generator": spec.ic.generator(),
            "wall_clock_seconds": wall_clock_seconds,
        },
    });
    let path = dir.join("sweep.json");
    fs::write(&path, format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
        .map_err(|e| AppError::Io(path, e))
}

/// The one-line summary printed by the CLI.
pub fn verdict_line(outcome: &SweepOutcome) -> String {
    format!("VERDICT {} eps_sup={}", outcome.verdict, outcome.eps_sup)
}
