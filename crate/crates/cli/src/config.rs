//! Flat key-value configuration files.
//!
//! The grammar is one `key = value` pair per line with dotted section
//! prefixes (`integrator.courant = 0.5`), `#` comments and blank lines.
//! Parsing is total: every malformed input is reported with its line and
//! key, and keys that no command consumes are rejected rather than ignored.

use std::collections::BTreeMap;
use std::path::PathBuf;

use sqg_core::IntegratorConfig;

use crate::error::AppError;
use crate::ic::IcSpec;

/// Parsed key-value file with consumption tracking.
pub struct ConfigMap {
    entries: BTreeMap<String, (usize, String)>,
    consumed: std::cell::RefCell<std::collections::BTreeSet<String>>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<ConfigMap, AppError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(eq) = line.find('=') else {
                return Err(AppError::Config {
                    line: Some(line_no),
                    key: None,
                    msg: format!("expected 'key = value', got '{line}'"),
                });
            };
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() {
                return Err(AppError::Config {
                    line: Some(line_no),
                    key: None,
                    msg: "empty key".into(),
                });
            }
            if !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.' || c == '_') {
                return Err(AppError::located(line_no, key, "keys are lowercase dotted identifiers"));
            }
            if value.is_empty() {
                return Err(AppError::located(line_no, key, "missing value"));
            }
            if let Some((prev_line, _)) = entries.insert(key.clone(), (line_no, value)) {
                return Err(AppError::located(
                    line_no,
                    key,
                    format!("duplicate key (first set on line {prev_line})"),
                ));
            }
        }
        Ok(ConfigMap { entries, consumed: Default::default() })
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.get(key).map(|(line, v)| {
            self.consumed.borrow_mut().insert(key.to_string());
            (*line, v.as_str())
        })
    }

    pub fn get_str(&self, key: &str) -> Option<String> {
        self.raw(key).map(|(_, v)| v.to_string())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, AppError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| AppError::located(line, key, format!("'{v}' is not a number"))),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, AppError> {
        self.get_f64(key)?.ok_or_else(|| AppError::config(format!("missing required key '{key}'")))
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, AppError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| AppError::located(line, key, format!("'{v}' is not a nonnegative integer"))),
        }
    }

    pub fn get_i64(&self, key: &str) -> Result<Option<i64>, AppError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<i64>()
                .map(Some)
                .map_err(|_| AppError::located(line, key, format!("'{v}' is not an integer"))),
        }
    }

    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, AppError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => {
                let mut out = Vec::new();
                for part in v.split(',') {
                    let part = part.trim();
                    out.push(part.parse::<f64>().map_err(|_| {
                        AppError::located(line, key, format!("'{part}' is not a number"))
                    })?);
                }
                Ok(Some(out))
            }
        }
    }

    /// Rejects keys that were never consumed (typos surface loudly).
    pub fn finish(&self) -> Result<(), AppError> {
        let consumed = self.consumed.borrow();
        for (key, (line, _)) in &self.entries {
            if !consumed.contains(key) {
                return Err(AppError::located(*line, key.clone(), "unknown key"));
            }
        }
        Ok(())
    }
}

/// Initial-condition keys shared by `run` and `sweep` configs.
fn parse_ic(map: &ConfigMap, allow_snapshot: bool) -> Result<IcSpec, AppError> {
    let name = map.get_str("ic.name");
    let snapshot = map.get_str("ic.snapshot");
    match (name, snapshot) {
        (Some(_), Some(_)) => {
            Err(AppError::config("ic.name and ic.snapshot are mutually exclusive"))
        }
        (None, None) => Err(AppError::config("missing initial condition: set ic.name or ic.snapshot")),
        (None, Some(path)) => {
            if !allow_snapshot {
                return Err(AppError::config(
                    "ic.snapshot is not supported here; use a named initial condition",
                ));
            }
            Ok(IcSpec::Snapshot { path: PathBuf::from(path) })
        }
        (Some(name), None) => {
            let k1 = map.get_i64("ic.k1")?;
            let k2 = map.get_i64("ic.k2")?;
            let seed = map.get_u64("ic.seed")?;
            let k0 = map.get_f64("ic.k0")?;
            IcSpec::from_name(&name, k1, k2, seed, k0)
        }
    }
}

fn parse_integrator(map: &ConfigMap, t_end: f64) -> Result<IntegratorConfig, AppError> {
    let mut cfg = IntegratorConfig::new(t_end);
    if let Some(c) = map.get_f64("integrator.courant")? {
        cfg.courant = c;
    }
    if let Some(d) = map.get_f64("integrator.dt_max")? {
        cfg.dt_max = d;
    }
    cfg.dt_fixed = map.get_f64("integrator.dt_fixed")?;
    if let Some(i) = map.get_f64("integrator.callback_interval")? {
        cfg.callback_interval = i;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Configuration of a single integration (`run` subcommand).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub ic: IcSpec,
    pub alpha: f64,
    /// Grid size; `None` only when the initial condition is a snapshot,
    /// which then fixes the resolution.
    pub n: Option<usize>,
    pub integrator: IntegratorConfig,
    pub output_dir: PathBuf,
    pub snapshot_interval: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, AppError> {
        let map = ConfigMap::parse(text)?;
        let ic = parse_ic(&map, true)?;
        let alpha = map.require_f64("alpha")?;
        let n = map.get_u64("n")?.map(|n| n as usize);
        if n.is_none() && !matches!(ic, IcSpec::Snapshot { .. }) {
            return Err(AppError::config("missing required key 'n'"));
        }
        let t_end = map.require_f64("integrator.t_end")?;
        let integrator = parse_integrator(&map, t_end)?;
        let output_dir = map
            .get_str("output_dir")
            .ok_or_else(|| AppError::config("missing required key 'output_dir'"))?;
        let snapshot_interval = map.get_f64("snapshot_interval")?;
        if let Some(si) = snapshot_interval {
            if !(si > 0.0) {
                return Err(AppError::config(format!("snapshot_interval={si} must be positive")));
            }
        }
        map.finish()?;
        Ok(RunConfig {
            ic,
            alpha,
            n,
            integrator,
            output_dir: PathBuf::from(output_dir),
            snapshot_interval,
        })
    }
}

/// Configuration of an alpha sweep (`sweep` subcommand).
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub alphas: Vec<f64>,
    pub t_end: f64,
    pub sample_times: Vec<f64>,
    pub ic: IcSpec,
    pub parallelism: usize,
    /// Verdict threshold; defaults to `0.05 * ||theta0||_{H1}` when absent.
    pub threshold: Option<f64>,
    /// Grid cells per regularization length; the resolution rule enforces
    /// `n * alpha >= cells_per_alpha >= 4`.
    pub cells_per_alpha: f64,
    pub courant: f64,
    pub dt_max: f64,
    pub dt_fixed: Option<f64>,
    pub output_dir: PathBuf,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<SweepSpec, AppError> {
        let map = ConfigMap::parse(text)?;
        let ic = parse_ic(&map, false)?;

        let alphas = match map.get_f64_list("sweep.alphas")? {
            Some(list) => list,
            None => {
                let alpha0 = map.get_f64("sweep.alpha0")?.unwrap_or(0.1);
                let levels = map.get_u64("sweep.levels")?.unwrap_or(6) as usize;
                (0..levels).map(|j| alpha0 * 0.5f64.powi(j as i32)).collect()
            }
        };
        if alphas.len() < 3 {
            return Err(AppError::config("sweep needs at least 3 alpha levels"));
        }
        for w in alphas.windows(2) {
            if !(w[1] < w[0]) {
                return Err(AppError::config("sweep.alphas must be strictly decreasing"));
            }
        }
        if alphas.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
            return Err(AppError::config("sweep alphas must lie in (0, 1]"));
        }

        let t_end = map.require_f64("sweep.t_end")?;
        let sample_times = map
            .get_f64_list("sweep.sample_times")?
            .ok_or_else(|| AppError::config("missing required key 'sweep.sample_times'"))?;
        if sample_times.is_empty() {
            return Err(AppError::config("sweep.sample_times must not be empty"));
        }
        for w in sample_times.windows(2) {
            if !(w[0] < w[1]) {
                return Err(AppError::config("sweep.sample_times must be strictly increasing"));
            }
        }
        if sample_times.iter().any(|&t| !(t >= 0.0) || t > t_end) {
            return Err(AppError::config("sweep.sample_times must lie within [0, t_end]"));
        }

        let parallelism = map
            .get_u64("sweep.parallelism")?
            .map(|p| p as usize)
            .unwrap_or_else(|| {
                std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
            })
            .max(1);

        let threshold = map.get_f64("sweep.threshold")?;
        if let Some(th) = threshold {
            if !(th > 0.0) {
                return Err(AppError::config(format!("sweep.threshold={th} must be positive")));
            }
        }
        let cells_per_alpha = map.get_f64("sweep.cells_per_alpha")?.unwrap_or(4.0);
        if !(cells_per_alpha >= 4.0) {
            return Err(AppError::config(format!(
                "sweep.cells_per_alpha={cells_per_alpha} must be at least 4"
            )));
        }

        let courant = map.get_f64("integrator.courant")?.unwrap_or(0.5);
        let dt_max = map.get_f64("integrator.dt_max")?.unwrap_or(1e-2);
        let dt_fixed = map.get_f64("integrator.dt_fixed")?;
        // Validate the base integrator settings once, up front.
        let mut probe = IntegratorConfig::new(t_end);
        probe.courant = courant;
        probe.dt_max = dt_max;
        probe.dt_fixed = dt_fixed;
        probe.validate()?;

        let output_dir = map
            .get_str("output_dir")
            .ok_or_else(|| AppError::config("missing required key 'output_dir'"))?;
        map.finish()?;
        Ok(SweepSpec {
            alphas,
            t_end,
            sample_times,
            ic,
            parallelism,
            threshold,
            cells_per_alpha,
            courant,
            dt_max,
            dt_fixed,
            output_dir: PathBuf::from(output_dir),
        })
    }

    pub fn base_integrator(&self, t_end: f64) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::new(t_end);
        cfg.courant = self.courant;
        cfg.dt_max = self.dt_max;
        cfg.dt_fixed = self.dt_fixed;
        cfg
    }
}

/// Smallest even grid size resolving the regularization length with
/// `cells_per_alpha` cells, floored at the minimum supported size.
pub fn resolution_for(alpha: f64, cells_per_alpha: f64) -> usize {
    let raw = (cells_per_alpha / alpha).ceil() as usize;
    let even = raw + raw % 2;
    even.max(8)
}
