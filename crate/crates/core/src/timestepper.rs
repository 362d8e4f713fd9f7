//! Explicit time integration of `d/dt theta_tilde = F(theta_tilde)` with a
//! CFL-adaptive classical Runge-Kutta scheme.
//!
//! RK4 is deliberately non-conservative: the filtered energy drifts at
//! O(dt^4), which gives a measurable correctness diagnostic instead of a
//! structurally enforced invariant. On overflow the integrator reports and
//! stops; a discrete run blowing up at an unstable parameter choice is a
//! result to surface, not to clamp away.

use alloc::format;

use crate::error::Error;
use crate::field::SpectralField;
use crate::model::{recover_theta, rhs, velocity, State};

/// Floor for the velocity magnitude in the CFL formula.
const VELOCITY_FLOOR: f64 = 1e-12;
/// Relative slack when matching scheduled callback times to `t_end`.
const SCHEDULE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Courant number in `(0, 1]`.
    pub courant: f64,
    /// Hard cap on the step size.
    pub dt_max: f64,
    /// Fixed step size; disables CFL adaptivity when set.
    pub dt_fixed: Option<f64>,
    /// Integration horizon.
    pub t_end: f64,
    /// Simulation-time spacing of callback invocations.
    pub callback_interval: f64,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        IntegratorConfig {
            courant: 0.5,
            dt_max: 1e-2,
            dt_fixed: None,
            t_end,
            callback_interval: 0.1,
        }
    }

    pub fn with_fixed_dt(mut self, dt: f64) -> Self {
        self.dt_fixed = Some(dt);
        self
    }

    pub fn with_callback_interval(mut self, interval: f64) -> Self {
        self.callback_interval = interval;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.courant > 0.0 && self.courant <= 1.0) {
            return Err(Error::Config(format!("courant={} outside (0, 1]", self.courant)));
        }
        if !(self.dt_max > 0.0) {
            return Err(Error::Config(format!("dt_max={} must be positive", self.dt_max)));
        }
        if let Some(dt) = self.dt_fixed {
            if !(dt > 0.0) {
                return Err(Error::Config(format!("dt_fixed={dt} must be positive")));
            }
        }
        if !(self.callback_interval > 0.0) {
            return Err(Error::Config(format!(
                "callback_interval={} must be positive",
                self.callback_interval
            )));
        }
        if !self.t_end.is_finite() {
            return Err(Error::Config(format!("t_end={} must be finite", self.t_end)));
        }
        Ok(())
    }
}

/// CFL step size `min(dt_max, courant * dx / max(|v|_inf, floor))`.
pub fn cfl_dt(state: &State, cfg: &IntegratorConfig) -> Result<f64, Error> {
    let theta = recover_theta(state);
    let (vx, vy) = velocity(&theta);
    let vx_p = vx.inverse()?;
    let vy_p = vy.inverse()?;
    let mut speed: f64 = 0.0;
    for (a, b) in vx_p.values().iter().zip(vy_p.values()) {
        speed = speed.max(libm::hypot(*a, *b));
    }
    if !speed.is_finite() {
        return Err(Error::overflow().map_overflow(|i| i.at_time(state.t)));
    }
    Ok(cfg.dt_max.min(cfg.courant * state.grid().dx() / speed.max(VELOCITY_FLOOR)))
}

/// One classical 4-stage Runge-Kutta step of size `dt`.
pub fn rk4_step(state: &State, dt: f64) -> Result<State, Error> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Config(format!("rk4 step size dt={dt} must be positive")));
    }
    let params = state.params;
    let stage = |theta_tilde: SpectralField, t: f64, idx: u8| -> Result<SpectralField, Error> {
        let s = State { theta_tilde, t, params };
        let k = rhs(&s).map_err(|e| e.map_overflow(|i| i.at_stage(idx)))?;
        if !k.is_finite() {
            return Err(Error::Overflow(
                crate::error::OverflowInfo::new().at_time(t).at_stage(idx),
            ));
        }
        Ok(k)
    };

    let t = state.t;
    let y = &state.theta_tilde;
    let k1 = stage(y.clone(), t, 1)?;
    let k2 = stage(y.add_scaled(0.5 * dt, &k1), t + 0.5 * dt, 2)?;
    let k3 = stage(y.add_scaled(0.5 * dt, &k2), t + 0.5 * dt, 3)?;
    let k4 = stage(y.add_scaled(dt, &k3), t + dt, 4)?;

    let sum = k1.add_scaled(2.0, &k2).add_scaled(2.0, &k3).add_scaled(1.0, &k4);
    let theta_tilde = y.add_scaled(dt / 6.0, &sum);
    if !theta_tilde.is_finite() {
        return Err(Error::Overflow(crate::error::OverflowInfo::new().at_time(t)));
    }
    Ok(State { theta_tilde, t: t + dt, params })
}

/// Integrates `state` to `cfg.t_end`, invoking `callback` at the start time
/// and at every multiple of `callback_interval` after it (steps are shortened
/// to land on those times and on `t_end` exactly). Returns the final state.
pub fn integrate(
    state: State,
    cfg: &IntegratorConfig,
    callback: &mut dyn FnMut(&State),
) -> Result<State, Error> {
    cfg.validate()?;
    let t0 = state.t;
    if cfg.t_end < t0 {
        return Err(Error::Config(format!("t_end={} precedes start time {}", cfg.t_end, t0)));
    }
    callback(&state);
    if cfg.t_end == t0 {
        return Ok(state);
    }

    let mut state = state;
    let mut last_checkpoint = t0;
    let mut cb_index: u64 = 1;
    let span = cfg.t_end - t0;

    while state.t < cfg.t_end {
        // Next scheduled callback time, snapped to t_end when they coincide
        // up to roundoff.
        let mut cb_time = t0 + cb_index as f64 * cfg.callback_interval;
        if (cb_time - cfg.t_end).abs() <= SCHEDULE_SLACK * cfg.callback_interval.min(span) {
            cb_time = cfg.t_end;
        }
        let event = cb_time.min(cfg.t_end);

        let dt_raw = match cfg.dt_fixed {
            Some(dt) => dt,
            None => cfl_dt(&state, cfg)
                .map_err(|e| e.map_overflow(|i| i.with_checkpoint(last_checkpoint)))?,
        };

        let step_hits_event = state.t + dt_raw >= event;
        let dt = if step_hits_event { event - state.t } else { dt_raw };
        state = rk4_step(&state, dt)
            .map_err(|e| e.map_overflow(|i| i.with_checkpoint(last_checkpoint)))?;
        if step_hits_event {
            state.t = event;
            if event == cb_time {
                callback(&state);
                last_checkpoint = event;
                cb_index += 1;
            }
        }
    }
    Ok(state)
}
