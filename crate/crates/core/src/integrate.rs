//! Adaptive propagation of the rotating-frame equations with dense output, and
//! first-return detection on top of it.

mod dop853;

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{self, DomainError, MassParameter, RotatingState};
use crate::scalar::brent_minimize;
use dop853::DenseStep;

/// Distance to a primary below which propagation is abandoned.
pub const SINGULARITY_RADIUS: f64 = 1e-6;

const MAX_STEPS: usize = 5_000_000;
/// Sub-intervals per accepted step scanned for return events.
const EVENT_SUBDIVISIONS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("empty integration interval")]
    EmptyInterval,
    #[error("invalid initial state: {0}")]
    InvalidState(#[from] DomainError),
    #[error("trajectory came within {r:e} of a primary at t = {t}")]
    SingularityApproach { t: f64, r: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },
    #[error("step budget exhausted at t = {0}")]
    TooManySteps(f64),
    #[error("time {0} is outside the trajectory span")]
    OutOfRange(f64),
    #[error("no return below radius {radius:e} in window [{start}, {end}]")]
    NotFound { start: f64, end: f64, radius: f64 },
    #[error("invalid return window [{0}, {1}]")]
    InvalidWindow(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// Number of uniform sample intervals stored on each trajectory.
    pub dense_samples_per_period: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            max_step: 0.05,
            dense_samples_per_period: 4096,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        Self { rel_tol: tol, abs_tol: tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), IntegrateError> {
        let tol_ok = |x: f64| x > 0.0 && x <= 1e-3;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(IntegrateError::InvalidConfig(format!(
                "tolerances must lie in (0, 1e-3], got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if !(self.max_step > 0.0) {
            return Err(IntegrateError::InvalidConfig("max_step must be positive".into()));
        }
        if self.dense_samples_per_period < 256 {
            return Err(IntegrateError::InvalidConfig(
                "dense_samples_per_period must be at least 256".into(),
            ));
        }
        Ok(())
    }
}

/// A propagated solution curve with its continuous extension.
#[derive(Debug, Clone)]
pub struct Trajectory {
    mu: MassParameter,
    c: f64,
    steps: Vec<DenseStep>,
    samples: Vec<RotatingState>,
}

impl Trajectory {
    pub fn mu(&self) -> MassParameter {
        self.mu
    }

    /// Jacobi constant of the initial state.
    pub fn jacobi(&self) -> f64 {
        self.c
    }

    pub fn t_start(&self) -> f64 {
        self.steps[0].t0
    }

    pub fn t_end(&self) -> f64 {
        self.steps[self.steps.len() - 1].t1()
    }

    /// Uniformly spaced samples over the whole span, both ends included.
    pub fn samples(&self) -> &[RotatingState] {
        &self.samples
    }

    pub fn initial_state(&self) -> RotatingState {
        RotatingState::from_vector(self.t_start(), &self.steps[0].start())
    }

    pub fn final_state(&self) -> RotatingState {
        let last = &self.steps[self.steps.len() - 1];
        RotatingState::from_vector(last.t1(), &last.end())
    }

    /// Number of accepted integrator steps.
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// States at the accepted step boundaries (the integrator's own nodes).
    pub fn step_nodes(&self) -> Vec<RotatingState> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.initial_state());
        out.extend(self.steps.iter().map(|s| RotatingState::from_vector(s.t1(), &s.end())));
        out
    }

    fn locate(&self, t: f64) -> Result<&DenseStep, IntegrateError> {
        let (lo, hi) = if self.t_end() >= self.t_start() {
            (self.t_start(), self.t_end())
        } else {
            (self.t_end(), self.t_start())
        };
        if !(t >= lo && t <= hi) {
            return Err(IntegrateError::OutOfRange(t));
        }
        let forward = self.steps[0].h > 0.0;
        let idx = self.steps.partition_point(|s| if forward { s.t1() < t } else { s.t1() > t });
        Ok(&self.steps[idx.min(self.steps.len() - 1)])
    }

    /// Dense-output state at time `t`.
    pub fn state_at(&self, t: f64) -> Result<RotatingState, IntegrateError> {
        let step = self.locate(t)?;
        Ok(RotatingState::from_vector(t, &step.eval(t)))
    }

    /// `n` uniformly spaced states over `[t_start, t_end)`, end excluded.
    pub fn uniform_open(&self, n: usize) -> Vec<RotatingState> {
        let (t0, t1) = (self.t_start(), self.t_end());
        (0..n)
            .map(|i| {
                let t = t0 + (t1 - t0) * (i as f64) / (n as f64);
                self.state_at(t).expect("uniform time inside span")
            })
            .collect()
    }

    /// Largest deviation of the Jacobi constant from its initial value over the samples.
    pub fn max_jacobi_drift(&self) -> f64 {
        self.samples
            .iter()
            .chain(self.step_nodes().iter())
            .filter_map(|s| dynamics::jacobi_constant(s, self.mu).ok())
            .map(|c| (c - self.c).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest speed seen on samples and step nodes.
    pub fn min_speed(&self) -> f64 {
        self.samples
            .iter()
            .chain(self.step_nodes().iter())
            .map(RotatingState::speed)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Incremental DOP853 driver.
struct Stepper<'a> {
    mu: MassParameter,
    cfg: &'a IntegratorConfig,
    t: f64,
    y: Vector4<f64>,
    k: Vector4<f64>,
    h: f64,
    dir: f64,
    steps_taken: usize,
    last_rejected: bool,
}

impl<'a> Stepper<'a> {
    fn new(s0: &RotatingState, mu: MassParameter, cfg: &'a IntegratorConfig, t_end: f64) -> Result<Self, IntegrateError> {
        if !s0.is_finite() || !t_end.is_finite() {
            return Err(DomainError::NonFinite.into());
        }
        dynamics::vector_field(s0, mu)?;
        guard(s0.t, &s0.phase(), mu)?;
        let dir = (t_end - s0.t).signum();
        let y = s0.phase();
        let k = dynamics::rhs(&y, mu);
        let mut st = Self {
            mu,
            cfg,
            t: s0.t,
            y,
            k,
            h: 0.0,
            dir,
            steps_taken: 0,
            last_rejected: false,
        };
        st.h = st.initial_step(t_end);
        Ok(st)
    }

    fn f(&self) -> impl Fn(f64, &Vector4<f64>) -> Vector4<f64> {
        let mu = self.mu;
        move |_t, x| dynamics::rhs(x, mu)
    }

    fn scale(&self, i: usize, y: &Vector4<f64>) -> f64 {
        self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs()
    }

    /// Hairer's starting step heuristic.
    fn initial_step(&self, t_end: f64) -> f64 {
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..4 {
            let sk = self.scale(i, &self.y);
            dnf += (self.k[i] / sk).powi(2);
            dny += (self.y[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { (dny / dnf).sqrt() * 0.01 };
        h = h.min(self.cfg.max_step).min((t_end - self.t).abs());
        let y1 = self.y + self.k * (h * self.dir);
        let k2 = dynamics::rhs(&y1, self.mu);
        let mut der2 = 0.0;
        for i in 0..4 {
            der2 += ((k2[i] - self.k[i]) / self.scale(i, &self.y)).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(self.cfg.max_step) * self.dir
    }

    /// Takes one accepted step that does not pass `t_end`.
    fn advance(&mut self, t_end: f64) -> Result<DenseStep, IntegrateError> {
        let f = self.f();
        loop {
            if self.steps_taken >= MAX_STEPS {
                return Err(IntegrateError::TooManySteps(self.t));
            }
            self.steps_taken += 1;
            let remaining = t_end - self.t;
            let mut h = self.h;
            if h.abs() * 1.01 >= remaining.abs() {
                h = remaining;
            }
            if h.abs() <= 1e-14 * self.t.abs().max(1.0) {
                return Err(IntegrateError::StepFailure { t: self.t, h });
            }
            let out = dop853::trial_step(&f, self.t, &self.y, &self.k, h, self.cfg.rel_tol, self.cfg.abs_tol);
            let err = if out.y_new.iter().all(|x| x.is_finite()) && out.err.is_finite() {
                out.err
            } else {
                f64::INFINITY
            };
            let fac11 = err.powf(dop853::EXPO1);
            if err <= 1.0 {
                let fac = dop853::FACC2.max(dop853::FACC1.min(fac11 / dop853::SAFE));
                let mut h_new = h / fac;
                if self.last_rejected {
                    h_new = if h_new.abs() < h.abs() { h_new } else { h };
                }
                let t_new = if h == remaining { t_end } else { self.t + h };
                guard(t_new, &out.y_new, self.mu)?;
                let mut dense = dop853::dense_step(&f, self.t, &self.y, h, &out);
                dense.h = t_new - self.t;
                self.t = t_new;
                self.y = out.y_new;
                self.k = out.k_new;
                self.h = h_new.abs().min(self.cfg.max_step) * self.dir;
                self.last_rejected = false;
                return Ok(dense);
            }
            let shrink = if err.is_finite() { dop853::FACC1.min(fac11 / dop853::SAFE) } else { 10.0 };
            self.h = h / shrink;
            self.last_rejected = true;
        }
    }
}

fn guard(t: f64, y: &Vector4<f64>, mu: MassParameter) -> Result<(), IntegrateError> {
    let p = nalgebra::Vector2::new(y[0], y[1]);
    for q in mu.primaries() {
        let r = (p - q).norm();
        if r < SINGULARITY_RADIUS {
            return Err(IntegrateError::SingularityApproach { t, r });
        }
    }
    Ok(())
}

fn uniform_samples(steps: &[DenseStep], n: usize) -> Vec<RotatingState> {
    let t0 = steps[0].t0;
    let t1 = steps[steps.len() - 1].t1();
    let mut out = Vec::with_capacity(n + 1);
    let mut idx = 0;
    let forward = t1 >= t0;
    for i in 0..=n {
        let t = if i == n { t1 } else { t0 + (t1 - t0) * (i as f64) / (n as f64) };
        while idx + 1 < steps.len() && (if forward { steps[idx].t1() < t } else { steps[idx].t1() > t }) {
            idx += 1;
        }
        out.push(RotatingState::from_vector(t, &steps[idx].eval(t)));
    }
    out
}

/// Propagates `s0` to `t_end` (which may lie before `s0.t`).
pub fn propagate(
    s0: &RotatingState,
    mu: MassParameter,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegrateError> {
    cfg.validate()?;
    if t_end == s0.t {
        return Err(IntegrateError::EmptyInterval);
    }
    let c = dynamics::jacobi_constant(s0, mu)?;
    let mut st = Stepper::new(s0, mu, cfg, t_end)?;
    let mut steps = Vec::new();
    while st.t != t_end {
        steps.push(st.advance(t_end)?);
    }
    let samples = uniform_samples(&steps, cfg.dense_samples_per_period);
    Ok(Trajectory { mu, c, steps, samples })
}

/// Result of a first-return search: elapsed time and phase-space distance there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstReturn {
    pub elapsed: f64,
    pub residual: f64,
}

/// Finds the earliest local minimum of `|x(s0.t + tau) - x(s0.t)|` with
/// `tau` in `window` whose value is below `radius`.
pub fn first_return(
    s0: &RotatingState,
    mu: MassParameter,
    window: (f64, f64),
    radius: f64,
    cfg: &IntegratorConfig,
) -> Result<FirstReturn, IntegrateError> {
    cfg.validate()?;
    let (a, b) = window;
    if !(a > 0.0 && b > a && radius > 0.0) {
        return Err(IntegrateError::InvalidWindow(a, b));
    }
    let x0 = s0.phase();
    let t_end = s0.t + b;
    let mut st = Stepper::new(s0, mu, cfg, t_end)?;
    let event = |x: &Vector4<f64>| (x - x0).dot(&dynamics::rhs(x, mu));
    while st.t != t_end {
        let step = st.advance(t_end)?;
        if step.t1() - s0.t < a {
            continue;
        }
        let mut prev_t = step.t0;
        let mut prev_e = event(&step.start());
        for j in 1..=EVENT_SUBDIVISIONS {
            let t = if j == EVENT_SUBDIVISIONS {
                step.t1()
            } else {
                step.t0 + step.h * (j as f64) / (EVENT_SUBDIVISIONS as f64)
            };
            let e = event(&step.eval(t));
            if prev_e < 0.0 && e >= 0.0 {
                let dist2 = |t: f64| (step.eval(t) - x0).norm_squared();
                let (tm, d2) = brent_minimize(dist2, prev_t, t, 1e-12);
                let tau = tm - s0.t;
                let d = d2.sqrt();
                if d < radius && tau >= a && tau <= b {
                    return Ok(FirstReturn { elapsed: tau, residual: d });
                }
            }
            prev_t = t;
            prev_e = e;
        }
    }
    Err(IntegrateError::NotFound { start: a, end: b, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{lagrange_triangular, Triangular};

    fn mu() -> MassParameter {
        MassParameter::new(0.000953875).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::default().validate().is_ok());
        assert!(IntegratorConfig::with_tolerance(1e-2).validate().is_err());
        let mut c = IntegratorConfig::default();
        c.dense_samples_per_period = 100;
        assert!(c.validate().is_err());
    }

    #[test]
    fn empty_interval_rejected() {
        let s = RotatingState::new(0.5, 0.5, 0.0, 0.0, 1.0);
        assert_eq!(
            propagate(&s, mu(), 1.0, &IntegratorConfig::default()).unwrap_err(),
            IntegrateError::EmptyInterval
        );
    }

    #[test]
    fn l4_is_a_fixed_point() {
        let l4 = lagrange_triangular(mu(), Triangular::L4).point();
        let s = RotatingState::new(l4.x, l4.y, 0.0, 0.0, 0.0);
        let tr = propagate(&s, mu(), 25.0, &IntegratorConfig::default()).unwrap();
        for x in tr.samples() {
            assert!(x.phase_distance(&s) < 1e-10);
        }
    }

    #[test]
    fn harmonic_check_against_two_body_circle() {
        // With mu tiny and far from the small primary, a circular inertial orbit of
        // radius r about the big primary appears in the rotating frame as a circle
        // with angular rate (r^-1.5 - 1); check the closed form on a short arc.
        let m = MassParameter::new(1e-12).unwrap();
        let r = 0.5_f64;
        let w = r.powf(-1.5) - 1.0;
        let s0 = RotatingState::new(r, 0.0, 0.0, r * w, 0.0);
        let tr = propagate(&s0, m, 3.0, &IntegratorConfig::default()).unwrap();
        for s in tr.samples() {
            let (sn, cs) = (w * s.t).sin_cos();
            assert!((s.y1 - r * cs).abs() < 1e-9 && (s.y2 - r * sn).abs() < 1e-9, "{s:?}");
        }
    }

    #[test]
    fn dense_output_continuous_at_nodes() {
        let s0 = RotatingState::new(0.3964805517652452, -0.07419606744562268, 0.2120527494053103, 1.133143493746107, 0.0);
        let tr = propagate(&s0, mu(), 6.0, &IntegratorConfig::default()).unwrap();
        for w in tr.steps.windows(2) {
            let left = w[0].eval(w[0].t1());
            let right = w[1].eval(w[1].t0);
            assert!((left - right).norm() < 1e-12);
            assert!((left - w[0].end()).norm() < 1e-12);
        }
        for s in tr.samples() {
            let x = tr.state_at(s.t).unwrap();
            assert!(x.phase_distance(s) < 1e-12);
        }
    }

    #[test]
    fn out_of_range_query() {
        let s0 = RotatingState::new(0.5, 0.1, 0.0, 0.3, 0.0);
        let tr = propagate(&s0, mu(), 1.0, &IntegratorConfig::default()).unwrap();
        assert!(matches!(tr.state_at(1.5), Err(IntegrateError::OutOfRange(_))));
    }

    #[test]
    fn singularity_guard_trips() {
        // Radial infall onto the second primary from rest at short range.
        let p = mu().second_primary();
        let s0 = RotatingState::new(p.x + 1e-3, 0.0, 0.0, 0.0, 0.0);
        let err = propagate(&s0, mu(), 1.0, &IntegratorConfig::default()).unwrap_err();
        assert!(
            matches!(err, IntegrateError::SingularityApproach { .. } | IntegrateError::StepFailure { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn first_return_requires_valid_window() {
        let s0 = RotatingState::new(0.5, 0.1, 0.0, 0.3, 0.0);
        let cfg = IntegratorConfig::default();
        assert!(matches!(first_return(&s0, mu(), (0.0, 1.0), 1e-3, &cfg), Err(IntegrateError::InvalidWindow(..))));
        assert!(matches!(first_return(&s0, mu(), (2.0, 1.0), 1e-3, &cfg), Err(IntegrateError::InvalidWindow(..))));
    }
}
