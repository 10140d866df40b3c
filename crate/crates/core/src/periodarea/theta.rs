//! The velocity-direction angle along an orbit and the boundary flux of
//! `grad ln f` it encodes.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvegeom::{self, ClosedPolyline, Orientation};
use crate::dynamics::{self, DomainError};
use crate::periodicity::{ClosedOrbit, REGULARITY_FLOOR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("orbit is not regular: speed {speed:e} at t = {t}")]
    Irregular { t: f64, speed: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Stencil half-width of the sixth-order derivative.
const STENCIL: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaProfile {
    pub times: Vec<f64>,
    /// Continuously unwrapped `atan2(v2, v1)`.
    pub theta: Vec<f64>,
    pub total_change: f64,
    /// RMS of `theta' - (-2 + f_y2 cos theta - f_y1 sin theta)` with `theta'`
    /// from finite differences of the samples.
    pub rms_residual: f64,
    /// Largest `|(v1, v2) - f (cos theta, sin theta)|`.
    pub reconstruction_error: f64,
}

impl ThetaProfile {
    /// `total_change / 2 pi`, rounded.
    pub fn turns(&self) -> i32 {
        (self.total_change / TAU).round() as i32
    }
}

/// Weights of the first derivative at `x0` from values at `nodes`, from the
/// moment conditions (a small Vandermonde solve).
fn derivative_weights(x0: f64, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let a = DMatrix::from_fn(n, n, |i, j| (nodes[j] - x0).powi(i as i32));
    let mut rhs = DVector::zeros(n);
    rhs[1] = 1.0;
    let w = a.lu().solve(&rhs).expect("distinct nodes");
    w.iter().copied().collect()
}

/// Sixth-order derivative of uniformly spaced data, one-sided near the ends.
fn differentiate(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let width = 2 * STENCIL + 1;
    let centred = derivative_weights(0.0, &(0..width).map(|k| k as f64 - STENCIL as f64).collect::<Vec<_>>());
    (0..n)
        .map(|i| {
            let start = i.saturating_sub(STENCIL).min(n - width);
            let offsets: Vec<f64> = (start..start + width).map(|k| k as f64 - i as f64).collect();
            let w = if start + STENCIL == i { centred.clone() } else { derivative_weights(0.0, &offsets) };
            w.iter().zip(&values[start..start + width]).map(|(w, v)| w * v).sum::<f64>() / h
        })
        .collect()
}

pub fn reconstruct_theta(o: &ClosedOrbit) -> Result<ThetaProfile, ThetaError> {
    let samples = o.trajectory.samples();
    let mut theta: Vec<f64> = Vec::with_capacity(samples.len());
    let mut reconstruction_error: f64 = 0.0;
    for s in samples {
        let speed = s.speed();
        if speed < REGULARITY_FLOOR {
            return Err(ThetaError::Irregular { t: s.t, speed });
        }
        let raw = s.v2.atan2(s.v1);
        let th = match theta.last() {
            None => raw,
            Some(&prev) => prev + (raw - prev + std::f64::consts::PI).rem_euclid(TAU) - std::f64::consts::PI,
        };
        let f = dynamics::field_sample(&s.position(), o.mu, o.c)?.f;
        let err = (s.v1 - f * th.cos()).hypot(s.v2 - f * th.sin());
        reconstruction_error = reconstruction_error.max(err);
        theta.push(th);
    }
    let h = samples[1].t - samples[0].t;
    let d = differentiate(&theta, h);
    let mut sq = 0.0;
    for ((s, th), dth) in samples.iter().zip(&theta).zip(&d) {
        let gf = dynamics::speed_gradient(&s.position(), o.mu, o.c)?;
        let rhs = -2.0 + gf.y * th.cos() - gf.x * th.sin();
        sq += (dth - rhs).powi(2);
    }
    Ok(ThetaProfile {
        times: samples.iter().map(|s| s.t).collect(),
        total_change: theta[theta.len() - 1] - theta[0],
        theta,
        rms_residual: (sq / samples.len() as f64).sqrt(),
        reconstruction_error,
    })
}

/// The outward flux of `grad ln f` through the orbit, two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIntegral {
    pub orientation: Orientation,
    /// `+/-(total_change + 2T)`, sign `+` for clockwise.
    pub theta_form: f64,
    /// Trapezoidal quadrature of `grad ln f . n |v|` over the samples.
    pub direct: f64,
}

/// Orientation from the velocity angle's net turning, falling back to the
/// signed area when the turning vanishes.
fn orbit_orientation(o: &ClosedOrbit, profile: &ThetaProfile) -> Orientation {
    match profile.turns() {
        t if t < 0 => Orientation::Clockwise,
        t if t > 0 => Orientation::Counterclockwise,
        _ => {
            let s = o.trajectory.samples();
            ClosedPolyline::from_states(&s[..s.len() - 1])
                .map(|c| curvegeom::orientation(&c))
                .unwrap_or(Orientation::Counterclockwise)
        }
    }
}

pub fn boundary_integral(o: &ClosedOrbit) -> Result<BoundaryIntegral, ThetaError> {
    let profile = reconstruct_theta(o)?;
    boundary_integral_with(o, &profile)
}

pub fn boundary_integral_with(o: &ClosedOrbit, profile: &ThetaProfile) -> Result<BoundaryIntegral, ThetaError> {
    let orientation = orbit_orientation(o, profile);
    let sigma = orientation.sign() as f64;
    let theta_form = sigma * (profile.total_change + 2.0 * o.period);

    let samples = o.trajectory.samples();
    let h = samples[1].t - samples[0].t;
    let mut direct = 0.0;
    let last = samples.len() - 1;
    for (i, s) in samples.iter().enumerate() {
        let g = dynamics::field_sample(&s.position(), o.mu, o.c)?.grad_ln_f;
        // Outward normal times speed: left of the velocity for clockwise curves.
        let flux = sigma * (-g[0] * s.v2 + g[1] * s.v1);
        let w = if i == 0 || i == last { 0.5 } else { 1.0 };
        direct += w * flux;
    }
    Ok(BoundaryIntegral { orientation, theta_form, direct: direct * h })
}
