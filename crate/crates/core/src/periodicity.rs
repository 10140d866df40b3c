//! Period detection for near-periodic initial conditions and Newton shooting
//! refinement of an (initial state, period) pair.

use nalgebra::{Matrix4x5, Vector4, Vector5};
use thiserror::Error;

use crate::dynamics::{self, MassParameter, RotatingState};
use crate::integrate::{self, FirstReturn, IntegrateError, IntegratorConfig, Trajectory};

/// Largest phase-space return distance accepted as "closed".
pub const DETECTION_THRESHOLD: f64 = 1e-3;
/// Speeds below this anywhere on the orbit make it irregular.
pub const REGULARITY_FLOOR: f64 = 1e-9;
/// Return window scanned when the caller gives no hint.
pub const DEFAULT_SCAN: (f64, f64) = (0.1, 50.0);

const REFINE_TARGET: f64 = 1e-10;
const REFINE_MAX_ITER: usize = 50;
const REFINE_PRECONDITION: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PeriodicityError {
    #[error("no return below {threshold:e} found: {source}")]
    NotPeriodic { threshold: f64, source: IntegrateError },
    #[error("state is an equilibrium of the flow")]
    Equilibrium,
    #[error("orbit is not regular: speed drops to {min_speed:e}")]
    Irregular { min_speed: f64 },
    #[error("initial guess does not close: residual {residual:e} exceeds {limit:e}")]
    PoorGuess { residual: f64, limit: f64 },
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// A detected periodic solution with one period of trajectory.
#[derive(Debug, Clone)]
pub struct ClosedOrbit {
    pub mu: MassParameter,
    pub c: f64,
    pub period: f64,
    pub trajectory: Trajectory,
    pub closure_residual: f64,
    pub min_speed: f64,
}

impl ClosedOrbit {
    pub fn initial_state(&self) -> RotatingState {
        self.trajectory.initial_state()
    }

    /// `n` states uniformly spaced in time over one period, the endpoint excluded.
    pub fn uniform_states(&self, n: usize) -> Vec<RotatingState> {
        self.trajectory.uniform_open(n)
    }
}

/// Propagates `s0` over `period` and packages the result.
pub fn closed_orbit_from(
    s0: &RotatingState,
    mu: MassParameter,
    period: f64,
    cfg: &IntegratorConfig,
) -> Result<ClosedOrbit, PeriodicityError> {
    let trajectory = integrate::propagate(s0, mu, s0.t + period, cfg)?;
    let closure_residual = trajectory.final_state().phase_distance(s0);
    let min_speed = trajectory.min_speed();
    if min_speed < REGULARITY_FLOOR {
        return Err(PeriodicityError::Irregular { min_speed });
    }
    Ok(ClosedOrbit {
        mu,
        c: trajectory.jacobi(),
        period,
        trajectory,
        closure_residual,
        min_speed,
    })
}

/// Finds the first return of `s0` to itself inside `hint` (or [`DEFAULT_SCAN`]).
pub fn detect_period(
    s0: &RotatingState,
    mu: MassParameter,
    hint: Option<(f64, f64)>,
    cfg: &IntegratorConfig,
) -> Result<ClosedOrbit, PeriodicityError> {
    let field = dynamics::vector_field(s0, mu).map_err(IntegrateError::from)?;
    if field.norm() < REGULARITY_FLOOR {
        return Err(PeriodicityError::Equilibrium);
    }
    let window = hint.unwrap_or(DEFAULT_SCAN);
    let FirstReturn { elapsed, .. } = integrate::first_return(s0, mu, window, DETECTION_THRESHOLD, cfg)
        .map_err(|e| match e {
            IntegrateError::NotFound { .. } => PeriodicityError::NotPeriodic {
                threshold: DETECTION_THRESHOLD,
                source: e,
            },
            other => PeriodicityError::Integrate(other),
        })?;
    closed_orbit_from(s0, mu, elapsed, cfg)
}

/// Result of a shooting refinement.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub orbit: ClosedOrbit,
    pub iterations: usize,
    pub converged: bool,
    pub initial_residual: f64,
    pub jacobi_before: f64,
    pub jacobi_after: f64,
}

#[derive(Debug, Clone, Copy)]
struct Shot {
    x0: Vector4<f64>,
    period: f64,
    residual: f64,
}

fn shoot(
    x0: &Vector4<f64>,
    t0: f64,
    period: f64,
    mu: MassParameter,
    cfg: &IntegratorConfig,
) -> Result<(Vector4<f64>, Vector4<f64>), IntegrateError> {
    let s = RotatingState::from_vector(t0, x0);
    let tr = integrate::propagate(&s, mu, t0 + period, cfg)?;
    let end = tr.final_state().phase();
    Ok((end - x0, dynamics::vector_field(&tr.final_state(), mu)?))
}

/// Damped Newton iteration on `x(T; x0) - x0 = 0` over `(x0, T)`.
///
/// The 4x5 Jacobian (central differences in the state, the vector field for
/// the period column) is rank deficient along the flow and the energy
/// direction; the step is its minimum-norm least-squares solution.
pub fn refine_orbit(
    s0: &RotatingState,
    mu: MassParameter,
    period: f64,
    cfg: &IntegratorConfig,
) -> Result<Refinement, PeriodicityError> {
    let t0 = s0.t;
    let jacobi_before = dynamics::jacobi_constant(s0, mu).map_err(IntegrateError::from)?;
    let (f0, _) = shoot(&s0.phase(), t0, period, mu, cfg)?;
    let initial_residual = f0.norm();
    if !(initial_residual <= REFINE_PRECONDITION) {
        return Err(PeriodicityError::PoorGuess {
            residual: initial_residual,
            limit: REFINE_PRECONDITION,
        });
    }
    let mut best = Shot { x0: s0.phase(), period, residual: initial_residual };
    let mut iterations = 0;
    while best.residual > REFINE_TARGET && iterations < REFINE_MAX_ITER {
        iterations += 1;
        let (f, flow) = shoot(&best.x0, t0, best.period, mu, cfg)?;
        let mut jac = Matrix4x5::<f64>::zeros();
        for j in 0..4 {
            let h = 1e-6 * best.x0[j].abs().max(1.0);
            let mut xp = best.x0;
            let mut xm = best.x0;
            xp[j] += h;
            xm[j] -= h;
            let (fp, _) = shoot(&xp, t0, best.period, mu, cfg)?;
            let (fm, _) = shoot(&xm, t0, best.period, mu, cfg)?;
            jac.set_column(j, &((fp - fm) / (2.0 * h)));
        }
        jac.set_column(4, &flow);

        // The energy gradient annihilates every column, so the rank is at most
        // three: drop the smallest singular value outright.
        let svd = jac.svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => break,
        };
        let sv = svd.singular_values;
        let smallest = sv.imin();
        let step = |damping: f64| {
            let mut delta = Vector5::<f64>::zeros();
            for i in 0..4 {
                if i == smallest {
                    continue;
                }
                let coef = -u.column(i).dot(&f) * sv[i] / (sv[i] * sv[i] + damping * damping);
                delta += v_t.row(i).transpose() * coef;
            }
            delta
        };

        let mut improved = false;
        let mut lambda = 0.0;
        for _ in 0..12 {
            let delta = step(lambda);
            let x_try = best.x0 + delta.fixed_rows::<4>(0);
            let t_try = best.period + delta[4];
            if t_try > 0.0 {
                if let Ok((f_try, _)) = shoot(&x_try, t0, t_try, mu, cfg) {
                    let r = f_try.norm();
                    if r < best.residual {
                        best = Shot { x0: x_try, period: t_try, residual: r };
                        improved = true;
                        break;
                    }
                }
            }
            lambda = if lambda == 0.0 { 1e-6 * sv.max() } else { lambda * 4.0 };
        }
        if !improved {
            break;
        }
    }
    let start = RotatingState::from_vector(t0, &best.x0);
    let orbit = closed_orbit_from(&start, mu, best.period, cfg)?;
    Ok(Refinement {
        jacobi_after: orbit.c,
        converged: best.residual <= REFINE_TARGET,
        orbit,
        iterations,
        initial_residual,
        jacobi_before,
    })
}
