//! Assembly of both sides of the identity for one orbit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::classify::{self, ClassifyError, TheoremCase};
use super::quadrature::{self, AreaIntegral, QuadratureConfig, QuadratureError, SingularPoint};
use super::theta::{self, ThetaError};
use crate::curvegeom::{self, ClosedPolyline, LiftedCurve, Point};
use crate::dynamics::{self, DomainError, MassParameter};
use crate::periodicity::ClosedOrbit;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("enclosed region leaves the Hill region at ({y1}, {y2}) where 2 omega - C = {g}")]
    OutsideHillRegion { y1: f64, y2: f64, g: f64 },
}

/// Scale below which `2 omega - C` near the primary at `p` (mass `m`) is
/// dominated by `2m / r`: `2m / |a|` with `a` the regular part of
/// `2 omega - C` there.
fn primary_scale(mu: MassParameter, c: f64, first: bool) -> f64 {
    let [m1, m2] = mu.masses();
    let (p, m_self, m_other) = if first {
        (mu.first_primary(), m1, m2)
    } else {
        (mu.second_primary(), m2, m1)
    };
    let a = p.norm_squared() + 2.0 * m_other - c;
    if a == 0.0 {
        f64::INFINITY
    } else {
        2.0 * m_self / a.abs()
    }
}

fn hill_check(region: &ClosedPolyline, mu: MassParameter, c: f64, excised: &[Point]) -> Result<(), QuadratureError> {
    for p in quadrature::grid_points_inside(region, 64) {
        if excised.iter().any(|q| (p - q).norm() < 1e-9) {
            continue;
        }
        if let Err(e @ DomainError::OutsideHillRegion { .. }) = dynamics::laplacian_ln_f(&p, mu, c) {
            return Err(e.into());
        }
    }
    Ok(())
}

/// Integral of `laplacian ln f` over the interior of `region`, with the
/// listed primaries excised and extrapolated.
pub fn area_integral(
    region: &ClosedPolyline,
    mu: MassParameter,
    c: f64,
    excised: &[Point],
    cfg: &QuadratureConfig,
) -> Result<AreaIntegral, QuadratureError> {
    hill_check(region, mu, c, excised)?;
    let singular: Vec<SingularPoint> = excised
        .iter()
        .map(|p| {
            let first = (p - mu.first_primary()).norm() < (p - mu.second_primary()).norm();
            SingularPoint { center: [p.x, p.y], scale: primary_scale(mu, c, first), order: 1 }
        })
        .collect();
    quadrature::integrate_region(region, |y| dynamics::laplacian_ln_f(y, mu, c), &singular, cfg)
}

/// Integral over the region bounded by the lifting of the pulled-back
/// integrand `(laplacian ln f)(phi(z)) |phi'(z)|^2`, `phi(z) = center + (z - center)^n`.
pub fn lifted_area_integral(
    lift: &LiftedCurve,
    mu: MassParameter,
    c: f64,
    cfg: &QuadratureConfig,
) -> Result<AreaIntegral, QuadratureError> {
    let n = lift.n;
    let center = lift.center;
    let nf = n as f64;
    let integrand = move |z: &Point| -> Result<f64, DomainError> {
        let w = curvegeom::push_forward_point(z, &center, n);
        let r2 = (z - center).norm_squared();
        Ok(dynamics::laplacian_ln_f(&w, mu, c)? * nf * nf * r2.powi(n as i32 - 1))
    };

    let mut singular = Vec::new();
    for (first, p) in [(true, mu.first_primary()), (false, mu.second_primary())] {
        let scale = primary_scale(mu, c, first);
        if (p - center).norm() < 1e-14 {
            // The pulled-back integrand is O(r^(n-2)) here, so the excised disk is O(eps^n).
            singular.push(SingularPoint { center: [p.x, p.y], scale: scale.powf(1.0 / nf), order: n });
            continue;
        }
        // Preimages of the other primary; locally the map scales lengths by |phi'|.
        let d = Complex64::new(p.x - center.x, p.y - center.y);
        let root = d.powf(1.0 / nf);
        for j in 0..n {
            let z = root * Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / nf);
            let zp = Point::new(center.x + z.re, center.y + z.im);
            if curvegeom::winding_number(&lift.beta, &zp).unwrap_or(0) != 0 {
                let stretch = nf * z.norm().powi(n as i32 - 1);
                singular.push(SingularPoint { center: [zp.x, zp.y], scale: scale / stretch, order: 1 });
            }
        }
    }
    let excised: Vec<Point> = singular.iter().map(|s| Point::new(s.center[0], s.center[1])).collect();
    for z in quadrature::grid_points_inside(&lift.beta, 64) {
        if excised.iter().any(|q| (z - q).norm() < 1e-9) {
            continue;
        }
        if let Err(e @ DomainError::OutsideHillRegion { .. }) = integrand(&z) {
            return Err(e.into());
        }
    }
    quadrature::integrate_region(&lift.beta, integrand, &singular, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mu: f64,
    pub jacobi: f64,
    pub period: f64,
    pub two_t: f64,
    pub case: TheoremCase,
    pub theta_total_change: f64,
    pub theta_rms_residual: f64,
    /// Outward flux of `grad ln f` through the orbit from the angle identity.
    pub boundary_integral: f64,
    /// The same flux by direct quadrature along the orbit.
    pub boundary_direct: f64,
    pub k_pi_term: f64,
    /// `pi` times the number of enclosed primaries (with multiplicity): the
    /// amount by which the area integral exceeds the boundary flux.
    pub singular_correction: f64,
    pub area_integral: Option<f64>,
    pub area_error: Option<f64>,
    /// `sign (k pi + area_integral)`.
    pub identity_rhs: Option<f64>,
    pub residual_identity: Option<f64>,
    pub residual_stokes: Option<f64>,
    /// `|2T - sign (k pi + boundary + correction)|`, available even without the area.
    pub residual_boundary_identity: f64,
    pub lift_roundtrip_error: Option<f64>,
    pub quadrature: Option<AreaIntegral>,
    pub quadrature_failure: Option<String>,
}

impl VerificationReport {
    pub fn quadrature_failed(&self) -> bool {
        self.quadrature_failure.is_some()
    }
}

pub fn verify(o: &ClosedOrbit, cfg: &QuadratureConfig) -> Result<VerificationReport, VerifyError> {
    let cls = classify::classify_case(o)?;
    verify_classified(o, &cls, cfg)
}

pub fn verify_classified(
    o: &ClosedOrbit,
    cls: &classify::Classification,
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, VerifyError> {
    let case = cls.case;
    let profile = theta::reconstruct_theta(o)?;
    let boundary = theta::boundary_integral_with(o, &profile)?;
    let two_t = 2.0 * o.period;
    let sign = case.sign as f64;
    let k_pi_term = case.k as f64 * PI;
    let singular_correction = PI * case.enclosed.total() as f64;

    let area = match &cls.lift {
        None => {
            let mut excised = Vec::new();
            if case.enclosed.first > 0 {
                excised.push(o.mu.first_primary());
            }
            if case.enclosed.second > 0 {
                excised.push(o.mu.second_primary());
            }
            area_integral(&cls.polyline, o.mu, o.c, &excised, cfg)
        }
        Some(lift) => lifted_area_integral(lift, o.mu, o.c, cfg),
    };
    let (quadrature, quadrature_failure) = match area {
        Ok(a) => (Some(a), None),
        Err(QuadratureError::OutsideHillRegion { y1, y2, g }) => {
            return Err(VerifyError::OutsideHillRegion { y1, y2, g })
        }
        Err(e) => (None, Some(e.to_string())),
    };
    let area_integral = quadrature.as_ref().map(|q| q.value);
    let identity_rhs = area_integral.map(|a| sign * (k_pi_term + a));
    Ok(VerificationReport {
        mu: o.mu.value(),
        jacobi: o.c,
        period: o.period,
        two_t,
        case,
        theta_total_change: profile.total_change,
        theta_rms_residual: profile.rms_residual,
        boundary_integral: boundary.theta_form,
        boundary_direct: boundary.direct,
        k_pi_term,
        singular_correction,
        area_error: quadrature.as_ref().map(|q| q.error),
        identity_rhs,
        residual_identity: identity_rhs.map(|r| (two_t - r).abs()),
        residual_stokes: area_integral.map(|a| (boundary.theta_form + singular_correction - a).abs()),
        residual_boundary_identity: (two_t - sign * (k_pi_term + boundary.theta_form + singular_correction)).abs(),
        lift_roundtrip_error: cls.lift.as_ref().map(|l| l.roundtrip_error),
        area_integral,
        quadrature,
        quadrature_failure,
    })
}
