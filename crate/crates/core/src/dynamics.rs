//! Closed-form fields of the planar circular restricted three-body problem in
//! the co-rotating frame.
//!
//! The primaries sit at `(-mu, 0)` and `(1 - mu, 0)`. Everything here is a pure
//! function of its inputs: the effective potential
//!
//! ```text
//! omega = (y1^2 + y2^2) / 2 + (1 - mu) / r1 + mu / r2
//! ```
//!
//! its analytic derivatives, the Jacobi constant `C = 2 omega - |v|^2`, the
//! speed field `f = sqrt(2 omega - C)` together with `grad ln f` and
//! `laplacian ln f`, the triangular Lagrange points and the inertial/rotating
//! frame change.

use nalgebra::{Vector2, Vector4};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised when a field is evaluated outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("mass parameter {0} is outside (0, 1/2]")]
    InvalidMass(f64),
    #[error("point ({0}, {1}) coincides with a primary")]
    AtPrimary(f64, f64),
    #[error("point ({y1}, {y2}) lies outside the Hill region (2 omega - C = {g})")]
    OutsideHillRegion { y1: f64, y2: f64, g: f64 },
    #[error("non-finite input")]
    NonFinite,
}

/// Mass ratio of the second primary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct MassParameter(f64);

impl MassParameter {
    pub fn new(mu: f64) -> Result<Self, DomainError> {
        if mu.is_finite() && mu > 0.0 && mu <= 0.5 {
            Ok(Self(mu))
        } else {
            Err(DomainError::InvalidMass(mu))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Location of the larger primary, `(-mu, 0)`.
    #[inline]
    pub fn first_primary(self) -> Vector2<f64> {
        Vector2::new(-self.0, 0.0)
    }

    /// Location of the smaller primary, `(1 - mu, 0)`.
    #[inline]
    pub fn second_primary(self) -> Vector2<f64> {
        Vector2::new(1.0 - self.0, 0.0)
    }

    pub fn primaries(self) -> [Vector2<f64>; 2] {
        [self.first_primary(), self.second_primary()]
    }

    /// Masses `[1 - mu, mu]`, in the same order as [`primaries`](Self::primaries).
    pub fn masses(self) -> [f64; 2] {
        [1.0 - self.0, self.0]
    }
}

impl TryFrom<f64> for MassParameter {
    type Error = DomainError;
    fn try_from(mu: f64) -> Result<Self, Self::Error> {
        Self::new(mu)
    }
}

impl From<MassParameter> for f64 {
    fn from(mu: MassParameter) -> f64 {
        mu.0
    }
}

/// Phase-space point in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatingState {
    pub y1: f64,
    pub y2: f64,
    pub v1: f64,
    pub v2: f64,
    pub t: f64,
}

impl RotatingState {
    pub const fn new(y1: f64, y2: f64, v1: f64, v2: f64, t: f64) -> Self {
        Self { y1, y2, v1, v2, t }
    }

    pub fn from_vector(t: f64, x: &Vector4<f64>) -> Self {
        Self::new(x[0], x[1], x[2], x[3], t)
    }

    #[inline]
    pub fn position(&self) -> Vector2<f64> {
        Vector2::new(self.y1, self.y2)
    }

    #[inline]
    pub fn velocity(&self) -> Vector2<f64> {
        Vector2::new(self.v1, self.v2)
    }

    #[inline]
    pub fn phase(&self) -> Vector4<f64> {
        Vector4::new(self.y1, self.y2, self.v1, self.v2)
    }

    pub fn speed(&self) -> f64 {
        self.v1.hypot(self.v2)
    }

    pub fn is_finite(&self) -> bool {
        self.y1.is_finite()
            && self.y2.is_finite()
            && self.v1.is_finite()
            && self.v2.is_finite()
            && self.t.is_finite()
    }

    /// Unweighted Euclidean distance between the phase-space parts of two states.
    pub fn phase_distance(&self, other: &RotatingState) -> f64 {
        (self.phase() - other.phase()).norm()
    }

    /// Image under the time-reversal symmetry `(y1, y2, v1, v2) -> (y1, -y2, -v1, v2)`.
    pub fn reflected(&self) -> Self {
        Self::new(self.y1, -self.y2, -self.v1, self.v2, self.t)
    }
}

/// Phase-space point in the inertial frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertialState {
    pub x1: f64,
    pub x2: f64,
    pub u1: f64,
    pub u2: f64,
    pub t: f64,
}

/// Everything known about the speed field at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub omega: f64,
    pub r1: f64,
    pub r2: f64,
    pub f: f64,
    pub grad_ln_f: [f64; 2],
    pub delta_ln_f: f64,
}

/// Which triangular equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Triangular {
    L4,
    L5,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangeTriangularPoint {
    pub which: Triangular,
    pub position: [f64; 2],
    /// Critical Jacobi value `3 - mu + mu^2`.
    pub c0: f64,
}

#[inline]
fn distances(y: &Vector2<f64>, mu: MassParameter) -> (f64, f64) {
    let m = mu.value();
    ((y.x + m).hypot(y.y), (y.x + m - 1.0).hypot(y.y))
}

#[inline]
fn checked_distances(y: &Vector2<f64>, mu: MassParameter) -> Result<(f64, f64), DomainError> {
    if !(y.x.is_finite() && y.y.is_finite()) {
        return Err(DomainError::NonFinite);
    }
    let (r1, r2) = distances(y, mu);
    if r1 == 0.0 || r2 == 0.0 {
        return Err(DomainError::AtPrimary(y.x, y.y));
    }
    Ok((r1, r2))
}

pub fn effective_potential(y: &Vector2<f64>, mu: MassParameter) -> Result<f64, DomainError> {
    let (r1, r2) = checked_distances(y, mu)?;
    let m = mu.value();
    Ok(0.5 * (y.x * y.x + y.y * y.y) + (1.0 - m) / r1 + m / r2)
}

/// Analytic gradient of the effective potential.
pub fn potential_gradient(y: &Vector2<f64>, mu: MassParameter) -> Result<Vector2<f64>, DomainError> {
    let (r1, r2) = checked_distances(y, mu)?;
    Ok(gradient_from_distances(y, mu, r1, r2))
}

#[inline]
fn gradient_from_distances(y: &Vector2<f64>, mu: MassParameter, r1: f64, r2: f64) -> Vector2<f64> {
    let m = mu.value();
    let a = (1.0 - m) / (r1 * r1 * r1);
    let b = m / (r2 * r2 * r2);
    Vector2::new(
        y.x - a * (y.x + m) - b * (y.x + m - 1.0),
        y.y - a * y.y - b * y.y,
    )
}

/// Right-hand side `(v1, v2, omega_1 + 2 v2, omega_2 - 2 v1)` of the rotating-frame equations.
pub fn vector_field(s: &RotatingState, mu: MassParameter) -> Result<Vector4<f64>, DomainError> {
    let grad = potential_gradient(&s.position(), mu)?;
    Ok(Vector4::new(
        s.v1,
        s.v2,
        grad.x + 2.0 * s.v2,
        grad.y - 2.0 * s.v1,
    ))
}

/// Unchecked right-hand side on a raw phase vector; used inside the integrator
/// after the singularity guard has already been applied.
#[inline]
pub(crate) fn rhs(x: &Vector4<f64>, mu: MassParameter) -> Vector4<f64> {
    let y = Vector2::new(x[0], x[1]);
    let (r1, r2) = distances(&y, mu);
    let g = gradient_from_distances(&y, mu, r1, r2);
    Vector4::new(x[2], x[3], g.x + 2.0 * x[3], g.y - 2.0 * x[2])
}

pub fn jacobi_constant(s: &RotatingState, mu: MassParameter) -> Result<f64, DomainError> {
    let omega = effective_potential(&s.position(), mu)?;
    Ok(2.0 * omega - (s.v1 * s.v1 + s.v2 * s.v2))
}

/// Membership in the Hill region `{2 omega - C >= 0}`; the primaries themselves are excluded.
pub fn hill_test(y: &Vector2<f64>, mu: MassParameter, c: f64) -> bool {
    match effective_potential(y, mu) {
        Ok(omega) => 2.0 * omega - c >= 0.0,
        Err(_) => false,
    }
}

/// `(g, grad g, laplacian g)` with `g = 2 omega - C`.
#[inline]
fn g_parts(y: &Vector2<f64>, mu: MassParameter, c: f64, r1: f64, r2: f64) -> (f64, Vector2<f64>) {
    let m = mu.value();
    let omega = 0.5 * (y.x * y.x + y.y * y.y) + (1.0 - m) / r1 + m / r2;
    let grad = gradient_from_distances(y, mu, r1, r2) * 2.0;
    (2.0 * omega - c, grad)
}

/// `g laplacian g - |grad g|^2` with the `1/r^4` terms of each primary, which
/// cancel exactly, left out. Near a primary the two sides are each of order
/// `r^-4` while the difference is of order `r^-3`.
fn laplacian_numerator(y: &Vector2<f64>, mu: MassParameter, c: f64, r1: f64, r2: f64) -> f64 {
    let m = mu.value();
    let d1 = y - mu.first_primary();
    let d2 = y - mu.second_primary();
    let (s1, s2) = (2.0 * (1.0 - m) / r1, 2.0 * m / r2);
    let (l1, l2) = (s1 / (r1 * r1), s2 / (r2 * r2));
    let (g1, g2) = (-d1 * l1, -d2 * l2);
    let q = y.norm_squared() - c;
    let gq = y * 2.0;
    s1 * l2 + s2 * l1 - 2.0 * g1.dot(&g2) + 4.0 * (s1 + s2) + q * (l1 + l2) - 2.0 * (g1 + g2).dot(&gq) + 4.0 * q
        - gq.norm_squared()
}

/// Evaluates `f = sqrt(2 omega - C)` and the derivatives of `ln f`.
///
/// With `g = 2 omega - C` one has `grad ln f = grad g / (2 g)` and
/// `laplacian ln f = (laplacian g / g - |grad g|^2 / g^2) / 2`, where
/// `laplacian g = 4 + 2 (1 - mu) / r1^3 + 2 mu / r2^3` because `1/r` has
/// planar Laplacian `1/r^3`.
pub fn field_sample(y: &Vector2<f64>, mu: MassParameter, c: f64) -> Result<FieldSample, DomainError> {
    let (r1, r2) = checked_distances(y, mu)?;
    let (g, grad) = g_parts(y, mu, c, r1, r2);
    if !(g > 0.0) {
        return Err(DomainError::OutsideHillRegion { y1: y.x, y2: y.y, g });
    }
    let grad_ln_f = grad / (2.0 * g);
    let delta_ln_f = 0.5 * laplacian_numerator(y, mu, c, r1, r2) / (g * g);
    Ok(FieldSample {
        omega: 0.5 * (g + c),
        r1,
        r2,
        f: g.sqrt(),
        grad_ln_f: [grad_ln_f.x, grad_ln_f.y],
        delta_ln_f,
    })
}

/// Just `laplacian ln f`; the hot path of the area quadrature.
#[inline]
pub fn laplacian_ln_f(y: &Vector2<f64>, mu: MassParameter, c: f64) -> Result<f64, DomainError> {
    let (r1, r2) = checked_distances(y, mu)?;
    let m = mu.value();
    let g = y.norm_squared() + 2.0 * (1.0 - m) / r1 + 2.0 * m / r2 - c;
    if !(g > 0.0) {
        return Err(DomainError::OutsideHillRegion { y1: y.x, y2: y.y, g });
    }
    Ok(0.5 * laplacian_numerator(y, mu, c, r1, r2) / (g * g))
}

/// `grad f` (not of `ln f`), as used by the velocity-angle equation.
pub fn speed_gradient(y: &Vector2<f64>, mu: MassParameter, c: f64) -> Result<Vector2<f64>, DomainError> {
    let s = field_sample(y, mu, c)?;
    Ok(Vector2::new(s.grad_ln_f[0], s.grad_ln_f[1]) * s.f)
}

pub fn rotating_from_inertial(s: &InertialState) -> RotatingState {
    let (sn, cs) = s.t.sin_cos();
    let y1 = s.x1 * cs + s.x2 * sn;
    let y2 = -s.x1 * sn + s.x2 * cs;
    // d/dt of the rotation picks up (y2, -y1).
    let v1 = s.u1 * cs + s.u2 * sn + y2;
    let v2 = -s.u1 * sn + s.u2 * cs - y1;
    RotatingState::new(y1, y2, v1, v2, s.t)
}

pub fn inertial_from_rotating(s: &RotatingState) -> InertialState {
    let (sn, cs) = s.t.sin_cos();
    let a1 = s.v1 - s.y2;
    let a2 = s.v2 + s.y1;
    InertialState {
        x1: s.y1 * cs - s.y2 * sn,
        x2: s.y1 * sn + s.y2 * cs,
        u1: a1 * cs - a2 * sn,
        u2: a1 * sn + a2 * cs,
        t: s.t,
    }
}

/// Triangular equilibrium at unit distance from both primaries.
///
/// Note the x coordinate is `1/2 - mu`: the midpoint between the primaries,
/// which is the only choice consistent with `2 omega = 3 - mu + mu^2` there.
pub fn lagrange_triangular(mu: MassParameter, which: Triangular) -> LagrangeTriangularPoint {
    let m = mu.value();
    let h = 0.75_f64.sqrt();
    let y2 = match which {
        Triangular::L4 => h,
        Triangular::L5 => -h,
    };
    LagrangeTriangularPoint {
        which,
        position: [0.5 - m, y2],
        c0: critical_jacobi(mu),
    }
}

/// `3 - mu + mu^2`, the Jacobi value of the triangular points.
pub fn critical_jacobi(mu: MassParameter) -> f64 {
    let m = mu.value();
    3.0 - m + m * m
}

impl LagrangeTriangularPoint {
    pub fn point(&self) -> Vector2<f64> {
        Vector2::new(self.position[0], self.position[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const MU_SJ: f64 = 0.000953875;

    fn mu() -> MassParameter {
        MassParameter::new(MU_SJ).unwrap()
    }

    #[test]
    fn mass_parameter_bounds() {
        assert!(MassParameter::new(0.0).is_err());
        assert!(MassParameter::new(0.6).is_err());
        assert!(MassParameter::new(f64::NAN).is_err());
        assert!(MassParameter::new(0.5).is_ok());
        let m = mu();
        assert_eq!(m.first_primary(), Vector2::new(-MU_SJ, 0.0));
        assert_eq!(m.second_primary(), Vector2::new(1.0 - MU_SJ, 0.0));
    }

    #[test]
    fn equal_mass_midpoint_potential() {
        let half = MassParameter::new(0.5).unwrap();
        assert_eq!(effective_potential(&Vector2::zeros(), half).unwrap(), 2.0);
    }

    #[test]
    fn potential_rejects_primaries() {
        let m = mu();
        for p in m.primaries() {
            assert!(matches!(effective_potential(&p, m), Err(DomainError::AtPrimary(..))));
            assert!(vector_field(&RotatingState::new(p.x, p.y, 0.0, 0.0, 0.0), m).is_err());
            assert!(!hill_test(&p, m, -100.0));
        }
    }

    #[test]
    fn example_one_jacobi() {
        let s = RotatingState::new(
            0.487957127501505,
            0.84849821703225,
            -0.036041155996589,
            0.02072666577125,
            0.0,
        );
        assert!((jacobi_constant(&s, mu()).unwrap() - 2.9986240063314).abs() < 1e-9);
    }

    #[test]
    fn example_three_jacobi() {
        let s = RotatingState::new(
            1.285278846123773,
            3.401751107285172,
            3.892316782809678,
            -1.47062858674288,
            0.0,
        );
        assert!((jacobi_constant(&s, mu()).unwrap() + 3.5390576031917).abs() < 1e-8);
    }

    #[test]
    fn zero_velocity_state() {
        let m = mu();
        let s = RotatingState::new(0.3, -0.2, 0.0, 0.0, 1.0);
        let omega = effective_potential(&s.position(), m).unwrap();
        assert_eq!(jacobi_constant(&s, m).unwrap(), 2.0 * omega);
        let d = vector_field(&s, m).unwrap();
        let g = potential_gradient(&s.position(), m).unwrap();
        assert_eq!((d[0], d[1]), (0.0, 0.0));
        assert_eq!((d[2], d[3]), (g.x, g.y));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let m = mu();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-5;
        for _ in 0..20 {
            let y = Vector2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if distances(&y, m).0 < 0.05 || distances(&y, m).1 < 0.05 {
                continue;
            }
            let g = potential_gradient(&y, m).unwrap();
            let w = |p: Vector2<f64>| effective_potential(&p, m).unwrap();
            let fx = (w(y + Vector2::new(h, 0.0)) - w(y - Vector2::new(h, 0.0))) / (2.0 * h);
            let fy = (w(y + Vector2::new(0.0, h)) - w(y - Vector2::new(0.0, h))) / (2.0 * h);
            let scale = g.norm().max(1.0);
            assert!((fx - g.x).abs() / scale < 1e-7, "{fx} vs {}", g.x);
            assert!((fy - g.y).abs() / scale < 1e-7, "{fy} vs {}", g.y);
        }
    }

    #[test]
    fn triangular_points_are_equilibria() {
        for mu_v in [MU_SJ, 0.01, 0.2, 0.5] {
            let m = MassParameter::new(mu_v).unwrap();
            for which in [Triangular::L4, Triangular::L5] {
                let l = lagrange_triangular(m, which);
                let p = l.point();
                let (r1, r2) = distances(&p, m);
                assert_relative_eq!(r1, 1.0, epsilon = 1e-12);
                assert_relative_eq!(r2, 1.0, epsilon = 1e-12);
                let two_omega = 2.0 * effective_potential(&p, m).unwrap();
                assert!((two_omega - l.c0).abs() < 1e-12);
                let acc = vector_field(&RotatingState::new(p.x, p.y, 0.0, 0.0, 0.0), m).unwrap();
                assert!(acc[2].abs() < 1e-12 && acc[3].abs() < 1e-12);
            }
        }
        let half = MassParameter::new(0.5).unwrap();
        let l4 = lagrange_triangular(half, Triangular::L4);
        assert_eq!(l4.position[0], 0.0);
        assert_relative_eq!(l4.position[1], 3f64.sqrt() / 2.0);
    }

    #[test]
    fn example_one_reference_critical_value() {
        // 3 - mu + mu^2 for the Sun-Jupiter ratio.
        let c0 = critical_jacobi(mu());
        assert!((c0 - 2.9990470348775156).abs() < 1e-15);
    }

    #[test]
    fn hill_region_near_l4() {
        let m = mu();
        let l4 = lagrange_triangular(m, Triangular::L4);
        assert!(hill_test(&l4.point(), m, l4.c0 - 1e-3));
        assert!(!hill_test(&l4.point(), m, l4.c0 + 1e-3));
        for dy in [1e-3, 5e-3, 1e-2] {
            let p = l4.point() + Vector2::new(dy, -dy);
            assert!(!hill_test(&p, m, l4.c0 + 1e-3));
        }
    }

    #[test]
    fn laplacian_at_l4_closed_form() {
        let m = mu();
        let l4 = lagrange_triangular(m, Triangular::L4);
        for c in [2.0, 2.9, 2.99, 2.998] {
            let d = field_sample(&l4.point(), m, c).unwrap().delta_ln_f;
            let expect = 3.0 / (3.0 + MU_SJ * MU_SJ - MU_SJ - c);
            assert_relative_eq!(d, expect, max_relative = 1e-12);
        }
    }

    /// Richardson-extrapolated 5-point Laplacian of `ln f`.
    fn fd_laplacian(y: Vector2<f64>, m: MassParameter, c: f64, h: f64) -> f64 {
        let lnf = |p: Vector2<f64>| 0.5 * (2.0 * effective_potential(&p, m).unwrap() - c).ln();
        let five = |h: f64| {
            (lnf(y + Vector2::new(h, 0.0))
                + lnf(y - Vector2::new(h, 0.0))
                + lnf(y + Vector2::new(0.0, h))
                + lnf(y - Vector2::new(0.0, h))
                - 4.0 * lnf(y))
                / (h * h)
        };
        (4.0 * five(h / 2.0) - five(h)) / 3.0
    }

    #[test]
    fn laplacian_matches_finite_differences() {
        let m = mu();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 50 {
            let y = Vector2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let c = rng.gen_range(-1.0..3.2);
            let (r1, r2) = distances(&y, m);
            if r1 < 0.05 || r2 < 0.05 {
                continue;
            }
            let Ok(s) = field_sample(&y, m, c) else { continue };
            if s.f * s.f < 0.05 {
                continue;
            }
            let fd = fd_laplacian(y, m, c, 1e-4);
            let scale = s.delta_ln_f.abs().max(1e-2);
            assert!(
                (fd - s.delta_ln_f).abs() / scale < 1e-5,
                "at {y:?}, C={c}: {fd} vs {}",
                s.delta_ln_f
            );
            checked += 1;
        }
    }

    #[test]
    fn laplacian_close_to_primary_matches_expansion() {
        // With g = 2m/r + a near a primary, the radial Laplacian of ln(g)/2 is
        // (a / 2m) / (2 r (1 + a r / 2m)^2) up to the smooth remainder.
        let m = mu();
        let c = -3.5390576031917;
        let p = m.second_primary();
        let a = p.norm_squared() + 2.0 * (1.0 - MU_SJ) - c;
        for r in [1e-7, 1e-6, 1e-5] {
            let k = a / (2.0 * MU_SJ);
            let lead = k / (2.0 * r * (1.0 + k * r).powi(2));
            for t in [0.0, 1.0, 2.5] {
                let d = laplacian_ln_f(&(p + Vector2::new(r * f64::cos(t), r * f64::sin(t))), m, c).unwrap();
                assert!((d - lead).abs() < 1e-2 * lead, "r={r}: {d} vs {lead}");
            }
        }
    }

    #[test]
    fn far_field_laplacian_decays() {
        let m = mu();
        let y = Vector2::new(60.0, 80.0);
        let d = field_sample(&y, m, 3.0).unwrap().delta_ln_f;
        assert!(d.abs() < 1e-3);
        // ln f ~ ln|y| there, so the Laplacian is a small negative residue.
        let fd = fd_laplacian(y, m, 3.0, 1e-1);
        assert!((fd - d).abs() < 1e-7);
    }

    #[test]
    fn speed_matches_field_for_any_state() {
        let m = mu();
        let s = RotatingState::new(0.7, 0.4, 0.3, -0.1, 0.0);
        let c = jacobi_constant(&s, m).unwrap();
        let fs = field_sample(&s.position(), m, c).unwrap();
        assert_relative_eq!(fs.f * fs.f, s.v1 * s.v1 + s.v2 * s.v2, max_relative = 1e-12);
    }

    #[test]
    fn frame_change_at_zero_epoch() {
        let s = InertialState { x1: 0.3, x2: -0.4, u1: 0.1, u2: 0.2, t: 0.0 };
        let r = rotating_from_inertial(&s);
        assert_eq!((r.y1, r.y2), (0.3, -0.4));
        // u = v + (-y2, y1)
        assert_relative_eq!(r.v1 - r.y2, s.u1, epsilon = 1e-15);
        assert_relative_eq!(r.v2 + r.y1, s.u2, epsilon = 1e-15);
    }

    #[test]
    fn corotating_point_is_fixed() {
        for t in [0.0_f64, 0.7, 2.0, 5.5] {
            let s = InertialState { x1: t.cos(), x2: t.sin(), u1: -t.sin(), u2: t.cos(), t };
            let r = rotating_from_inertial(&s);
            assert!((r.y1 - 1.0).abs() < 1e-15 && r.y2.abs() < 1e-15);
            assert!(r.v1.abs() < 1e-15 && r.v2.abs() < 1e-15);
        }
    }

    #[test]
    fn frame_change_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = RotatingState::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-10.0..10.0),
            );
            let back = rotating_from_inertial(&inertial_from_rotating(&s));
            assert!(s.phase_distance(&back) < 1e-14);
        }
    }

    #[test]
    fn jacobi_reflection_symmetry() {
        let m = mu();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let s = RotatingState::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                0.0,
            );
            assert_eq!(jacobi_constant(&s, m).unwrap(), jacobi_constant(&s.reflected(), m).unwrap());
        }
    }

    proptest::proptest! {
        #[test]
        fn hill_membership_is_monotone_in_c(
            y1 in -2.0f64..2.0, y2 in -2.0f64..2.0, c in -5.0f64..5.0, dc in 0.0f64..3.0
        ) {
            let m = MassParameter::new(MU_SJ).unwrap();
            let y = Vector2::new(y1, y2);
            if hill_test(&y, m, c) {
                proptest::prop_assert!(hill_test(&y, m, c - dc));
            }
        }
    }
}
