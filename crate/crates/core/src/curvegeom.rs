//! Closed planar polylines: orientation, winding and turning numbers,
//! simplicity, and lifting through the complex power map about a center.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{MassParameter, RotatingState};

pub type Point = Vector2<f64>;

pub const MIN_VERTICES: usize = 16;
/// Edges closer than this count as intersecting.
pub const SIMPLICITY_TOLERANCE: f64 = 1e-10;
/// Points closer than this to an edge are "on" the curve.
pub const ON_CURVE_TOLERANCE: f64 = 1e-12;
/// Required vertex-wise agreement of a lifting pushed back down.
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polyline needs at least {MIN_VERTICES} vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("non-finite vertex at index {0}")]
    NonFinite(usize),
    #[error("{times} time stamps for {vertices} vertices")]
    TimesLength { times: usize, vertices: usize },
    #[error("point lies on the curve (distance {0:e})")]
    PointOnCurve(f64),
    #[error("covering index must be at least 1")]
    InvalidIndex,
    #[error("winding number {found} about the center, expected +/-{expected}")]
    WindingMismatch { expected: u32, found: i32 },
    #[error("consecutive samples subtend {0} rad about the center; resample more finely")]
    CoarseSampling(f64),
    #[error("lifted curve is not simple: the curve is not n-simple about this center")]
    NonSimpleLifting,
    #[error("lift round trip error {0:e} exceeds tolerance")]
    RoundTrip(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
}

impl Orientation {
    /// +1 for clockwise, -1 for counterclockwise.
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Clockwise => 1,
            Orientation::Counterclockwise => -1,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::Counterclockwise,
            Orientation::Counterclockwise => Orientation::Clockwise,
        }
    }
}

/// A closed polygonal curve; the closing edge from the last vertex back to the
/// first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPolyline {
    vertices: Vec<Point>,
    times: Option<Vec<f64>>,
}

impl ClosedPolyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let m = vertices.len();
        if m < MIN_VERTICES {
            return Err(GeometryError::TooFewVertices(m));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite()) {
                return Err(GeometryError::NonFinite(i));
            }
            let j = (i + 1) % m;
            if *v == vertices[j] {
                return Err(GeometryError::RepeatedVertex(i, j));
            }
        }
        Ok(Self { vertices, times: None })
    }

    pub fn with_times(vertices: Vec<Point>, times: Vec<f64>) -> Result<Self, GeometryError> {
        if times.len() != vertices.len() {
            return Err(GeometryError::TimesLength { times: times.len(), vertices: vertices.len() });
        }
        let mut c = Self::new(vertices)?;
        c.times = Some(times);
        Ok(c)
    }

    /// Positions of time-stamped states; a trailing state that repeats the
    /// first one (a closed sample set) should be left out by the caller.
    pub fn from_states(states: &[RotatingState]) -> Result<Self, GeometryError> {
        Self::with_times(
            states.iter().map(RotatingState::position).collect(),
            states.iter().map(|s| s.t).collect(),
        )
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn times(&self) -> Option<&[f64]> {
        self.times.as_deref()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as (start, end) pairs, closing edge last.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let m = self.vertices.len();
        (0..m).map(move |i| (self.vertices[i], self.vertices[(i + 1) % m]))
    }

    /// Same curve traversed backwards from the same starting vertex.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices[1..].reverse();
        let times = self.times.as_ref().map(|t| {
            let mut t = t.clone();
            t[1..].reverse();
            t
        });
        Self { vertices, times }
    }

    /// Same curve starting at vertex `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(k % self.len());
        let times = self.times.as_ref().map(|t| {
            let mut t = t.clone();
            t.rotate_left(k % self.len());
            t
        });
        Self { vertices, times }
    }

    /// Axis-aligned bounding box as (min, max).
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = lo;
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Distance from `p` to the nearest edge.
    pub fn distance_to(&self, p: &Point) -> f64 {
        self.edges().map(|(a, b)| point_segment_distance(p, &a, &b)).fold(f64::INFINITY, f64::min)
    }
}

fn cross(a: &Point, b: &Point) -> f64 {
    a.x * b.y - a.y * b.x
}

fn point_segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_squared();
    let s = if len2 == 0.0 { 0.0 } else { ((p - a).dot(&d) / len2).clamp(0.0, 1.0) };
    (p - (a + d * s)).norm()
}

fn segments_distance(a: &Point, b: &Point, c: &Point, d: &Point) -> f64 {
    let d1 = cross(&(b - a), &(c - a));
    let d2 = cross(&(b - a), &(d - a));
    let d3 = cross(&(d - c), &(a - c));
    let d4 = cross(&(d - c), &(b - c));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Shoelace area; positive for counterclockwise curves.
pub fn signed_area(c: &ClosedPolyline) -> f64 {
    let o = c.vertices[0];
    0.5 * c.edges().map(|(a, b)| cross(&(a - o), &(b - o))).sum::<f64>()
}

pub fn orientation(c: &ClosedPolyline) -> Orientation {
    if signed_area(c) < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Counterclockwise
    }
}

/// Total signed angle swept about `p`, in radians.
fn swept_angle(c: &ClosedPolyline, p: &Point) -> f64 {
    c.edges().map(|(a, b)| {
        let (u, v) = (a - p, b - p);
        cross(&u, &v).atan2(u.dot(&v))
    })
    .sum()
}

pub fn winding_number(c: &ClosedPolyline, p: &Point) -> Result<i32, GeometryError> {
    let dist = c.distance_to(p);
    if dist <= ON_CURVE_TOLERANCE {
        return Err(GeometryError::PointOnCurve(dist));
    }
    Ok((swept_angle(c, p) / TAU).round() as i32)
}

/// Turning number of the edge directions.
pub fn turning_number(c: &ClosedPolyline) -> i32 {
    let dirs: Vec<Point> = c.edges().map(|(a, b)| b - a).collect();
    let m = dirs.len();
    let total: f64 = (0..m)
        .map(|i| {
            let (u, v) = (dirs[i], dirs[(i + 1) % m]);
            cross(&u, &v).atan2(u.dot(&v))
        })
        .sum();
    (total / TAU).round() as i32
}

/// True when no two non-adjacent edges come within [`SIMPLICITY_TOLERANCE`].
pub fn is_simple(c: &ClosedPolyline) -> bool {
    let m = c.len();
    let edges: Vec<(Point, Point)> = c.edges().collect();
    let mut order: Vec<usize> = (0..m).collect();
    let min_x = |i: usize| edges[i].0.x.min(edges[i].1.x);
    order.sort_by(|&i, &j| min_x(i).total_cmp(&min_x(j)));
    for (oi, &i) in order.iter().enumerate() {
        let (a, b) = edges[i];
        let max_x = a.x.max(b.x) + SIMPLICITY_TOLERANCE;
        let (lo_y, hi_y) = (a.y.min(b.y), a.y.max(b.y));
        for &j in &order[oi + 1..] {
            if min_x(j) > max_x {
                break;
            }
            let adjacent = (i + 1) % m == j || (j + 1) % m == i;
            if adjacent {
                continue;
            }
            let (p, q) = edges[j];
            if p.y.max(q.y) < lo_y - SIMPLICITY_TOLERANCE || p.y.min(q.y) > hi_y + SIMPLICITY_TOLERANCE {
                continue;
            }
            if segments_distance(&a, &b, &p, &q) <= SIMPLICITY_TOLERANCE {
                return false;
            }
        }
    }
    true
}

/// Enclosure data of a closed curve relative to the two primaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingProfile {
    pub w_primary1: i32,
    pub w_primary2: i32,
    pub turning: i32,
    pub orientation: Orientation,
}

pub fn winding_profile(c: &ClosedPolyline, mu: MassParameter) -> Result<WindingProfile, GeometryError> {
    Ok(WindingProfile {
        w_primary1: winding_number(c, &mu.first_primary())?,
        w_primary2: winding_number(c, &mu.second_primary())?,
        turning: turning_number(c),
        orientation: orientation(c),
    })
}

/// `center + (p - center)^n` in complex arithmetic.
pub fn push_forward_point(p: &Point, center: &Point, n: u32) -> Point {
    let z = Complex64::new(p.x - center.x, p.y - center.y).powu(n);
    Point::new(center.x + z.re, center.y + z.im)
}

pub fn push_forward(c: &ClosedPolyline, center: &Point, n: u32) -> Result<ClosedPolyline, GeometryError> {
    let vertices = c.vertices.iter().map(|p| push_forward_point(p, center, n)).collect();
    match &c.times {
        Some(t) => ClosedPolyline::with_times(vertices, t.clone()),
        None => ClosedPolyline::new(vertices),
    }
}

/// A simple curve `beta` whose n-th power image about `center` is the input.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCurve {
    pub center: Point,
    pub n: u32,
    pub beta: ClosedPolyline,
    /// Distance of each input vertex from the center.
    pub q: Vec<f64>,
    /// Continuously unwrapped polar angle of each input vertex about the center.
    pub gamma: Vec<f64>,
    /// Angle swept over the full closed curve, `+/- 2 pi n`.
    pub gamma_total: f64,
    pub roundtrip_error: f64,
}

pub fn lift(c: &ClosedPolyline, center: &Point, n: u32) -> Result<LiftedCurve, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidIndex);
    }
    let w = winding_number(c, center)?;
    if w.unsigned_abs() != n {
        return Err(GeometryError::WindingMismatch { expected: n, found: w });
    }
    let m = c.len();
    let mut q = Vec::with_capacity(m);
    let mut gamma = Vec::with_capacity(m);
    let rel = |p: &Point| p - center;
    let first = rel(&c.vertices[0]);
    let mut g = first.y.atan2(first.x);
    for i in 0..m {
        let u = rel(&c.vertices[i]);
        if i > 0 {
            let prev = rel(&c.vertices[i - 1]);
            let step = cross(&prev, &u).atan2(prev.dot(&u));
            if step.abs() >= FRAC_PI_2 {
                return Err(GeometryError::CoarseSampling(step.abs()));
            }
            g += step;
        }
        q.push(u.norm());
        gamma.push(g);
    }
    let last = rel(&c.vertices[m - 1]);
    let closing = cross(&last, &first).atan2(last.dot(&first));
    if closing.abs() >= FRAC_PI_2 {
        return Err(GeometryError::CoarseSampling(closing.abs()));
    }
    let gamma_total = g + closing - gamma[0];

    let nf = n as f64;
    let beta_vertices: Vec<Point> = q
        .iter()
        .zip(&gamma)
        .map(|(&r, &th)| {
            let (s, co) = (th / nf).sin_cos();
            center + Point::new(co, s) * r.powf(1.0 / nf)
        })
        .collect();
    let beta = match &c.times {
        Some(t) => ClosedPolyline::with_times(beta_vertices, t.clone())?,
        None => ClosedPolyline::new(beta_vertices)?,
    };
    if !is_simple(&beta) {
        return Err(GeometryError::NonSimpleLifting);
    }
    let roundtrip_error = beta
        .vertices
        .iter()
        .zip(&c.vertices)
        .map(|(b, a)| (push_forward_point(b, center, n) - a).norm())
        .fold(0.0, f64::max);
    if roundtrip_error > ROUNDTRIP_TOLERANCE {
        return Err(GeometryError::RoundTrip(roundtrip_error));
    }
    debug_assert!((gamma_total.abs() - TAU * nf).abs() < PI);
    Ok(LiftedCurve { center: *center, n, beta, q, gamma, gamma_total, roundtrip_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle(center: Point, r: f64, m: usize, turns: f64) -> ClosedPolyline {
        ClosedPolyline::new(
            (0..m)
                .map(|i| {
                    let a = turns * TAU * i as f64 / m as f64;
                    center + Point::new(a.cos(), a.sin()) * r
                })
                .collect(),
        )
        .unwrap()
    }

    /// Unit square with extra collinear vertices to satisfy the vertex minimum.
    fn unit_square() -> ClosedPolyline {
        let corners = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let mut v = Vec::new();
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for j in 0..4 {
                v.push(a + (b - a) * (j as f64 / 4.0));
            }
        }
        ClosedPolyline::new(v).unwrap()
    }

    fn bowtie() -> ClosedPolyline {
        let corners = [Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let mut v = Vec::new();
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for j in 0..4 {
                v.push(a + (b - a) * (j as f64 / 4.0));
            }
        }
        ClosedPolyline::new(v).unwrap()
    }

    #[test]
    fn construction_invariants() {
        let few: Vec<Point> = (0..10).map(|i| Point::new(i as f64, 0.0)).collect();
        assert_eq!(ClosedPolyline::new(few).unwrap_err(), GeometryError::TooFewVertices(10));
        let mut v = circle(Point::zeros(), 1.0, 20, 1.0).vertices().to_vec();
        v[5] = v[4];
        assert_eq!(ClosedPolyline::new(v.clone()).unwrap_err(), GeometryError::RepeatedVertex(4, 5));
        v[5] = Point::new(f64::NAN, 0.0);
        assert_eq!(ClosedPolyline::new(v).unwrap_err(), GeometryError::NonFinite(5));
        let mut closed = circle(Point::zeros(), 1.0, 20, 1.0).vertices().to_vec();
        closed.push(closed[0]);
        assert!(matches!(ClosedPolyline::new(closed), Err(GeometryError::RepeatedVertex(20, 0))));
    }

    #[test]
    fn square_area_and_orientation() {
        let sq = unit_square();
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
        assert!((signed_area(&sq.reversed()) + 1.0).abs() < 1e-15);
        assert_eq!(orientation(&sq), Orientation::Counterclockwise);
        assert_eq!(orientation(&sq.reversed()), Orientation::Clockwise);
    }

    #[test]
    fn inscribed_polygon_area() {
        let m = 1000;
        let a = signed_area(&circle(Point::new(3.0, -2.0), 1.0, m, 1.0));
        let exact = 0.5 * m as f64 * (TAU / m as f64).sin();
        assert!((a - exact).abs() < 1e-12);
        assert!((a - PI).abs() < 1e-4);
    }

    #[test]
    fn winding_numbers() {
        let c = circle(Point::zeros(), 1.0, 64, 1.0);
        assert_eq!(winding_number(&c, &Point::zeros()).unwrap(), 1);
        assert_eq!(winding_number(&c.reversed(), &Point::zeros()).unwrap(), -1);
        assert_eq!(winding_number(&c, &Point::new(5.0, 0.3)).unwrap(), 0);
        assert!(matches!(winding_number(&c, &c.vertices()[3]), Err(GeometryError::PointOnCurve(_))));
        let triple = circle(Point::zeros(), 1.0, 301, 3.0);
        assert_eq!(winding_number(&triple, &Point::new(0.1, 0.0)).unwrap(), 3);
    }

    #[test]
    fn turning_numbers() {
        assert_eq!(turning_number(&unit_square()), 1);
        assert_eq!(turning_number(&unit_square().reversed()), -1);
        assert_eq!(turning_number(&bowtie()), 0);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&unit_square()));
        assert!(is_simple(&circle(Point::zeros(), 1.0, 500, 1.0)));
        assert!(!is_simple(&bowtie()));
        assert!(!is_simple(&circle(Point::zeros(), 1.0, 301, 2.0)));
    }

    #[test]
    fn near_touching_edges_fail_simplicity() {
        // A thin slot whose two long sides are 1e-11 apart.
        let gap = 1e-11;
        let mut v = Vec::new();
        for i in 0..10 {
            v.push(Point::new(i as f64 / 10.0, 0.0));
        }
        v.push(Point::new(1.0, -1.0));
        v.push(Point::new(1.5, -1.0));
        v.push(Point::new(1.5, 1.0));
        for i in (0..10).rev() {
            v.push(Point::new(i as f64 / 10.0 + 0.05, gap));
        }
        v.push(Point::new(-0.5, 1.0));
        v.push(Point::new(-0.5, -1.0));
        let c = ClosedPolyline::new(v).unwrap();
        assert!(!is_simple(&c));
    }

    #[test]
    fn push_forward_examples() {
        let c = Point::new(0.3, -0.7);
        assert!((push_forward_point(&(c + Point::new(1.0, 0.0)), &c, 4) - (c + Point::new(1.0, 0.0))).norm() < 1e-15);
        assert!((push_forward_point(&(c + Point::new(0.0, 1.0)), &c, 2) - (c + Point::new(-1.0, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn lift_double_circle() {
        let center = Point::new(-0.2, 0.1);
        let c = circle(center, 8.0, 400, 2.0);
        let l = lift(&c, &center, 2).unwrap();
        for b in l.beta.vertices() {
            assert!(((b - center).norm() - 8f64.sqrt()).abs() < 1e-12);
        }
        assert_eq!(winding_number(&l.beta, &center).unwrap(), 1);
        assert!((l.gamma_total - 2.0 * TAU).abs() < 1e-9);
        assert!(l.roundtrip_error < 1e-12);
    }

    #[test]
    fn lift_index_one_is_identity() {
        let center = Point::new(0.5, 0.5);
        let c = circle(Point::new(0.6, 0.4), 1.0, 100, 1.0).reversed();
        let l = lift(&c, &center, 1).unwrap();
        for (b, a) in l.beta.vertices().iter().zip(c.vertices()) {
            assert!((b - a).norm() < 1e-14);
        }
        assert!((l.gamma_total + TAU).abs() < 1e-9);
    }

    #[test]
    fn lift_errors() {
        let center = Point::zeros();
        let c = circle(center, 1.0, 100, 1.0);
        assert_eq!(lift(&c, &center, 2).unwrap_err(), GeometryError::WindingMismatch { expected: 2, found: 1 });
        assert_eq!(lift(&c, &center, 0).unwrap_err(), GeometryError::InvalidIndex);
        let coarse = circle(center, 1.0, 20, 7.0);
        assert!(matches!(lift(&coarse, &center, 7), Err(GeometryError::CoarseSampling(_))));
    }

    #[test]
    fn lift_of_non_n_simple_curve_fails() {
        // A looped epicycle winding once about the center; its square is
        // 2-covered but the only candidate lifting crosses itself.
        let center = Point::new(1.0, -1.0);
        let m = 800;
        let beta = ClosedPolyline::new(
            (0..m)
                .map(|i| {
                    let s = TAU * i as f64 / m as f64;
                    center + Point::new(s.cos() + 0.3 * (5.0 * s).cos(), s.sin() + 0.3 * (5.0 * s).sin())
                })
                .collect(),
        )
        .unwrap();
        assert!(!is_simple(&beta));
        let image = push_forward(&beta, &center, 2).unwrap();
        assert_eq!(lift(&image, &center, 2).unwrap_err(), GeometryError::NonSimpleLifting);
    }

    fn star(radii: &[f64], center: Point, m: usize) -> ClosedPolyline {
        ClosedPolyline::new(
            (0..m)
                .map(|i| {
                    let a = TAU * i as f64 / m as f64;
                    let r = radii
                        .iter()
                        .enumerate()
                        .map(|(k, c)| if k == 0 { *c } else { c * (k as f64 * a).cos() })
                        .sum::<f64>();
                    center + Point::new(a.cos(), a.sin()) * r
                })
                .collect(),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn area_reversal_and_rotation(a1 in -0.3f64..0.3, a2 in -0.2f64..0.2, cx in -2.0f64..2.0, k in 0usize..64) {
            let c = star(&[1.0, a1, a2], Point::new(cx, 0.5), 64);
            let a = signed_area(&c);
            prop_assert!((signed_area(&c.reversed()) + a).abs() < 1e-12);
            prop_assert!((signed_area(&c.rotated(k)) - a).abs() < 1e-12);
        }

        #[test]
        fn simple_curves_turn_once_with_matching_orientation(a1 in -0.3f64..0.3, a2 in -0.2f64..0.2, rev in any::<bool>()) {
            let mut c = star(&[1.0, a1, a2], Point::zeros(), 128);
            if rev { c = c.reversed(); }
            prop_assert!(is_simple(&c));
            let t = turning_number(&c);
            prop_assert_eq!(t.abs(), 1);
            prop_assert_eq!(t > 0, orientation(&c) == Orientation::Counterclockwise);
        }

        #[test]
        fn winding_additive_and_antisymmetric(r1 in 0.5f64..2.0, r2 in 0.5f64..2.0, px in -0.3f64..0.3, py in -0.3f64..0.3, rev in any::<bool>()) {
            let p = Point::new(px, py);
            let a = circle(Point::zeros(), r1, 50, 1.0);
            let b0 = circle(Point::zeros(), r2, 50, 1.0);
            let b = if rev { b0.reversed() } else { b0 };
            // Join the loops at a shared radial spoke through angle zero.
            let mut v = a.vertices().to_vec();
            v.push(Point::new(r1, 0.0) * 1.0000001);
            v.extend(b.vertices().iter().skip(1));
            v.push(Point::new(r2, 0.0));
            v.push(Point::new(r1, 0.0) * 0.9999999);
            let joined = ClosedPolyline::new(v).unwrap();
            let wa = winding_number(&a, &p).unwrap();
            let wb = winding_number(&b, &p).unwrap();
            prop_assert_eq!(winding_number(&joined, &p).unwrap(), wa + wb);
            prop_assert_eq!(winding_number(&a.reversed(), &p).unwrap(), -wa);
        }

        #[test]
        fn lift_and_push_forward_invert(n in 1u32..5, a1 in -0.2f64..0.2, cx in -1.0f64..1.0) {
            let center = Point::new(cx, 0.25);
            let beta = star(&[1.0, a1], center, 96 * n as usize);
            let image = push_forward(&beta, &center, n).unwrap();
            let l = lift(&image, &center, n).unwrap();
            prop_assert!(l.roundtrip_error < 1e-9);
            for (x, y) in l.beta.vertices().iter().zip(beta.vertices()) {
                prop_assert!((x - y).norm() < 1e-9);
            }
        }
    }
}
