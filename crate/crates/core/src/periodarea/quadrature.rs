//! Area quadrature over the interior of a simple polygon with small disks
//! about singular points removed and treated in polar coordinates.
//!
//! Away from the disks the integral is iterated: adaptive Gauss–Kronrod in
//! `x` along each horizontal line (the line's inside intervals come from the
//! exact polygon crossings) and adaptive Gauss–Kronrod in `y` over the line
//! integrals. Inside a disk of radius `R` about a singular point the annulus
//! `eps < r < R` is integrated in polar form for every `eps` of the schedule,
//! and the annulus values are extrapolated to `eps = 0`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvegeom::{self, ClosedPolyline, Point};
use crate::dynamics::DomainError;
use crate::scalar::integrate_adaptive;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("region leaves the Hill region at ({y1}, {y2}) where 2 omega - C = {g}")]
    OutsideHillRegion { y1: f64, y2: f64, g: f64 },
    #[error("integrand failed: {0}")]
    Domain(DomainError),
    #[error("region boundary is not simple")]
    NotSimple,
    #[error("excised point ({0}, {1}) is not inside the region")]
    ExcisedOutside(f64, f64),
    #[error("extrapolation in eps is unstable: successive estimates differ by {spread:e} (limit {limit:e})")]
    ExtrapolationUnstable { spread: f64, limit: f64 },
    #[error("angular refinement did not converge about ({0}, {1})")]
    AngularNonConvergence(f64, f64),
}

impl From<DomainError> for QuadratureError {
    fn from(e: DomainError) -> Self {
        match e {
            DomainError::OutsideHillRegion { y1, y2, g } => QuadratureError::OutsideHillRegion { y1, y2, g },
            other => QuadratureError::Domain(other),
        }
    }
}

/// How the entries of `epsilon_schedule` are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonScale {
    /// Radii as given.
    Absolute,
    /// Fractions of each singular point's local length scale.
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Strictly decreasing excision radii (or fractions, see `epsilon_scale`).
    pub epsilon_schedule: Vec<f64>,
    pub epsilon_scale: EpsilonScale,
    /// Absolute error target for the whole area integral.
    pub cell_tolerance: f64,
    /// Bisection depth limit for every adaptive 1-D rule.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            epsilon_schedule: vec![1e-2, 5e-3, 2.5e-3],
            epsilon_scale: EpsilonScale::Local,
            cell_tolerance: 1e-8,
            max_depth: 40,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        let s = &self.epsilon_schedule;
        if s.len() < 2 {
            return Err(QuadratureError::InvalidConfig("need at least two excision radii".into()));
        }
        if s.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(QuadratureError::InvalidConfig("excision radii must decrease strictly".into()));
        }
        if !(s[s.len() - 1] >= 1e-5) {
            return Err(QuadratureError::InvalidConfig("smallest excision radius must be at least 1e-5".into()));
        }
        if !(self.cell_tolerance > 0.0) || self.max_depth == 0 {
            return Err(QuadratureError::InvalidConfig("tolerance and depth must be positive".into()));
        }
        Ok(())
    }
}

/// A point where the integrand (or the integral's derivation) is singular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub center: [f64; 2],
    /// Length below which the integrand's expansion about the point is
    /// dominated by its leading term.
    pub scale: f64,
    /// Power of the radius at which the excised integral vanishes; the
    /// annulus values are extrapolated as polynomials in `eps^order`.
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcisionDiagnostics {
    pub center: [f64; 2],
    /// Radius of the disk handled in polar coordinates.
    pub disk_radius: f64,
    pub epsilons: Vec<f64>,
    /// Annulus integrals `eps < r < disk_radius` for each epsilon.
    pub annulus_values: Vec<f64>,
    pub extrapolated: f64,
    pub extrapolation_error: f64,
    pub angular_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaIntegral {
    pub value: f64,
    pub error: f64,
    /// Part of the value from the iterated integral outside the disks.
    pub outer_value: f64,
    pub outer_error: f64,
    pub outer_panels: usize,
    pub excisions: Vec<ExcisionDiagnostics>,
}

struct EdgeIndex {
    edges: Vec<(Point, Point)>,
    y0: f64,
    dy: f64,
    buckets: Vec<Vec<u32>>,
}

impl EdgeIndex {
    fn new(c: &ClosedPolyline) -> Self {
        let edges: Vec<(Point, Point)> = c.edges().collect();
        let (lo, hi) = c.bounds();
        let nb = (edges.len() / 8).clamp(1, 4096);
        let dy = ((hi.y - lo.y) / nb as f64).max(f64::MIN_POSITIVE);
        let mut buckets = vec![Vec::new(); nb];
        for (i, (a, b)) in edges.iter().enumerate() {
            let k0 = (((a.y.min(b.y) - lo.y) / dy).floor() as isize).clamp(0, nb as isize - 1) as usize;
            let k1 = (((a.y.max(b.y) - lo.y) / dy).floor() as isize).clamp(0, nb as isize - 1) as usize;
            for bucket in &mut buckets[k0..=k1] {
                bucket.push(i as u32);
            }
        }
        Self { edges, y0: lo.y, dy, buckets }
    }

    /// Sorted `x` positions where the horizontal line at `y` crosses the
    /// boundary (half-open rule on edge endpoints).
    fn crossings(&self, y: f64) -> Vec<f64> {
        let nb = self.buckets.len();
        let k = (((y - self.y0) / self.dy).floor() as isize).clamp(0, nb as isize - 1) as usize;
        let mut xs: Vec<f64> = self.buckets[k]
            .iter()
            .filter_map(|&i| {
                let (a, b) = self.edges[i as usize];
                if (a.y <= y && y < b.y) || (b.y <= y && y < a.y) {
                    Some(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
                } else {
                    None
                }
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        xs
    }
}

/// Centers of an `n x n` grid of cells over the bounding box that lie inside
/// the region (even-odd rule).
pub fn grid_points_inside(region: &ClosedPolyline, n: usize) -> Vec<Point> {
    let index = EdgeIndex::new(region);
    let (lo, hi) = region.bounds();
    let (dx, dy) = ((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
    let mut out = Vec::new();
    for i in 0..n {
        let y = lo.y + (i as f64 + 0.5) * dy;
        let xs = index.crossings(y);
        for j in 0..n {
            let x = lo.x + (j as f64 + 0.5) * dx;
            if xs.iter().filter(|&&c| c < x).count() % 2 == 1 {
                out.push(Point::new(x, y));
            }
        }
    }
    out
}

/// Removes the chords `(lo, hi)` from a sorted list of disjoint intervals.
fn subtract(intervals: Vec<(f64, f64)>, chords: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = intervals;
    for &(c0, c1) in chords {
        let mut next = Vec::with_capacity(out.len() + 1);
        for (a, b) in out {
            if c1 <= a || c0 >= b {
                next.push((a, b));
                continue;
            }
            if c0 > a {
                next.push((a, c0));
            }
            if c1 < b {
                next.push((c1, b));
            }
        }
        out = next;
    }
    out
}

/// Value at zero of the polynomial through `(x_i, v_i)` and the same using
/// all but the first point, by Neville's scheme.
fn extrapolate_to_zero(x: &[f64], v: &[f64]) -> (f64, f64) {
    let n = x.len();
    let mut p = v.to_vec();
    let mut prev_top = p[n - 1];
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i]);
        }
        if k == n - 2 {
            prev_top = p[1];
        }
    }
    if n == 2 {
        prev_top = v[1];
    }
    (p[0], prev_top)
}

/// Integrates `integrand` over the interior of `region` (which must be simple).
pub fn integrate_region<F>(
    region: &ClosedPolyline,
    integrand: F,
    singular: &[SingularPoint],
    cfg: &QuadratureConfig,
) -> Result<AreaIntegral, QuadratureError>
where
    F: Fn(&Point) -> Result<f64, DomainError>,
{
    cfg.validate()?;
    if !curvegeom::is_simple(region) {
        return Err(QuadratureError::NotSimple);
    }
    let centers: Vec<Point> = singular.iter().map(|s| Point::new(s.center[0], s.center[1])).collect();
    for p in &centers {
        if curvegeom::winding_number(region, p).map_err(|_| QuadratureError::ExcisedOutside(p.x, p.y))? == 0 {
            return Err(QuadratureError::ExcisedOutside(p.x, p.y));
        }
    }
    let radii: Vec<f64> = centers
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut r = 0.5 * region.distance_to(p);
            for (j, q) in centers.iter().enumerate() {
                if i != j {
                    r = r.min(0.4 * (p - q).norm());
                }
            }
            r
        })
        .collect();

    let tol = cfg.cell_tolerance;
    let parts = singular.len() + 1;
    let outer = outer_integral(region, &integrand, &centers, &radii, tol / parts as f64, cfg.max_depth)?;
    let mut value = outer.value;
    let mut error = outer.error;
    let mut excisions = Vec::with_capacity(singular.len());
    for ((sp, p), &r) in singular.iter().zip(&centers).zip(&radii) {
        let d = excised_disk(&integrand, p, r, sp, tol / parts as f64, cfg)?;
        value += d.extrapolated;
        error += d.extrapolation_error + tol / parts as f64;
        excisions.push(d);
    }
    Ok(AreaIntegral {
        value,
        error,
        outer_value: outer.value,
        outer_error: outer.error,
        outer_panels: outer.panels,
        excisions,
    })
}

fn outer_integral<F>(
    region: &ClosedPolyline,
    integrand: &F,
    centers: &[Point],
    radii: &[f64],
    tol: f64,
    max_depth: u32,
) -> Result<crate::scalar::Integral, QuadratureError>
where
    F: Fn(&Point) -> Result<f64, DomainError>,
{
    let index = EdgeIndex::new(region);
    let (lo, hi) = region.bounds();
    let width = (hi.x - lo.x).max(f64::MIN_POSITIVE);
    let height = hi.y - lo.y;
    let inner_tol = tol / (2.0 * height);

    // The chord length is only piecewise smooth in y, with a kink at every vertex.
    let mut breaks: Vec<f64> = region.vertices().iter().map(|v| v.y).collect();
    for (p, &r) in centers.iter().zip(radii) {
        breaks.extend([p.y - r, p.y, p.y + r]);
    }

    let line = |y: f64| -> Result<f64, QuadratureError> {
        let xs = index.crossings(y);
        let intervals: Vec<(f64, f64)> = xs.chunks_exact(2).map(|w| (w[0], w[1])).collect();
        let chords: Vec<(f64, f64)> = centers
            .iter()
            .zip(radii)
            .filter(|(p, &r)| (y - p.y).abs() < r)
            .map(|(p, &r)| {
                let h = (r * r - (y - p.y).powi(2)).sqrt();
                (p.x - h, p.x + h)
            })
            .collect();
        let mut total = 0.0;
        for (a, b) in subtract(intervals, &chords) {
            if b <= a {
                continue;
            }
            let r = integrate_adaptive(
                |x| integrand(&Point::new(x, y)).map_err(QuadratureError::from),
                a,
                b,
                &[],
                inner_tol * (b - a) / width,
                max_depth,
            )?;
            total += r.value;
        }
        Ok(total)
    };
    let mut out = integrate_adaptive(line, lo.y, hi.y, &breaks, tol / 2.0, max_depth)?;
    out.error += tol / 2.0;
    Ok(out)
}

fn excised_disk<F>(
    integrand: &F,
    p: &Point,
    disk_radius: f64,
    sp: &SingularPoint,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<ExcisionDiagnostics, QuadratureError>
where
    F: Fn(&Point) -> Result<f64, DomainError>,
{
    let unit = match cfg.epsilon_scale {
        EpsilonScale::Absolute => 1.0,
        EpsilonScale::Local => sp.scale.min(disk_radius),
    };
    let eps: Vec<f64> = cfg.epsilon_schedule.iter().map(|e| e * unit).collect();
    if eps[0] >= disk_radius {
        return Err(QuadratureError::InvalidConfig(format!(
            "excision radius {} does not fit in the disk of radius {disk_radius} about ({}, {})",
            eps[0], p.x, p.y
        )));
    }
    let ne = eps.len();
    // Radial panel edges: the schedule itself, then doubling up to the disk.
    let mut radial_breaks = Vec::new();
    let mut r = eps[0];
    while r * 2.0 < disk_radius {
        r *= 2.0;
        radial_breaks.push(r);
    }
    let radial_tol = tol / TAU;

    // Annulus integrals for every epsilon at one angle (times the radial weight r).
    let ray = |theta: f64| -> Result<Vec<f64>, QuadratureError> {
        let dir = Point::new(theta.cos(), theta.sin());
        let f = |r: f64| integrand(&(p + dir * r)).map(|v| v * r).map_err(QuadratureError::from);
        let mut vals = vec![0.0; ne];
        let top = integrate_adaptive(f, eps[0], disk_radius, &radial_breaks, radial_tol, cfg.max_depth)?;
        vals[0] = top.value;
        for j in 1..ne {
            let piece = integrate_adaptive(f, eps[j], eps[j - 1], &[], radial_tol * 1e-2, cfg.max_depth)?;
            vals[j] = vals[j - 1] + piece.value;
        }
        Ok(vals)
    };

    // Periodic trapezoid in theta, doubling until the annulus values settle.
    let mut n = 32usize;
    let mut sums = vec![0.0; ne];
    for k in 0..n {
        let v = ray(TAU * k as f64 / n as f64)?;
        for j in 0..ne {
            sums[j] += v[j];
        }
    }
    let mut values: Vec<f64> = sums.iter().map(|s| s * TAU / n as f64).collect();
    let mut converged = false;
    while n < 1 << 14 {
        for k in 0..n {
            let v = ray(TAU * (2 * k + 1) as f64 / (2 * n) as f64)?;
            for j in 0..ne {
                sums[j] += v[j];
            }
        }
        n *= 2;
        let next: Vec<f64> = sums.iter().map(|s| s * TAU / n as f64).collect();
        let change = next.iter().zip(&values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        values = next;
        if change <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(QuadratureError::AngularNonConvergence(p.x, p.y));
    }

    let powers: Vec<f64> = eps.iter().map(|e| e.powi(sp.order.max(1) as i32)).collect();
    let (extrapolated, previous) = extrapolate_to_zero(&powers, &values);
    let spread = (extrapolated - previous).abs();
    // Extrapolation must at least contract the raw change between the two
    // smallest radii; otherwise the values are not in their asymptotic range.
    let raw = (values[ne - 1] - values[ne - 2]).abs();
    let limit = raw.max(10.0 * cfg.cell_tolerance);
    if !(spread <= limit) {
        return Err(QuadratureError::ExtrapolationUnstable { spread, limit });
    }
    Ok(ExcisionDiagnostics {
        center: [p.x, p.y],
        disk_radius,
        epsilons: eps,
        annulus_values: values,
        extrapolated,
        extrapolation_error: spread,
        angular_nodes: n,
    })
}
