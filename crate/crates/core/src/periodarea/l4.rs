//! Sign of `laplacian ln f` near the triangular equilibria, which forces any
//! periodic orbit in a neighborhood where it is positive to run clockwise.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvegeom::Point;
use crate::dynamics::{self, lagrange_triangular, MassParameter, Triangular};

/// `|C - C0|` below which the analysis is refused.
pub const CRITICAL_BAND: f64 = 1e-12;
pub const DEFAULT_RADII: [f64; 8] = [1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.3, 0.5];

const RADIAL_NODES: usize = 32;
const ANGULAR_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum L4Error {
    #[error("C = {c} is within {CRITICAL_BAND:e} of the critical value {c0}")]
    CriticalValue { c: f64, c0: f64 },
    #[error("radii must be positive and finite")]
    InvalidRadii,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum L4Verdict {
    /// `C > C0`: a neighborhood of the point is outside the Hill region, so no
    /// orbit can pass there.
    NeighborhoodOutsideHillRegion,
    /// `C < C0` and `laplacian ln f > 0` on a disk: orbits inside run clockwise.
    ClockwiseOnly,
    /// No tested disk had a positive minimum.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub radius: f64,
    /// Minimum of `laplacian ln f` over the disk, when it lies in the Hill region.
    pub min_laplacian: Option<f64>,
    /// Maximum of `2 omega - C` over the disk.
    pub max_g: f64,
    /// Minimum of `2 omega - C` over the disk.
    pub min_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L4Report {
    pub which: Triangular,
    pub point: [f64; 2],
    pub mu: f64,
    pub jacobi: f64,
    pub c0: f64,
    /// `3 / (C0 - C)`, the value of `laplacian ln f` at the point when `C < C0`.
    pub closed_form: Option<f64>,
    pub laplacian_at_point: Option<f64>,
    pub rows: Vec<RadiusRow>,
    /// Largest tested radius with a positive minimum (C < C0) or with the
    /// whole disk outside the Hill region (C > C0).
    pub radius: Option<f64>,
    pub verdict: L4Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L4Analysis {
    pub l4: L4Report,
    pub l5: L4Report,
}

/// Disk samples as offsets from the center: the center itself and a polar grid.
fn disk_offsets(radius: f64) -> Vec<Point> {
    let mut v = vec![Point::zeros()];
    for i in 1..=RADIAL_NODES {
        let r = radius * i as f64 / RADIAL_NODES as f64;
        for j in 0..ANGULAR_NODES {
            let t = TAU * j as f64 / ANGULAR_NODES as f64;
            v.push(Point::new(r * t.cos(), r * t.sin()));
        }
    }
    v
}

fn g_at(y: &Point, mu: MassParameter, c: f64) -> f64 {
    match dynamics::effective_potential(y, mu) {
        Ok(w) => 2.0 * w - c,
        Err(_) => f64::INFINITY,
    }
}

fn report(mu: MassParameter, c: f64, radii: &[f64], which: Triangular) -> L4Report {
    let lp = lagrange_triangular(mu, which);
    let center = lp.point();
    // L5 uses the mirror image of the L4 grid so the two reports agree exactly.
    let mirror = |d: Point| match which {
        Triangular::L4 => d,
        Triangular::L5 => Point::new(d.x, -d.y),
    };
    let c0 = lp.c0;
    let rows: Vec<RadiusRow> = radii
        .iter()
        .map(|&radius| {
            let mut min_lap = f64::INFINITY;
            let mut inside = true;
            let (mut max_g, mut min_g) = (f64::NEG_INFINITY, f64::INFINITY);
            for d in disk_offsets(radius) {
                let y = center + mirror(d);
                let g = g_at(&y, mu, c);
                max_g = max_g.max(g);
                min_g = min_g.min(g);
                match dynamics::laplacian_ln_f(&y, mu, c) {
                    Ok(l) => min_lap = min_lap.min(l),
                    Err(_) => inside = false,
                }
            }
            RadiusRow { radius, min_laplacian: inside.then_some(min_lap), max_g, min_g }
        })
        .collect();
    let (radius, verdict) = if c > c0 {
        let r = rows.iter().filter(|r| r.max_g < 0.0).map(|r| r.radius).reduce(f64::max);
        (r, L4Verdict::NeighborhoodOutsideHillRegion)
    } else {
        let r = rows
            .iter()
            .filter(|r| r.min_laplacian.is_some_and(|m| m > 0.0))
            .map(|r| r.radius)
            .reduce(f64::max);
        (r, if r.is_some() { L4Verdict::ClockwiseOnly } else { L4Verdict::Inconclusive })
    };
    L4Report {
        which,
        point: lp.position,
        mu: mu.value(),
        jacobi: c,
        c0,
        closed_form: (c < c0).then(|| 3.0 / (c0 - c)),
        laplacian_at_point: dynamics::laplacian_ln_f(&center, mu, c).ok(),
        rows,
        radius,
        verdict,
    }
}

pub fn l4_direction_analysis(mu: MassParameter, c: f64, radii: &[f64]) -> Result<L4Analysis, L4Error> {
    let c0 = dynamics::critical_jacobi(mu);
    if !c.is_finite() || (c - c0).abs() < CRITICAL_BAND {
        return Err(L4Error::CriticalValue { c, c0 });
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(L4Error::InvalidRadii);
    }
    Ok(L4Analysis {
        l4: report(mu, c, radii, Triangular::L4),
        l5: report(mu, c, radii, Triangular::L5),
    })
}
