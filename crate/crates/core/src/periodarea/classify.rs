//! Which form of the period–area identity an orbit satisfies.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curvegeom::{self, ClosedPolyline, GeometryError, LiftedCurve, Orientation, Point};
use crate::periodicity::ClosedOrbit;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("orbit is neither simple nor n-simple about a primary (windings {w1}, {w2})")]
    Unclassifiable { w1: i32, w2: i32 },
    #[error("k = {k} from the encirclement count disagrees with the case table ({expected})")]
    TableMismatch { k: i32, expected: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Simple curve, no primary inside: `k = 2`.
    SimpleNoPrimary,
    /// Simple curve around one primary: `k = 1`.
    SimpleOnePrimary,
    /// Simple curve around both primaries: `k = 0`.
    SimpleBothPrimaries,
    /// n-simple about a primary: `k = n`.
    CoveredAboutPrimary,
    /// n-simple about a point that is not a primary: `k = 2n`.
    CoveredAboutPoint,
}

/// Primaries inside the (possibly lifted) region, with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosedPrimaries {
    pub first: u32,
    pub second: u32,
}

impl EnclosedPrimaries {
    pub fn total(&self) -> u32 {
        self.first + self.second
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub covering_index: u32,
    /// Center of the power map for covered curves.
    pub center: Option<[f64; 2]>,
    pub enclosed: EnclosedPrimaries,
    pub orientation: Orientation,
    pub k: i32,
    /// +1 clockwise, -1 counterclockwise.
    pub sign: i32,
    pub theorem: TheoremId,
}

impl TheoremCase {
    /// Human-readable identity, e.g. `2T = -pi - I`.
    pub fn statement(&self) -> String {
        let term = match self.k {
            0 => String::new(),
            1 => "pi".to_string(),
            k => format!("{k}pi"),
        };
        match (self.sign, term.is_empty()) {
            (1, true) => "2T = I".into(),
            (_, true) => "2T = -I".into(),
            (1, false) => format!("2T = {term} + I"),
            (_, false) => format!("2T = -{term} - I"),
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n = {}, k = {}, {:?})",
            self.statement(),
            self.covering_index,
            self.k,
            self.orientation
        )
    }
}

/// A case together with the geometry it was read from.
#[derive(Debug, Clone)]
pub struct Classification {
    pub case: TheoremCase,
    pub polyline: ClosedPolyline,
    pub lift: Option<LiftedCurve>,
}

/// Boundary polyline of an orbit: its uniform samples without the repeated end.
pub fn orbit_polyline(o: &ClosedOrbit) -> Result<ClosedPolyline, GeometryError> {
    let s = o.trajectory.samples();
    ClosedPolyline::from_states(&s[..s.len() - 1])
}

fn table_k(theorem: TheoremId, n: u32) -> i32 {
    match theorem {
        TheoremId::SimpleNoPrimary => 2,
        TheoremId::SimpleOnePrimary => 1,
        TheoremId::SimpleBothPrimaries => 0,
        TheoremId::CoveredAboutPrimary => n as i32,
        TheoremId::CoveredAboutPoint => 2 * n as i32,
    }
}

fn build(
    n: u32,
    center: Option<Point>,
    enclosed: EnclosedPrimaries,
    orientation: Orientation,
    theorem: TheoremId,
) -> Result<TheoremCase, ClassifyError> {
    let k = 2 * n as i32 - enclosed.total() as i32;
    let expected = table_k(theorem, n);
    if k != expected {
        return Err(ClassifyError::TableMismatch { k, expected });
    }
    Ok(TheoremCase {
        covering_index: n,
        center: center.map(|c| [c.x, c.y]),
        enclosed,
        orientation,
        k,
        sign: orientation.sign(),
        theorem,
    })
}

/// Lifts the orbit about `center`, resampling from the trajectory when the
/// polyline is too coarse for branch tracking.
fn lift_orbit(o: &ClosedOrbit, base: &ClosedPolyline, center: &Point, n: u32) -> Result<LiftedCurve, GeometryError> {
    let mut attempt = curvegeom::lift(base, center, n);
    let mut m = base.len();
    while let Err(GeometryError::CoarseSampling(_)) = attempt {
        m *= 2;
        if m > 1 << 20 {
            break;
        }
        let c = ClosedPolyline::from_states(&o.uniform_states(m))?;
        attempt = curvegeom::lift(&c, center, n);
    }
    attempt
}

pub fn classify_case(o: &ClosedOrbit) -> Result<Classification, ClassifyError> {
    let polyline = orbit_polyline(o)?;
    let prof = curvegeom::winding_profile(&polyline, o.mu)?;
    let (w1, w2) = (prof.w_primary1, prof.w_primary2);
    if curvegeom::is_simple(&polyline) {
        let enclosed = EnclosedPrimaries { first: w1.unsigned_abs(), second: w2.unsigned_abs() };
        let theorem = match enclosed.total() {
            0 => TheoremId::SimpleNoPrimary,
            1 => TheoremId::SimpleOnePrimary,
            _ => TheoremId::SimpleBothPrimaries,
        };
        let case = build(1, None, enclosed, prof.orientation, theorem)?;
        return Ok(Classification { case, polyline, lift: None });
    }
    // A covered curve about one primary must leave the other outside.
    for (first, center, w, other) in [(true, o.mu.first_primary(), w1, w2), (false, o.mu.second_primary(), w2, w1)] {
        let n = w.unsigned_abs();
        if n < 2 || other != 0 {
            continue;
        }
        match lift_orbit(o, &polyline, &center, n) {
            Ok(lift) => {
                let enclosed = if first {
                    EnclosedPrimaries { first: n, second: 0 }
                } else {
                    EnclosedPrimaries { first: 0, second: n }
                };
                let orientation = curvegeom::orientation(&lift.beta);
                let case = build(n, Some(center), enclosed, orientation, TheoremId::CoveredAboutPrimary)?;
                return Ok(Classification { case, polyline, lift: Some(lift) });
            }
            Err(GeometryError::NonSimpleLifting) | Err(GeometryError::RoundTrip(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(ClassifyError::Unclassifiable { w1, w2 })
}

/// Classification as an n-simple curve about a supplied non-primary point.
pub fn classify_about(o: &ClosedOrbit, center: Point) -> Result<Classification, ClassifyError> {
    let polyline = orbit_polyline(o)?;
    let prof = curvegeom::winding_profile(&polyline, o.mu)?;
    let n = curvegeom::winding_number(&polyline, &center)?.unsigned_abs();
    if prof.w_primary1 != 0 || prof.w_primary2 != 0 || n == 0 {
        return Err(ClassifyError::Unclassifiable { w1: prof.w_primary1, w2: prof.w_primary2 });
    }
    let lift = match lift_orbit(o, &polyline, &center, n) {
        Ok(l) => l,
        Err(GeometryError::NonSimpleLifting) | Err(GeometryError::RoundTrip(_)) => {
            return Err(ClassifyError::Unclassifiable { w1: 0, w2: 0 })
        }
        Err(e) => return Err(e.into()),
    };
    let orientation = curvegeom::orientation(&lift.beta);
    let enclosed = EnclosedPrimaries { first: 0, second: 0 };
    let case = build(n, Some(center), enclosed, orientation, TheoremId::CoveredAboutPoint)?;
    Ok(Classification { case, polyline, lift: Some(lift) })
}
