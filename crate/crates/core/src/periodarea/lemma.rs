//! Small-circle averages of the normal derivative of `ln f` about a primary.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::curvegeom::Point;
use crate::dynamics::{self, DomainError, MassParameter};

const CIRCLE_NODES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleAverage {
    pub epsilon: f64,
    /// Mean over the circle of `eps grad ln f . n` with `n` pointing at the center.
    pub average: f64,
    /// `average - 1/2`.
    pub deviation: f64,
}

/// Circle averages for each radius in `epsilons` about `primary`; they tend
/// to 1/2 as the radius shrinks.
pub fn lemma22_limit_check(
    mu: MassParameter,
    c: f64,
    primary: Point,
    epsilons: &[f64],
) -> Result<Vec<CircleAverage>, DomainError> {
    epsilons
        .iter()
        .map(|&eps| {
            let mut sum = 0.0;
            for j in 0..CIRCLE_NODES {
                let t = TAU * j as f64 / CIRCLE_NODES as f64;
                let (s, co) = t.sin_cos();
                let g = dynamics::field_sample(&(primary + Point::new(co, s) * eps), mu, c)?.grad_ln_f;
                sum += -eps * (g[0] * co + g[1] * s);
            }
            let average = sum / CIRCLE_NODES as f64;
            Ok(CircleAverage { epsilon: eps, average, deviation: average - 0.5 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Leading behaviour with `2 omega - C = 2m/r + a + O(r)`: the average is
    /// `1 / (2 (1 + a r / 2m))` up to the circle mean of the linear terms, which vanishes.
    fn oracle(m: f64, a: f64, eps: f64) -> f64 {
        0.5 / (1.0 + a * eps / (2.0 * m))
    }

    #[test]
    fn second_primary_follows_leading_order_oracle() {
        let mu = MassParameter::new(0.000953875).unwrap();
        let m = mu.value();
        let c = 3.0790227765880;
        let a = (1.0 - m).powi(2) + 2.0 * (1.0 - m) - c;
        let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 1e-3, 1e-4];
        let rows = lemma22_limit_check(mu, c, mu.second_primary(), &eps).unwrap();
        for r in &rows {
            let o = oracle(m, a, r.epsilon);
            assert!((r.average - o).abs() < 0.05 * (o - 0.5).abs() + 1e-6, "{r:?} vs {o}");
        }
        let at_1e3 = rows[4];
        assert!((at_1e3.deviation - 0.0227).abs() < 5e-4, "{at_1e3:?}");
        assert!(rows[5].deviation.abs() < 3e-3);
    }

    #[test]
    fn first_primary_limit() {
        let mu = MassParameter::new(0.000953875).unwrap();
        let rows = lemma22_limit_check(mu, 3.0790227765880, mu.first_primary(), &[1e-2, 1e-4, 1e-6]).unwrap();
        assert!(rows[0].deviation.abs() > rows[1].deviation.abs());
        assert!(rows[2].deviation.abs() < 1e-5);
    }

    #[test]
    fn circle_leaving_hill_region_errors() {
        let mu = MassParameter::new(0.000953875).unwrap();
        let err = lemma22_limit_check(mu, 3.0790227765880, mu.second_primary(), &[0.3]).unwrap_err();
        assert!(matches!(err, DomainError::OutsideHillRegion { .. }));
    }
}
