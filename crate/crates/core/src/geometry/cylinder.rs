//! Flat cylinder ℝ × S¹ with circle circumference `c`; charts are (axial, angle).

use super::CutLocusPolicy;
use crate::{Error, Result};

pub(crate) fn wrap(c: f64, angle: f64) -> f64 {
    let w = angle.rem_euclid(c);
    if w >= c {
        0.0
    } else {
        w
    }
}

/// Shortest signed angular displacement from `a` to `b`; `None` on the tie at c/2.
pub(crate) fn angular_step(c: f64, a: f64, b: f64, tol: f64) -> Option<f64> {
    let delta = (b - a).rem_euclid(c);
    let half = 0.5 * c;
    if (delta - half).abs() <= tol * half {
        return None;
    }
    Some(if delta > half { delta - c } else { delta })
}

pub(crate) fn angular_dist(c: f64, a: f64, b: f64) -> f64 {
    let delta = (b - a).rem_euclid(c);
    delta.min(c - delta)
}

pub(crate) fn dist(c: f64, p: &[f64], q: &[f64]) -> f64 {
    let dz = q[0] - p[0];
    let dt = angular_dist(c, p[1], q[1]);
    (dz * dz + dt * dt).sqrt()
}

pub(crate) fn exp(c: f64, p: &[f64], v: &[f64]) -> Vec<f64> {
    vec![p[0] + v[0], wrap(c, p[1] + v[1])]
}

pub(crate) fn log(c: f64, p: &[f64], q: &[f64], policy: CutLocusPolicy, tol: f64) -> Result<Vec<f64>> {
    let dz = q[0] - p[0];
    match angular_step(c, p[1], q[1], tol) {
        Some(dt) => Ok(vec![dz, dt]),
        None => match policy {
            CutLocusPolicy::Error => Err(Error::CutLocus {
                from: p.to_vec(),
                to: q.to_vec(),
            }),
            // Both windings share dz; the positive angular one is lexicographically larger.
            CutLocusPolicy::LexLargest => Ok(vec![dz, 0.5 * c]),
        },
    }
}
