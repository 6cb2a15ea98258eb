//! Round sphere of radius `r` embedded in ℝ^{n+1}.

use super::vecops::{axpy, dot, norm, scale, sub};
use super::CutLocusPolicy;
use crate::{Error, Result};

pub(crate) fn dist(r: f64, p: &[f64], q: &[f64]) -> f64 {
    let diff: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
    let sum: f64 = p.iter().zip(q).map(|(a, b)| (a + b) * (a + b)).sum();
    2.0 * r * diff.sqrt().atan2(sum.sqrt())
}

pub(crate) fn normalize(r: f64, p: &[f64]) -> Vec<f64> {
    let n = norm(p);
    scale(p, r / n)
}

/// Orthogonal projection of an ambient vector onto the tangent space at `p`.
pub(crate) fn project(r: f64, p: &[f64], v: &[f64]) -> Vec<f64> {
    axpy(v, -dot(p, v) / (r * r), p)
}

pub(crate) fn exp(r: f64, p: &[f64], v: &[f64]) -> Vec<f64> {
    let len = norm(v);
    if len == 0.0 {
        return p.to_vec();
    }
    let theta = len / r;
    let moved: Vec<f64> = p
        .iter()
        .zip(v)
        .map(|(a, b)| theta.cos() * a + r * theta.sin() * b / len)
        .collect();
    normalize(r, &moved)
}

pub(crate) fn is_antipodal(r: f64, p: &[f64], q: &[f64], tol: f64) -> bool {
    let half = std::f64::consts::PI * r;
    half - dist(r, p, q) <= tol * half
}

/// The unit tangent at `p` that is lexicographically largest in ambient coordinates.
pub(crate) fn lex_largest_direction(r: f64, p: &[f64]) -> Vec<f64> {
    for k in 0..p.len() {
        let mut e = vec![0.0; p.len()];
        e[k] = 1.0;
        let u = project(r, p, &e);
        let n = norm(&u);
        if n > 1e-8 {
            return scale(&u, 1.0 / n);
        }
    }
    unreachable!("tangent space of a sphere of dimension >= 1 is nontrivial")
}

pub(crate) fn log(r: f64, p: &[f64], q: &[f64], policy: CutLocusPolicy, tol: f64) -> Result<Vec<f64>> {
    if is_antipodal(r, p, q, tol) {
        return match policy {
            CutLocusPolicy::Error => Err(Error::CutLocus {
                from: p.to_vec(),
                to: q.to_vec(),
            }),
            CutLocusPolicy::LexLargest => {
                let d = std::f64::consts::PI * r;
                Ok(scale(&lex_largest_direction(r, p), d))
            }
        };
    }
    let d = dist(r, p, q);
    let u = sub(q, &scale(p, dot(p, q) / (r * r)));
    let n = norm(&u);
    if n == 0.0 || d == 0.0 {
        return Ok(vec![0.0; p.len()]);
    }
    Ok(scale(&u, d / n))
}
