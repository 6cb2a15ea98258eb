//! Hyperboloid model {x : ⟨x,x⟩_L = -r², x₀ > 0} in Minkowski space ℝ^{n,1}.

use super::vecops::{axpy, scale, sub};

pub(crate) fn minkowski(a: &[f64], b: &[f64]) -> f64 {
    -a[0] * b[0] + a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<f64>()
}

/// Lifts spatial coordinates onto the upper sheet.
pub(crate) fn lift(r: f64, spatial: &[f64]) -> Vec<f64> {
    let s: f64 = spatial.iter().map(|x| x * x).sum();
    let mut out = Vec::with_capacity(spatial.len() + 1);
    out.push((r * r + s).sqrt());
    out.extend_from_slice(spatial);
    out
}

pub(crate) fn normalize(r: f64, p: &[f64]) -> Vec<f64> {
    lift(r, &p[1..])
}

pub(crate) fn dist(r: f64, p: &[f64], q: &[f64]) -> f64 {
    let diff = sub(p, q);
    let chord = minkowski(&diff, &diff).max(0.0).sqrt();
    2.0 * r * (chord / (2.0 * r)).asinh()
}

pub(crate) fn tangent_norm(v: &[f64]) -> f64 {
    minkowski(v, v).max(0.0).sqrt()
}

pub(crate) fn project(r: f64, p: &[f64], v: &[f64]) -> Vec<f64> {
    axpy(v, minkowski(p, v) / (r * r), p)
}

pub(crate) fn exp(r: f64, p: &[f64], v: &[f64]) -> Vec<f64> {
    let len = tangent_norm(v);
    if len == 0.0 {
        return p.to_vec();
    }
    let a = len / r;
    let moved: Vec<f64> = p
        .iter()
        .zip(v)
        .map(|(x, y)| a.cosh() * x + r * a.sinh() * y / len)
        .collect();
    normalize(r, &moved)
}

pub(crate) fn log(r: f64, p: &[f64], q: &[f64]) -> Vec<f64> {
    let d = dist(r, p, q);
    let u = project(r, p, q);
    let n = tangent_norm(&u);
    if n == 0.0 || d == 0.0 {
        return vec![0.0; p.len()];
    }
    scale(&u, d / n)
}
