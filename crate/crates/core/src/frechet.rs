//! Fréchet means, the variance functional and its first variation.
//!
//! On Euclidean and hyperbolic spaces the mean is unique and found by Karcher
//! iteration from the cheapest atom. Elsewhere the minimum is located globally:
//! circle factors (the 1-sphere, the cylinder angle) are minimised exactly arc
//! by arc, the 2-sphere by a brute-force grid refined by descent, higher
//! spheres by seeded multistart descent, and the balloon space by combining
//! the exact string-side minimum with a sphere-side grid search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::geometry::vecops::{axpy, dot, norm, scale};
use crate::geometry::{cylinder, sphere, Component, CutLocusPolicy, Point, Space, TangentVector};
use crate::interpolate::VectorField;
use crate::measure::DiscreteMeasure;
use crate::tolerances::Tolerances;
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;

/// How the reported minimiser was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanMethod {
    /// Karcher descent on a space with a unique mean.
    Gradient,
    /// Global search on a space where local minima may be spurious.
    Grid,
}

/// A minimiser of `y ↦ Σ wᵢ d²(xᵢ, y)` together with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BarycenterResult {
    pub point: Point,
    /// The minimum value, i.e. the variance.
    pub value: f64,
    pub method: MeanMethod,
    pub iterations: usize,
    /// Norm of `Σ wᵢ log(point, xᵢ)`; one-sided along the string on the balloon space.
    pub residual: f64,
    /// Several well-separated minimisers attain the minimum within 1e-6.
    pub multiplicity: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct MeanOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Grid points per closed geodesic.
    pub grid: usize,
    /// Random starts on spheres of dimension three and more.
    pub random_starts: usize,
}

impl Default for MeanOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            tol: TOL.karcher_residual,
            grid: 720,
            random_starts: 64,
        }
    }
}

const MULTIPLICITY_VALUE: f64 = 1e-6;
const MULTIPLICITY_SEPARATION: f64 = 1e-3;
const GRID_STARTS: usize = 16;
const ATOM_STARTS: usize = 8;
const BALLOON_SPHERE_ITER: usize = 200;

/// `Σ wᵢ d²(xᵢ, y)`.
pub fn frechet_objective(space: &Space, points: &[Point], weights: &[f64], y: &Point) -> f64 {
    points
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            let d = space.dist(x, y);
            w * d * d
        })
        .sum()
}

pub fn variance(m: &DiscreteMeasure) -> Result<f64> {
    Ok(frechet_mean(m)?.value)
}

pub fn frechet_mean(m: &DiscreteMeasure) -> Result<BarycenterResult> {
    frechet_mean_with(m, &MeanOptions::default())
}

pub fn frechet_mean_with(m: &DiscreteMeasure, opts: &MeanOptions) -> Result<BarycenterResult> {
    mean_impl(m.space(), m.atoms(), m.weights(), opts)
}

/// Mean of validated points under positive weights (rescaled to sum 1).
pub fn weighted_mean(space: &Space, points: &[Point], weights: &[f64]) -> Result<BarycenterResult> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::Empty("weighted mean without points"));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::InvalidWeights("mean weights must be positive".into()));
    }
    for p in points {
        space.check_point(p)?;
    }
    let total: f64 = weights.iter().sum();
    let w: Vec<f64> = weights.iter().map(|x| x / total).collect();
    mean_impl(space, points, &w, &MeanOptions::default())
}

/// Sum of `wᵢ log(y, xᵢ)` over atoms off the cut locus of `y`, as a tangent at `y`.
pub fn karcher_field(space: &Space, points: &[Point], weights: &[f64], y: &Point) -> TangentVector {
    let string_base = y.tag == Some(Component::String);
    let mut acc = if string_base { vec![0.0] } else { vec![0.0; y.chart.len()] };
    for (x, w) in points.iter().zip(weights) {
        let Ok(v) = space.log_unchecked(y, x, CutLocusPolicy::Error) else {
            continue;
        };
        if string_base {
            acc[0] += w * v.components[0];
        } else {
            acc = axpy(&acc, *w, &v.components);
        }
    }
    TangentVector::new(y.clone(), acc)
}

/// Stationarity measure of `y` for the weighted objective.
pub fn gradient_residual(space: &Space, points: &[Point], weights: &[f64], y: &Point) -> f64 {
    let g = karcher_field(space, points, weights, y);
    if y.tag == Some(Component::String) && y.chart[0] <= TOL.chart {
        return g.components[0].max(0.0);
    }
    space.norm(&g)
}

/// `−2 Σ wᵢ ⟨log(xᵢ, γ₀), V(xᵢ)⟩`, the derivative at `t = 0` of `W₂²(δ_γ(t), μₜ)`.
pub fn first_variation(m: &DiscreteMeasure, field: &VectorField, gamma0: &Point) -> Result<f64> {
    let space = m.space();
    space.check_point(gamma0)?;
    let gamma0 = space.normalize(gamma0);
    if field.vectors().len() != m.len() {
        return Err(Error::Precondition("field does not match measure".into()));
    }
    let residual = gradient_residual(space, m.atoms(), m.weights(), &gamma0);
    if residual > 1e-8 {
        return Err(Error::Precondition(format!("γ₀ is not a Fréchet mean: residual {residual:e}")));
    }
    let mut acc = 0.0;
    for ((x, w), v) in m.iter().zip(field.vectors()) {
        let to_mean = space.log(x, &gamma0)?;
        acc += w * space.inner(&to_mean, v)?;
    }
    Ok(-2.0 * acc)
}

struct Candidate {
    point: Point,
    value: f64,
    iterations: usize,
}

fn mean_impl(space: &Space, points: &[Point], weights: &[f64], opts: &MeanOptions) -> Result<BarycenterResult> {
    match *space {
        Space::Euclidean { .. } | Space::Hyperbolic { .. } => karcher(space, points, weights, opts),
        Space::FlatCylinder { circumference } => {
            let z: f64 = points.iter().zip(weights).map(|(p, w)| w * p.chart[0]).sum();
            let angles: Vec<f64> = points.iter().map(|p| p.chart[1]).collect();
            let cands = circle_minima(circumference, &angles, weights)
                .into_iter()
                .map(|(theta, _)| {
                    let point = Point::new(vec![z, cylinder::wrap(circumference, theta)]);
                    candidate(space, points, weights, point, 0)
                })
                .collect();
            Ok(select(space, points, weights, cands))
        }
        Space::Sphere { dim: 1, .. } => {
            let r = space.sphere_radius().unwrap();
            let c = 2.0 * std::f64::consts::PI * r;
            let angles: Vec<f64> = points.iter().map(|p| r * p.chart[1].atan2(p.chart[0])).collect();
            let cands = circle_minima(c, &angles, weights)
                .into_iter()
                .map(|(theta, _)| {
                    let a = theta / r;
                    candidate(space, points, weights, Point::new(vec![r * a.cos(), r * a.sin()]), 0)
                })
                .collect();
            Ok(select(space, points, weights, cands))
        }
        Space::Sphere { dim, .. } => {
            let r = space.sphere_radius().unwrap();
            let charts: Vec<&[f64]> = points.iter().map(|p| p.chart.as_slice()).collect();
            let f = |y: &[f64]| sphere_objective(r, &charts, weights, y);
            let dir = |y: &[f64]| sphere_direction(r, &charts, weights, y);
            let starts = if dim == 2 {
                sphere_grid_starts(r, opts.grid, &charts, weights)
            } else {
                random_starts(r, dim, opts.random_starts)
            };
            let starts = starts.into_iter().chain(atom_starts(&charts, &f));
            let cands = starts
                .map(|s| {
                    let (y, iters) = sphere_descent(r, s, &f, &dir, opts);
                    candidate(space, points, weights, Point::new(y), iters)
                })
                .collect();
            Ok(select(space, points, weights, cands))
        }
        Space::BalloonString { string_length, .. } => balloon_mean(space, string_length, points, weights, opts),
    }
}

fn candidate(space: &Space, points: &[Point], weights: &[f64], point: Point, iterations: usize) -> Candidate {
    let point = space.normalize(&point);
    Candidate {
        value: frechet_objective(space, points, weights, &point),
        point,
        iterations,
    }
}

/// Best candidate (ties broken lexicographically) and the multiplicity flag.
fn select(space: &Space, points: &[Point], weights: &[f64], cands: Vec<Candidate>) -> BarycenterResult {
    let best = cands
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.point.lex_cmp(&b.point)))
        .expect("at least one candidate");
    let multiplicity = cands.iter().any(|c| {
        c.value - best.value < MULTIPLICITY_VALUE && space.dist(&c.point, &best.point) > MULTIPLICITY_SEPARATION
    });
    BarycenterResult {
        point: best.point.clone(),
        value: best.value,
        method: MeanMethod::Grid,
        iterations: best.iterations,
        residual: gradient_residual(space, points, weights, &best.point),
        multiplicity,
    }
}

fn karcher(space: &Space, points: &[Point], weights: &[f64], opts: &MeanOptions) -> Result<BarycenterResult> {
    let f = |y: &Point| frechet_objective(space, points, weights, y);
    let mut y = points
        .iter()
        .min_by(|a, b| f(a).total_cmp(&f(b)))
        .expect("nonempty")
        .clone();
    let mut value = f(&y);
    let mut g = karcher_field(space, points, weights, &y);
    let mut residual = space.norm(&g);
    let mut iterations = 0;
    while residual > opts.tol {
        if iterations == opts.max_iter {
            return Err(Error::NonConvergence { iterations, residual });
        }
        iterations += 1;
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = space.normalize(&space.exp_unchecked(&space.scale(&g, step))?);
            let fc = f(&cand);
            let gc = karcher_field(space, points, weights, &cand);
            let rc = space.norm(&gc);
            let armijo = fc <= value - 1e-4 * step * residual * residual;
            let flat = fc <= value + 1e-15 * (1.0 + value) && rc < residual;
            if armijo || flat {
                y = cand;
                value = fc;
                g = gc;
                residual = rc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            return Err(Error::NonConvergence { iterations, residual });
        }
    }
    Ok(BarycenterResult {
        point: y,
        value,
        method: MeanMethod::Gradient,
        iterations,
        residual,
        multiplicity: false,
    })
}

/// Arc-wise exact minima of `θ ↦ Σ wᵢ d²_circle(θ, θᵢ)` on a circle of length `c`.
///
/// Between consecutive antipodes of the atoms the objective is a quadratic
/// with the weighted mean of unwrapped atom positions as its vertex.
fn circle_minima(c: f64, angles: &[f64], weights: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = angles.iter().map(|a| cylinder::wrap(c, a + c / 2.0)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= TOL.merge);
    let mut out = Vec::with_capacity(cuts.len());
    for k in 0..cuts.len() {
        let lo = cuts[k];
        let hi = if k + 1 < cuts.len() { cuts[k + 1] } else { cuts[0] + c };
        if hi - lo <= TOL.merge && cuts.len() > 1 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let mut vertex = 0.0;
        let unwrapped: Vec<f64> = angles
            .iter()
            .map(|&a| {
                let u = a + c * ((mid - a) / c).round();
                u
            })
            .collect();
        for (u, w) in unwrapped.iter().zip(weights) {
            vertex += w * u;
        }
        let theta = vertex.clamp(lo, hi);
        let value: f64 = unwrapped.iter().zip(weights).map(|(u, w)| w * (theta - u).powi(2)).sum();
        out.push((theta, value));
    }
    out
}

fn sphere_objective(r: f64, charts: &[&[f64]], weights: &[f64], y: &[f64]) -> f64 {
    charts
        .iter()
        .zip(weights)
        .map(|(x, w)| {
            let d = sphere::dist(r, x, y);
            w * d * d
        })
        .sum()
}

fn sphere_direction(r: f64, charts: &[&[f64]], weights: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = vec![0.0; y.len()];
    for (x, w) in charts.iter().zip(weights) {
        if let Ok(v) = sphere::log(r, y, x, CutLocusPolicy::Error, TOL.cut_locus) {
            acc = axpy(&acc, *w, &v);
        }
    }
    acc
}

/// Backtracking descent along `dir` (half the negative gradient) on the sphere of radius `r`.
fn sphere_descent(
    r: f64,
    start: Vec<f64>,
    f: &dyn Fn(&[f64]) -> f64,
    dir: &dyn Fn(&[f64]) -> Vec<f64>,
    opts: &MeanOptions,
) -> (Vec<f64>, usize) {
    let mut y = start;
    let mut value = f(&y);
    let mut g = dir(&y);
    let mut res = norm(&g);
    let mut iterations = 0;
    let mut stalled = 0;
    while res > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand = sphere::exp(r, &y, &scale(&g, step));
            let fc = f(&cand);
            let gc = dir(&cand);
            let rc = norm(&gc);
            if fc <= value - 1e-4 * step * res * res || (fc <= value + 1e-15 * (1.0 + value) && rc < res) {
                // stalled against a kink of the objective (e.g. the balloon's gluing point)
                stalled = if value - fc <= 1e-14 * (1.0 + value) { stalled + 1 } else { 0 };
                if stalled == 5 || step * res <= 1e-14 * r {
                    return (cand, iterations);
                }
                y = cand;
                value = fc;
                g = gc;
                res = rc;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (y, iterations)
}

/// Longitude-latitude grid on a 2-sphere in ℝ³, poles included once.
fn sphere_grid(r: f64, n: usize) -> Vec<[f64; 3]> {
    let lats = n / 2;
    let mut pts = vec![[0.0, 0.0, r], [0.0, 0.0, -r]];
    for i in 1..lats {
        let lat = std::f64::consts::PI * (i as f64 / lats as f64 - 0.5);
        for j in 0..n {
            let lon = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            pts.push([r * lat.cos() * lon.cos(), r * lat.cos() * lon.sin(), r * lat.sin()]);
        }
    }
    pts
}

/// Lowest grid points, mutually separated by at least ten grid spacings.
fn grid_starts(r: f64, n: usize, f: &dyn Fn(&[f64]) -> f64) -> Vec<Vec<f64>> {
    let grid = sphere_grid(r, n);
    let values: Vec<f64> = grid.iter().map(|p| f(p)).collect();
    pick_starts(r, n, &grid, &values)
}

/// [`grid_starts`] for point atoms on a plain sphere, evaluating distances through `acos`.
fn sphere_grid_starts(r: f64, n: usize, charts: &[&[f64]], weights: &[f64]) -> Vec<Vec<f64>> {
    let grid = sphere_grid(r, n);
    let units: Vec<[f64; 3]> = charts.iter().map(|x| [x[0] / r, x[1] / r, x[2] / r]).collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|p| {
            let u = [p[0] / r, p[1] / r, p[2] / r];
            units
                .iter()
                .zip(weights)
                .map(|(a, w)| {
                    let c = (a[0] * u[0] + a[1] * u[1] + a[2] * u[2]).clamp(-1.0, 1.0);
                    w * c.acos().powi(2)
                })
                .sum::<f64>()
                * r
                * r
        })
        .collect();
    pick_starts(r, n, &grid, &values)
}

fn pick_starts(r: f64, n: usize, grid: &[[f64; 3]], values: &[f64]) -> Vec<Vec<f64>> {
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sep = 10.0 * 2.0 * std::f64::consts::PI * r / n as f64;
    let mut chosen: Vec<Vec<f64>> = Vec::new();
    for i in order {
        if chosen.len() == GRID_STARTS {
            break;
        }
        if chosen.iter().all(|c| sphere::dist(r, c, &grid[i]) > sep) {
            chosen.push(grid[i].to_vec());
        }
    }
    chosen
}

fn random_starts(r: f64, dim: usize, n: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_F12E);
    (0..n)
        .map(|_| {
            let g: Vec<f64> = (0..=dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            sphere::normalize(r, &g)
        })
        .collect()
}

fn atom_starts(charts: &[&[f64]], f: &dyn Fn(&[f64]) -> f64) -> Vec<Vec<f64>> {
    let mut order: Vec<(f64, usize)> = charts.iter().enumerate().map(|(i, x)| (f(x), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    order.iter().take(ATOM_STARTS).map(|&(_, i)| charts[i].to_vec()).collect()
}

/// Balloon space: exact minimum over the string plus a global search over the sphere.
fn balloon_mean(space: &Space, len: f64, points: &[Point], weights: &[f64], opts: &MeanOptions) -> Result<BarycenterResult> {
    let r = space.sphere_radius().unwrap();
    let south = [0.0, 0.0, -r];
    // signed position along the string of each atom's projection
    let pull: f64 = points
        .iter()
        .zip(weights)
        .map(|(p, w)| match p.tag {
            Some(Component::String) => w * p.chart[0],
            _ => -w * sphere::dist(r, &p.chart, &south),
        })
        .sum();
    let mut cands = vec![candidate(
        space,
        points,
        weights,
        Point::tagged(Component::String, vec![pull.clamp(0.0, len)]),
        0,
    )];

    let sphere_atoms: Vec<(&[f64], f64)> = points
        .iter()
        .zip(weights)
        .filter(|(p, _)| p.tag != Some(Component::String))
        .map(|(p, w)| (p.chart.as_slice(), *w))
        .collect();
    let string_atoms: Vec<(f64, f64)> = points
        .iter()
        .zip(weights)
        .filter(|(p, _)| p.tag == Some(Component::String))
        .map(|(p, w)| (p.chart[0], *w))
        .collect();
    let f = |y: &[f64]| {
        let to_s = sphere::dist(r, y, &south);
        let a: f64 = sphere_atoms.iter().map(|(x, w)| w * sphere::dist(r, x, y).powi(2)).sum();
        let b: f64 = string_atoms.iter().map(|(s, w)| w * (to_s + s).powi(2)).sum();
        a + b
    };
    let dir = |y: &[f64]| {
        let mut acc = vec![0.0; 3];
        for (x, w) in &sphere_atoms {
            if let Ok(v) = sphere::log(r, y, x, CutLocusPolicy::Error, TOL.cut_locus) {
                acc = axpy(&acc, *w, &v);
            }
        }
        let to_s = sphere::dist(r, y, &south);
        if to_s > TOL.chart && !string_atoms.is_empty() {
            let toward = sphere::log(r, y, &south, CutLocusPolicy::LexLargest, TOL.cut_locus).unwrap_or_default();
            for (s, w) in &string_atoms {
                acc = axpy(&acc, w * (to_s + s) / to_s, &toward);
            }
        }
        acc
    };
    let sphere_charts: Vec<&[f64]> = sphere_atoms.iter().map(|(x, _)| *x).collect();
    let starts = grid_starts(r, opts.grid, &f)
        .into_iter()
        .chain(atom_starts(&sphere_charts, &f));
    // descents drawn into the gluing point creep along its kink; the string side covers it
    let sphere_opts = MeanOptions {
        max_iter: opts.max_iter.min(BALLOON_SPHERE_ITER),
        ..*opts
    };
    for s in starts {
        let (y, iters) = sphere_descent(r, s, &f, &dir, &sphere_opts);
        debug_assert!(dot(&y, &y) > 0.0);
        cands.push(candidate(space, points, weights, Point::tagged(Component::Sphere, y), iters));
    }
    Ok(select(space, points, weights, cands))
}
