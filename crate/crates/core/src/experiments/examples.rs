//! The worked examples and counterexamples, each as a self-checking report.

use std::f64::consts::PI;
use std::time::Instant;

use serde_json::json;

use super::random::rng;
use super::report::{Check, ExperimentReport, Provenance, Relation};
use crate::frechet::variance;
use crate::geometry::{CutLocusPolicy, Point, Space, TangentVector};
use crate::interpolate::{convexity_certificate_with, displacement_interpolant, displacement_path, uniform_grid, DEFAULT_GRID};
use crate::measure::{mixture, DiscreteMeasure, MeasureEnsemble};
use crate::tolerances::Tolerances;
use crate::transport::{solve_ot, w2_distance};
use crate::wbarycenter::barycenter_objective;
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;

fn finish(mut r: ExperimentReport, start: Instant) -> ExperimentReport {
    r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}

/// Uniform measure on `n` equally spaced points of the equator of a 2-sphere.
pub fn equator_measure(space: &Space, n: usize) -> Result<DiscreteMeasure> {
    let r = space
        .sphere_radius()
        .ok_or_else(|| Error::Precondition("equator needs a sphere".into()))?;
    let atoms = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            space.point(vec![r * a.cos(), r * a.sin(), 0.0])
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::uniform(space, atoms)
}

/// Two poles of the circumference-2 sphere against equator measures.
pub fn run_sphere_example() -> Result<ExperimentReport> {
    let start = Instant::now();
    let s2 = Space::sphere(2, 2.0)?;
    let r = s2.sphere_radius().unwrap();
    let mut rep = ExperimentReport::new("sphere_example", &s2, json!({"circumference": 2.0, "equator_atoms": 360}));
    let north = DiscreteMeasure::dirac(&s2, s2.point(vec![0.0, 0.0, r])?)?;
    let south = DiscreteMeasure::dirac(&s2, s2.point(vec![0.0, 0.0, -r])?)?;
    let omega = MeasureEnsemble::uniform(vec![north.clone(), south.clone()])?;

    let pole_distance = s2.distance(&north.atoms()[0], &south.atoms()[0])?;
    rep.check(Check::equal("d(north, south)", pole_distance, 1.0, 1e-12, Provenance::Reference));

    let z = DiscreteMeasure::dirac(&s2, s2.point(vec![r, 0.0, 0.0])?)?;
    let obj_z = barycenter_objective(&omega, &z)?;
    rep.check(Check::equal("objective(equator Dirac)", obj_z, 0.25, 1e-6, Provenance::Reference));

    let equator = equator_measure(&s2, 360)?;
    let obj_eq = barycenter_objective(&omega, &equator)?;
    rep.check(Check::equal("objective(uniform equator)", obj_eq, 0.25, 1e-6, Provenance::Oracle));

    let mean = crate::frechet::frechet_mean(&equator)?;
    rep.check(Check::equal("var(uniform equator)", mean.value, 0.25, 1e-3, Provenance::Reference));
    rep.record("equator_mean", &mean);

    let mean_var = 0.5 * variance(&north)? + 0.5 * variance(&south)?;
    rep.check(Check::equal("integral of var over omega", mean_var, 0.0, 0.0, Provenance::Identity));
    rep.check(Check::new(
        "var(barycenter) exceeds mean variance",
        mean.value,
        Relation::Exceeds,
        mean_var,
        0.0,
        Provenance::Reference,
    ));
    Ok(finish(rep, start))
}

/// The balloon-on-a-string space: sphere of circumference 1 with a unit string.
pub fn run_balloon_example(eps: f64) -> Result<ExperimentReport> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::Precondition(format!("eps = {eps} outside (0, 1/4)")));
    }
    let start = Instant::now();
    let space = Space::balloon_string(1.0, 1.0)?;
    let r = space.sphere_radius().unwrap();
    let mut rep = ExperimentReport::new("balloon_example", &space, json!({"eps": eps}));

    let x = space.reference_point();
    let v = TangentVector::new(x.clone(), vec![eps, 0.0, 0.0]);
    let x0 = space.exp(&v)?;
    let x1 = space.exp(&space.scale(&v, -1.0))?;
    let y = space.tagged_point(crate::Component::String, vec![0.5 - eps])?;
    let mu0 = DiscreteMeasure::uniform(&space, vec![y.clone(), x0])?;
    let mu1 = DiscreteMeasure::uniform(&space, vec![y.clone(), x1])?;
    let linear = mixture(&MeasureEnsemble::uniform(vec![mu0.clone(), mu1.clone()])?)?;
    let coupling = solve_ot(&mu0, &mu1)?;
    let disp = displacement_interpolant(&coupling, 0.5)?;

    let target = (0.5 - eps).powi(2);
    let var0 = variance(&mu0)?;
    let var1 = variance(&mu1)?;
    let var_l = variance(&linear)?;
    let var_w = variance(&disp)?;
    let expected_w = (1.0 - eps).powi(2) / 4.0;
    rep.check(Check::equal("var(mu0)", var0, target, 1e-12, Provenance::Reference));
    rep.check(Check::equal("var(mu1)", var1, target, 1e-12, Provenance::Reference));
    rep.check(Check::equal("var(linear midpoint)", var_l, target, 1e-12, Provenance::Reference));
    rep.check(Check::equal("var(displacement midpoint)", var_w, expected_w, 1e-12, Provenance::Reference));
    let expected_disp = DiscreteMeasure::uniform(&space, vec![y, x])?;
    rep.check(Check::holds(
        "displacement midpoint is (y + north)/2",
        disp.approx_eq(&expected_disp, 1e-9),
        Provenance::Reference,
    ));
    let gap = var_w - var_l;
    rep.check(Check::new("displacement exceeds linear", gap, Relation::Exceeds, 0.0, 1e-12, Provenance::Reference));
    rep.check(Check::equal("gap series eps/2 - 3eps^2/4", gap, eps / 2.0 - 0.75 * eps * eps, 1e-10, Provenance::Oracle));
    rep.record("sphere_radius", r);
    Ok(finish(rep, start))
}

/// Two-atom construction on the flat cylinder around the cut locus of `x = (0, 0)`.
pub fn run_cylinder_counterexample(c: f64, delta: f64) -> Result<ExperimentReport> {
    if !(c > 0.0 && delta > 0.0 && delta < c / 4.0) {
        return Err(Error::Precondition(format!("need 0 < delta < c/4, got c = {c}, delta = {delta}")));
    }
    let start = Instant::now();
    let cyl = Space::flat_cylinder(c)?;
    let mut rep = ExperimentReport::new("cylinder_counterexample", &cyl, json!({"c": c, "delta": delta}));
    let x = cyl.point(vec![0.0, 0.0])?;
    let y = cyl.point(vec![0.0, c / 2.0])?;
    let v = TangentVector::new(x.clone(), vec![0.0, delta]);
    let xp = cyl.exp(&v)?;
    let xm = cyl.exp(&cyl.scale(&v, -1.0))?;
    let mu0 = DiscreteMeasure::uniform(&cyl, vec![y.clone(), xp.clone()])?;
    let mu1 = DiscreteMeasure::uniform(&cyl, vec![y.clone(), xm.clone()])?;
    let coupling = solve_ot(&mu0, &mu1)?;
    let half = displacement_interpolant(&coupling, 0.5)?;
    let expected_half = DiscreteMeasure::uniform(&cyl, vec![y.clone(), x.clone()])?;
    rep.check(Check::equal(
        "W2(midpoint, (y + x)/2)",
        w2_distance(&half, &expected_half)?,
        0.0,
        TOL.marginal,
        Provenance::Reference,
    ));

    let var_half = variance(&half)?;
    let mean_end = 0.5 * (variance(&mu0)? + variance(&mu1)?);
    rep.check(Check::equal("var(midpoint)", var_half, c * c / 16.0, 1e-10, Provenance::Oracle));
    rep.check(Check::equal("mean endpoint variance", mean_end, (c / 2.0 - delta).powi(2) / 4.0, 1e-10, Provenance::Oracle));
    let gap = var_half - mean_end;
    rep.check(Check::equal(
        "convexity gap",
        gap,
        c * c / 16.0 - (c / 2.0 - delta).powi(2) / 4.0,
        1e-10,
        Provenance::Oracle,
    ));
    rep.check(Check::new("gap is positive", gap, Relation::Exceeds, 0.0, 1e-12, Provenance::Reference));

    let d = |a: &Point, b: &Point| cyl.distance(a, b).map(|t| t * t);
    let display = d(&xp, &y)? + d(&xm, &y)? - 2.0 * d(&x, &y)?;
    rep.check(Check::equal(
        "cut-locus display",
        display,
        2.0 * (c / 2.0 - delta).powi(2) - 2.0 * (c / 2.0).powi(2),
        1e-10,
        Provenance::Oracle,
    ));
    rep.check(Check::holds("display is negative", display < 0.0, Provenance::Reference));
    Ok(finish(rep, start))
}

/// Four points at latitudes `±β` and longitudes `±Δ/2` about a great circle.
struct Quad {
    x0: Vec<f64>,
    x1: Vec<f64>,
    y0: Vec<f64>,
    y1: Vec<f64>,
}

fn frame(rng: &mut rand_chacha::ChaCha8Rng) -> [[f64; 3]; 3] {
    use rand_distr::{Distribution, StandardNormal};
    let mut g = || -> [f64; 3] { [0; 3].map(|_: i32| StandardNormal.sample(&mut *rng)) };
    let n = |v: [f64; 3]| {
        let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|x| x / l)
    };
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let c = n(g());
    let a = g();
    let e1 = n([0, 1, 2].map(|i| a[i] - dot(&a, &c) * c[i]));
    let e2 = [c[1] * e1[2] - c[2] * e1[1], c[2] * e1[0] - c[0] * e1[2], c[0] * e1[1] - c[1] * e1[0]];
    [c, e1, e2]
}

fn quad_on_sphere(r: f64, f: &[[f64; 3]; 3], beta: f64, delta: f64) -> Quad {
    let p = |phi: f64, b: f64| -> Vec<f64> {
        (0..3)
            .map(|i| r * (b.cos() * (phi.cos() * f[0][i] + phi.sin() * f[1][i]) + b.sin() * f[2][i]))
            .collect()
    };
    Quad {
        x0: p(-delta / 2.0, beta),
        x1: p(-delta / 2.0, -beta),
        y0: p(delta / 2.0, beta),
        y1: p(delta / 2.0, -beta),
    }
}

struct PathOutcome {
    values: Vec<f64>,
    /// Largest `var(μₜ) − ((1 − t) var(μ₀) + t var(μ₁))` and its time.
    gap: f64,
    t: f64,
    worst_second_difference: f64,
}

fn two_point_path(space: &Space, x0: Point, x1: Point, y0: Point, y1: Point) -> Result<PathOutcome> {
    let mu0 = DiscreteMeasure::uniform(space, vec![x0, x1])?;
    let mu1 = DiscreteMeasure::uniform(space, vec![y0, y1])?;
    let c = solve_ot(&mu0, &mu1)?;
    let grid = uniform_grid(DEFAULT_GRID);
    let path = displacement_path(&c, &grid, CutLocusPolicy::Error)?;
    let values = path.map(variance)?;
    let (v0, v1) = (values[0], values[grid.len() - 1]);
    let (mut gap, mut t) = (f64::NEG_INFINITY, 0.0);
    for (s, v) in grid.iter().zip(&values) {
        let g = v - ((1.0 - s) * v0 + s * v1);
        if g > gap {
            gap = g;
            t = *s;
        }
    }
    let cert = convexity_certificate_with(&values, TOL.inequality)?;
    Ok(PathOutcome {
        values,
        gap,
        t,
        worst_second_difference: cert.worst_violation,
    })
}

const CURVATURE_EPS: f64 = 0.1;
const CURVATURE_BUDGET: u64 = 64;
const CURVATURE_WITNESS: f64 = 1e-4;

/// Seeded search on the circumference-2 sphere for a four-point configuration
/// whose displacement interpolation breaks convexity of the variance, with the
/// same configurations replayed in the plane and the hyperbolic plane.
pub fn run_positive_curvature_counterexample(seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let s2 = Space::sphere(2, 2.0)?;
    let r = s2.sphere_radius().unwrap();
    let r2 = Space::euclidean(2)?;
    let h2 = Space::hyperbolic(2)?;
    let mut rep = ExperimentReport::new(
        "positive_curvature_counterexample",
        &s2,
        json!({"seed": seed, "eps": CURVATURE_EPS, "budget": CURVATURE_BUDGET}),
    );
    let beta = CURVATURE_EPS / (2.0 * r);
    let mut witness = None;
    let mut control_worst = f64::NEG_INFINITY;
    let mut control_second = f64::INFINITY;
    let mut tried = 0;
    for trial in 0..CURVATURE_BUDGET {
        let mut g = rng(seed, trial);
        let f = frame(&mut g);
        let delta: f64 = rand::Rng::random_range(&mut g, 0.2..2.5);
        let q = quad_on_sphere(r, &f, beta, delta);
        let pts = [&q.x0, &q.x1, &q.y0, &q.y1].map(|c| Point::new(c.clone()));
        let d = |a: &Point, b: &Point| s2.dist(a, b);
        let conditions = (d(&pts[0], &pts[1]) - CURVATURE_EPS).abs() < 1e-12
            && (d(&pts[2], &pts[3]) - CURVATURE_EPS).abs() < 1e-12
            && d(&pts[0], &pts[2]).powi(2) + d(&pts[1], &pts[3]).powi(2)
                <= d(&pts[0], &pts[3]).powi(2) + d(&pts[1], &pts[2]).powi(2);
        if !conditions {
            continue;
        }
        tried += 1;
        let sphere_run = two_point_path(&s2, pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone())?;
        let spread = {
            let g0 = s2.geodesic_point(&pts[0], &pts[2], sphere_run.t)?;
            let g1 = s2.geodesic_point(&pts[1], &pts[3], sphere_run.t)?;
            s2.dist(&g0, &g1)
        };

        // controls: chart coordinates in the tangent plane at the frame center
        let center = Point::new(f[0].map(|x| r * x).to_vec());
        let coords = |p: &Point| -> Result<[f64; 2]> {
            let v = s2.log(&center, p)?;
            let e1 = TangentVector::new(center.clone(), f[1].to_vec());
            let e2 = TangentVector::new(center.clone(), f[2].to_vec());
            Ok([s2.inner(&v, &e1)?, s2.inner(&v, &e2)?])
        };
        let ab = pts.iter().map(coords).collect::<Result<Vec<_>>>()?;
        let flat: Vec<Point> = ab.iter().map(|c| Point::new(c.to_vec())).collect();
        let hyp = ab
            .iter()
            .map(|c| h2.exp(&TangentVector::new(h2.reference_point(), vec![0.0, c[0], c[1]])))
            .collect::<Result<Vec<_>>>()?;
        for (space, p) in [(&r2, flat), (&h2, hyp)] {
            let out = two_point_path(space, p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone())?;
            control_worst = control_worst.max(out.gap);
            control_second = control_second.min(out.worst_second_difference);
        }

        if sphere_run.gap > CURVATURE_WITNESS && spread > CURVATURE_EPS {
            witness = Some((trial, delta, q, sphere_run, spread));
            break;
        }
    }
    rep.record("configurations_tried", tried);
    match witness {
        Some((trial, delta, q, run, spread)) => {
            rep.check(Check::new(
                "sphere convexity gap",
                run.gap,
                Relation::Exceeds,
                CURVATURE_WITNESS,
                0.0,
                Provenance::Oracle,
            ));
            rep.check(Check::new("geodesic spread at witness t", spread, Relation::Exceeds, CURVATURE_EPS, 0.0, Provenance::Reference));
            rep.record("trial", trial);
            rep.record("delta", delta);
            rep.record("witness_t", run.t);
            rep.record("variance_path", &run.values);
            rep.record("worst_second_difference", run.worst_second_difference);
            rep.record("x0", &q.x0);
            rep.record("x1", &q.x1);
            rep.record("y0", &q.y0);
            rep.record("y1", &q.y1);
        }
        None => rep.check(Check::holds("witness found within budget", false, Provenance::Oracle)),
    }
    rep.check(Check::new(
        "control gap (plane and hyperbolic plane)",
        control_worst,
        Relation::AtMost,
        0.0,
        TOL.inequality,
        Provenance::Oracle,
    ));
    rep.check(Check::new(
        "control second differences",
        control_second,
        Relation::AtLeast,
        0.0,
        TOL.inequality,
        Provenance::Oracle,
    ));
    Ok(finish(rep, start))
}
