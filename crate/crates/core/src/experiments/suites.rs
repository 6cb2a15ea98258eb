//! Seeded batches of random instances for the convexity, Jensen and projection checks.

use std::time::Instant;

use serde_json::json;

use super::random::{random_disk_measure, random_ensemble, random_measure, random_tangent, rng};
use super::report::{Check, ExperimentReport, Provenance, Relation};
use crate::frechet::variance;
use crate::geometry::{CutLocusPolicy, Isometry, Point, Space};
use crate::interpolate::{convexity_certificate_with, displacement_path, quasi_geodesic, uniform_grid, VectorField, DEFAULT_GRID};
use crate::measure::{mixture, DiscreteMeasure};
use crate::symmetry::{l2_projection, sandwich_report, sandwich_report_for, w2_projection, IsometryGroup};
use crate::tolerances::Tolerances;
use crate::transport::solve_ot;
use crate::wbarycenter::{jensen_gap, w2_barycenter_multistart, BarycenterOptions};
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;
const CONVEXITY_ATOMS: usize = 20;
const FIELD_BOUND: f64 = 1.0;

/// Variance along random displacement paths and quasi-geodesics on an NPC space.
pub fn run_convexity_suite(space: &Space, trials: usize, seed: u64) -> Result<ExperimentReport> {
    if !space.is_npc() {
        return Err(Error::Precondition(format!("convexity suite runs on NPC spaces, not {space}")));
    }
    let start = Instant::now();
    let mut rep = ExperimentReport::new("convexity_suite", space, json!({"trials": trials, "seed": seed}));
    let grid = uniform_grid(DEFAULT_GRID);
    let (mut disp_fail, mut quasi_fail) = (0usize, 0usize);
    let (mut disp_worst, mut quasi_worst) = (f64::INFINITY, f64::INFINITY);
    for trial in 0..trials {
        let mut g = rng(seed, trial as u64);
        let mu = random_measure(space, &mut g, CONVEXITY_ATOMS)?;
        let nu = random_measure(space, &mut g, CONVEXITY_ATOMS)?;
        let c = solve_ot(&mu, &nu)?;
        let values = displacement_path(&c, &grid, CutLocusPolicy::Error)?.map(variance)?;
        let cert = convexity_certificate_with(&values, TOL.inequality)?;
        disp_worst = disp_worst.min(cert.worst_violation);
        disp_fail += usize::from(!cert.convex);

        let field = VectorField::from_fn(&mu, |p| random_tangent(space, p, &mut g, FIELD_BOUND))?;
        let values = quasi_geodesic(&mu, &field, &grid)?.map(variance)?;
        let cert = convexity_certificate_with(&values, TOL.inequality)?;
        quasi_worst = quasi_worst.min(cert.worst_violation);
        quasi_fail += usize::from(!cert.convex);
    }
    rep.check(Check::equal("displacement violations", disp_fail as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::equal("quasi-geodesic violations", quasi_fail as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::new(
        "worst displacement second difference",
        disp_worst,
        Relation::AtLeast,
        0.0,
        TOL.inequality,
        Provenance::Oracle,
    ));
    rep.check(Check::new(
        "worst quasi-geodesic second difference",
        quasi_worst,
        Relation::AtLeast,
        0.0,
        TOL.inequality,
        Provenance::Oracle,
    ));
    rep.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

const JENSEN_MEASURES: usize = 5;
const JENSEN_ATOMS: usize = 10;

/// Barycenter and linear Jensen inequalities on random ensembles.
///
/// Barycenters are computed (multistart over the entries) on NPC spaces only;
/// on other spaces just the curvature-free linear inequality is checked.
pub fn run_jensen_suite(space: &Space, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut rep = ExperimentReport::new("jensen_suite", space, json!({"trials": trials, "seed": seed}));
    let (mut converged, mut bary_fail, mut linear_fail) = (0usize, 0usize, 0usize);
    let mut bary_worst = f64::INFINITY;
    let mut linear_worst = f64::INFINITY;
    let mut worst_residual = 0.0_f64;
    for trial in 0..trials {
        let mut g = rng(seed, trial as u64);
        let ens = random_ensemble(space, &mut g, JENSEN_MEASURES, JENSEN_ATOMS)?;
        if space.is_npc() {
            let bc = w2_barycenter_multistart(&ens, &BarycenterOptions::default())?;
            let j = jensen_gap(&ens, &bc)?;
            worst_residual = worst_residual.max(bc.residual);
            if let Some(ok) = j.barycenter_holds {
                converged += 1;
                bary_fail += usize::from(!ok);
                bary_worst = bary_worst.min(j.barycenter_gap).min(j.linear_var - j.var_bar);
            }
            linear_worst = linear_worst.min(j.linear_gap);
            linear_fail += usize::from(!j.linear_holds);
        } else {
            let mut mean_var = 0.0;
            for (l, m) in ens.entries() {
                mean_var += l * variance(m)?;
            }
            let gap = variance(&mixture(&ens)?)? - mean_var;
            linear_worst = linear_worst.min(gap);
            linear_fail += usize::from(gap < -TOL.inequality);
        }
    }
    if space.is_npc() {
        rep.record("converged", converged);
        rep.record("worst_residual", worst_residual);
        rep.check(Check::equal("converged runs", converged as f64, trials as f64, 0.0, Provenance::Oracle));
        rep.check(Check::equal("barycenter inequality violations", bary_fail as f64, 0.0, 0.0, Provenance::Oracle));
        if converged > 0 {
            rep.check(Check::new(
                "worst barycenter slack",
                bary_worst,
                Relation::AtLeast,
                0.0,
                TOL.inequality,
                Provenance::Oracle,
            ));
        }
    }
    rep.check(Check::equal("linear inequality violations", linear_fail as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::new("worst linear slack", linear_worst, Relation::AtLeast, 0.0, TOL.inequality, Provenance::Oracle));
    rep.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

const PROJECTION_ATOMS: usize = 10;
const RIVALS: usize = 20;
const RIVAL_SLACK: f64 = 1e-6;

/// Variance sandwich for cyclic rotation groups of the plane on random disk measures.
pub fn run_projection_suite(k: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    if ![1, 2, 3, 4, 6].contains(&k) {
        return Err(Error::Precondition(format!("k = {k} not in {{1, 2, 3, 4, 6}}")));
    }
    let start = Instant::now();
    let r2 = Space::euclidean(2)?;
    let group = IsometryGroup::cyclic_rotations(&r2, k)?;
    let mut rep = ExperimentReport::new("projection_suite", &r2, json!({"k": k, "trials": trials, "seed": seed}));
    let (mut left_fail, mut right_fail, mut not_invariant) = (0usize, 0usize, 0usize);
    let (mut left_worst, mut right_worst) = (f64::INFINITY, f64::INFINITY);
    let (mut rival_fail, mut rival_worst) = (0usize, f64::INFINITY);
    for trial in 0..trials {
        let mut g = rng(seed, trial as u64);
        let mu = random_disk_measure(&r2, &mut g, PROJECTION_ATOMS)?;
        let proj = w2_projection(&group, &mu)?;
        let s = sandwich_report_for(&group, &mu, &proj)?;
        let own = solve_ot(proj.measure(), &mu)?.cost();
        for _ in 0..RIVALS {
            let nu = l2_projection(&group, &random_disk_measure(&r2, &mut g, PROJECTION_ATOMS)?)?;
            let gap = solve_ot(&nu, &mu)?.cost() - own;
            rival_worst = rival_worst.min(gap);
            rival_fail += usize::from(gap < -RIVAL_SLACK);
        }
        left_worst = left_worst.min(s.var_mu - s.var_w);
        right_worst = right_worst.min(s.var_l2 - s.var_mu);
        left_fail += usize::from(s.left_holds != Some(true));
        right_fail += usize::from(!s.right_holds);
        not_invariant += usize::from(!s.invariant);
    }
    rep.check(Check::equal("left inequality violations", left_fail as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::equal("right inequality violations", right_fail as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::equal("non-invariant projections", not_invariant as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::new("worst left slack", left_worst, Relation::AtLeast, 0.0, TOL.inequality, Provenance::Oracle));
    rep.check(Check::new("worst right slack", right_worst, Relation::AtLeast, 0.0, TOL.inequality, Provenance::Oracle));
    rep.check(Check::equal("invariant rivals closer to μ", rival_fail as f64, 0.0, 0.0, Provenance::Oracle));
    rep.check(Check::new("worst rival margin", rival_worst, Relation::AtLeast, 0.0, RIVAL_SLACK, Provenance::Oracle));

    // hand-computed case: half-turn about the origin acts on the axis as a reflection
    if k == 2 {
        let mu = DiscreteMeasure::uniform(&r2, vec![Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 0.0])])?;
        let s = sandwich_report(&group, &mu)?;
        rep.check(Check::equal("axis case var_w", s.var_w, 0.25, 0.0, Provenance::Oracle));
        rep.check(Check::equal("axis case var_mu", s.var_mu, 0.25, 0.0, Provenance::Oracle));
        rep.check(Check::equal("axis case var_l2", s.var_l2, 0.5, 0.0, Provenance::Oracle));
    }
    if k == 4 {
        let mu = DiscreteMeasure::dirac(&r2, Point::new(vec![1.0, 0.0]))?;
        let s = sandwich_report(&group, &mu)?;
        rep.check(Check::equal("Dirac orbit var_w", s.var_w, 0.0, 1e-12, Provenance::Oracle));
        rep.check(Check::equal("Dirac orbit var_l2", s.var_l2, 1.0, 1e-12, Provenance::Oracle));
    }
    rep.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}

/// The reflection `x ↦ −x` of the line applied to `½[δ₀ + δ₁]`.
pub fn run_reflection_example() -> Result<ExperimentReport> {
    let start = Instant::now();
    let line = Space::euclidean(1)?;
    let group = IsometryGroup::generate(&line, &[Isometry::reflection(&line, &[1.0])?], 2)?;
    let mu = DiscreteMeasure::uniform(&line, vec![Point::new(vec![0.0]), Point::new(vec![1.0])])?;
    let s = sandwich_report(&group, &mu)?;
    let mut rep = ExperimentReport::new("reflection_example", &line, json!({"atoms": [0.0, 1.0]}));
    rep.check(Check::equal("var_w", s.var_w, 0.25, 0.0, Provenance::Oracle));
    rep.check(Check::equal("var_mu", s.var_mu, 0.25, 0.0, Provenance::Oracle));
    rep.check(Check::equal("var_l2", s.var_l2, 0.5, 0.0, Provenance::Oracle));
    rep.check(Check::holds("projection invariant", s.invariant, Provenance::Reference));
    rep.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rep)
}
