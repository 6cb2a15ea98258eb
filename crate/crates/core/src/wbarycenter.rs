//! Free-support Wasserstein barycenters of measure ensembles.
//!
//! The candidate keeps the atom count and weights of its initialisation. Each
//! sweep solves one transport problem per ensemble entry and moves every
//! candidate atom to the Fréchet mean of the atoms it is coupled to.

use serde::Serialize;

use crate::frechet::{self, karcher_field};
use crate::geometry::{CutLocusPolicy, Point};
use crate::measure::{mixture, DiscreteMeasure, MeasureEnsemble};
use crate::tolerances::Tolerances;
use crate::transport::{solve_ot, Coupling};
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;

#[derive(Clone, Copy, Debug)]
pub struct BarycenterOptions {
    pub max_iter: usize,
    /// Stop once a sweep lowers the objective by less than this.
    pub tol: f64,
}

impl Default for BarycenterOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            tol: TOL.barycenter_decrease,
        }
    }
}

/// A stationary candidate for `ν ↦ Σᵢ λᵢ W₂²(μᵢ, ν)`.
#[derive(Clone, Debug, Serialize)]
pub struct EnsembleBarycenterResult {
    pub measure: DiscreteMeasure,
    pub objective: f64,
    pub iterations: usize,
    /// Objective after each accepted sweep, starting with the initial candidate.
    pub history: Vec<f64>,
    pub residual: f64,
}

fn couplings(ens: &MeasureEnsemble, nu: &DiscreteMeasure) -> Result<Vec<Coupling>> {
    ens.entries().iter().map(|(_, m)| solve_ot(nu, m)).collect()
}

fn weighted_cost(ens: &MeasureEnsemble, plans: &[Coupling]) -> f64 {
    ens.entries().iter().zip(plans).map(|((l, _), c)| l * c.cost()).sum()
}

/// `Σᵢ λᵢ W₂²(μᵢ, ν)`.
pub fn barycenter_objective(ens: &MeasureEnsemble, nu: &DiscreteMeasure) -> Result<f64> {
    if ens.space() != nu.space() {
        return Err(Error::SpaceMismatch(ens.space().to_string(), nu.space().to_string()));
    }
    Ok(weighted_cost(ens, &couplings(ens, nu)?))
}

/// Targets of candidate atom `k` across all plans, weighted by `λᵢ · mass`.
fn targets(ens: &MeasureEnsemble, plans: &[Coupling], k: usize) -> (Vec<Point>, Vec<f64>) {
    let mut pts = Vec::new();
    let mut ws = Vec::new();
    for ((lambda, _), c) in ens.entries().iter().zip(plans) {
        for e in c.entries().iter().filter(|e| e.source == k) {
            pts.push(c.target().atoms()[e.target].clone());
            ws.push(lambda * e.mass);
        }
    }
    (pts, ws)
}

pub fn w2_barycenter(ens: &MeasureEnsemble, init: &DiscreteMeasure) -> Result<EnsembleBarycenterResult> {
    w2_barycenter_with(ens, init, &BarycenterOptions::default())
}

/// Fixed-point iteration from the heaviest ensemble entry.
pub fn w2_barycenter_default(ens: &MeasureEnsemble) -> Result<EnsembleBarycenterResult> {
    w2_barycenter(ens, &ens.entries()[ens.heaviest()].1)
}

pub fn w2_barycenter_with(
    ens: &MeasureEnsemble,
    init: &DiscreteMeasure,
    opts: &BarycenterOptions,
) -> Result<EnsembleBarycenterResult> {
    let space = ens.space();
    if init.space() != space {
        return Err(Error::SpaceMismatch(space.to_string(), init.space().to_string()));
    }
    let mut cand = init.clone();
    let mut plans = couplings(ens, &cand)?;
    let mut objective = weighted_cost(ens, &plans);
    let mut history = vec![objective];
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let mut atoms = Vec::with_capacity(cand.len());
        for k in 0..cand.len() {
            let (pts, ws) = targets(ens, &plans, k);
            atoms.push(frechet::weighted_mean(space, &pts, &ws)?.point);
        }
        let next = DiscreteMeasure::renormalized(space, atoms, cand.weights().to_vec())?;
        let next_plans = couplings(ens, &next)?;
        let next_objective = weighted_cost(ens, &next_plans);
        if next_objective > objective {
            break;
        }
        let decrease = objective - next_objective;
        cand = next;
        plans = next_plans;
        objective = next_objective;
        history.push(objective);
        if decrease < opts.tol {
            break;
        }
    }
    let residual = residual_from_plans(ens, &cand, &plans)?;
    Ok(EnsembleBarycenterResult {
        measure: cand,
        objective,
        iterations,
        history,
        residual,
    })
}

/// Runs the iteration from every ensemble entry and keeps the lowest objective (first on ties).
pub fn w2_barycenter_multistart(ens: &MeasureEnsemble, opts: &BarycenterOptions) -> Result<EnsembleBarycenterResult> {
    let mut best: Option<EnsembleBarycenterResult> = None;
    for (_, init) in ens.entries() {
        let r = w2_barycenter_with(ens, init, opts)?;
        if best.as_ref().is_none_or(|b| r.objective < b.objective) {
            best = Some(r);
        }
    }
    Ok(best.expect("ensemble is nonempty"))
}

fn residual_from_plans(ens: &MeasureEnsemble, nu: &DiscreteMeasure, plans: &[Coupling]) -> Result<f64> {
    let space = nu.space();
    let mut worst = 0.0_f64;
    for (k, (x, mass)) in nu.iter().enumerate() {
        let (pts, ws) = targets(ens, plans, k);
        for y in &pts {
            space.log_with(x, y, CutLocusPolicy::Error)?;
        }
        let ws: Vec<f64> = ws.iter().map(|w| w / mass).collect();
        worst = worst.max(space.norm(&karcher_field(space, &pts, &ws, x)));
    }
    Ok(worst)
}

/// `maxₓ |Σᵢ λᵢ Σ_{e at x} (mₑ / ν(x)) log(x, yₑ)|` for the plans from `result.measure`.
pub fn zero_sum_residual(result: &EnsembleBarycenterResult, ens: &MeasureEnsemble) -> Result<f64> {
    let plans = couplings(ens, &result.measure)?;
    residual_from_plans(ens, &result.measure, &plans)
}

/// Variances around a barycenter and the two comparison inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JensenReport {
    pub var_bar: f64,
    pub mean_var: f64,
    pub linear_var: f64,
    /// `mean_var − var_bar`; nonnegative on NPC spaces at a barycenter.
    pub barycenter_gap: f64,
    /// `linear_var − mean_var`; nonnegative on every space.
    pub linear_gap: f64,
    /// Asserted only on NPC spaces for converged results.
    pub barycenter_holds: Option<bool>,
    pub linear_holds: bool,
}

pub fn jensen_gap(ens: &MeasureEnsemble, result: &EnsembleBarycenterResult) -> Result<JensenReport> {
    let var_bar = frechet::variance(&result.measure)?;
    let mut mean_var = 0.0;
    for (l, m) in ens.entries() {
        mean_var += l * frechet::variance(m)?;
    }
    let linear_var = frechet::variance(&mixture(ens)?)?;
    let tol = TOL.inequality;
    let asserted = ens.space().is_npc() && result.residual <= TOL.barycenter_residual;
    Ok(JensenReport {
        var_bar,
        mean_var,
        linear_var,
        barycenter_gap: mean_var - var_bar,
        linear_gap: linear_var - mean_var,
        barycenter_holds: asserted.then(|| var_bar <= mean_var + tol && var_bar <= linear_var + tol),
        linear_holds: mean_var <= linear_var + tol,
    })
}
