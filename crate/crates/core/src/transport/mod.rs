//! Exact quadratic-cost optimal transport between discrete measures.
//!
//! General inputs go through a transportation simplex; equal-count inputs
//! with uniform weights use the Hungarian method.

pub mod assignment;
pub mod simplex;

use serde::{Deserialize, Serialize};

use crate::measure::DiscreteMeasure;
use crate::tolerances::{Tolerances, MAX_ATOMS};
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;
const DROP_MASS: f64 = 1e-14;

/// One nonzero cell of a transport plan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingEntry {
    pub source: usize,
    pub target: usize,
    pub mass: f64,
}

/// A sparse transport plan between two measures.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    source: DiscreteMeasure,
    target: DiscreteMeasure,
    entries: Vec<CouplingEntry>,
    cost: f64,
}

#[derive(Serialize)]
struct CouplingJson<'a> {
    cost: f64,
    entries: &'a [CouplingEntry],
}

impl Serialize for Coupling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CouplingJson {
            cost: self.cost,
            entries: &self.entries,
        }
        .serialize(s)
    }
}

impl Coupling {
    /// Validated plan from explicit entries; the cost is computed here.
    pub fn from_entries(source: DiscreteMeasure, target: DiscreteMeasure, entries: Vec<CouplingEntry>) -> Result<Self> {
        source.ensure_same_space(&target)?;
        for e in &entries {
            if e.source >= source.len() || e.target >= target.len() {
                return Err(Error::Malformed(format!("entry ({}, {}) out of range", e.source, e.target)));
            }
            if !(e.mass.is_finite() && e.mass > 0.0) {
                return Err(Error::Malformed(format!("entry mass {} is not positive", e.mass)));
            }
        }
        let mut c = Self {
            source,
            target,
            entries,
            cost: 0.0,
        };
        let err = c.marginal_error();
        if err > TOL.marginal {
            return Err(Error::Malformed(format!("marginals violated by {err:e}")));
        }
        c.cost = coupling_cost(&c);
        Ok(c)
    }

    pub fn source(&self) -> &DiscreteMeasure {
        &self.source
    }

    pub fn target(&self) -> &DiscreteMeasure {
        &self.target
    }

    pub fn entries(&self) -> &[CouplingEntry] {
        &self.entries
    }

    /// Total squared-distance cost as stored at construction.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// Largest deviation of a row or column sum from its marginal weight.
    pub fn marginal_error(&self) -> f64 {
        let mut rows = vec![0.0; self.source.len()];
        let mut cols = vec![0.0; self.target.len()];
        for e in &self.entries {
            rows[e.source] += e.mass;
            cols[e.target] += e.mass;
        }
        let r = rows.iter().zip(self.source.weights()).map(|(a, b)| (a - b).abs());
        let c = cols.iter().zip(self.target.weights()).map(|(a, b)| (a - b).abs());
        r.chain(c).fold(0.0, f64::max)
    }

    /// True when every source atom sends all its mass to a single target.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = vec![false; self.source.len()];
        self.entries.iter().all(|e| !std::mem::replace(&mut seen[e.source], true))
    }
}

/// Recomputes `Σ mass · d²(xᵢ, yⱼ)` from the entries.
pub fn coupling_cost(c: &Coupling) -> f64 {
    let space = c.source.space();
    c.entries
        .iter()
        .map(|e| {
            let d = space.dist(&c.source.atoms()[e.source], &c.target.atoms()[e.target]);
            e.mass * d * d
        })
        .sum()
}

/// Row-major matrix of squared distances between atoms.
pub fn cost_matrix(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Vec<f64> {
    let space = mu.space();
    let mut c = Vec::with_capacity(mu.len() * nu.len());
    for x in mu.atoms() {
        for y in nu.atoms() {
            let d = space.dist(x, y);
            c.push(d * d);
        }
    }
    c
}

/// An optimal coupling for the squared-distance cost.
pub fn solve_ot(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Coupling> {
    mu.ensure_same_space(nu)?;
    for m in [mu, nu] {
        if m.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms {
                count: m.len(),
                limit: MAX_ATOMS,
            });
        }
    }
    let cost = cost_matrix(mu, nu);
    let n = nu.len();
    let mut entries: Vec<CouplingEntry> = if mu.len() == n && mu.is_uniform() && nu.is_uniform() {
        let w = 1.0 / n as f64;
        assignment::solve(n, &cost)
            .into_iter()
            .enumerate()
            .map(|(i, j)| CouplingEntry {
                source: i,
                target: j,
                mass: w,
            })
            .collect()
    } else {
        simplex::solve(mu.weights(), nu.weights(), &cost)?
            .into_iter()
            .filter(|&(_, _, f)| f > DROP_MASS)
            .map(|(i, j, f)| CouplingEntry {
                source: i,
                target: j,
                mass: f,
            })
            .collect()
    };
    entries.sort_by_key(|e| (e.source, e.target));
    let total = entries.iter().map(|e| e.mass * cost[e.source * n + e.target]).sum();
    let c = Coupling {
        source: mu.clone(),
        target: nu.clone(),
        entries,
        cost: total,
    };
    let err = c.marginal_error();
    if err > TOL.marginal {
        return Err(Error::Malformed(format!("solver marginals off by {err:e}")));
    }
    Ok(c)
}

/// `W₂(μ, ν)`.
pub fn w2_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64> {
    Ok(solve_ot(mu, nu)?.cost().max(0.0).sqrt())
}
