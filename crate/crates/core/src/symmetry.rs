//! Finite isometry groups, orbit ensembles and projections onto invariant measures.

use serde::{Deserialize, Serialize};

use crate::frechet::variance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{CutLocusPolicy, Isometry, IsometrySpec, Space};
use crate::measure::{mixture, pushforward, DiscreteMeasure, MeasureEnsemble};
use crate::tolerances::Tolerances;
use crate::wbarycenter::{w2_barycenter, EnsembleBarycenterResult};
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;

/// Largest group accepted by default when expanding generators.
pub const DEFAULT_MAX_ORDER: usize = 720;

/// A finite group of isometries with uniform Haar weights.
#[derive(Clone, Debug)]
pub struct IsometryGroup {
    space: Space,
    elements: Vec<Isometry>,
}

/// Serialisable group description: generators plus an expansion bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub space: Space,
    pub generators: Vec<IsometrySpec>,
    #[serde(default = "default_order")]
    pub max_order: usize,
}

fn default_order() -> usize {
    DEFAULT_MAX_ORDER
}

impl IsometryGroup {
    pub fn trivial(space: &Space) -> Self {
        Self {
            space: space.clone(),
            elements: vec![Isometry::identity(space)],
        }
    }

    /// Closure of the generators under composition.
    pub fn generate(space: &Space, generators: &[Isometry], max_order: usize) -> Result<Self> {
        for g in generators {
            if g.space() != space {
                return Err(Error::SpaceMismatch(space.to_string(), g.space().to_string()));
            }
        }
        let mut elements = vec![Isometry::identity(space)];
        let mut frontier = 0;
        while frontier < elements.len() {
            let h = elements[frontier].clone();
            frontier += 1;
            for g in generators {
                let next = g.compose(&h)?;
                if !elements.iter().any(|e| e.approx_eq(&next, TOL.isometry)) {
                    if elements.len() == max_order {
                        return Err(Error::GroupTooLarge(max_order));
                    }
                    elements.push(next);
                }
            }
        }
        Ok(Self {
            space: space.clone(),
            elements,
        })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        let gens = spec
            .generators
            .iter()
            .map(|g| Isometry::from_spec(&spec.space, g))
            .collect::<Result<Vec<_>>>()?;
        Self::generate(&spec.space, &gens, spec.max_order)
    }

    /// Rotations of the plane by multiples of `2π / k`.
    pub fn cyclic_rotations(space: &Space, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::MalformedIsometry("cyclic group of order 0".into()));
        }
        let g = Isometry::planar_rotation(space, 2.0 * std::f64::consts::PI / k as f64)?;
        Self::generate(space, &[g], k)
    }

    /// `{id, reflection through the hyperplane ⟂ normal}`.
    pub fn reflection(space: &Space, normal: &[f64]) -> Result<Self> {
        let g = Isometry::reflection(space, normal)?;
        Self::generate(space, &[g], 2)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Checks closure under composition and inverses.
    pub fn is_closed(&self) -> bool {
        let has = |x: &Isometry| self.elements.iter().any(|e| e.approx_eq(x, TOL.isometry));
        self.elements.iter().all(|a| {
            has(&a.inverse()) && self.elements.iter().all(|b| a.compose(b).map(|c| has(&c)).unwrap_or(false))
        })
    }

    /// First element `g` with `g_# m ≠ m`, with the number of atoms it fails to match.
    pub fn invariance_violation(&self, m: &DiscreteMeasure) -> Result<Option<usize>> {
        for (i, g) in self.elements.iter().enumerate() {
            if !pushforward(g, m)?.approx_eq(m, TOL.merge) {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

fn check_space(g: &IsometryGroup, m: &DiscreteMeasure) -> Result<()> {
    if g.space() != m.space() {
        return Err(Error::SpaceMismatch(g.space().to_string(), m.space().to_string()));
    }
    Ok(())
}

/// `(1/|G|, g_# m)` for every `g`.
pub fn orbit_ensemble(g: &IsometryGroup, m: &DiscreteMeasure) -> Result<MeasureEnsemble> {
    check_space(g, m)?;
    let w = 1.0 / g.len() as f64;
    let entries = g
        .elements()
        .iter()
        .map(|h| Ok((w, pushforward(h, m)?)))
        .collect::<Result<Vec<_>>>()?;
    MeasureEnsemble::new(entries)
}

/// Group average of `m`.
pub fn l2_projection(g: &IsometryGroup, m: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    mixture(&orbit_ensemble(g, m)?)
}

/// Barycenter of the orbit ensemble and its invariance status.
#[derive(Clone, Debug, Serialize)]
pub struct W2Projection {
    pub barycenter: EnsembleBarycenterResult,
    /// Index into the group of an element that does not fix the result.
    pub invariance_violation: Option<usize>,
}

impl W2Projection {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.barycenter.measure
    }

    pub fn warning(&self) -> Option<String> {
        self.invariance_violation
            .map(|i| format!("projection is not invariant under group element {i}"))
    }
}

const SYMMETRIZE_ROUNDS: usize = 3;
const SCATTERED_STARTS: usize = 4;
const SCATTER_PIECES: usize = 3;
const SCATTER_SEED: u64 = 0x0B17_5EED;

/// Group average of `m` with every atom split into pieces that slide a random
/// fraction of the way toward random images of the atom.
fn scattered_start(g: &IsometryGroup, m: &DiscreteMeasure, rng: &mut ChaCha8Rng) -> Result<DiscreteMeasure> {
    let space = m.space();
    let mut atoms = Vec::with_capacity(m.len() * SCATTER_PIECES);
    let mut weights = Vec::with_capacity(m.len() * SCATTER_PIECES);
    for (x, w) in m.iter() {
        for _ in 0..SCATTER_PIECES {
            let h = &g.elements()[rng.random_range(0..g.len())];
            let t: f64 = rng.random();
            atoms.push(space.geodesic_point_with(x, &h.apply(x)?, t, CutLocusPolicy::LexLargest)?);
            weights.push(w / SCATTER_PIECES as f64);
        }
    }
    l2_projection(g, &DiscreteMeasure::renormalized(space, atoms, weights)?)
}

/// Barycenter of the orbit of `m`.
///
/// The fixed-point iteration is started from `m`, from its group average and
/// from a few seeded invariant scatterings of `m`.
/// A non-invariant result is replaced by its group average (which never has a
/// larger objective) and iterated again. Among invariant results the lowest
/// objective wins; if none is invariant the lowest objective is returned with
/// the violating element recorded.
pub fn w2_projection(g: &IsometryGroup, m: &DiscreteMeasure) -> Result<W2Projection> {
    let ens = orbit_ensemble(g, m)?;
    let mut best_invariant: Option<EnsembleBarycenterResult> = None;
    let mut best_any: Option<(EnsembleBarycenterResult, usize)> = None;
    let mut inits = vec![m.clone(), l2_projection(g, m)?];
    if g.len() > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(SCATTER_SEED);
        for _ in 0..SCATTERED_STARTS {
            inits.push(scattered_start(g, m, &mut rng)?);
        }
    }
    for init in inits {
        let mut r = w2_barycenter(&ens, &init)?;
        for round in 0..=SYMMETRIZE_ROUNDS {
            match g.invariance_violation(&r.measure)? {
                None => {
                    if best_invariant.as_ref().is_none_or(|b| r.objective < b.objective) {
                        best_invariant = Some(r);
                    }
                    break;
                }
                Some(i) => {
                    if best_any.as_ref().is_none_or(|b| r.objective < b.0.objective) {
                        best_any = Some((r.clone(), i));
                    }
                    if round == SYMMETRIZE_ROUNDS {
                        break;
                    }
                    r = w2_barycenter(&ens, &l2_projection(g, &r.measure)?)?;
                }
            }
        }
    }
    Ok(match (best_invariant, best_any) {
        (Some(b), _) => W2Projection {
            barycenter: b,
            invariance_violation: None,
        },
        (None, Some((b, i))) => W2Projection {
            barycenter: b,
            invariance_violation: Some(i),
        },
        (None, None) => unreachable!("at least one run"),
    })
}

/// The three variances around a measure and its projections.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichReport {
    pub var_w: f64,
    pub var_mu: f64,
    pub var_l2: f64,
    /// `var_w ≤ var_mu`, asserted on NPC spaces only.
    pub left_holds: Option<bool>,
    /// `var_mu ≤ var_l2`, asserted on every space.
    pub right_holds: bool,
    pub invariant: bool,
    pub warning: Option<String>,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.left_holds.unwrap_or(true) && self.right_holds
    }
}

pub fn sandwich_report(g: &IsometryGroup, m: &DiscreteMeasure) -> Result<SandwichReport> {
    sandwich_report_for(g, m, &w2_projection(g, m)?)
}

/// The sandwich around an already computed projection `w` of `m`.
pub fn sandwich_report_for(g: &IsometryGroup, m: &DiscreteMeasure, w: &W2Projection) -> Result<SandwichReport> {
    check_space(g, m)?;
    let var_w = variance(w.measure())?;
    let var_mu = variance(m)?;
    let var_l2 = variance(&l2_projection(g, m)?)?;
    let tol = TOL.inequality;
    Ok(SandwichReport {
        var_w,
        var_mu,
        var_l2,
        left_holds: m.space().is_npc().then_some(var_w <= var_mu + tol),
        right_holds: var_mu <= var_l2 + tol,
        invariant: w.invariance_violation.is_none(),
        warning: w.warning(),
    })
}
