//! Finitely supported probability measures and weighted ensembles of them.

use serde::{Deserialize, Serialize};

use crate::geometry::{Component, Isometry, Point, Space};
use crate::tolerances::{Tolerances, MAX_ATOMS};
use crate::{Error, Result};

const TOL: Tolerances = Tolerances::DEFAULT;

/// Options for [`canonicalize`].
#[derive(Clone, Copy, Debug)]
pub struct CanonicalOptions {
    /// Rescale arbitrary positive weights to total mass 1.
    pub renormalize: bool,
    /// Soft limit on the number of atoms after merging.
    pub max_atoms: usize,
}

impl Default for CanonicalOptions {
    fn default() -> Self {
        Self {
            renormalize: false,
            max_atoms: MAX_ATOMS,
        }
    }
}

/// A probability measure with finitely many atoms, always in canonical form:
/// positive weights summing to 1, atoms at least the merge tolerance apart,
/// sorted lexicographically by (tag, chart).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureJson", into = "MeasureJson")]
pub struct DiscreteMeasure {
    space: Space,
    atoms: Vec<Point>,
    weights: Vec<f64>,
}

/// Brings raw atoms and weights into canonical form.
pub fn canonicalize(space: &Space, atoms: Vec<Point>, weights: Vec<f64>, opts: CanonicalOptions) -> Result<DiscreteMeasure> {
    if atoms.is_empty() {
        return Err(Error::Empty("measure without atoms"));
    }
    if atoms.len() != weights.len() {
        return Err(Error::InvalidWeights(format!("{} atoms but {} weights", atoms.len(), weights.len())));
    }
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidWeights(format!("weight {i} is not positive: {w}")));
    }
    let total: f64 = weights.iter().sum();
    if !opts.renormalize && (total - 1.0).abs() > TOL.mass_input {
        return Err(Error::InvalidWeights(format!("total mass {total} deviates from 1")));
    }
    let mut normalized = Vec::with_capacity(atoms.len());
    for p in &atoms {
        space.check_point(p)?;
        normalized.push(space.normalize(p));
    }
    let mut order: Vec<usize> = (0..normalized.len()).collect();
    order.sort_by(|&a, &b| normalized[a].lex_cmp(&normalized[b]));

    let mut kept: Vec<Point> = Vec::new();
    let mut mass: Vec<f64> = Vec::new();
    for i in order {
        let p = &normalized[i];
        match kept.iter().position(|k| space.dist(k, p) <= TOL.merge) {
            Some(j) => mass[j] += weights[i],
            None => {
                kept.push(p.clone());
                mass.push(weights[i]);
            }
        }
    }
    if kept.len() > opts.max_atoms {
        return Err(Error::TooManyAtoms {
            count: kept.len(),
            limit: opts.max_atoms,
        });
    }
    let sum: f64 = mass.iter().sum();
    mass.iter_mut().for_each(|w| *w /= sum);
    Ok(DiscreteMeasure {
        space: space.clone(),
        atoms: kept,
        weights: mass,
    })
}

impl DiscreteMeasure {
    /// Canonical measure from atoms and weights summing to 1 (within 1e-6).
    pub fn new(space: &Space, atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        canonicalize(space, atoms, weights, CanonicalOptions::default())
    }

    /// Canonical measure from arbitrary positive weights.
    pub fn renormalized(space: &Space, atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        canonicalize(
            space,
            atoms,
            weights,
            CanonicalOptions {
                renormalize: true,
                ..Default::default()
            },
        )
    }

    pub fn dirac(space: &Space, p: Point) -> Result<Self> {
        Self::new(space, vec![p], vec![1.0])
    }

    pub fn uniform(space: &Space, atoms: Vec<Point>) -> Result<Self> {
        let n = atoms.len();
        Self::new(space, atoms, vec![1.0 / n as f64; n])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.atoms.iter().zip(self.weights.iter().copied())
    }

    /// Re-runs canonicalisation; a no-op on values built through this module.
    pub fn canonicalize(&self) -> Result<Self> {
        canonicalize(&self.space, self.atoms.clone(), self.weights.clone(), CanonicalOptions::default())
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// True when every weight is equal.
    pub fn is_uniform(&self) -> bool {
        let w0 = self.weights[0];
        self.weights.iter().all(|w| (w - w0).abs() <= TOL.mass)
    }

    /// Equality of canonical forms up to `tol` in atom position and weight.
    pub fn approx_eq(&self, other: &DiscreteMeasure, tol: f64) -> bool {
        if self.space != other.space || self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        self.iter().all(|(p, w)| {
            let hit = other
                .iter()
                .enumerate()
                .position(|(j, (q, v))| !used[j] && self.space.dist(p, q) <= tol && (w - v).abs() <= tol);
            match hit {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }

    pub(crate) fn ensure_same_space(&self, other: &DiscreteMeasure) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch(self.space.to_string(), other.space.to_string()));
        }
        Ok(())
    }
}

/// `g_# m`: atoms moved by `g`, weights unchanged.
pub fn pushforward(g: &Isometry, m: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    if g.space() != m.space() {
        return Err(Error::SpaceMismatch(g.space().to_string(), m.space().to_string()));
    }
    let atoms = m.atoms.iter().map(|p| g.apply_unchecked(p)).collect();
    DiscreteMeasure::new(&m.space, atoms, m.weights.clone())
}

/// A weighted finite family of measures on one space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleJson", into = "EnsembleJson")]
pub struct MeasureEnsemble {
    entries: Vec<(f64, DiscreteMeasure)>,
}

impl MeasureEnsemble {
    pub fn new(entries: Vec<(f64, DiscreteMeasure)>) -> Result<Self> {
        let Some((_, first)) = entries.first() else {
            return Err(Error::Empty("ensemble without entries"));
        };
        for (w, m) in &entries {
            first.ensure_same_space(m)?;
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidWeights(format!("ensemble weight {w} is not positive")));
            }
        }
        let total: f64 = entries.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > TOL.mass_input {
            return Err(Error::InvalidWeights(format!("ensemble weights sum to {total}")));
        }
        Ok(Self {
            entries: entries.into_iter().map(|(w, m)| (w / total, m)).collect(),
        })
    }

    /// Equal weights over the given measures.
    pub fn uniform(measures: Vec<DiscreteMeasure>) -> Result<Self> {
        let n = measures.len() as f64;
        Self::new(measures.into_iter().map(|m| (1.0 / n, m)).collect())
    }

    pub fn single(m: DiscreteMeasure) -> Self {
        Self { entries: vec![(1.0, m)] }
    }

    pub fn entries(&self) -> &[(f64, DiscreteMeasure)] {
        &self.entries
    }

    pub fn space(&self) -> &Space {
        self.entries[0].1.space()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Index of the heaviest entry (first on ties).
    pub fn heaviest(&self) -> usize {
        let mut best = 0;
        for (i, (w, _)) in self.entries.iter().enumerate() {
            if *w > self.entries[best].0 {
                best = i;
            }
        }
        best
    }

    pub fn pushforward(&self, g: &Isometry) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|(w, m)| Ok((*w, pushforward(g, m)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }
}

/// The linear barycenter `Σᵢ λᵢ μᵢ`.
pub fn mixture(ens: &MeasureEnsemble) -> Result<DiscreteMeasure> {
    if ens.is_empty() {
        return Err(Error::Empty("ensemble without entries"));
    }
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for (lambda, m) in ens.entries() {
        for (p, w) in m.iter() {
            atoms.push(p.clone());
            weights.push(lambda * w);
        }
    }
    canonicalize(
        ens.space(),
        atoms,
        weights,
        CanonicalOptions {
            renormalize: true,
            max_atoms: usize::MAX,
        },
    )
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    space: Space,
    atoms: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags: Option<Vec<Component>>,
    weights: Vec<f64>,
}

impl TryFrom<MeasureJson> for DiscreteMeasure {
    type Error = Error;

    fn try_from(j: MeasureJson) -> Result<Self> {
        let atoms = match j.tags {
            Some(tags) if tags.len() == j.atoms.len() => j
                .atoms
                .into_iter()
                .zip(tags)
                .map(|(c, t)| j.space.tagged_point(t, c))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Malformed("tags and atoms differ in length".into())),
            None => j.atoms.into_iter().map(|c| j.space.point(c)).collect::<Result<Vec<_>>>()?,
        };
        DiscreteMeasure::new(&j.space, atoms, j.weights)
    }
}

impl From<DiscreteMeasure> for MeasureJson {
    fn from(m: DiscreteMeasure) -> Self {
        let tags = m
            .atoms
            .iter()
            .map(|p| p.tag)
            .collect::<Option<Vec<_>>>()
            .filter(|t| !t.is_empty());
        MeasureJson {
            space: m.space,
            atoms: m.atoms.into_iter().map(|p| p.chart).collect(),
            tags,
            weights: m.weights,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EnsembleEntryJson {
    weight: f64,
    measure: DiscreteMeasure,
}

#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    entries: Vec<EnsembleEntryJson>,
}

impl TryFrom<EnsembleJson> for MeasureEnsemble {
    type Error = Error;

    fn try_from(j: EnsembleJson) -> Result<Self> {
        MeasureEnsemble::new(j.entries.into_iter().map(|e| (e.weight, e.measure)).collect())
    }
}

impl From<MeasureEnsemble> for EnsembleJson {
    fn from(e: MeasureEnsemble) -> Self {
        EnsembleJson {
            entries: e
                .entries
                .into_iter()
                .map(|(weight, measure)| EnsembleEntryJson { weight, measure })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Space {
        Space::euclidean(1).unwrap()
    }

    fn pt(x: f64) -> Point {
        Point::new(vec![x])
    }

    #[test]
    fn duplicate_atoms_merge() {
        let m = DiscreteMeasure::new(&line(), vec![pt(2.0), pt(2.0)], vec![0.5, 0.5]).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.weights(), &[1.0]);
    }

    #[test]
    fn renormalize_flag_rescales() {
        let m = DiscreteMeasure::renormalized(&line(), vec![pt(1.0), pt(0.0)], vec![2.0, 2.0]).unwrap();
        assert_eq!(m.weights(), &[0.5, 0.5]);
        assert_eq!(m.atoms()[0], pt(0.0));
        assert!(DiscreteMeasure::new(&line(), vec![pt(1.0), pt(0.0)], vec![2.0, 2.0]).is_err());
    }

    #[test]
    fn negative_weight_rejected() {
        let err = DiscreteMeasure::new(&line(), vec![pt(0.0), pt(1.0), pt(2.0)], vec![0.3, -0.1, 0.8]).unwrap_err();
        assert!(matches!(err, Error::InvalidWeights(_)));
    }

    #[test]
    fn small_mass_drift_tolerated() {
        let m = DiscreteMeasure::new(&line(), vec![pt(0.0), pt(1.0)], vec![0.5, 0.5 + 5e-7]).unwrap();
        assert!((m.total_mass() - 1.0).abs() <= 1e-12);
        assert!(DiscreteMeasure::new(&line(), vec![pt(0.0), pt(1.0)], vec![0.5, 0.5 + 1e-5]).is_err());
    }

    #[test]
    fn atom_limit_enforced_after_merge() {
        let opts = CanonicalOptions {
            renormalize: true,
            max_atoms: 2,
        };
        let atoms = vec![pt(0.0), pt(1.0), pt(1.0), pt(0.0)];
        assert!(canonicalize(&line(), atoms.clone(), vec![1.0; 4], opts).is_ok());
        let atoms = vec![pt(0.0), pt(1.0), pt(2.0)];
        assert!(matches!(
            canonicalize(&line(), atoms, vec![1.0; 3], opts),
            Err(Error::TooManyAtoms { count: 3, limit: 2 })
        ));
    }

    #[test]
    fn reflection_pushforward() {
        let g = Isometry::reflection(&line(), &[1.0]).unwrap();
        let m = DiscreteMeasure::uniform(&line(), vec![pt(0.0), pt(1.0)]).unwrap();
        let expected = DiscreteMeasure::uniform(&line(), vec![pt(0.0), pt(-1.0)]).unwrap();
        assert!(pushforward(&g, &m).unwrap().approx_eq(&expected, 1e-12));
        let id = Isometry::identity(&line());
        assert_eq!(pushforward(&id, &m).unwrap(), m);
    }

    #[test]
    fn equator_measure_invariant_under_half_turn() {
        let s2 = Space::sphere(2, 2.0).unwrap();
        let r = s2.sphere_radius().unwrap();
        let n = 12;
        let atoms = (0..n)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point::new(vec![r * a.cos(), r * a.sin(), 0.0])
            })
            .collect();
        let m = DiscreteMeasure::uniform(&s2, atoms).unwrap();
        let g = Isometry::axis_rotation(&s2, [0.0, 0.0, 1.0], std::f64::consts::PI).unwrap();
        assert!(pushforward(&g, &m).unwrap().approx_eq(&m, 1e-9));
    }

    #[test]
    fn mixture_examples() {
        let m = DiscreteMeasure::uniform(&line(), vec![pt(0.0), pt(3.0)]).unwrap();
        assert_eq!(mixture(&MeasureEnsemble::single(m.clone())).unwrap(), m);
        let twice = MeasureEnsemble::uniform(vec![m.clone(), m.clone()]).unwrap();
        assert!(mixture(&twice).unwrap().approx_eq(&m, 1e-15));
    }

    #[test]
    fn ensemble_validation() {
        let a = DiscreteMeasure::dirac(&line(), pt(0.0)).unwrap();
        let b = DiscreteMeasure::dirac(&Space::euclidean(2).unwrap(), Point::new(vec![0.0, 0.0])).unwrap();
        assert!(matches!(
            MeasureEnsemble::new(vec![(0.5, a.clone()), (0.5, b)]),
            Err(Error::SpaceMismatch(..))
        ));
        assert!(MeasureEnsemble::new(vec![]).is_err());
        assert!(MeasureEnsemble::new(vec![(0.7, a.clone()), (0.7, a)]).is_err());
    }

    #[test]
    fn json_round_trip_keeps_tags() {
        let space = Space::balloon_string(1.0, 1.0).unwrap();
        let y = space.tagged_point(Component::String, vec![0.4]).unwrap();
        let north = space.reference_point();
        let m = DiscreteMeasure::uniform(&space, vec![y, north]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"tags\""));
        let back: DiscreteMeasure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
