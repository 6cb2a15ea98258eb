//! Seeded generators for random measures, fields and ensembles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::geometry::{sphere, Component, Point, Space, TangentVector};
use crate::measure::{DiscreteMeasure, MeasureEnsemble};
use crate::Result;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Symmetric Dirichlet(1) weights.
pub fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = g.iter().sum();
    g.into_iter().map(|x| x / s).collect()
}

/// A point from the fixed sampling region of each space.
///
/// Euclidean and hyperbolic spaces: chart (spatial) coordinates uniform in `[−1, 1]ᵈ`.
/// Spheres: uniform. Cylinder: axial coordinate in `[−1, 1]`, uniform angle.
/// Balloon: sphere points uniform, string points uniform along the string, equally likely.
pub fn random_point(space: &Space, rng: &mut ChaCha8Rng) -> Result<Point> {
    match *space {
        Space::Euclidean { dim } => space.point((0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()),
        Space::Hyperbolic { dim, .. } => {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
            space.hyperbolic_point(&x)
        }
        Space::Sphere { dim, .. } => space.point(gaussian_direction(space, dim + 1, rng)),
        Space::FlatCylinder { circumference } => {
            space.point(vec![rng.random_range(-1.0..=1.0), rng.random_range(0.0..circumference)])
        }
        Space::BalloonString { string_length, .. } => {
            if rng.random_bool(0.5) {
                space.tagged_point(Component::String, vec![rng.random_range(0.0..=string_length)])
            } else {
                space.tagged_point(Component::Sphere, gaussian_direction(space, 3, rng))
            }
        }
    }
}

fn gaussian_direction(space: &Space, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    sphere::normalize(space.sphere_radius().unwrap(), &g)
}

/// A point uniform in the unit disk of ℝ².
pub fn disk_point(rng: &mut ChaCha8Rng) -> Point {
    let r = rng.random::<f64>().sqrt();
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    Point::new(vec![r * a.cos(), r * a.sin()])
}

/// `1..=max_atoms` random atoms with Dirichlet weights.
pub fn random_measure(space: &Space, rng: &mut ChaCha8Rng, max_atoms: usize) -> Result<DiscreteMeasure> {
    let n = rng.random_range(1..=max_atoms);
    let atoms = (0..n).map(|_| random_point(space, rng)).collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::renormalized(space, atoms, dirichlet(rng, n))
}

pub fn random_disk_measure(space: &Space, rng: &mut ChaCha8Rng, max_atoms: usize) -> Result<DiscreteMeasure> {
    let n = rng.random_range(1..=max_atoms);
    let atoms = (0..n).map(|_| disk_point(rng)).collect();
    DiscreteMeasure::renormalized(space, atoms, dirichlet(rng, n))
}

/// Tangent at `p` with chart components uniform in `[−bound, bound]`, projected onto `T_p`.
pub fn random_tangent(space: &Space, p: &Point, rng: &mut ChaCha8Rng, bound: f64) -> Result<TangentVector> {
    let n = space.zero_tangent(p).components.len();
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(-bound..=bound)).collect();
    space.project_tangent(p, &v)
}

/// `2..=max_measures` random measures with Dirichlet ensemble weights.
pub fn random_ensemble(
    space: &Space,
    rng: &mut ChaCha8Rng,
    max_measures: usize,
    max_atoms: usize,
) -> Result<MeasureEnsemble> {
    let k = rng.random_range(2..=max_measures);
    let measures = (0..k).map(|_| random_measure(space, rng, max_atoms)).collect::<Result<Vec<_>>>()?;
    let w = dirichlet(rng, k);
    MeasureEnsemble::new(w.into_iter().zip(measures).collect())
}
