//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use wassvar::geometry::Space;
use wassvar::measure::DiscreteMeasure;
use wassvar::{Point, TangentVector};

/// Heap's algorithm over all permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            rec(k - 1, a, out);
            let j = if k % 2 == 0 { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(n, &mut a, &mut out);
    out
}

/// Minimum transport cost when every weight is `count / total`: replicate each
/// atom `count` times and take the cheapest perfect matching by enumeration.
pub fn brute_force_cost(space: &Space, xs: &[Point], xc: &[usize], ys: &[Point], yc: &[usize]) -> f64 {
    let expand = |pts: &[Point], counts: &[usize]| -> Vec<Point> {
        pts.iter().zip(counts).flat_map(|(p, &c)| std::iter::repeat_n(p.clone(), c)).collect()
    };
    let a = expand(xs, xc);
    let b = expand(ys, yc);
    assert_eq!(a.len(), b.len());
    let k = a.len();
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|p| b.iter().map(|q| space.distance(p, q).unwrap().powi(2)).collect())
        .collect();
    permutations(k)
        .iter()
        .map(|perm| perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
        / k as f64
}

/// `t ↦ Σ wᵢ d²(y, exp_{xᵢ}(t Vᵢ))`.
pub fn pushed_cost(space: &Space, m: &DiscreteMeasure, field: &[TangentVector], y: &Point, t: f64) -> f64 {
    m.iter()
        .zip(field)
        .map(|((_, w), v)| {
            let moved = TangentVector::new(v.base.clone(), v.components.iter().map(|c| c * t).collect());
            let p = space.exp(&moved).unwrap();
            w * space.distance(y, &p).unwrap().powi(2)
        })
        .sum()
}

pub mod strategies {
    use proptest::prelude::*;
    use wassvar::geometry::{Component, Space};
    use wassvar::measure::DiscreteMeasure;
    use wassvar::Point;

    pub fn plane() -> Space {
        Space::euclidean(2).unwrap()
    }

    pub fn unit_sphere() -> Space {
        Space::sphere(2, std::f64::consts::TAU).unwrap()
    }

    pub fn h2() -> Space {
        Space::hyperbolic(2).unwrap()
    }

    pub fn cylinder() -> Space {
        Space::flat_cylinder(1.0).unwrap()
    }

    pub fn balloon() -> Space {
        Space::balloon_string(std::f64::consts::TAU, 1.0).unwrap()
    }

    /// Points in a bounded region of each model space.
    pub fn point(space: Space) -> BoxedStrategy<Point> {
        match space {
            Space::Euclidean { dim } => prop::collection::vec(-3.0..3.0f64, dim)
                .prop_map(move |c| space.point(c).unwrap())
                .boxed(),
            Space::Sphere { dim, .. } => {
                let r = space.sphere_radius().unwrap();
                prop::collection::vec(-1.0..1.0f64, dim + 1)
                    .prop_filter("away from zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.05)
                    .prop_map(move |v| {
                        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                        space.point(v.iter().map(|x| x * r / n).collect()).unwrap()
                    })
                    .boxed()
            }
            Space::Hyperbolic { dim, .. } => prop::collection::vec(-1.5..1.5f64, dim)
                .prop_map(move |c| space.hyperbolic_point(&c).unwrap())
                .boxed(),
            Space::FlatCylinder { circumference } => (-1.0..1.0f64, 0.0..circumference)
                .prop_map(move |(z, a)| space.point(vec![z, a]).unwrap())
                .boxed(),
            Space::BalloonString { string_length, .. } => {
                let r = space.sphere_radius().unwrap();
                let sphere = (0.0..std::f64::consts::TAU, 0.02..0.98f64).prop_map(move |(phi, u)| {
                    let z = 1.0 - 2.0 * u;
                    let rho = (1.0 - z * z).sqrt();
                    Point::tagged(Component::Sphere, vec![r * rho * phi.cos(), r * rho * phi.sin(), r * z])
                });
                let string = (0.0..=string_length).prop_map(|s| Point::tagged(Component::String, vec![s]));
                prop_oneof![sphere, string]
                    .prop_map(move |p| {
                        let tag = p.tag.unwrap();
                        space.tagged_point(tag, p.chart).unwrap()
                    })
                    .boxed()
            }
        }
    }

    /// Positive weights, normalised by the measure constructor.
    pub fn weights(n: usize) -> BoxedStrategy<Vec<f64>> {
        prop::collection::vec(0.05..1.0f64, n).boxed()
    }

    pub fn measure(space: Space, max_atoms: usize) -> BoxedStrategy<DiscreteMeasure> {
        let pts = point(space.clone());
        (1..=max_atoms)
            .prop_flat_map(move |n| (prop::collection::vec(pts.clone(), n), weights(n)))
            .prop_map(move |(pts, ws)| DiscreteMeasure::renormalized(&space, pts, ws).unwrap())
            .boxed()
    }

    /// Measures with equal weights over `n` atoms.
    pub fn uniform_measure(space: Space, n: usize) -> BoxedStrategy<DiscreteMeasure> {
        prop::collection::vec(point(space.clone()), n)
            .prop_map(move |pts| DiscreteMeasure::uniform(&space, pts).unwrap())
            .boxed()
    }
}
