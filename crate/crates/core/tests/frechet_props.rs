mod common;

use common::pushed_cost;
use common::strategies::*;
use proptest::prelude::*;
use wassvar::frechet::*;
use wassvar::geometry::{Isometry, Space};
use wassvar::interpolate::VectorField;
use wassvar::measure::{pushforward, DiscreteMeasure};
use wassvar::Point;

fn any_space() -> impl Strategy<Value = Space> {
    prop::sample::select(vec![plane(), unit_sphere(), h2(), cylinder(), balloon()])
}

/// Brute-force minimum of the objective over a latitude-longitude grid of the unit sphere.
fn sphere_grid_min(m: &DiscreteMeasure, n_lat: usize, n_lon: usize) -> f64 {
    let s = m.space();
    let mut best = f64::INFINITY;
    for i in 0..=n_lat {
        let theta = std::f64::consts::PI * i as f64 / n_lat as f64;
        for j in 0..n_lon {
            let phi = std::f64::consts::TAU * j as f64 / n_lon as f64;
            let y = Point::new(vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
            best = best.min(frechet_objective(s, m.atoms(), m.weights(), &y));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mean_beats_every_atom((s, m) in any_space().prop_flat_map(|s| (Just(s.clone()), measure(s, 5)))) {
        let r = frechet_mean(&m).unwrap();
        for y in m.atoms() {
            prop_assert!(r.value <= frechet_objective(&s, m.atoms(), m.weights(), y) + 1e-12);
        }
        prop_assert!(r.value >= 0.0 && r.value.is_finite());
        prop_assert!((frechet_objective(&s, m.atoms(), m.weights(), &r.point) - r.value).abs() <= 1e-12);
    }

    #[test]
    fn variance_is_continuous_in_weights(
        (m, delta) in any_space().prop_flat_map(|s| measure(s, 5)).prop_flat_map(|m| {
            let n = m.len();
            (Just(m), prop::collection::vec(-1e-4..1e-4f64, n))
        }),
    ) {
        let s = m.space();
        let w: Vec<f64> = m.weights().iter().zip(&delta).map(|(w, d)| (w + d).max(1e-6)).collect();
        let total: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / total).collect();
        let shifted = DiscreteMeasure::new(s, m.atoms().to_vec(), w.clone()).unwrap();
        let l1: f64 = w.iter().zip(m.weights()).map(|(a, b)| (a - b).abs()).sum();
        let diam = m.atoms().iter().flat_map(|a| m.atoms().iter().map(move |b| (a, b)))
            .map(|(a, b)| s.distance(a, b).unwrap()).fold(0.0, f64::max).max(1e-3);
        let (v0, v1) = (variance(&m).unwrap(), variance(&shifted).unwrap());
        prop_assert!((v0 - v1).abs() <= diam * diam * l1 + 1e-9, "{v0} vs {v1}");
    }

    #[test]
    fn sphere_variance_is_rotation_invariant(m in measure(unit_sphere(), 5), angle in -3.0..3.0f64) {
        let g = Isometry::axis_rotation(&unit_sphere(), [0.6, 0.0, 0.8], angle).unwrap();
        let a = variance(&m).unwrap();
        let b = variance(&pushforward(&g, &m).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn hyperbolic_variance_is_invariant(m in measure(h2(), 5), rapidity in -1.0..1.0f64) {
        let s = h2();
        let g = Isometry::boost(&s, 1, rapidity).unwrap();
        let r = frechet_mean(&m).unwrap();
        let moved = frechet_mean(&pushforward(&g, &m).unwrap()).unwrap();
        prop_assert!((r.value - moved.value).abs() <= 1e-9 * (1.0 + r.value));
        prop_assert!(s.distance(&g.apply(&r.point).unwrap(), &moved.point).unwrap() <= 1e-6);
        prop_assert!(r.residual <= 1e-10 && r.method == MeanMethod::Gradient);
    }

    #[test]
    fn euclidean_mean_is_the_average(m in measure(plane(), 6)) {
        let r = frechet_mean(&m).unwrap();
        for k in 0..2 {
            let avg: f64 = m.iter().map(|(p, w)| w * p.chart[k]).sum();
            prop_assert!((r.point.chart[k] - avg).abs() <= 1e-12);
        }
    }

    #[test]
    fn sphere_mean_matches_grid_oracle(m in measure(unit_sphere(), 4)) {
        let r = frechet_mean(&m).unwrap();
        let oracle = sphere_grid_min(&m, 180, 360);
        prop_assert!(r.value <= oracle + 1e-12, "{} > {oracle}", r.value);
        prop_assert!(r.value >= oracle - 0.02);
        prop_assert_eq!(r.method, MeanMethod::Grid);
    }

    #[test]
    fn cylinder_mean_matches_grid_oracle(m in measure(cylinder(), 5)) {
        let s = cylinder();
        let r = frechet_mean(&m).unwrap();
        let z: f64 = m.iter().map(|(p, w)| w * p.chart[0]).sum();
        let oracle = (0..20_000)
            .map(|j| s.point(vec![z, j as f64 / 20_000.0]).unwrap())
            .map(|y| frechet_objective(&s, m.atoms(), m.weights(), &y))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(r.value <= oracle + 1e-12);
        prop_assert!(r.value >= oracle - 1e-4);
        prop_assert!((r.point.chart[0] - z).abs() <= 1e-12);
    }

    #[test]
    fn first_variation_matches_finite_difference(m in measure(h2(), 4), seeds in prop::collection::vec(-0.5..0.5f64, 8)) {
        let s = h2();
        let mean = frechet_mean(&m).unwrap();
        let field = VectorField::from_fn(&m, |p| {
            let i = m.atoms().iter().position(|a| a == p).unwrap();
            s.project_tangent(p, &[0.0, seeds[2 * i], seeds[2 * i + 1]])
        }).unwrap();
        let analytic = first_variation(&m, &field, &mean.point).unwrap();
        let h = 1e-5;
        let fd = (pushed_cost(&s, &m, field.vectors(), &mean.point, h)
            - pushed_cost(&s, &m, field.vectors(), &mean.point, -h)) / (2.0 * h);
        prop_assert!((analytic - fd).abs() <= 1e-6 * fd.abs().max(1e-3) + 1e-8, "{analytic} vs {fd}");
    }
}

#[test]
fn first_variation_demands_a_mean() {
    let s = plane();
    let m = DiscreteMeasure::uniform(&s, vec![s.point(vec![0.0, 0.0]).unwrap(), s.point(vec![2.0, 0.0]).unwrap()]).unwrap();
    let field = VectorField::zero(&m);
    assert!(first_variation(&m, &field, &s.point(vec![0.5, 0.0]).unwrap()).is_err());
    assert_eq!(first_variation(&m, &field, &s.point(vec![1.0, 0.0]).unwrap()).unwrap(), 0.0);
}

#[test]
fn antipodal_pair_has_many_means() {
    let s = unit_sphere();
    let m = DiscreteMeasure::uniform(&s, vec![s.point(vec![0.0, 0.0, 1.0]).unwrap(), s.point(vec![0.0, 0.0, -1.0]).unwrap()]).unwrap();
    let r = frechet_mean(&m).unwrap();
    assert!(r.multiplicity);
    assert!((r.value - (std::f64::consts::PI / 2.0).powi(2)).abs() < 1e-9);
}

#[test]
fn higher_sphere_uses_random_starts() {
    let s = Space::sphere(3, std::f64::consts::TAU).unwrap();
    let pts = vec![
        s.point(vec![1.0, 0.0, 0.0, 0.0]).unwrap(),
        s.point(vec![0.0, 1.0, 0.0, 0.0]).unwrap(),
        s.point(vec![0.0, 0.0, 1.0, 0.0]).unwrap(),
    ];
    let m = DiscreteMeasure::uniform(&s, pts).unwrap();
    let r = frechet_mean(&m).unwrap();
    let c = 1.0 / 3f64.sqrt();
    let centre = s.point(vec![c, c, c, 0.0]).unwrap();
    assert!(s.distance(&r.point, &centre).unwrap() < 1e-6);
    let expected = (c.acos()).powi(2);
    assert!((r.value - expected).abs() < 1e-10);
}
