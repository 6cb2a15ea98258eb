mod common;

use common::strategies::*;
use common::{brute_force_cost, permutations};
use proptest::prelude::*;
use wassvar::geometry::{Isometry, Space};
use wassvar::measure::{pushforward, DiscreteMeasure};
use wassvar::transport::{assignment, cost_matrix, simplex, solve_ot, w2_distance};

fn spaces() -> Vec<Space> {
    vec![plane(), unit_sphere(), h2(), cylinder(), balloon()]
}

fn triple() -> impl Strategy<Value = Vec<DiscreteMeasure>> {
    prop::sample::select(spaces()).prop_flat_map(|s| prop::collection::vec(measure(s, 5), 3))
}

fn counted(max_total: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=3usize, 1..=4).prop_filter("total", move |c| c.iter().sum::<usize>() <= max_total)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn marginals_match(ms in triple()) {
        let c = solve_ot(&ms[0], &ms[1]).unwrap();
        prop_assert!(c.marginal_error() <= 1e-9);
        let total: f64 = c.entries().iter().map(|e| e.mass).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(c.entries().len() < ms[0].len() + ms[1].len());
    }

    #[test]
    fn support_is_cyclically_monotone(ms in triple()) {
        let c = solve_ot(&ms[0], &ms[1]).unwrap();
        let costs = cost_matrix(&ms[0], &ms[1]);
        let n = ms[1].len();
        for a in c.entries() {
            for b in c.entries() {
                let kept = costs[a.source * n + a.target] + costs[b.source * n + b.target];
                let swapped = costs[a.source * n + b.target] + costs[b.source * n + a.target];
                prop_assert!(kept <= swapped + 1e-9, "{kept} > {swapped}");
            }
        }
    }

    #[test]
    fn triangle_inequality(ms in triple()) {
        let d = |i: usize, j: usize| w2_distance(&ms[i], &ms[j]).unwrap();
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-8);
        prop_assert!((d(0, 1) - d(1, 0)).abs() <= 1e-8);
        prop_assert!(d(0, 0) <= 1e-8);
    }

    #[test]
    fn invariant_under_sphere_rotation(
        ms in prop::collection::vec(measure(unit_sphere(), 5), 2),
        angle in -3.0..3.0f64,
    ) {
        let s = unit_sphere();
        let g = Isometry::axis_rotation(&s, [0.3, -0.5, 0.8], angle).unwrap();
        let before = solve_ot(&ms[0], &ms[1]).unwrap().cost();
        let after = solve_ot(&pushforward(&g, &ms[0]).unwrap(), &pushforward(&g, &ms[1]).unwrap()).unwrap().cost();
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before));
    }

    #[test]
    fn invariant_under_hyperbolic_motion(
        ms in prop::collection::vec(measure(h2(), 5), 2),
        rapidity in -1.0..1.0f64,
    ) {
        let s = h2();
        let g = Isometry::boost(&s, 0, rapidity).unwrap();
        let before = solve_ot(&ms[0], &ms[1]).unwrap().cost();
        let after = solve_ot(&pushforward(&g, &ms[0]).unwrap(), &pushforward(&g, &ms[1]).unwrap()).unwrap().cost();
        prop_assert!((before - after).abs() <= 1e-8 * (1.0 + before));
    }

    #[test]
    fn hungarian_agrees_with_simplex(n in 1..=7usize, seed in prop::collection::vec(-5.0..5.0f64, 49)) {
        let cost: Vec<f64> = seed[..n * n].iter().map(|x| x * x).collect();
        let perm = assignment::solve(n, &cost);
        let mut seen = perm.clone();
        seen.sort();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
        let hung: f64 = perm.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum::<f64>() / n as f64;
        let w = vec![1.0 / n as f64; n];
        let simp: f64 = simplex::solve(&w, &w, &cost).unwrap().iter().map(|&(i, j, f)| f * cost[i * n + j]).sum();
        let brute = permutations(n)
            .iter()
            .map(|p| p.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min) / n as f64;
        prop_assert!((hung - brute).abs() <= 1e-12 * (1.0 + brute));
        prop_assert!((simp - brute).abs() <= 1e-12 * (1.0 + brute));
    }

    #[test]
    fn rational_weights_match_enumeration(
        (xc, yc) in counted(7).prop_flat_map(|xc| {
            let total: usize = xc.iter().sum();
            (Just(xc), composition(total))
        }),
        raw in prop::collection::vec(-2.0..2.0f64, 16),
    ) {
        let s = plane();
        let xs: Vec<_> = (0..xc.len()).map(|i| s.point(vec![raw[2 * i], raw[2 * i + 1]]).unwrap()).collect();
        let ys: Vec<_> = (0..yc.len()).map(|i| s.point(vec![raw[8 + 2 * i], raw[9 + 2 * i]]).unwrap()).collect();
        let total = xc.iter().sum::<usize>() as f64;
        let mu = DiscreteMeasure::new(&s, xs.clone(), xc.iter().map(|&c| c as f64 / total).collect()).unwrap();
        let nu = DiscreteMeasure::new(&s, ys.clone(), yc.iter().map(|&c| c as f64 / total).collect()).unwrap();
        let expected = brute_force_cost(&s, &xs, &xc, &ys, &yc);
        prop_assert!((solve_ot(&mu, &nu).unwrap().cost() - expected).abs() <= 1e-12 * (1.0 + expected));
    }
}

/// Random split of `total` into 1 to 4 positive parts.
fn composition(total: usize) -> impl Strategy<Value = Vec<usize>> {
    let parts = total.min(4);
    (1..=parts).prop_flat_map(move |k| {
        prop::sample::subsequence((1..total).collect::<Vec<_>>(), k - 1).prop_map(move |mut cuts| {
            cuts.sort();
            let mut out = Vec::with_capacity(k);
            let mut prev = 0;
            for c in cuts.into_iter().chain(std::iter::once(total)) {
                out.push(c - prev);
                prev = c;
            }
            out
        })
    })
}

#[test]
fn dirac_to_dirac_is_squared_distance() {
    let s = h2();
    let p = s.hyperbolic_point(&[0.4, -0.2]).unwrap();
    let q = s.hyperbolic_point(&[-0.9, 0.6]).unwrap();
    let d = s.distance(&p, &q).unwrap();
    let c = solve_ot(&DiscreteMeasure::dirac(&s, p).unwrap(), &DiscreteMeasure::dirac(&s, q).unwrap()).unwrap();
    assert!((c.cost() - d * d).abs() < 1e-13);
}

#[test]
fn cross_space_pairs_rejected() {
    let a = DiscreteMeasure::dirac(&plane(), plane().reference_point()).unwrap();
    let b = DiscreteMeasure::dirac(&h2(), h2().reference_point()).unwrap();
    assert!(solve_ot(&a, &b).is_err());
}
