mod common;

use common::strategies::*;
use proptest::prelude::*;
use wassvar::geometry::{Isometry, Space};
use wassvar::measure::{pushforward, DiscreteMeasure, MeasureEnsemble};
use wassvar::transport::w2_distance;
use wassvar::wbarycenter::*;

fn ensemble(space: Space, max_measures: usize, max_atoms: usize) -> impl Strategy<Value = MeasureEnsemble> {
    (prop::collection::vec(measure(space, max_atoms), 1..=max_measures), prop::collection::vec(0.1..1.0f64, max_measures))
        .prop_map(|(ms, ws)| {
            let total: f64 = ws[..ms.len()].iter().sum();
            MeasureEnsemble::new(ms.into_iter().zip(&ws).map(|(m, w)| (w / total, m)).collect()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn history_never_increases(ens in prop::sample::select(vec![plane(), h2()]).prop_flat_map(|s| ensemble(s, 4, 4))) {
        let r = w2_barycenter_default(&ens).unwrap();
        prop_assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        prop_assert_eq!(*r.history.last().unwrap(), r.objective);
        let recomputed = barycenter_objective(&ens, &r.measure).unwrap();
        prop_assert!((recomputed - r.objective).abs() <= 1e-12 * (1.0 + r.objective));
        prop_assert!(r.iterations <= 500);
    }

    #[test]
    fn plane_translation_equivariance(ens in ensemble(plane(), 3, 4), shift in prop::collection::vec(-2.0..2.0f64, 2)) {
        let s = plane();
        let g = Isometry::translation(&s, &shift).unwrap();
        let r = w2_barycenter_default(&ens).unwrap();
        let moved = ens.pushforward(&g).unwrap();
        let init = pushforward(&g, &ens.entries()[ens.heaviest()].1).unwrap();
        let r2 = w2_barycenter(&moved, &init).unwrap();
        let expected = pushforward(&g, &r.measure).unwrap();
        prop_assert!(w2_distance(&r2.measure, &expected).unwrap() <= 1e-8);
        prop_assert!((r.objective - r2.objective).abs() <= 1e-8);
    }

    #[test]
    fn duplicated_entry_is_its_own_barycenter(m in prop::sample::select(vec![plane(), h2(), unit_sphere(), cylinder()]).prop_flat_map(|s| measure(s, 5))) {
        let ens = MeasureEnsemble::uniform(vec![m.clone(), m.clone()]).unwrap();
        let r = w2_barycenter(&ens, &m).unwrap();
        prop_assert!(r.objective <= 1e-12);
        prop_assert!(r.measure.approx_eq(&m, 1e-10));
    }

    #[test]
    fn diracs_in_the_plane_average(pts in prop::collection::vec(point(plane()), 1..5), ws in prop::collection::vec(0.1..1.0f64, 5)) {
        let s = plane();
        let total: f64 = ws[..pts.len()].iter().sum();
        let entries: Vec<_> = pts.iter().zip(&ws).map(|(p, w)| (w / total, DiscreteMeasure::dirac(&s, p.clone()).unwrap())).collect();
        let ens = MeasureEnsemble::new(entries).unwrap();
        let r = w2_barycenter_default(&ens).unwrap();
        prop_assert_eq!(r.measure.len(), 1);
        for k in 0..2 {
            let avg: f64 = pts.iter().zip(&ws).map(|(p, w)| w / total * p.chart[k]).sum();
            prop_assert!((r.measure.atoms()[0].chart[k] - avg).abs() <= 1e-12);
        }
    }

    #[test]
    fn hyperbolic_fixed_point_is_stationary(ens in ensemble(h2(), 3, 3)) {
        let r = w2_barycenter_multistart(&ens, &BarycenterOptions { max_iter: 500, tol: 1e-14 }).unwrap();
        prop_assert!(r.residual <= 1e-6, "residual {}", r.residual);
        prop_assert!((zero_sum_residual(&r, &ens).unwrap() - r.residual).abs() <= 1e-12);
    }

    #[test]
    fn jensen_holds_in_the_plane(ens in ensemble(plane(), 4, 4)) {
        let r = w2_barycenter_multistart(&ens, &BarycenterOptions::default()).unwrap();
        let j = jensen_gap(&ens, &r).unwrap();
        prop_assert!(j.linear_holds);
        prop_assert!(j.var_bar <= j.mean_var + 1e-7, "{:?}", j);
    }
}

#[test]
fn multistart_never_loses_to_a_single_start() {
    let s = plane();
    let a = DiscreteMeasure::uniform(&s, vec![s.point(vec![0.0, 0.0]).unwrap(), s.point(vec![4.0, 0.0]).unwrap()]).unwrap();
    let b = DiscreteMeasure::uniform(&s, vec![s.point(vec![0.0, 3.0]).unwrap(), s.point(vec![4.0, 3.0]).unwrap()]).unwrap();
    let ens = MeasureEnsemble::uniform(vec![a, b]).unwrap();
    let best = w2_barycenter_multistart(&ens, &BarycenterOptions::default()).unwrap();
    for (_, init) in ens.entries() {
        assert!(best.objective <= w2_barycenter(&ens, init).unwrap().objective);
    }
    assert!((best.objective - 2.25).abs() < 1e-12);
}

#[test]
fn init_space_must_match() {
    let ens = MeasureEnsemble::single(DiscreteMeasure::dirac(&plane(), plane().reference_point()).unwrap());
    let other = DiscreteMeasure::dirac(&h2(), h2().reference_point()).unwrap();
    assert!(w2_barycenter(&ens, &other).is_err());
}
