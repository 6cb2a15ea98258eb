mod common;

use common::strategies::*;
use proptest::prelude::*;
use wassvar::geometry::{IsometrySpec, Isometry};
use wassvar::measure::{mixture, pushforward, DiscreteMeasure, MeasureEnsemble};

fn rotation(angle: f64, axis: [f64; 3]) -> Isometry {
    Isometry::axis_rotation(&unit_sphere(), axis, angle).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pushforward_is_a_group_action(m in measure(unit_sphere(), 6), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let g = rotation(a, [0.0, 0.0, 1.0]);
        let h = rotation(b, [1.0, 1.0, 0.0]);
        let composed = pushforward(&g.compose(&h).unwrap(), &m).unwrap();
        let stepwise = pushforward(&g, &pushforward(&h, &m).unwrap()).unwrap();
        prop_assert!(composed.approx_eq(&stepwise, 1e-9));
        let id = pushforward(&Isometry::identity(&unit_sphere()), &m).unwrap();
        prop_assert!(id.approx_eq(&m, 1e-12));
        prop_assert!((composed.total_mass() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mixture_commutes_with_pushforward(
        ms in prop::collection::vec(measure(cylinder(), 4), 1..4),
        ws in prop::collection::vec(0.1..1.0f64, 3),
        shift in -1.0..1.0f64,
        turn in 0.0..1.0f64,
    ) {
        let c = cylinder();
        let entries: Vec<_> = ms.into_iter().zip(&ws).map(|(m, &w)| (w, m)).collect();
        let total: f64 = entries.iter().map(|e| e.0).sum();
        let ens = MeasureEnsemble::new(entries.into_iter().map(|(w, m)| (w / total, m)).collect()).unwrap();
        let spec = IsometrySpec::Cylinder { axial_flip: true, axial_shift: shift, angular_flip: false, angular_shift: turn };
        let g = Isometry::from_spec(&c, &spec).unwrap();
        let a = pushforward(&g, &mixture(&ens).unwrap()).unwrap();
        let b = mixture(&ens.pushforward(&g).unwrap()).unwrap();
        prop_assert!(a.approx_eq(&b, 1e-9));
    }

    #[test]
    fn canonical_form_is_stable(m in measure(balloon(), 6)) {
        let again = m.canonicalize().unwrap();
        prop_assert!(again.approx_eq(&m, 1e-14));
        prop_assert_eq!(again.len(), m.len());
        for w in m.atoms().windows(2) {
            prop_assert!(w[0].lex_cmp(&w[1]).is_lt());
        }
        prop_assert!(m.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn json_round_trip(m in measure(h2(), 5)) {
        let text = serde_json::to_string(&m).unwrap();
        let back: DiscreteMeasure = serde_json::from_str(&text).unwrap();
        prop_assert!(back.approx_eq(&m, 1e-12));
    }
}

#[test]
fn duplicate_atoms_merge() {
    let s = plane();
    let p = s.point(vec![1.0, 2.0]).unwrap();
    let m = DiscreteMeasure::new(&s, vec![p.clone(), p.clone()], vec![0.25, 0.75]).unwrap();
    assert_eq!(m.len(), 1);
    assert!((m.weights()[0] - 1.0).abs() < 1e-15);
}

#[test]
fn bad_weights_rejected() {
    let s = plane();
    let p = s.point(vec![0.0, 0.0]).unwrap();
    let q = s.point(vec![1.0, 0.0]).unwrap();
    assert!(DiscreteMeasure::new(&s, vec![p.clone(), q.clone()], vec![0.5, 0.4]).is_err());
    assert!(DiscreteMeasure::new(&s, vec![p.clone(), q.clone()], vec![1.2, -0.2]).is_err());
    assert!(DiscreteMeasure::new(&s, vec![p, q], vec![f64::NAN, 1.0]).is_err());
    assert!(DiscreteMeasure::new(&s, vec![], vec![]).is_err());
}
