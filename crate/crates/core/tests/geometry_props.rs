mod common;

use common::strategies::*;
use proptest::prelude::*;
use wassvar::geometry::{CutLocusPolicy, Isometry, IsometrySpec, Space};
use wassvar::Point;

fn all_spaces() -> Vec<Space> {
    vec![plane(), unit_sphere(), h2(), cylinder(), balloon()]
}

fn space_and_points(n: usize) -> impl Strategy<Value = (Space, Vec<Point>)> {
    prop::sample::select(all_spaces())
        .prop_flat_map(move |s| (Just(s.clone()), prop::collection::vec(point(s), n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms((s, pts) in space_and_points(3)) {
        let d = |a: &Point, b: &Point| s.distance(a, b).unwrap();
        let (p, q, r) = (&pts[0], &pts[1], &pts[2]);
        prop_assert!(d(p, p) <= 1e-9);
        prop_assert!((d(p, q) - d(q, p)).abs() <= 1e-9);
        prop_assert!(d(p, r) <= d(p, q) + d(q, r) + 1e-9);
        prop_assert!(d(p, q) >= 0.0);
    }

    #[test]
    fn exp_inverts_log((s, pts) in space_and_points(2)) {
        let (p, q) = (&pts[0], &pts[1]);
        if let Ok(v) = s.log(p, q) {
            let back = s.exp(&v).unwrap();
            prop_assert!(s.distance(&back, q).unwrap() <= 1e-8, "{:?} vs {:?}", back, q);
            prop_assert!((s.norm(&v) - s.distance(p, q).unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn geodesics_split_distance((s, pts) in space_and_points(2), t in 0.0..1.0f64) {
        let (p, q) = (&pts[0], &pts[1]);
        let g = s.geodesic_point_with(p, q, t, CutLocusPolicy::LexLargest).unwrap();
        let total = s.distance(p, q).unwrap();
        prop_assert!((s.distance(p, &g).unwrap() - t * total).abs() <= 1e-8);
        prop_assert!((s.distance(&g, q).unwrap() - (1.0 - t) * total).abs() <= 1e-8);
    }

    #[test]
    fn sphere_rotations_preserve_distance(
        pts in prop::collection::vec(point(unit_sphere()), 2),
        axis in prop::collection::vec(-1.0..1.0f64, 3),
        angle in -3.0..3.0f64,
    ) {
        prop_assume!(axis.iter().map(|x| x * x).sum::<f64>() > 0.01);
        let s = unit_sphere();
        let g = Isometry::axis_rotation(&s, [axis[0], axis[1], axis[2]], angle).unwrap();
        let before = s.distance(&pts[0], &pts[1]).unwrap();
        let after = s.distance(&g.apply(&pts[0]).unwrap(), &g.apply(&pts[1]).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);
    }

    #[test]
    fn hyperbolic_motions_preserve_distance(
        pts in prop::collection::vec(point(h2()), 2),
        rapidity in -1.5..1.5f64,
        angle in -3.0..3.0f64,
    ) {
        let s = h2();
        let g = Isometry::boost(&s, 0, rapidity).unwrap().compose(&Isometry::planar_rotation(&s, angle).unwrap()).unwrap();
        let before = s.distance(&pts[0], &pts[1]).unwrap();
        let after = s.distance(&g.apply(&pts[0]).unwrap(), &g.apply(&pts[1]).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-10 * before.max(1.0));
    }

    #[test]
    fn plane_and_cylinder_motions_preserve_distance(
        pts in prop::collection::vec(point(cylinder()), 2),
        shift in prop::collection::vec(-2.0..2.0f64, 2),
        angle in -3.0..3.0f64,
    ) {
        let c = cylinder();
        let spec = IsometrySpec::Cylinder {
            axial_flip: angle > 0.0,
            axial_shift: shift[0],
            angular_flip: shift[1] > 0.0,
            angular_shift: angle,
        };
        let g = Isometry::from_spec(&c, &spec).unwrap();
        let before = c.distance(&pts[0], &pts[1]).unwrap();
        let after = c.distance(&g.apply(&pts[0]).unwrap(), &g.apply(&pts[1]).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-10);

        let r2 = plane();
        let a = r2.point(pts[0].chart.clone()).unwrap();
        let b = r2.point(pts[1].chart.clone()).unwrap();
        let h = Isometry::planar_rotation(&r2, angle).unwrap().compose(&Isometry::translation(&r2, &shift).unwrap()).unwrap();
        let d0 = r2.distance(&a, &b).unwrap();
        let d1 = r2.distance(&h.apply(&a).unwrap(), &h.apply(&b).unwrap()).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-10);
    }

    #[test]
    fn inverse_undoes_isometry(p in point(h2()), rapidity in -1.5..1.5f64, angle in -3.0..3.0f64) {
        let s = h2();
        let g = Isometry::planar_rotation(&s, angle).unwrap().compose(&Isometry::boost(&s, 1, rapidity).unwrap()).unwrap();
        let back = g.inverse().apply(&g.apply(&p).unwrap()).unwrap();
        prop_assert!(s.distance(&back, &p).unwrap() <= 1e-9);
    }

    /// d²(γ_t, y) ≤ (1-t) d²(p, y) + t d²(q, y) − t(1-t) d²(p, q) on simply connected flat and hyperbolic spaces.
    #[test]
    fn npc_comparison(
        (s, pts) in prop::sample::select(vec![plane(), h2()])
            .prop_flat_map(|s| (Just(s.clone()), prop::collection::vec(point(s), 3))),
        t in 0.0..1.0f64,
    ) {
        let d2 = |a: &Point, b: &Point| s.distance(a, b).unwrap().powi(2);
        let (p, q, y) = (&pts[0], &pts[1], &pts[2]);
        let g = s.geodesic_point(p, q, t).unwrap();
        let bound = (1.0 - t) * d2(p, y) + t * d2(q, y) - t * (1.0 - t) * d2(p, q);
        prop_assert!(d2(&g, y) <= bound + 1e-9 * (1.0 + bound.abs()));
    }
}

#[test]
fn sphere_breaks_npc_comparison() {
    let s = unit_sphere();
    let p = s.point(vec![1.0, 0.0, 0.0]).unwrap();
    let q = s.point(vec![0.0, 1.0, 0.0]).unwrap();
    let y = s.point(vec![0.0, 0.0, 1.0]).unwrap();
    let d2 = |a: &Point, b: &Point| s.distance(a, b).unwrap().powi(2);
    let g = s.geodesic_point(&p, &q, 0.5).unwrap();
    let bound = 0.5 * d2(&p, &y) + 0.5 * d2(&q, &y) - 0.25 * d2(&p, &q);
    // every point of the equator sits at distance π/2 from the pole
    assert!((d2(&g, &y) - bound - (std::f64::consts::PI / 4.0).powi(2)).abs() < 1e-12);
}
