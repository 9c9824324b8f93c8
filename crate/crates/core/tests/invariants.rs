use std::f64::consts::TAU;

use proptest::prelude::*;
use sacenter_core::fields::{gradient, riesz_potential, solid_angle};
use sacenter_core::fixtures::{self, AxisymProfile};
use sacenter_core::geometry::reflect;
use sacenter_core::{Direction, Point2, PolygonDomain, RieszParams, Side, SolidAngleParams};

fn pool() -> Vec<PolygonDomain> {
    vec![
        fixtures::unit_square(),
        fixtures::unit_triangle(),
        fixtures::equilateral(),
        fixtures::pentagon(),
        fixtures::l_shape(),
        fixtures::star_octagon(),
        fixtures::disc(1.0, 48).unwrap(),
        fixtures::two_discs(1.0, 4.0, 24).unwrap(),
        AxisymProfile::standard().domain().unwrap(),
    ]
}

fn fixture() -> impl Strategy<Value = PolygonDomain> {
    (0..pool().len()).prop_map(|i| pool().swap_remove(i))
}

fn motion() -> impl Strategy<Value = (f64, Point2)> {
    (0.0..TAU, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, x, y)| (a, Point2::new(x, y)))
}

fn moved(d: &PolygonDomain, (angle, by): (f64, Point2)) -> PolygonDomain {
    d.map(|p| p.rotate(angle) + by).unwrap()
}

/// A point of the bounding box grown by 50%, from unit coordinates.
fn in_box(d: &PolygonDomain, u: f64, v: f64) -> Point2 {
    let (lo, hi) = d.bbox();
    let pad = (hi - lo) * 0.5;
    let (lo, hi) = (lo - pad, hi + pad);
    Point2::new(lo.x + u * (hi.x - lo.x), lo.y + v * (hi.y - lo.y))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rigid_motion_preserves_measures(d in fixture(), m in motion()) {
        let e = moved(&d, m);
        prop_assert!(close(d.area(), e.area(), 1e-12));
        prop_assert!(close(d.perimeter(), e.perimeter(), 1e-12));
        prop_assert!(close(d.diameter(), e.diameter(), 1e-12));
        let b = d.barycenter().rotate(m.0) + m.1;
        prop_assert!(b.distance(e.barycenter()) < 1e-11);
    }

    #[test]
    fn clipping_is_additive(d in fixture(), theta in 0.0..TAU, t in 0.0..1.0f64) {
        let v = Direction::from_angle(theta);
        let proj: Vec<f64> = d.vertices().map(|p| p.dot(v.vector())).collect();
        let lo = proj.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let c = lo + t * (hi - lo);
        let above = d.clip_halfplane(v, c, Side::Above).area();
        let below = d.clip_halfplane(v, c, Side::Below).area();
        prop_assert!(close(above + below, d.area(), 1e-12), "{} + {} vs {}", above, below, d.area());
    }

    #[test]
    fn reflection_is_an_involutive_isometry(
        theta in 0.0..TAU, c in -3.0..3.0f64,
        a in (-5.0..5.0f64, -5.0..5.0f64), b in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let v = Direction::from_angle(theta);
        let (a, b) = (Point2::new(a.0, a.1), Point2::new(b.0, b.1));
        let (ra, rb) = (reflect(a, v, c), reflect(b, v, c));
        prop_assert!(reflect(ra, v, c).distance(a) < 1e-13);
        prop_assert!((ra.distance(rb) - a.distance(b)).abs() < 1e-13);
        prop_assert!((ra.dot(v.vector()) - c + (a.dot(v.vector()) - c)).abs() < 1e-13);
    }

    #[test]
    fn diameter_is_the_largest_vertex_distance(d in fixture(), m in motion()) {
        let e = moved(&d, m);
        let vs: Vec<Point2> = e.vertices().collect();
        let brute = vs
            .iter()
            .flat_map(|p| vs.iter().map(move |q| p.distance(*q)))
            .fold(0.0, f64::max);
        prop_assert!(close(e.diameter(), brute, 1e-14));
        prop_assert!(close(e.hull().diameter(), brute, 1e-14));
    }

    #[test]
    fn triangulation_covers_the_area(d in fixture(), m in motion()) {
        let e = moved(&d, m);
        let tri: f64 = e.triangulate().unwrap().iter().map(|t| t.area()).sum();
        prop_assert!(close(tri, e.area(), 1e-12));
        prop_assert!(e.triangulate().unwrap().iter().all(|t| t.signed_area() > 0.0));
    }

    #[test]
    fn solid_angle_lies_in_range(d in fixture(), u in 0.0..1.0f64, v in 0.0..1.0f64, lh in -2.0..2.0f64) {
        let x = in_box(&d, u, v);
        let a = solid_angle(&d, x, SolidAngleParams::new(10f64.powf(lh)).unwrap()).unwrap();
        prop_assert!(a > 0.0 && a < TAU, "{}", a);
    }

    #[test]
    fn fields_are_rigid_motion_invariant(
        d in fixture(), m in motion(), u in 0.0..1.0f64, v in 0.0..1.0f64,
        lh in -1.0..1.0f64, alpha in 0.5..4.0f64,
    ) {
        let e = moved(&d, m);
        let x = in_box(&d, u, v);
        let y = x.rotate(m.0) + m.1;
        let p = SolidAngleParams::new(10f64.powf(lh)).unwrap();
        prop_assert!(close(solid_angle(&d, x, p).unwrap(), solid_angle(&e, y, p).unwrap(), 1e-11));
        let g = gradient(&d, x, p).unwrap().rotate(m.0);
        let ge = gradient(&e, y, p).unwrap();
        prop_assert!((g - ge).norm() <= 1e-8 * g.norm().max(1.0), "{:?} vs {:?}", g, ge);
        if d.boundary_distance(x) > 1e-3 {
            let r = RieszParams::new(alpha).unwrap();
            let (a, b) = (riesz_potential(&d, x, r).unwrap(), riesz_potential(&e, y, r).unwrap());
            prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
        }
    }

    #[test]
    fn exterior_points_are_dominated_by_their_projection(
        d in fixture(), theta in 0.0..TAU, s in 0.0..2.0f64, lh in -1.0..1.0f64,
    ) {
        let hull = d.hull();
        let c = hull.centroid();
        let x = c + Direction::from_angle(theta).vector() * (d.diameter() * s);
        prop_assume!(!hull.contains(x, 1e-9));
        let xp = hull.project(x);
        let p = SolidAngleParams::new(10f64.powf(lh)).unwrap();
        prop_assert!(solid_angle(&d, x, p).unwrap() < solid_angle(&d, xp, p).unwrap());
    }
}

#[test]
fn half_space_limit() {
    for d in pool() {
        // the deepest triangle centroid
        let x = d
            .triangulate()
            .unwrap()
            .iter()
            .map(|t| t.centroid())
            .max_by(|p, q| d.boundary_distance(*p).total_cmp(&d.boundary_distance(*q)))
            .unwrap();
        let a = solid_angle(&d, x, SolidAngleParams::new(1e-6).unwrap()).unwrap();
        assert!((a - TAU).abs() < 1e-4, "{a}");
    }
}
