use proptest::prelude::*;
use secpath_core::geom::{tangency_point, tritangent_circles, weighted_distance, Disk, Point};

fn disk() -> impl Strategy<Value = Disk> {
    (-10.0..10.0f64, -10.0..10.0f64, 0.0..2.0f64).prop_map(|(x, y, r)| Disk::new(Point::new(x, y), r))
}

proptest! {
    #[test]
    fn tritangent_residuals_are_small(a in disk(), b in disk(), c in disk()) {
        let size = 20.0 + a.radius + b.radius + c.radius;
        for t in tritangent_circles(&a, &b, &c) {
            for s in [a, b, c] {
                let gap = weighted_distance(t.center, &s) - t.radius;
                prop_assert!(gap.abs() <= 1e-6 * (size + t.radius.abs()), "gap {gap} for {t:?}");
                prop_assert!(t.radius + s.radius >= -1e-9 * size);
            }
        }
    }

    #[test]
    fn weighted_distance_is_translation_invariant(d in disk(), px in -10.0..10.0f64, py in -10.0..10.0f64, dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let p = Point::new(px, py);
        let shift = Point::new(dx, dy);
        let moved = Disk::new(d.center + shift, d.radius);
        let w0 = weighted_distance(p, &d);
        let w1 = weighted_distance(p + shift, &moved);
        prop_assert!((w0 - w1).abs() <= 1e-12 * 40.0);
        prop_assert!((w0 - (p.distance(d.center) - d.radius)).abs() <= 1e-12 * 40.0);
    }

    #[test]
    fn tangency_point_lies_on_both_circles(x in -10.0..10.0f64, y in -10.0..10.0f64, r1 in 0.01..3.0f64, r2 in 0.0..3.0f64, angle in 0.0..std::f64::consts::TAU) {
        let a = Disk::new(Point::new(x, y), r1);
        let dir = Point::new(angle.cos(), angle.sin());
        let b = Disk::new(a.center + dir * (r1 + r2), r2);
        let t = tangency_point(&a, &b, 1e-9).unwrap();
        prop_assert!((t.distance(a.center) - r1).abs() <= 1e-9);
        prop_assert!((t.distance(b.center) - r2).abs() <= 1e-9);
    }
}
