mod common;

use common::{focal_set, min_focus_distance, oracle_sum, point, rel_err};
use polyconic::{Focus, Point2, Vector2, WeightedFocalSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn distance_sum_is_convex(fs in focal_set(8), x in point(-3.0, 4.0), y in point(-3.0, 4.0), lambda in 0.0..=1.0f64) {
        let z = x.lerp(y, 1.0 - lambda);
        let chord = lambda * fs.eval(x) + (1.0 - lambda) * fs.eval(y);
        prop_assert!(fs.eval(z) <= chord + 1e-12 * fs.scale() * fs.total_weight());
    }
}

proptest! {
    #[test]
    fn eval_matches_oracle(fs in focal_set(8), x in point(-3.0, 4.0)) {
        prop_assert!(rel_err(fs.eval(x), oracle_sum(&fs, x)) < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences(fs in focal_set(8), x in point(-2.0, 3.0)) {
        prop_assume!(min_focus_distance(&fs, x) >= 0.01 * fs.scale());
        let g = fs.gradient(x).unwrap();
        prop_assume!(g.norm() > 1e-3 * fs.total_weight());
        let h = 1e-6 * fs.scale();
        let fd = Vector2::new(
            (oracle_sum(&fs, Point2::new(x.x + h, x.y)) - oracle_sum(&fs, Point2::new(x.x - h, x.y))) / (2.0 * h),
            (oracle_sum(&fs, Point2::new(x.x, x.y + h)) - oracle_sum(&fs, Point2::new(x.x, x.y - h))) / (2.0 * h),
        );
        prop_assert!((fd - g).norm() / g.norm() < 1e-6, "fd {:?} analytic {:?}", fd, g);
    }

    #[test]
    fn hessian_matches_finite_differences(fs in focal_set(8), x in point(-2.0, 3.0)) {
        prop_assume!(min_focus_distance(&fs, x) >= 0.01 * fs.scale());
        let h = 1e-6 * fs.scale();
        let hess = fs.hessian(x).unwrap();
        let col = |e: Vector2| (fs.gradient(x + e).unwrap() - fs.gradient(x - e).unwrap()) * (0.5 / h);
        let (cx, cy) = (col(Vector2::new(h, 0.0)), col(Vector2::new(0.0, h)));
        let frob = (hess.a11.powi(2) + 2.0 * hess.a12.powi(2) + hess.a22.powi(2)).sqrt();
        let err = ((hess.a11 - cx.dx).powi(2) + (hess.a12 - cx.dy).powi(2) + (hess.a12 - cy.dx).powi(2) + (hess.a22 - cy.dy).powi(2)).sqrt();
        prop_assert!(err / frob < 1e-4);
    }

    #[test]
    fn hessian_trace_and_psd(fs in focal_set(8), x in point(-2.0, 3.0)) {
        prop_assume!(min_focus_distance(&fs, x) > fs.tol_singular());
        let hess = fs.hessian(x).unwrap();
        let inv: f64 = fs.entries().iter().map(|f| f.weight / f.point.distance(x)).sum();
        prop_assert!((hess.trace() - inv).abs() < 1e-12 * inv);
        prop_assert!(hess.det() >= -1e-12 * hess.trace().powi(2));
    }

    #[test]
    fn gradient_norm_at_most_total_weight(fs in focal_set(8), x in point(-2.0, 3.0)) {
        prop_assume!(min_focus_distance(&fs, x) > fs.tol_singular());
        prop_assert!(fs.gradient(x).unwrap().norm() <= fs.total_weight() * (1.0 + 1e-15));
    }

    #[test]
    fn curvature_is_rotation_invariant(fs in focal_set(6), q in point(-2.0, 3.0), angle in 0.0..std::f64::consts::TAU, shift in point(-5.0, 5.0)) {
        prop_assume!(min_focus_distance(&fs, q) >= 0.01 * fs.scale());
        let Ok(k) = fs.curvature(q) else { return Ok(()) };
        prop_assume!(fs.gradient(q).unwrap().norm() > 1e-3 * fs.total_weight());
        let motion = |p: Point2| shift + (p.to_vector().rotated(angle));
        let moved = fs.map_points(motion).unwrap();
        let k2 = moved.curvature(motion(q)).unwrap();
        prop_assert!(rel_err(k, k2) < 1e-10, "{} vs {}", k, k2);
    }

    #[test]
    fn merging_coincident_focuses_changes_nothing(fs in focal_set(5), dup in 0usize..5, split in 0.1..0.9f64, x in point(-2.0, 3.0)) {
        let i = dup % fs.len();
        let mut entries: Vec<Focus> = fs.entries().to_vec();
        let f = entries[i];
        entries[i].weight = f.weight * split;
        entries.push(Focus::new(f.point, f.weight * (1.0 - split)));
        let split_set = WeightedFocalSet::new(entries).unwrap();
        let merged = split_set.merge_coincident();
        prop_assert_eq!(merged.len(), fs.merge_coincident().len());
        prop_assert!(rel_err(split_set.eval(x), merged.eval(x)) < 1e-12);
        if min_focus_distance(&fs, x) > 0.01 {
            let (g1, g2) = (split_set.gradient(x).unwrap(), merged.gradient(x).unwrap());
            prop_assert!((g1 - g2).norm() <= 1e-12 * g1.norm().max(fs.total_weight()));
            prop_assert!(rel_err(split_set.hessian(x).unwrap().trace(), merged.hessian(x).unwrap().trace()) < 1e-12);
        }
        let v = Vector2::new(0.6, -0.8);
        let j = merged.entries().iter().position(|g| g.point == f.point).unwrap();
        let k = split_set.entries().iter().position(|g| g.point == f.point).unwrap();
        prop_assert!((merged.dirderiv_plus(j, v).unwrap() - split_set.dirderiv_plus(k, v).unwrap()).abs() < 1e-12 * fs.total_weight());
    }
}
