mod common;

use common::{focal_set, oracle_sum, point};
use polyconic::fermat_weber::{check_focal_optimality, default_cert_tol, minimize, WeiszfeldSteps};
use polyconic::sampling::{random_focal_set, rng_from_seed};
use polyconic::{Focus, Point2, WeightedFocalSet};
use proptest::prelude::*;

/// Minimum of the distance sum over a grid of spacing `cell` on the unit square.
fn grid_minimum(fs: &WeightedFocalSet, cell: f64) -> f64 {
    let n = (1.0 / cell).round() as usize;
    let mut best = f64::INFINITY;
    for a in 0..=n {
        for b in 0..=n {
            best = best.min(oracle_sum(fs, Point2::new(a as f64 * cell, b as f64 * cell)));
        }
    }
    best
}

proptest! {
    #[test]
    fn weiszfeld_descends_monotonically(fs in focal_set(7), start in point(-2.0, 3.0)) {
        let mut prev = fs.eval(start);
        for x in WeiszfeldSteps::new(&fs, start).take(300) {
            let v = fs.eval(x);
            prop_assert!(v <= prev * (1.0 + 1e-14), "{} after {}", v, prev);
            prev = v;
        }
    }

    #[test]
    fn minimizer_is_rigid_motion_equivariant(fs in focal_set(6), angle in 0.0..std::f64::consts::TAU, shift in point(-3.0, 3.0)) {
        let a = minimize(&fs).unwrap();
        prop_assume!(!a.non_unique);
        let motion = |p: Point2| shift + p.to_vector().rotated(angle);
        let b = minimize(&fs.map_points(motion).unwrap()).unwrap();
        // Both points certify F within cert_tol of optimal; compare values first.
        prop_assert!((a.value - b.value).abs() <= 1e-9 * fs.total_weight() * fs.scale());
        let hess = fs.hessian(a.point).map(|h| h.det() / h.trace().max(1e-300)).unwrap_or(f64::INFINITY);
        if hess > 1e-2 * fs.total_weight() {
            prop_assert!(b.point.distance(motion(a.point)) < 1e-6 * fs.scale());
        }
    }

    #[test]
    fn minimizer_ignores_weight_scaling(fs in focal_set(6), lambda in 0.01..100.0f64) {
        let a = minimize(&fs).unwrap();
        prop_assume!(!a.non_unique);
        let b = minimize(&fs.scale_weights(lambda).unwrap()).unwrap();
        prop_assert!((b.value - lambda * a.value).abs() <= 1e-9 * lambda * fs.total_weight() * fs.scale());
        let hess = fs.hessian(a.point).map(|h| h.det() / h.trace().max(1e-300)).unwrap_or(f64::INFINITY);
        if hess > 1e-2 * fs.total_weight() {
            prop_assert!(b.point.distance(a.point) < 1e-6 * fs.scale());
        }
    }

    #[test]
    fn dominant_focus_is_certified(others in prop::collection::vec((point(0.0, 1.0), 0.1..1.0f64), 1..5), at in point(0.0, 1.0)) {
        let total: f64 = others.iter().map(|o| o.1).sum();
        let mut entries = vec![Focus::new(at, total * 1.01)];
        entries.extend(others.into_iter().map(|(p, w)| Focus::new(p, w)));
        let fs = WeightedFocalSet::new(entries).unwrap();
        let r = minimize(&fs).unwrap();
        prop_assert_eq!(r.point, at);
        prop_assert_eq!(r.iterations, 0);
        prop_assert!(check_focal_optimality(&fs, 0).unwrap().passes(default_cert_tol(&fs)));
    }
}

#[test]
fn certified_points_match_grid_oracle() {
    let mut rng = rng_from_seed(42);
    let cell = 1e-3;
    for _ in 0..50 {
        let fs = random_focal_set(&mut rng, 6).unwrap();
        let r = minimize(&fs).unwrap();
        assert!(r.certificate.passes(default_cert_tol(&fs)));
        let grid = grid_minimum(&fs, cell);
        let value = oracle_sum(&fs, r.point);
        let slack = fs.total_weight() * cell * std::f64::consts::FRAC_1_SQRT_2;
        assert!(value <= grid + 1e-6 * fs.scale(), "{value} vs grid {grid}");
        assert!(value >= grid - slack - 1e-6 * fs.scale());
    }
}
