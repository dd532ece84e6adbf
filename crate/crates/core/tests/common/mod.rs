#![allow(dead_code)]

use polyconic::{Focus, Point2, WeightedFocalSet};
use proptest::prelude::*;

pub fn point(lo: f64, hi: f64) -> impl Strategy<Value = Point2> {
    (lo..hi, lo..hi).prop_map(|(x, y)| Point2::new(x, y))
}

/// 1 to `max` focuses in `[-1, 2]²` with weights in `[0.1, 3)`.
pub fn focal_set(max: usize) -> impl Strategy<Value = WeightedFocalSet> {
    prop::collection::vec((point(-1.0, 2.0), 0.1..3.0f64), 1..=max)
        .prop_map(|v| WeightedFocalSet::new(v.into_iter().map(|(p, w)| Focus::new(p, w)).collect()).unwrap())
}

/// Distance sum written out independently of the library.
pub fn oracle_sum(fs: &WeightedFocalSet, x: Point2) -> f64 {
    fs.entries().iter().map(|f| f.weight * ((x.x - f.point.x).powi(2) + (x.y - f.point.y).powi(2)).sqrt()).sum()
}

pub fn min_focus_distance(fs: &WeightedFocalSet, x: Point2) -> f64 {
    fs.points().map(|p| p.distance(x)).fold(f64::INFINITY, f64::min)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
