//! Seeded random instances for experiments and tests.
//!
//! Every stream comes from [`rng_from_seed`]: ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, drawing uniforms with `rand 0.8`'s
//! `gen_range`. The draw order inside each generator is part of its
//! contract, so equal seeds give equal instances across runs and platforms.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::focal::{Focus, Polyellipse, WeightedFocalSet};
use crate::geom::Point2;
use crate::hausdorff::RegularPolygonRep;
use crate::symmetry::{dihedral_orbit, DihedralAction};

pub type InstanceRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const WEIGHT_RANGE: std::ops::Range<f64> = 0.5..2.0;

/// Uniform point in the disk of radius `r` about `center`.
pub fn point_in_disk<R: Rng>(rng: &mut R, center: Point2, r: f64) -> Point2 {
    let radius = r * rng.gen_range(0.0f64..1.0).sqrt();
    let angle = rng.gen_range(0.0..TAU);
    Point2::polar(center, radius, angle)
}

/// Between 1 and `max_focuses` focuses uniform in the unit square, weights
/// uniform in `[0.5, 2)`. Draws: count, then `(x, y, w)` per focus.
pub fn random_focal_set<R: Rng>(rng: &mut R, max_focuses: usize) -> Result<WeightedFocalSet> {
    let n = rng.gen_range(1..=max_focuses.max(1));
    let entries = (0..n)
        .map(|_| {
            let (x, y) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
            Focus::new(Point2::new(x, y), rng.gen_range(WEIGHT_RANGE))
        })
        .collect();
    WeightedFocalSet::new(entries)
}

/// The orbit under the polygon's symmetry group of 1 to 4 generating
/// focuses, plus the center with probability 1/2.
///
/// Each generator lies within 1.2 circumradii of the center; with
/// probability 1/4 it is placed on a mirror line so that its orbit has
/// only `p` points.
pub fn random_invariant_focal_set<R: Rng>(rng: &mut R, poly: &RegularPolygonRep) -> Result<WeightedFocalSet> {
    let p = poly.p as f64;
    let mut seeds = Vec::new();
    if rng.gen_bool(0.5) {
        seeds.push(Focus::new(poly.center, rng.gen_range(WEIGHT_RANGE)));
    }
    let n = rng.gen_range(1..=4);
    for _ in 0..n {
        let radius = 1.2 * poly.circumradius * rng.gen_range(0.05f64..1.0).sqrt();
        let on_mirror = rng.gen_bool(0.25);
        let angle = if on_mirror {
            poly.phase + PI * rng.gen_range(0..2 * poly.p) as f64 / (2.0 * p)
        } else {
            rng.gen_range(0.0..TAU)
        };
        seeds.push(Focus::new(Point2::polar(poly.center, radius, angle), rng.gen_range(WEIGHT_RANGE)));
    }
    dihedral_orbit(&WeightedFocalSet::new(seeds)?, &DihedralAction::of_polygon(poly))
}

/// A polyellipse whose sublevel set contains every vertex of `poly`: 1 to
/// 5 focuses uniform in the disk of radius `0.8 R`, weights in `[0.5, 2)`,
/// level equal to the largest vertex value times a factor in `[1, 1.3)`.
pub fn random_circumscribed<R: Rng>(rng: &mut R, poly: &RegularPolygonRep) -> Result<Polyellipse> {
    let n = rng.gen_range(1..=5);
    let entries = (0..n)
        .map(|_| {
            let point = point_in_disk(rng, poly.center, 0.8 * poly.circumradius);
            Focus::new(point, rng.gen_range(WEIGHT_RANGE))
        })
        .collect();
    let fs = WeightedFocalSet::new(entries)?;
    let top = poly.vertices().into_iter().map(|v| fs.eval(v)).fold(0.0, f64::max);
    let level = top * rng.gen_range(1.0..1.3);
    Polyellipse::new(fs, level)
}
