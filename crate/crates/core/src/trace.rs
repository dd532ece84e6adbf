//! Radial tracing of level curves of convex functions.
//!
//! A convex function with an interior minimum increases strictly along every
//! ray leaving a point below the level, so each ray meets the level curve
//! exactly once. The curve is sampled by bracketing and bisecting along
//! `n_rays` equally spaced directions, the first one along `+x`.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermat_weber::{self, default_cert_tol};
use crate::focal::{Polyellipse, WeightedFocalSet};
use crate::geom::{ClosedPolyline, Point2, Vector2};

pub const DEFAULT_N_RAYS: usize = 512;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 200;
const MAX_BISECTIONS: usize = 400;

/// A convex function with a length scale, suitable for radial tracing.
pub trait ConvexField: Sync {
    fn value(&self, x: Point2) -> Result<f64>;

    /// Initial outer radius for bracketing.
    fn length_scale(&self) -> f64;

    /// Multiplier turning `root_tol` into an absolute tolerance on values.
    fn value_scale(&self) -> f64;
}

impl ConvexField for WeightedFocalSet {
    fn value(&self, x: Point2) -> Result<f64> {
        Ok(self.eval(x))
    }

    fn length_scale(&self) -> f64 {
        self.scale()
    }

    fn value_scale(&self) -> f64 {
        self.total_weight()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CenterMode {
    /// Start rays at the Weiszfeld minimizer of the focal set.
    Minimizer,
    Explicit(Point2),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub n_rays: usize,
    pub root_tol: f64,
    pub center_mode: CenterMode,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self { n_rays: DEFAULT_N_RAYS, root_tol: DEFAULT_ROOT_TOL, center_mode: CenterMode::Minimizer }
    }
}

impl TraceConfig {
    pub fn with_rays(mut self, n_rays: usize) -> Self {
        self.n_rays = n_rays;
        self
    }

    pub fn with_center(mut self, center: Point2) -> Self {
        self.center_mode = CenterMode::Explicit(center);
        self
    }

    pub fn with_root_tol(mut self, root_tol: f64) -> Self {
        self.root_tol = root_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_rays < 8 {
            return Err(Error::InvalidInput(format!("n_rays must be at least 8, got {}", self.n_rays)));
        }
        if !(self.root_tol > 0.0) {
            return Err(Error::InvalidInput(format!("root_tol must be positive, got {}", self.root_tol)));
        }
        Ok(())
    }
}

/// The ray origin for a polyellipse under `mode`.
///
/// For collinear focal sets whose minimizers form a segment, the midpoint of
/// that segment is used so that rays start strictly inside degenerate-thin
/// level sets.
pub fn trace_center(fs: &WeightedFocalSet, mode: CenterMode) -> Point2 {
    match mode {
        CenterMode::Explicit(c) => c,
        CenterMode::Minimizer => {
            let result = match fermat_weber::minimize(fs) {
                Ok(r) => r,
                Err(Error::NoConvergence(r)) => *r,
                Err(_) => return fs.weighted_centroid(),
            };
            if result.non_unique {
                let optimal = fermat_weber::optimal_focuses(fs, default_cert_tol(fs));
                let pts: Vec<Point2> = optimal.iter().map(|&i| fs.entries()[i].point).collect();
                let mut extreme = None;
                let mut best = 0.0;
                for (i, a) in pts.iter().enumerate() {
                    for b in &pts[i + 1..] {
                        if a.distance(*b) > best {
                            best = a.distance(*b);
                            extreme = Some(a.midpoint(*b));
                        }
                    }
                }
                if let Some(mid) = extreme {
                    return mid;
                }
            }
            result.point
        }
    }
}

/// Samples `{F = c}` along `cfg.n_rays` rays, in ascending angle from `+x`.
/// Every vertex satisfies `|F(X) - c| ≤ root_tol · Σ w_i`.
pub fn trace_level_set(pe: &Polyellipse, cfg: &TraceConfig) -> Result<ClosedPolyline> {
    cfg.validate()?;
    let center = trace_center(pe.focal_set(), cfg.center_mode);
    trace_convex_level(pe.focal_set(), center, pe.level(), cfg.n_rays, cfg.root_tol)
}

/// The point where the ray from the trace center along `direction` crosses
/// the level curve.
pub fn arc_point_on_axis(pe: &Polyellipse, direction: Vector2, cfg: &TraceConfig) -> Result<Point2> {
    cfg.validate()?;
    let dir = direction
        .normalized()
        .ok_or_else(|| Error::InvalidInput("direction must be nonzero".into()))?;
    let fs = pe.focal_set();
    let center = trace_center(fs, cfg.center_mode);
    check_level(fs, center, pe.level(), cfg.root_tol)?;
    let r = ray_root(fs, center, dir, pe.level(), cfg.root_tol)?;
    Ok(center + dir * r)
}

fn check_level<F: ConvexField + ?Sized>(field: &F, center: Point2, level: f64, root_tol: f64) -> Result<()> {
    let at_center = field.value(center)?;
    let tol = root_tol * field.value_scale();
    if level < at_center - tol {
        Err(Error::LevelBelowMinimum { level, minimum: at_center })
    } else if (level - at_center).abs() <= tol {
        Err(Error::LevelAtMinimum { level, minimum: at_center })
    } else {
        Ok(())
    }
}

/// Traces `{field = level}` from `center`, which must satisfy
/// `field(center) < level`.
pub fn trace_convex_level<F: ConvexField + ?Sized>(
    field: &F,
    center: Point2,
    level: f64,
    n_rays: usize,
    root_tol: f64,
) -> Result<ClosedPolyline> {
    check_level(field, center, level, root_tol)?;
    let vertices = (0..n_rays)
        .into_par_iter()
        .map(|k| {
            let dir = Vector2::from_angle(TAU * k as f64 / n_rays as f64);
            ray_root(field, center, dir, level, root_tol).map(|r| center + dir * r)
        })
        .collect::<Result<Vec<_>>>()?;
    ClosedPolyline::new(vertices)
}

/// Distance along the unit direction `dir` from `center` to the level.
pub fn ray_root<F: ConvexField + ?Sized>(
    field: &F,
    center: Point2,
    dir: Vector2,
    level: f64,
    root_tol: f64,
) -> Result<f64> {
    let tol = root_tol * field.value_scale();
    let excess = |r: f64| field.value(center + dir * r).map(|v| v - level);
    let bracket_failure = || Error::BracketFailure { angle: dir.dy.atan2(dir.dx) };

    let mut lo = 0.0;
    let mut hi = field.length_scale();
    let mut g_hi = excess(hi)?;
    let mut doublings = 0;
    while g_hi <= 0.0 {
        if g_hi.abs() <= tol {
            return Ok(hi);
        }
        lo = hi;
        hi *= 2.0;
        g_hi = excess(hi)?;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(bracket_failure());
        }
    }
    let mut g_lo = excess(lo)?;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g = excess(mid)?;
        if g.abs() <= tol {
            return Ok(mid);
        }
        if g < 0.0 {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
            g_hi = g;
        }
    }
    Ok(if g_lo.abs() <= g_hi.abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focal::Focus;

    fn pe(items: &[(f64, f64, f64)], c: f64) -> Polyellipse {
        let fs =
            WeightedFocalSet::new(items.iter().map(|&(x, y, w)| Focus::new(Point2::new(x, y), w)).collect()).unwrap();
        Polyellipse::new(fs, c).unwrap()
    }

    #[test]
    fn circle_trace() {
        let cfg = TraceConfig::default();
        let line = trace_level_set(&pe(&[(0.0, 0.0, 1.0)], 2.0), &cfg).unwrap();
        assert_eq!(line.len(), 512);
        for v in line.vertices() {
            assert!((v.distance(Point2::ORIGIN) - 2.0).abs() <= cfg.root_tol);
        }
        assert_eq!(line.vertices()[0].y, 0.0);
    }

    #[test]
    fn ellipse_trace_satisfies_conic_equation() {
        let cfg = TraceConfig::default();
        let e = pe(&[(-3.0, 0.0, 1.0), (3.0, 0.0, 1.0)], 10.0);
        let line = trace_level_set(&e, &cfg).unwrap();
        for v in line.vertices() {
            assert!((v.x * v.x / 25.0 + v.y * v.y / 16.0 - 1.0).abs() < 1e-8);
            assert!((e.focal_set().eval(*v) - 10.0).abs() <= cfg.root_tol * 2.0);
        }
    }

    #[test]
    fn axis_points() {
        let cfg = TraceConfig::default();
        let p = arc_point_on_axis(&pe(&[(0.0, 0.0, 1.0)], 1.0), Vector2::new(1.0, 0.0), &cfg).unwrap();
        assert!(p.distance(Point2::new(1.0, 0.0)) < 1e-12);
        let e = pe(&[(-3.0, 0.0, 1.0), (3.0, 0.0, 1.0)], 10.0);
        let q = arc_point_on_axis(&e, Vector2::new(0.0, 3.0), &cfg.with_center(Point2::ORIGIN)).unwrap();
        assert_eq!(q.x, 0.0);
        assert!((q.y - 4.0).abs() < 1e-11);
        assert!(arc_point_on_axis(&e, Vector2::ZERO, &cfg).is_err());
    }

    #[test]
    fn degenerate_levels() {
        let cfg = TraceConfig::default();
        let seg = pe(&[(-1.0, 0.0, 1.0), (1.0, 0.0, 1.0)], 2.0);
        assert!(matches!(trace_level_set(&seg, &cfg), Err(Error::LevelAtMinimum { .. })));
        // Below the value at an explicit center.
        let e = pe(&[(-1.0, 0.0, 1.0), (1.0, 0.0, 1.0)], 3.0);
        let off = cfg.with_center(Point2::new(5.0, 0.0));
        assert!(matches!(trace_level_set(&e, &off), Err(Error::LevelBelowMinimum { .. })));
    }

    #[test]
    fn collinear_segment_minimizer_uses_midpoint() {
        let fs = WeightedFocalSet::unit_weights([Point2::new(0.0, 0.0), Point2::new(4.0, 0.0)]).unwrap();
        assert_eq!(trace_center(&fs, CenterMode::Minimizer), Point2::new(2.0, 0.0));
        // A thin ellipse just above the degenerate level still traces.
        let thin = Polyellipse::new(fs, 4.0 + 1e-6).unwrap();
        assert!(trace_level_set(&thin, &TraceConfig::default()).is_ok());
    }

    #[test]
    fn rejects_bad_config() {
        let e = pe(&[(0.0, 0.0, 1.0)], 1.0);
        assert!(trace_level_set(&e, &TraceConfig::default().with_rays(4)).is_err());
        assert!(trace_level_set(&e, &TraceConfig::default().with_root_tol(0.0)).is_err());
    }
}
