//! Generalized conics: level curves of the average distance to a focal
//! curve, and their approximation by polyellipses whose focuses are the
//! midpoints of an equal-length partition of the curve.
//!
//! For a rectifiable curve `Γ` of length `L`,
//! `f(X) = (1/L) ∫_Γ d(X, Y) dY`. The distance to a moving point is
//! 1-Lipschitz in arclength, so on an arc of length `ℓ` the integrand varies
//! by at most `ℓ`. With `M` equal arcs the midpoint polyellipse
//! `F_M(X) = (1/M) Σ d(X, τ_j)` and `f(X)` both lie between the lower and
//! upper Riemann sums divided by `L`, whose gap is at most `L/M`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermat_weber;
use crate::focal::{Focus, WeightedFocalSet};
use crate::geom::{bbox_diagonal, ClosedPolyline, Point2, Vector2};
use crate::hausdorff::{hausdorff_distance, CompactSetRep};
use crate::quadrature::integrate_pieces;
use crate::trace::{ray_root, trace_convex_level, ConvexField};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Relative width, in parameter, at which arclength inversion stops.
pub const INVERSION_TOL: f64 = 1e-12;

/// Samples per arc used to bracket the integrand.
pub const ENVELOPE_SAMPLES: usize = 8;

/// Partition size of the polyellipse whose minimizer centers conic traces.
pub const CENTER_PARTITION: usize = 64;

type PositionFn = Arc<dyn Fn(f64) -> Point2 + Send + Sync>;
type VelocityFn = Arc<dyn Fn(f64) -> Vector2 + Send + Sync>;

/// A parametric curve `t ↦ γ(t)` on `[t0, t1]`.
///
/// Without an analytic velocity, central finite differences are used and
/// [`ParamCurve::has_analytic_velocity`] reports `false`.
#[derive(Clone)]
pub struct ParamCurve {
    t0: f64,
    t1: f64,
    position: PositionFn,
    velocity: Option<VelocityFn>,
    /// Interior parameters where the velocity may jump.
    breakpoints: Vec<f64>,
    label: String,
}

impl fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamCurve")
            .field("label", &self.label)
            .field("domain", &(self.t0, self.t1))
            .field("analytic_velocity", &self.velocity.is_some())
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl ParamCurve {
    pub fn new(t0: f64, t1: f64, position: impl Fn(f64) -> Point2 + Send + Sync + 'static) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::InvalidInput(format!("curve domain [{t0}, {t1}] must be a finite nondegenerate interval")));
        }
        Ok(Self {
            t0,
            t1,
            position: Arc::new(position),
            velocity: None,
            breakpoints: Vec::new(),
            label: "custom".into(),
        })
    }

    pub fn with_velocity(mut self, velocity: impl Fn(f64) -> Vector2 + Send + Sync + 'static) -> Self {
        self.velocity = Some(Arc::new(velocity));
        self
    }

    /// Breakpoints outside the open domain are dropped.
    pub fn with_breakpoints(mut self, mut breakpoints: Vec<f64>) -> Self {
        breakpoints.retain(|&t| t > self.t0 && t < self.t1);
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        self.breakpoints = breakpoints;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Counterclockwise circle starting at angle 0, parameter in `[0, 2π]`.
    pub fn circle(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidInput(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Self::new(0.0, std::f64::consts::TAU, move |t| Point2::polar(center, radius, t))?
            .with_velocity(move |t| Vector2::new(-radius * t.sin(), radius * t.cos()))
            .with_label("circle"))
    }

    /// Segment from `a` to `b`, parameter in `[0, 1]`.
    pub fn segment(a: Point2, b: Point2) -> Result<Self> {
        if a == b || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput("segment endpoints must be distinct and finite".into()));
        }
        let v = b - a;
        Ok(Self::new(0.0, 1.0, move |t| a.lerp(b, t))?.with_velocity(move |_| v).with_label("segment"))
    }

    /// The graph `t ↦ (t, sin t)` on `[t0, t1]`.
    pub fn sine_wave(t0: f64, t1: f64) -> Result<Self> {
        Ok(Self::new(t0, t1, |t| Point2::new(t, t.sin()))?
            .with_velocity(|t| Vector2::new(1.0, t.cos()))
            .with_label("sine-wave"))
    }

    /// Polyline through `points`, one unit of parameter per edge. A closed
    /// polyline includes the edge from the last point back to the first.
    pub fn polyline(points: Vec<Point2>, closed: bool) -> Result<Self> {
        if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("polyline needs at least two finite points".into()));
        }
        let mut nodes = points;
        if closed {
            nodes.push(nodes[0]);
        }
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("polyline has a zero-length edge".into()));
        }
        let edges = nodes.len() - 1;
        let nodes = Arc::new(nodes);
        let edge_of = move |t: f64| (t.floor().max(0.0) as usize).min(edges - 1);
        let (pn, vn) = (Arc::clone(&nodes), Arc::clone(&nodes));
        Ok(Self::new(0.0, edges as f64, move |t| {
            let i = edge_of(t);
            pn[i].lerp(pn[i + 1], t - i as f64)
        })?
        .with_velocity(move |t| {
            let i = edge_of(t);
            vn[i + 1] - vn[i]
        })
        .with_breakpoints((1..edges).map(|k| k as f64).collect())
        .with_label(if closed { "closed-polyline" } else { "polyline" }))
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_analytic_velocity(&self) -> bool {
        self.velocity.is_some()
    }

    pub fn position(&self, t: f64) -> Point2 {
        (self.position)(t)
    }

    pub fn velocity(&self, t: f64) -> Vector2 {
        match &self.velocity {
            Some(v) => v(t),
            None => {
                let h = 1e-6 * (self.t1 - self.t0);
                let (a, b) = ((t - h).max(self.t0), (t + h).min(self.t1));
                (self.position(b) - self.position(a)) * (1.0 / (b - a))
            }
        }
    }

    pub fn speed(&self, t: f64) -> f64 {
        self.velocity(t).norm()
    }

    /// Integration breaks restricted to `[a, b]`, endpoints included.
    fn breaks_within(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = vec![a];
        out.extend(self.breakpoints.iter().copied().filter(|&t| t > a && t < b));
        out.push(b);
        out
    }

    fn arclength_between(&self, a: f64, b: f64, tol: f64) -> Result<f64> {
        integrate_pieces(|t| self.speed(t), &self.breaks_within(a, b), tol)
    }

    /// Diagonal of the bounding box of 257 samples, at least 1.
    pub fn scale(&self) -> f64 {
        let n = 256;
        let pts = (0..=n).map(|k| self.position(self.t0 + (self.t1 - self.t0) * k as f64 / n as f64));
        bbox_diagonal(pts).max(1.0)
    }

    /// Approximate parameter of the point of the curve nearest to `x`: the
    /// best of 257 uniform samples, refined by ternary search between its
    /// neighbors.
    pub fn nearest_parameter(&self, x: Point2) -> f64 {
        let n = 256;
        let step = (self.t1 - self.t0) / n as f64;
        let dist = |t: f64| x.distance(self.position(t));
        let k = (0..=n)
            .min_by(|&i, &j| dist(self.t0 + step * i as f64).total_cmp(&dist(self.t0 + step * j as f64)))
            .expect("nonempty");
        let (mut lo, mut hi) = ((self.t0 + step * (k as f64 - 1.0)).max(self.t0), (self.t0 + step * (k as f64 + 1.0)).min(self.t1));
        for _ in 0..80 {
            let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
            if dist(m1) < dist(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        0.5 * (lo + hi)
    }

    /// The parameter `t ≥ from` at which the arclength from `from` equals
    /// `target`, found by bisection on `[from, upper]`.
    fn advance(&self, from: f64, target: f64, upper: f64, tol: f64) -> Result<f64> {
        let (mut lo, mut hi) = (from, upper);
        let width = INVERSION_TOL * (self.t1 - self.t0);
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            if self.arclength_between(from, mid, tol)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `L(Γ) = ∫ ‖γ'(t)‖ dt` to absolute tolerance `tol`.
pub fn arclength(curve: &ParamCurve, tol: f64) -> Result<f64> {
    let (a, b) = curve.domain();
    let length = curve.arclength_between(a, b, tol)?;
    if !(length > 0.0) {
        return Err(Error::InvalidInput(format!("curve has non-positive length {length}")));
    }
    Ok(length)
}

fn distance_integral(curve: &ParamCurve, x: Point2, tol: f64) -> Result<f64> {
    let (a, b) = curve.domain();
    let mut breaks = curve.breaks_within(a, b);
    // The integrand has a kink where the curve passes through `x`.
    let nearest = curve.nearest_parameter(x);
    if nearest > a && nearest < b {
        let at = breaks.partition_point(|&t| t < nearest);
        breaks.insert(at, nearest);
    }
    integrate_pieces(|t| x.distance(curve.position(t)) * curve.speed(t), &breaks, tol)
}

/// `f(X) = (1/L) ∫_Γ d(X, Y) dY`, each integral to tolerance `tol` scaled
/// by the curve length.
pub fn avg_distance(curve: &ParamCurve, x: Point2, tol: f64) -> Result<f64> {
    let length = arclength(curve, tol)?;
    Ok(distance_integral(curve, x, tol * length)? / length)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMode {
    /// Arcs of equal length.
    #[default]
    Arclength,
    /// Arcs of equal parameter width.
    Parameter,
}

/// `M` arcs of the curve with their midpoint parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub mode: PartitionMode,
    /// `M + 1` increasing parameters from `t0` to `t1`.
    pub boundaries: Vec<f64>,
    /// Parameter at half the length of each arc (arclength mode) or at the
    /// center of its parameter interval.
    pub midpoints: Vec<f64>,
    pub arc_lengths: Vec<f64>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.midpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.midpoints.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.arc_lengths.iter().sum()
    }
}

pub fn equidistant_partition(curve: &ParamCurve, m: usize, mode: PartitionMode, tol: f64) -> Result<Partition> {
    if m == 0 {
        return Err(Error::InvalidInput("partition needs at least one arc".into()));
    }
    let (t0, t1) = curve.domain();
    let mut boundaries = Vec::with_capacity(m + 1);
    boundaries.push(t0);
    match mode {
        PartitionMode::Parameter => {
            boundaries.extend((1..m).map(|k| t0 + (t1 - t0) * k as f64 / m as f64));
        }
        PartitionMode::Arclength => {
            let length = arclength(curve, tol)?;
            let mut covered = 0.0;
            for k in 1..m {
                let prev = *boundaries.last().expect("nonempty");
                let next = curve.advance(prev, length * k as f64 / m as f64 - covered, t1, tol)?;
                covered += curve.arclength_between(prev, next, tol)?;
                boundaries.push(next);
            }
        }
    }
    boundaries.push(t1);
    let mut midpoints = Vec::with_capacity(m);
    let mut arc_lengths = Vec::with_capacity(m);
    for w in boundaries.windows(2) {
        let ell = curve.arclength_between(w[0], w[1], tol)?;
        arc_lengths.push(ell);
        midpoints.push(match mode {
            PartitionMode::Parameter => 0.5 * (w[0] + w[1]),
            PartitionMode::Arclength => curve.advance(w[0], 0.5 * ell, w[1], tol)?,
        });
    }
    Ok(Partition { mode, boundaries, midpoints, arc_lengths })
}

/// The polyellipse focal set `{γ(τ_j)}` with weights `1/M`.
pub fn approx_polyellipse(curve: &ParamCurve, m: usize, mode: PartitionMode, tol: f64) -> Result<WeightedFocalSet> {
    let partition = equidistant_partition(curve, m, mode, tol)?;
    focal_set_of(curve, &partition)
}

fn focal_set_of(curve: &ParamCurve, partition: &Partition) -> Result<WeightedFocalSet> {
    let w = 1.0 / partition.len() as f64;
    WeightedFocalSet::new(partition.midpoints.iter().map(|&t| Focus::new(curve.position(t), w)).collect())
}

/// Smallest `M` with `L/M < ε/2`, i.e. `floor(2L/ε) + 1`.
pub fn min_partition_for(length: f64, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && length > 0.0) {
        return Err(Error::InvalidInput(format!("need positive length and epsilon, got {length} and {eps}")));
    }
    Ok((2.0 * length / eps).floor() as usize + 1)
}

/// Bracket of `Y ↦ d(X, Y)` over one arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcEnvelope {
    pub inf: f64,
    pub sup: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiemannEnvelope {
    pub m: usize,
    pub arcs: Vec<ArcEnvelope>,
    /// `s = Σ inf_j ℓ_j ≤ L f(X)`.
    pub lower_sum: f64,
    /// `S = Σ sup_j ℓ_j ≥ L f(X)`.
    pub upper_sum: f64,
    /// `F_M(X)` for the arclength midpoints.
    pub midpoint_value: f64,
}

/// Precomputed per-arc samples for evaluating envelopes at many points.
///
/// Each arc of length `ℓ` carries samples at arclength `(k + ½) ℓ / 8`, so
/// every point of the arc is within `ℓ/16` of a sample; padding the sample
/// extremes by that radius brackets the true infimum and supremum.
#[derive(Debug, Clone)]
pub struct EnvelopeSampler {
    partition: Partition,
    samples: Vec<Vec<Point2>>,
    pads: Vec<f64>,
    midpoints: Vec<Point2>,
}

impl EnvelopeSampler {
    pub fn new(curve: &ParamCurve, m: usize, tol: f64) -> Result<Self> {
        let partition = equidistant_partition(curve, m, PartitionMode::Arclength, tol)?;
        let n = ENVELOPE_SAMPLES as f64;
        let mut samples = Vec::with_capacity(m);
        let mut pads = Vec::with_capacity(m);
        for (w, &ell) in partition.boundaries.windows(2).zip(&partition.arc_lengths) {
            let mut arc = Vec::with_capacity(ENVELOPE_SAMPLES);
            let mut t = w[0];
            for k in 0..ENVELOPE_SAMPLES {
                let step = if k == 0 { 0.5 * ell / n } else { ell / n };
                t = curve.advance(t, step, w[1], tol)?;
                arc.push(curve.position(t));
            }
            samples.push(arc);
            // Inversion error is covered by a few quadrature tolerances.
            pads.push(0.5 * ell / n + 4.0 * tol);
        }
        let midpoints = partition.midpoints.iter().map(|&t| curve.position(t)).collect();
        Ok(Self { partition, samples, pads, midpoints })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn envelope(&self, x: Point2) -> RiemannEnvelope {
        let mut arcs = Vec::with_capacity(self.samples.len());
        for ((arc, &pad), &length) in self.samples.iter().zip(&self.pads).zip(&self.partition.arc_lengths) {
            let (lo, hi) = arc
                .iter()
                .map(|y| x.distance(*y))
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
            arcs.push(ArcEnvelope { inf: (lo - pad).max(0.0), sup: hi + pad, length });
        }
        let m = arcs.len();
        RiemannEnvelope {
            m,
            lower_sum: arcs.iter().map(|a| a.inf * a.length).sum(),
            upper_sum: arcs.iter().map(|a| a.sup * a.length).sum(),
            midpoint_value: self.midpoints.iter().map(|y| x.distance(*y)).sum::<f64>() / m as f64,
            arcs,
        }
    }
}

pub fn riemann_envelope(curve: &ParamCurve, x: Point2, m: usize, tol: f64) -> Result<RiemannEnvelope> {
    Ok(EnvelopeSampler::new(curve, m, tol)?.envelope(x))
}

/// The level set `{f = c}` of the average distance to a curve.
#[derive(Debug, Clone)]
pub struct GeneralizedConic {
    curve: ParamCurve,
    level: f64,
    quad_tol: f64,
    length: f64,
    scale: f64,
    center: Point2,
}

impl GeneralizedConic {
    /// Fails when `c` does not exceed `f` at the minimizer of the
    /// `M = 64` midpoint polyellipse, which serves as the trace center.
    pub fn new(curve: ParamCurve, level: f64, quad_tol: f64) -> Result<Self> {
        if !(quad_tol > 0.0) || !level.is_finite() {
            return Err(Error::InvalidInput(format!("need finite level and positive tolerance, got {level}, {quad_tol}")));
        }
        let length = arclength(&curve, quad_tol)?;
        let fs = approx_polyellipse(&curve, CENTER_PARTITION, PartitionMode::Arclength, quad_tol)?;
        let center = match fermat_weber::minimize(&fs) {
            Ok(r) => r.point,
            Err(Error::NoConvergence(r)) => r.point,
            Err(e) => return Err(e),
        };
        let scale = curve.scale();
        let conic = Self { curve, level, quad_tol, length, scale, center };
        let minimum = conic.value(center)?;
        if level < minimum - quad_tol {
            return Err(Error::LevelBelowMinimum { level, minimum });
        }
        if level <= minimum + quad_tol {
            return Err(Error::LevelAtMinimum { level, minimum });
        }
        Ok(conic)
    }

    pub fn curve(&self) -> &ParamCurve {
        &self.curve
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    /// `f(X)` using the cached curve length.
    pub fn avg_distance(&self, x: Point2) -> Result<f64> {
        Ok(distance_integral(&self.curve, x, self.quad_tol * self.length)? / self.length)
    }

    /// Radial trace of `{f = c}` from the center. Root tolerances below the
    /// quadrature tolerance are raised to it.
    pub fn trace(&self, n_rays: usize, root_tol: f64) -> Result<ClosedPolyline> {
        if n_rays < 8 {
            return Err(Error::InvalidInput(format!("n_rays must be at least 8, got {n_rays}")));
        }
        trace_convex_level(self, self.center, self.level, n_rays, root_tol.max(self.quad_tol))
    }
}

impl ConvexField for GeneralizedConic {
    fn value(&self, x: Point2) -> Result<f64> {
        self.avg_distance(x)
    }

    fn length_scale(&self) -> f64 {
        self.scale
    }

    fn value_scale(&self) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichReport {
    pub m: usize,
    pub eps: f64,
    pub samples: usize,
    /// `L / M`, the uniform bound on `|F_M - f|`.
    pub uniform_bound: f64,
    /// Maximum of `|F_M(X) - c|` over traced points of `{f = c}`.
    pub max_deviation: f64,
    /// Along every sample ray, `{F_M ≤ c - ε}` ends before the conic and
    /// `{F_M ≤ c + ε}` ends after it.
    pub inclusion_holds: bool,
    /// `ε` does not exceed twice the quadrature tolerance, so nothing can
    /// be certified.
    pub below_tolerance_floor: bool,
    pub pass: bool,
}

/// Checks on `samples` traced points of the conic that the midpoint
/// polyellipse with `M` arcs stays within `ε` of the level `c`.
pub fn sandwich_check(conic: &GeneralizedConic, m: usize, eps: f64, samples: usize) -> Result<SandwichReport> {
    let traced = conic.trace(samples, conic.quad_tol)?;
    let fs = approx_polyellipse(&conic.curve, m, PartitionMode::Arclength, conic.quad_tol)?;
    let c = conic.level;
    let o = conic.center;
    let max_deviation = traced.vertices().iter().map(|x| (fs.eval(*x) - c).abs()).fold(0.0, f64::max);
    let root_tol = 1e-14;
    let slack = conic.quad_tol;
    let inner_exists = fs.eval(o) < c - eps;
    let mut inclusion_holds = fs.eval(o) < c + eps;
    if inclusion_holds {
        for x in traced.vertices() {
            let offset = *x - o;
            let r = offset.norm();
            let dir = offset * (1.0 / r);
            let outer = ray_root(&fs, o, dir, c + eps, root_tol)?;
            let inner = if inner_exists { ray_root(&fs, o, dir, c - eps, root_tol)? } else { 0.0 };
            if inner > r + slack || outer < r - slack {
                inclusion_holds = false;
                break;
            }
        }
    }
    let below_tolerance_floor = eps <= 2.0 * conic.quad_tol;
    Ok(SandwichReport {
        m,
        eps,
        samples,
        uniform_bound: conic.length / m as f64,
        max_deviation,
        inclusion_holds,
        below_tolerance_floor,
        pass: !below_tolerance_floor && max_deviation < eps && inclusion_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub m: usize,
    /// `L / M`.
    pub uniform_bound: f64,
    /// Maximum of `|F_M - c|` over the traced conic.
    pub max_deviation: f64,
    /// Hausdorff distance between the traced `{F_M = c}` and the traced conic.
    pub hausdorff: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub conic_trace: ClosedPolyline,
    pub rows: Vec<ConvergenceRow>,
    pub focal_sets: Vec<WeightedFocalSet>,
    pub traces: Vec<ClosedPolyline>,
}

/// Traces `{F_M = c}` for each `M` from the conic's center and compares it
/// with the traced conic.
pub fn conic_convergence(
    conic: &GeneralizedConic,
    m_list: &[usize],
    mode: PartitionMode,
    n_rays: usize,
) -> Result<ConvergenceStudy> {
    let conic_trace = conic.trace(n_rays, conic.quad_tol)?;
    let conic_set = CompactSetRep::Polyline(conic_trace.clone());
    let mut study = ConvergenceStudy { conic_trace, rows: Vec::new(), focal_sets: Vec::new(), traces: Vec::new() };
    for &m in m_list {
        let fs = approx_polyellipse(&conic.curve, m, mode, conic.quad_tol)?;
        let trace = trace_convex_level(&fs, conic.center, conic.level, n_rays, 1e-12)?;
        let max_deviation =
            study.conic_trace.vertices().iter().map(|x| (fs.eval(*x) - conic.level).abs()).fold(0.0, f64::max);
        let hausdorff = hausdorff_distance(&CompactSetRep::Polyline(trace.clone()), &conic_set);
        study.rows.push(ConvergenceRow { m, uniform_bound: conic.length / m as f64, max_deviation, hausdorff });
        study.focal_sets.push(fs);
        study.traces.push(trace);
    }
    Ok(study)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, TAU};

    const TOL: f64 = DEFAULT_QUAD_TOL;

    #[test]
    fn arclengths() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        assert!((arclength(&circle, TOL).unwrap() - TAU).abs() < 1e-10);
        let seg = ParamCurve::segment(Point2::ORIGIN, Point2::new(3.0, 4.0)).unwrap();
        assert!((arclength(&seg, TOL).unwrap() - 5.0).abs() < 1e-12);
        // 4√2·E(1/√2) with E(1/√2) = 1.3506438810476755.
        let sine = ParamCurve::sine_wave(0.0, TAU).unwrap();
        let expected = 4.0 * 2f64.sqrt() * 1.350_643_881_047_675_5;
        assert!((arclength(&sine, TOL).unwrap() - expected).abs() < 1e-9);
        let square =
            ParamCurve::polyline(vec![Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)], true)
                .unwrap();
        assert!((arclength(&square, TOL).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn finite_difference_velocity_is_flagged_and_close() {
        let fd = ParamCurve::new(0.0, TAU, |t| Point2::new(t.cos(), t.sin())).unwrap();
        assert!(!fd.has_analytic_velocity());
        assert!((fd.speed(1.0) - 1.0).abs() < 1e-9);
        assert!((arclength(&fd, 1e-8).unwrap() - TAU).abs() < 1e-6);
    }

    #[test]
    fn average_distances() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        assert!((avg_distance(&circle, Point2::ORIGIN, TOL).unwrap() - 1.0).abs() < 1e-12);
        assert!((avg_distance(&circle, Point2::new(0.0, -1.0), TOL).unwrap() - 4.0 / PI).abs() < 1e-9);
        let seg = ParamCurve::segment(Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)).unwrap();
        let expected = (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln()) / 2.0;
        assert!((avg_distance(&seg, Point2::new(0.0, 1.0), TOL).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn circle_partition_midpoints() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        let part = equidistant_partition(&circle, 4, PartitionMode::Arclength, TOL).unwrap();
        for (j, &t) in part.midpoints.iter().enumerate() {
            assert!((t - FRAC_PI_4 * (2 * j + 1) as f64).abs() < 1e-9);
        }
        assert!((part.total_length() - TAU).abs() < 1e-9);
    }

    #[test]
    fn segment_modes_agree() {
        let seg = ParamCurve::segment(Point2::ORIGIN, Point2::new(2.0, 1.0)).unwrap();
        let a = equidistant_partition(&seg, 7, PartitionMode::Arclength, TOL).unwrap();
        let b = equidistant_partition(&seg, 7, PartitionMode::Parameter, TOL).unwrap();
        for (x, y) in a.midpoints.iter().zip(&b.midpoints) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn sine_parameter_nodes() {
        let sine = ParamCurve::sine_wave(0.0, TAU).unwrap();
        let fs = approx_polyellipse(&sine, 8, PartitionMode::Parameter, TOL).unwrap();
        for (j, f) in fs.entries().iter().enumerate() {
            let t = TAU * (j as f64 + 0.5) / 8.0;
            assert!(f.point.distance(Point2::new(t, t.sin())) < 1e-15);
            assert_eq!(f.weight, 0.125);
        }
        assert!((fs.total_weight() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn envelope_of_circle_center_is_tight() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        let env = riemann_envelope(&circle, Point2::ORIGIN, 16, TOL).unwrap();
        for arc in &env.arcs {
            assert!(arc.inf <= 1.0 && arc.sup >= 1.0);
        }
        assert!(env.lower_sum <= TAU && env.upper_sum >= TAU);
        assert!((env.midpoint_value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn envelope_brackets_integral() {
        let sine = ParamCurve::sine_wave(0.0, TAU).unwrap();
        let length = arclength(&sine, TOL).unwrap();
        let sampler = EnvelopeSampler::new(&sine, 12, TOL).unwrap();
        for x in [Point2::new(1.0, 2.0), Point2::new(3.0, 0.0), Point2::new(-2.0, -1.0), Point2::new(PI, 0.0)] {
            let env = sampler.envelope(x);
            let integral = avg_distance(&sine, x, TOL).unwrap() * length;
            assert!(env.lower_sum <= integral && integral <= env.upper_sum);
            assert!(env.lower_sum / length <= env.midpoint_value && env.midpoint_value <= env.upper_sum / length);
            assert!(env.upper_sum - env.lower_sum <= length * length / 12.0 + 1e-8);
        }
    }

    #[test]
    fn constructive_partition_size() {
        let m = min_partition_for(TAU, 0.1).unwrap();
        assert_eq!(m, 126);
        assert!(TAU / (m as f64) < 0.05);
        assert!(TAU / (m - 1) as f64 >= 0.05);
        assert!(min_partition_for(1.0, 0.0).is_err());
    }

    #[test]
    fn circle_conic_is_the_circle() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        let conic = GeneralizedConic::new(circle, 4.0 / PI, TOL).unwrap();
        let traced = conic.trace(64, 1e-12).unwrap();
        for v in traced.vertices() {
            assert!((v.distance(Point2::ORIGIN) - 1.0).abs() < 1e-6);
        }
        let eps = 0.05;
        let m = min_partition_for(conic.length(), eps).unwrap();
        let report = sandwich_check(&conic, m, eps, 64).unwrap();
        assert!(report.pass, "{report:?}");
        let floor = sandwich_check(&conic, m, TOL, 64).unwrap();
        assert!(floor.below_tolerance_floor && !floor.pass);
    }

    #[test]
    fn level_below_minimum_is_rejected() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        assert!(matches!(GeneralizedConic::new(circle, 0.5, TOL), Err(Error::LevelBelowMinimum { .. })));
    }

    #[test]
    fn single_arc_polyellipse_is_a_circle() {
        let circle = ParamCurve::circle(Point2::ORIGIN, 1.0).unwrap();
        let conic = GeneralizedConic::new(circle, 1.5, TOL).unwrap();
        let study = conic_convergence(&conic, &[1, 8], PartitionMode::Arclength, 64).unwrap();
        assert_eq!(study.focal_sets[0].len(), 1);
        assert!(study.rows[0].hausdorff.is_finite());
        assert!(study.rows[1].hausdorff < study.rows[0].hausdorff);
    }
}
