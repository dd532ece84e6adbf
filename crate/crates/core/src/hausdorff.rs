//! Hausdorff distance between compact planar sets.
//!
//! Sets are continuous: polylines and polygons stand for their full edge
//! chains, circles for the whole circle. The directed distance
//! `sup_{x ∈ A} d(x, B)` is found by branch and bound over the pieces of `A`.
//! Two upper bounds prune the search:
//!
//! * `d(·, B)` is 1-Lipschitz, so on a piece of length `ℓ` with end values
//!   `d0, d1` the sup is at most `(d0 + d1 + ℓ) / 2`;
//! * distance to a segment or point is convex, so on a straight piece the
//!   sup of `d(·, b)` is attained at an end, giving
//!   `min_b max(d(a0, b), d(a1, b))`.
//!
//! Pieces are split until their bound is within `sub_tol` of the best value.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{bbox_diagonal, project_on_segment, segment_distance, ClosedPolyline, Point2, Vector2};

/// Subdivision tolerance relative to the scale of the two sets.
pub const SUB_TOL_REL: f64 = 1e-12;

/// Initial number of arcs a circle is cut into.
const CIRCLE_PIECES: usize = 64;

/// Regular `p`-gon with vertices `center + R (cos(phase + 2πk/p), sin(phase + 2πk/p))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularPolygonRep {
    pub p: usize,
    pub center: Point2,
    pub circumradius: f64,
    pub phase: f64,
}

impl RegularPolygonRep {
    pub fn new(p: usize, center: Point2, circumradius: f64, phase: f64) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidInput(format!("a regular polygon needs p >= 3, got {p}")));
        }
        if !(circumradius > 0.0 && circumradius.is_finite()) || !center.is_finite() || !phase.is_finite() {
            return Err(Error::InvalidInput("polygon center, radius and phase must be finite, radius positive".into()));
        }
        Ok(Self { p, center, circumradius, phase })
    }

    /// Inscribed in the unit circle about the origin, first vertex at `phase`.
    pub fn unit(p: usize, phase: f64) -> Result<Self> {
        Self::new(p, Point2::ORIGIN, 1.0, phase)
    }

    pub fn vertex_angle(&self, k: usize) -> f64 {
        self.phase + TAU * (k % self.p) as f64 / self.p as f64
    }

    pub fn vertex(&self, k: usize) -> Point2 {
        Point2::polar(self.center, self.circumradius, self.vertex_angle(k))
    }

    pub fn vertices(&self) -> Vec<Point2> {
        (0..self.p).map(|k| self.vertex(k)).collect()
    }

    /// Midpoint of the edge from vertex `k` to vertex `k + 1`.
    pub fn edge_midpoint(&self, k: usize) -> Point2 {
        Point2::polar(self.center, self.inradius(), self.vertex_angle(k) + PI / self.p as f64)
    }

    pub fn inradius(&self) -> f64 {
        self.circumradius * (PI / self.p as f64).cos()
    }

    pub fn to_polyline(&self) -> ClosedPolyline {
        ClosedPolyline::new(self.vertices()).expect("regular polygon vertices are distinct")
    }
}

/// A circle as a curve (not the disk).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

/// A non-empty compact set of the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CompactSetRep {
    PointSet(Vec<Point2>),
    Polyline(ClosedPolyline),
    RegularPolygon(RegularPolygonRep),
    Circle(Circle),
}

impl CompactSetRep {
    pub fn point_set(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set is empty".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("point set has non-finite coordinates".into()));
        }
        Ok(Self::PointSet(points))
    }

/// A distinguished point of the set that moves with it under isometries.
    pub fn anchor(&self) -> Point2 {
        match self {
            CompactSetRep::PointSet(v) => v[0],
            CompactSetRep::Polyline(l) => l.vertices()[0],
            CompactSetRep::RegularPolygon(r) => r.vertex(0),
            CompactSetRep::Circle(c) => c.center,
        }
    }

        pub fn circle(center: Point2, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(Error::InvalidInput(format!("invalid circle radius {radius}")));
        }
        Ok(Self::Circle(Circle { center, radius }))
    }

    fn extent_points(&self) -> Vec<Point2> {
        match self {
            Self::PointSet(p) => p.clone(),
            Self::Polyline(l) => l.vertices().to_vec(),
            Self::RegularPolygon(poly) => poly.vertices(),
            Self::Circle(c) => vec![
                Point2::new(c.center.x - c.radius, c.center.y - c.radius),
                Point2::new(c.center.x + c.radius, c.center.y + c.radius),
            ],
        }
    }

    fn segments(&self) -> Option<Vec<(Point2, Point2)>> {
        match self {
            Self::Polyline(l) => Some(l.segments().collect()),
            Self::RegularPolygon(poly) => Some(poly.to_polyline().segments().collect()),
            _ => None,
        }
    }
}

/// A directed distance together with the pair of points realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HausdorffWitness {
    pub distance: f64,
    /// Point of the source set.
    pub from: Point2,
    /// Nearest point of the target set.
    pub to: Point2,
}

/// `SUB_TOL_REL · max(1, bounding-box diagonal of A ∪ B)`.
pub fn default_sub_tol(a: &CompactSetRep, b: &CompactSetRep) -> f64 {
    let mut pts = a.extent_points();
    pts.extend(b.extent_points());
    SUB_TOL_REL * bbox_diagonal(pts.into_iter()).max(1.0)
}

pub fn directed_hausdorff(a: &CompactSetRep, b: &CompactSetRep) -> f64 {
    directed_hausdorff_witness(a, b, default_sub_tol(a, b)).distance
}

/// `max(h(A→B), h(B→A))`.
pub fn hausdorff_distance(a: &CompactSetRep, b: &CompactSetRep) -> f64 {
    hausdorff_witness(a, b).distance
}

/// The larger of the two directed witnesses.
pub fn hausdorff_witness(a: &CompactSetRep, b: &CompactSetRep) -> HausdorffWitness {
    let tol = default_sub_tol(a, b);
    let ab = directed_hausdorff_witness(a, b, tol);
    let ba = directed_hausdorff_witness(b, a, tol);
    if ab.distance >= ba.distance {
        ab
    } else {
        ba
    }
}

enum Target {
    Points(Vec<Point2>),
    Segments(Vec<(Point2, Point2)>),
    Circle(Circle),
}

impl Target {
    fn of(set: &CompactSetRep) -> Self {
        match set {
            CompactSetRep::PointSet(p) => Target::Points(p.clone()),
            CompactSetRep::Circle(c) => Target::Circle(*c),
            other => Target::Segments(other.segments().expect("segment-based set")),
        }
    }

    fn nearest(&self, x: Point2) -> (f64, Point2) {
        match self {
            Target::Points(pts) => pts
                .iter()
                .map(|p| (x.distance(*p), *p))
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap_or((f64::INFINITY, x)),
            Target::Segments(segs) => segs
                .iter()
                .map(|&(a, b)| {
                    let p = project_on_segment(x, a, b);
                    (x.distance(p), p)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .unwrap_or((f64::INFINITY, x)),
            Target::Circle(c) => {
                let r = x - c.center;
                let to = match r.normalized() {
                    Some(u) => c.center + u * c.radius,
                    None => Point2::new(c.center.x + c.radius, c.center.y),
                };
                (x.distance(to), to)
            }
        }
    }

    /// Sup of `d(·, B)` over the segment `[p, q]` bounded via convexity
    /// of the distance to each segment or point of `B`.
    fn convex_bound(&self, p: Point2, q: Point2) -> f64 {
        match self {
            Target::Points(pts) => pts
                .iter()
                .map(|b| p.distance(*b).max(q.distance(*b)))
                .fold(f64::INFINITY, f64::min),
            Target::Segments(segs) => segs
                .iter()
                .map(|&(a, b)| segment_distance(p, a, b).max(segment_distance(q, a, b)))
                .fold(f64::INFINITY, f64::min),
            Target::Circle(_) => f64::INFINITY,
        }
    }
}

#[derive(Clone, Copy)]
enum Shape {
    Segment,
    Arc { center: Point2, radius: f64 },
}

#[derive(Clone, Copy)]
struct Piece {
    shape: Shape,
    // Segment: parameters in [0, 1] between `a` and `b`; arc: angles.
    t0: f64,
    t1: f64,
    a: Point2,
    b: Point2,
    p0: Point2,
    p1: Point2,
    d0: f64,
    d1: f64,
    bound: f64,
}

impl Piece {
    fn at(&self, t: f64) -> Point2 {
        match self.shape {
            Shape::Segment => self.a.lerp(self.b, t),
            Shape::Arc { center, radius } => Point2::polar(center, radius, t),
        }
    }

    fn length(&self) -> f64 {
        match self.shape {
            Shape::Segment => self.p0.distance(self.p1),
            Shape::Arc { radius, .. } => radius * (self.t1 - self.t0),
        }
    }
}

struct ByBound(Piece);

impl PartialEq for ByBound {
    fn eq(&self, other: &Self) -> bool {
        self.0.bound == other.0.bound
    }
}
impl Eq for ByBound {}
impl PartialOrd for ByBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByBound {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.bound.total_cmp(&other.0.bound)
    }
}

/// `sup_{x ∈ A} d(x, B)` to within `sub_tol`, with a witnessing pair.
pub fn directed_hausdorff_witness(a: &CompactSetRep, b: &CompactSetRep, sub_tol: f64) -> HausdorffWitness {
    if let (CompactSetRep::Circle(ca), CompactSetRep::Circle(cb)) = (a, b) {
        return circle_to_circle(ca, cb);
    }
    let target = Target::of(b);
    let mut best = HausdorffWitness { distance: f64::NEG_INFINITY, from: Point2::ORIGIN, to: Point2::ORIGIN };
    let consider = |x: Point2, best: &mut HausdorffWitness| -> f64 {
        let (d, to) = target.nearest(x);
        if d > best.distance {
            *best = HausdorffWitness { distance: d, from: x, to };
        }
        d
    };

    let mut pieces: Vec<Piece> = Vec::new();
    match a {
        CompactSetRep::PointSet(pts) => {
            for p in pts {
                consider(*p, &mut best);
            }
        }
        CompactSetRep::Circle(c) => {
            // Pieces start at the point farthest from an anchor of the
            // target, so the subdivision moves with the sets under isometries.
            let away = c.center - b.anchor();
            let start = if away.norm() > 0.0 { away.dy.atan2(away.dx) } else { 0.0 };
            for k in 0..CIRCLE_PIECES {
                let t0 = start + TAU * k as f64 / CIRCLE_PIECES as f64;
                let t1 = start + TAU * (k + 1) as f64 / CIRCLE_PIECES as f64;
                let shape = Shape::Arc { center: c.center, radius: c.radius };
                pieces.push(new_piece(shape, t0, t1, Point2::ORIGIN, Point2::ORIGIN));
            }
        }
        _ => {
            for (p, q) in a.segments().expect("segment-based set") {
                pieces.push(new_piece(Shape::Segment, 0.0, 1.0, p, q));
                if let Target::Circle(c) = &target {
                    // The sup of |‖x - c‖ - r| on a segment is at an end or
                    // at the foot of the perpendicular from the center.
                    consider(project_on_segment(c.center, p, q), &mut best);
                }
            }
        }
    }

    let mut heap = BinaryHeap::with_capacity(pieces.len());
    for mut piece in pieces {
        piece.d0 = consider(piece.p0, &mut best);
        piece.d1 = consider(piece.p1, &mut best);
        piece.bound = piece_bound(&piece, &target);
        heap.push(ByBound(piece));
    }
    while let Some(ByBound(piece)) = heap.pop() {
        if piece.bound <= best.distance + sub_tol {
            break;
        }
        let tm = 0.5 * (piece.t0 + piece.t1);
        let pm = piece.at(tm);
        let dm = consider(pm, &mut best);
        for (t0, t1, p0, p1, d0, d1) in
            [(piece.t0, tm, piece.p0, pm, piece.d0, dm), (tm, piece.t1, pm, piece.p1, dm, piece.d1)]
        {
            let mut child = Piece { t0, t1, p0, p1, d0, d1, ..piece };
            child.bound = piece_bound(&child, &target);
            if child.bound > best.distance + sub_tol && child.length() > 0.0 {
                heap.push(ByBound(child));
            }
        }
    }
    best.distance = best.distance.max(0.0);
    best
}

fn new_piece(shape: Shape, t0: f64, t1: f64, a: Point2, b: Point2) -> Piece {
    let mut piece = Piece { shape, t0, t1, a, b, p0: a, p1: b, d0: 0.0, d1: 0.0, bound: 0.0 };
    piece.p0 = piece.at(t0);
    piece.p1 = piece.at(t1);
    piece
}

fn piece_bound(piece: &Piece, target: &Target) -> f64 {
    let lipschitz = 0.5 * (piece.d0 + piece.d1 + piece.length());
    let convex = match (piece.shape, target) {
        (Shape::Segment, Target::Circle(_)) => piece.d0.max(piece.d1),
        (Shape::Segment, _) => target.convex_bound(piece.p0, piece.p1),
        (Shape::Arc { radius, .. }, _) => {
            // The arc stays within its sagitta of the chord.
            let sagitta = radius * (1.0 - (0.5 * (piece.t1 - piece.t0)).cos());
            target.convex_bound(piece.p0, piece.p1) + sagitta
        }
    };
    lipschitz.min(convex)
}

fn circle_to_circle(a: &Circle, b: &Circle) -> HausdorffWitness {
    // Distances from points of A to B's center range over [|rA - D|, rA + D].
    let offset = a.center - b.center;
    let axis = offset.normalized().unwrap_or(Vector2::new(1.0, 0.0));
    let far = a.center + axis * a.radius;
    let near = a.center - axis * a.radius;
    let (far_d, near_d) = (far.distance(b.center), near.distance(b.center));
    let (from, rho) = if (far_d - b.radius).abs() >= (near_d - b.radius).abs() { (far, far_d) } else { (near, near_d) };
    let dir = (from - b.center).normalized().unwrap_or(axis);
    HausdorffWitness { distance: (rho - b.radius).abs(), from, to: b.center + dir * b.radius }
}
