//! The weighted distance sum `F(X) = Σ w_i d(X, F_i)` and its derivatives.
//!
//! `F` is convex, differentiable away from the focuses and has
//!
//! ```text
//! ∇F(X)   = Σ w_i (X - F_i) / d_i
//! ∂²F/∂x² = Σ w_i (y - y_i)² / d_i³
//! ∂²F/∂y² = Σ w_i (x - x_i)² / d_i³
//! ∂²F/∂x∂y = -Σ w_i (x - x_i)(y - y_i) / d_i³
//! ```
//!
//! At a focus only one-sided directional derivatives exist; see
//! [`WeightedFocalSet::dirderiv_plus`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermat_weber;
use crate::geom::{Point2, SymMatrix2, Vector2};

/// Relative factor applied to the focal set's scale to decide when a point
/// coincides with a focus.
pub const SINGULAR_REL_TOL: f64 = 1e-9;

/// Gradient norms below this fraction of the total weight count as zero.
pub const ZERO_GRADIENT_REL_TOL: f64 = 1e-12;

/// A focus with its (positive) weight. Integer weights model multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Focus {
    pub point: Point2,
    pub weight: f64,
}

impl Focus {
    pub fn new(point: Point2, weight: f64) -> Self {
        Self { point, weight }
    }
}

/// A non-empty list of weighted focuses; the domain of the distance sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedFocalSet {
    entries: Vec<Focus>,
    #[serde(skip)]
    scale: f64,
}

impl WeightedFocalSet {
    pub fn new(entries: Vec<Focus>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyFocalSet);
        }
        for (index, f) in entries.iter().enumerate() {
            if !f.point.is_finite() {
                return Err(Error::InvalidInput(format!("focus {index} is not finite")));
            }
            if !(f.weight > 0.0 && f.weight.is_finite()) {
                return Err(Error::NonPositiveWeight { index, weight: f.weight });
            }
        }
        let mut diameter: f64 = 0.0;
        for (i, a) in entries.iter().enumerate() {
            for b in &entries[i + 1..] {
                diameter = diameter.max(a.point.distance(b.point));
            }
        }
        Ok(Self { entries, scale: diameter.max(1.0) })
    }

    /// All focuses with weight 1.
    pub fn unit_weights(points: impl IntoIterator<Item = Point2>) -> Result<Self> {
        Self::new(points.into_iter().map(|p| Focus::new(p, 1.0)).collect())
    }

    pub fn entries(&self) -> &[Focus] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point2> + '_ {
        self.entries.iter().map(|f| f.point)
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|f| f.weight).sum()
    }

    /// Diameter of the focal set, floored at 1.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Distance below which a point is treated as coinciding with a focus.
    pub fn tol_singular(&self) -> f64 {
        SINGULAR_REL_TOL * self.scale
    }

    pub fn weighted_centroid(&self) -> Point2 {
        let w = self.total_weight();
        let (sx, sy) = self
            .entries
            .iter()
            .fold((0.0, 0.0), |(sx, sy), f| (sx + f.weight * f.point.x, sy + f.weight * f.point.y));
        Point2::new(sx / w, sy / w)
    }

    /// The nearest focus within [`tol_singular`](Self::tol_singular) of `x`.
    pub fn coincident_focus(&self, x: Point2) -> Option<(usize, f64)> {
        let tol = self.tol_singular();
        self.entries
            .iter()
            .enumerate()
            .map(|(i, f)| (i, x.distance(f.point)))
            .filter(|(_, d)| *d <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    fn check_regular(&self, x: Point2) -> Result<()> {
        match self.coincident_focus(x) {
            Some((focus_index, distance)) => Err(Error::SingularPoint { focus_index, distance }),
            None => Ok(()),
        }
    }

    /// Merges focuses closer than `tol_singular` into one entry carrying the
    /// summed weight. The first occurrence keeps its position.
    pub fn merge_coincident(&self) -> WeightedFocalSet {
        let tol = self.tol_singular();
        let mut merged: Vec<Focus> = Vec::with_capacity(self.entries.len());
        for f in &self.entries {
            match merged.iter_mut().find(|g| g.point.distance(f.point) <= tol) {
                Some(g) => g.weight += f.weight,
                None => merged.push(*f),
            }
        }
        WeightedFocalSet { entries: merged, scale: self.scale }
    }

    /// Whether all focuses lie on one line, within `rel_tol * scale`.
    pub fn is_collinear(&self, rel_tol: f64) -> bool {
        let pts: Vec<Point2> = self.points().collect();
        let (mut ia, mut ib, mut best) = (0, 0, 0.0);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = pts[i].distance(pts[j]);
                if d > best {
                    (ia, ib, best) = (i, j, d);
                }
            }
        }
        if best == 0.0 {
            return true;
        }
        let axis = pts[ib] - pts[ia];
        let tol = rel_tol * self.scale;
        pts.iter().all(|p| (axis.cross(*p - pts[ia]) / best).abs() <= tol)
    }

    /// Image of the focal set under `p ↦ map(p)`, weights unchanged.
    pub fn map_points(&self, map: impl Fn(Point2) -> Point2) -> Result<WeightedFocalSet> {
        WeightedFocalSet::new(self.entries.iter().map(|f| Focus::new(map(f.point), f.weight)).collect())
    }

    /// Same points with every weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: f64) -> Result<WeightedFocalSet> {
        WeightedFocalSet::new(self.entries.iter().map(|f| Focus::new(f.point, f.weight * factor)).collect())
    }

    /// `F(X) = Σ w_i d(X, F_i)`.
    pub fn eval(&self, x: Point2) -> f64 {
        self.entries.iter().map(|f| f.weight * x.distance(f.point)).sum()
    }

    /// `∇F(X)`, which is the vector `N` of the first-order optimality
    /// condition (minus the weighted sum of unit vectors towards the focuses).
    pub fn gradient(&self, x: Point2) -> Result<Vector2> {
        self.check_regular(x)?;
        Ok(self.gradient_unchecked(x))
    }

    pub(crate) fn gradient_unchecked(&self, x: Point2) -> Vector2 {
        let mut g = Vector2::ZERO;
        for f in &self.entries {
            let r = x - f.point;
            g += r * (f.weight / r.norm());
        }
        g
    }

    /// Total weight of the focuses coincident with focus `index`: its
    /// multiplicity `k_i`.
    pub fn multiplicity(&self, index: usize) -> Result<f64> {
        let at = self.focus(index)?.point;
        let tol = self.tol_singular();
        Ok(self
            .entries
            .iter()
            .filter(|f| f.point.distance(at) <= tol)
            .map(|f| f.weight)
            .sum())
    }

    fn focus(&self, index: usize) -> Result<&Focus> {
        self.entries
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, len: self.entries.len() })
    }

    /// `N_i = -Σ_{F_j ≠ F_i} w_j · unit(F_i → F_j)`, the gradient of the
    /// sum restricted to the focuses away from `F_i`.
    pub fn focal_n_vector(&self, index: usize) -> Result<Vector2> {
        let at = self.focus(index)?.point;
        let tol = self.tol_singular();
        let mut n = Vector2::ZERO;
        for f in &self.entries {
            let r = at - f.point;
            let d = r.norm();
            if d > tol {
                n += r * (f.weight / d);
            }
        }
        Ok(n)
    }

    /// One-sided directional derivative at focus `index`:
    /// `D⁺_v F(F_i) = k_i ‖v‖ + ⟨v, N_i⟩`.
    pub fn dirderiv_plus(&self, index: usize, v: Vector2) -> Result<f64> {
        if !(v.norm() > 0.0) {
            return Err(Error::InvalidInput("direction must be nonzero".into()));
        }
        let k = self.multiplicity(index)?;
        let n = self.focal_n_vector(index)?;
        Ok(k * v.norm() + v.dot(n))
    }

    pub fn hessian(&self, x: Point2) -> Result<SymMatrix2> {
        self.check_regular(x)?;
        let mut h = SymMatrix2::default();
        for f in &self.entries {
            let dx = x.x - f.point.x;
            let dy = x.y - f.point.y;
            let d = dx.hypot(dy);
            let s = f.weight / (d * d * d);
            h.a11 += s * dy * dy;
            h.a22 += s * dx * dx;
            h.a12 -= s * dx * dy;
        }
        Ok(h)
    }

    /// Curvature of the level curve through `q`: `H(t, t) / ‖∇F‖` with `t`
    /// the gradient turned by +90°. Nonnegative since `F` is convex; no
    /// absolute value is taken.
    pub fn curvature(&self, q: Point2) -> Result<f64> {
        let g = self.gradient(q)?;
        let norm = g.norm();
        if norm <= ZERO_GRADIENT_REL_TOL * self.total_weight() {
            return Err(Error::ZeroGradient { norm });
        }
        let t = g.perp() * (1.0 / norm);
        let h = self.hessian(q)?;
        Ok(h.bilinear(t, t) / norm)
    }
}

/// The level curve `{X : F(X) = c}` of a weighted focal set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyellipse {
    focal_set: WeightedFocalSet,
    level: f64,
}

impl Polyellipse {
    /// Checks that `level` is finite and not below the minimum of `F`
    /// (as certified by the Weiszfeld minimizer).
    pub fn new(focal_set: WeightedFocalSet, level: f64) -> Result<Self> {
        if !level.is_finite() {
            return Err(Error::InvalidInput(format!("level {level} is not finite")));
        }
        let minimum = fermat_weber::minimum_lower_bound(&focal_set);
        let slack = 1e-12 * focal_set.total_weight() * focal_set.scale();
        if level < minimum - slack {
            return Err(Error::LevelBelowMinimum { level, minimum });
        }
        Ok(Self { focal_set, level })
    }

    pub fn focal_set(&self) -> &WeightedFocalSet {
        &self.focal_set
    }

    pub fn level(&self) -> f64 {
        self.level
    }
}
