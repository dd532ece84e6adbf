//! Minimization of the weighted distance sum with optimality certificates.
//!
//! Two characterizations decide whether a point minimizes `F`:
//!
//! * away from the focuses, `X` is a minimizer iff `∇F(X) = 0`;
//! * a focus `F_i` of multiplicity `k_i` is a minimizer iff `‖N_i‖ ≤ k_i`,
//!   where `N_i` is the gradient contributed by the other focuses.
//!
//! [`weiszfeld_minimize`] runs the classical fixed-point iteration and only
//! returns once one of these certificates passes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focal::WeightedFocalSet;
use crate::geom::{Point2, Vector2};

pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Relative tolerance for reporting a collinear focal set as non-unique.
pub const COLLINEAR_REL_TOL: f64 = 1e-12;

/// `1e-10 · Σ w_i`.
pub fn default_cert_tol(fs: &WeightedFocalSet) -> f64 {
    1e-10 * fs.total_weight()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// `X` is away from every focus; residual is `‖N‖ = ‖∇F(X)‖`.
    Smooth,
    /// `X` is a focus; residual is `max(0, ‖N_i‖ - k_i)`.
    FocalPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCertificate {
    pub kind: CertificateKind,
    pub residual: f64,
    pub focus_index: Option<usize>,
    pub n_vector: Vector2,
}

impl OptimalityCertificate {
    pub fn passes(&self, cert_tol: f64) -> bool {
        self.residual <= cert_tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeResult {
    pub point: Point2,
    pub value: f64,
    pub certificate: OptimalityCertificate,
    pub iterations: usize,
    /// Set when the focuses are collinear, in which case the minimizers may
    /// form a segment and `point` is one of them.
    pub non_unique: bool,
}

pub fn check_smooth_optimality(fs: &WeightedFocalSet, x: Point2) -> Result<OptimalityCertificate> {
    let n = fs.gradient(x)?;
    Ok(OptimalityCertificate {
        kind: CertificateKind::Smooth,
        residual: n.norm(),
        focus_index: None,
        n_vector: n,
    })
}

pub fn check_focal_optimality(fs: &WeightedFocalSet, focus_index: usize) -> Result<OptimalityCertificate> {
    let k = fs.multiplicity(focus_index)?;
    let n = fs.focal_n_vector(focus_index)?;
    Ok(OptimalityCertificate {
        kind: CertificateKind::FocalPoint,
        residual: (n.norm() - k).max(0.0),
        focus_index: Some(focus_index),
        n_vector: n,
    })
}

/// Outcome of one Weiszfeld update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    /// Ordinary update `X ← Σ (w_i / d_i) F_i / Σ (w_i / d_i)`.
    Moved(Point2),
    /// The iterate sat on a non-optimal focus and was pushed off along the
    /// steepest one-sided descent direction `-N_i / ‖N_i‖`.
    LeftFocus { focus_index: usize, to: Point2 },
    /// The iterate sits on a focus that passes the focal certificate.
    AtOptimalFocus(OptimalityCertificate),
}

/// One Weiszfeld step from `x`, applying the focus rule when `x` lies within
/// `tol_singular` of a focus.
pub fn weiszfeld_step(fs: &WeightedFocalSet, x: Point2, cert_tol: f64) -> Step {
    if let Some((i, _)) = fs.coincident_focus(x) {
        let cert = check_focal_optimality(fs, i).expect("index from coincident_focus");
        if cert.passes(cert_tol) {
            return Step::AtOptimalFocus(cert);
        }
        let dir = (-cert.n_vector).normalized().expect("failing certificate has N_i != 0");
        let to = fs.entries()[i].point + dir * (10.0 * fs.tol_singular());
        return Step::LeftFocus { focus_index: i, to };
    }
    let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
    for f in fs.entries() {
        let c = f.weight / x.distance(f.point);
        sx += c * f.point.x;
        sy += c * f.point.y;
        sw += c;
    }
    Step::Moved(Point2::new(sx / sw, sy / sw))
}

/// Iterator over the Weiszfeld iterates starting at `start` (excluded).
/// Stops when an optimal focus is reached.
pub struct WeiszfeldSteps<'a> {
    fs: &'a WeightedFocalSet,
    x: Point2,
    cert_tol: f64,
    done: bool,
}

impl<'a> WeiszfeldSteps<'a> {
    pub fn new(fs: &'a WeightedFocalSet, start: Point2) -> Self {
        Self { fs, x: start, cert_tol: default_cert_tol(fs), done: false }
    }
}

impl Iterator for WeiszfeldSteps<'_> {
    type Item = Point2;

    fn next(&mut self) -> Option<Point2> {
        if self.done {
            return None;
        }
        match weiszfeld_step(self.fs, self.x, self.cert_tol) {
            Step::Moved(p) | Step::LeftFocus { to: p, .. } => {
                self.x = p;
                Some(p)
            }
            Step::AtOptimalFocus(_) => {
                self.done = true;
                None
            }
        }
    }
}

/// [`weiszfeld_minimize`] with the default tolerance and iteration cap.
pub fn minimize(fs: &WeightedFocalSet) -> Result<MinimizeResult> {
    weiszfeld_minimize(fs, default_cert_tol(fs), DEFAULT_MAX_ITER)
}

/// Minimizes `F` starting from the weighted centroid.
///
/// Every focus is first tested against the focal certificate, so a minimizer
/// located at a focus is found without iterating. Otherwise the Weiszfeld
/// map is applied until `‖∇F‖ ≤ cert_tol`; whenever the Newton step from the
/// same iterate reaches a lower value it is taken instead, which restores
/// fast convergence when the minimizer lies very close to a focus. After `max_iter` steps the best
/// iterate is returned inside [`Error::NoConvergence`].
pub fn weiszfeld_minimize(fs: &WeightedFocalSet, cert_tol: f64, max_iter: usize) -> Result<MinimizeResult> {
    if !(cert_tol > 0.0) {
        return Err(Error::InvalidInput(format!("cert_tol must be positive, got {cert_tol}")));
    }
    let non_unique = fs.len() > 1 && fs.is_collinear(COLLINEAR_REL_TOL) && fs.merge_coincident().len() > 1;
    let finish = |point: Point2, certificate: OptimalityCertificate, iterations: usize| MinimizeResult {
        point,
        value: fs.eval(point),
        certificate,
        iterations,
        non_unique,
    };

    let mut best_focal: Option<(f64, usize, OptimalityCertificate)> = None;
    for i in distinct_focus_indices(fs) {
        let cert = check_focal_optimality(fs, i)?;
        if cert.passes(cert_tol) {
            let value = fs.eval(fs.entries()[i].point);
            if best_focal.as_ref().is_none_or(|(v, _, _)| value < *v) {
                best_focal = Some((value, i, cert));
            }
        }
    }
    if let Some((_, i, cert)) = best_focal {
        return Ok(finish(fs.entries()[i].point, cert, 0));
    }

    let mut x = fs.weighted_centroid();
    let mut best = (fs.eval(x), x);
    for iteration in 0..max_iter {
        if fs.coincident_focus(x).is_none() {
            let n = fs.gradient_unchecked(x);
            if n.norm() <= cert_tol {
                let cert = OptimalityCertificate {
                    kind: CertificateKind::Smooth,
                    residual: n.norm(),
                    focus_index: None,
                    n_vector: n,
                };
                return Ok(finish(x, cert, iteration));
            }
        }
        x = match weiszfeld_step(fs, x, cert_tol) {
            Step::Moved(p) => newton_step(fs, x).filter(|q| fs.eval(*q) < fs.eval(p)).unwrap_or(p),
            Step::LeftFocus { to: p, .. } => p,
            Step::AtOptimalFocus(cert) => {
                let at = fs.entries()[cert.focus_index.expect("focal certificate")].point;
                return Ok(finish(at, cert, iteration));
            }
        };
        let value = fs.eval(x);
        if value < best.0 {
            best = (value, x);
        }
    }

    let x = best.1;
    let certificate = match fs.coincident_focus(x) {
        Some((i, _)) => check_focal_optimality(fs, i)?,
        None => check_smooth_optimality(fs, x)?,
    };
    Err(Error::NoConvergence(Box::new(finish(x, certificate, max_iter))))
}

/// `x - H⁻¹ ∇F(x)`, when the Hessian is positive definite.
fn newton_step(fs: &WeightedFocalSet, x: Point2) -> Option<Point2> {
    let h = fs.hessian(x).ok()?;
    let g = fs.gradient_unchecked(x);
    let det = h.det();
    if !(det > 1e-300 && det.is_finite()) {
        return None;
    }
    let step = Vector2::new(h.a22 * g.dx - h.a12 * g.dy, h.a11 * g.dy - h.a12 * g.dx) * (1.0 / det);
    let q = x - step;
    q.is_finite().then_some(q)
}

/// First index of each group of coincident focuses.
fn distinct_focus_indices(fs: &WeightedFocalSet) -> Vec<usize> {
    let tol = fs.tol_singular();
    let pts: Vec<Point2> = fs.points().collect();
    (0..pts.len())
        .filter(|&i| pts[..i].iter().all(|p| p.distance(pts[i]) > tol))
        .collect()
}

/// All focuses that pass the focal certificate.
pub fn optimal_focuses(fs: &WeightedFocalSet, cert_tol: f64) -> Vec<usize> {
    distinct_focus_indices(fs)
        .into_iter()
        .filter(|&i| check_focal_optimality(fs, i).is_ok_and(|c| c.passes(cert_tol)))
        .collect()
}

/// A value no larger than `min F` (up to rounding).
///
/// Uses the certified minimum when Weiszfeld converges; otherwise falls back
/// to the convexity bound `F(y) ≥ F(x) - ‖N‖·‖y - x‖` with `‖y - x‖`
/// bounded by twice the focal scale.
pub fn minimum_lower_bound(fs: &WeightedFocalSet) -> f64 {
    match minimize(fs) {
        Ok(r) => r.value,
        Err(Error::NoConvergence(r)) => {
            let slope = r.certificate.residual + r.certificate.n_vector.norm();
            r.value - 2.0 * slope * fs.scale()
        }
        Err(_) => f64::NEG_INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focal::Focus;
    use std::f64::consts::PI;

    fn set(items: &[(f64, f64, f64)]) -> WeightedFocalSet {
        WeightedFocalSet::new(items.iter().map(|&(x, y, w)| Focus::new(Point2::new(x, y), w)).collect())
            .unwrap()
    }

    #[test]
    fn equilateral_triangle_center() {
        let fs = WeightedFocalSet::unit_weights((0..3).map(|k| Point2::polar(Point2::ORIGIN, 1.0, 2.0 * PI * k as f64 / 3.0)))
            .unwrap();
        let r = minimize(&fs).unwrap();
        assert!(r.point.distance(Point2::ORIGIN) < 1e-9);
        assert_eq!(r.certificate.kind, CertificateKind::Smooth);
        assert!(!r.non_unique);
    }

    #[test]
    fn collinear_triple_is_focal() {
        let fs = set(&[(-1.0, 0.0, 1.0), (0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]);
        let r = minimize(&fs).unwrap();
        assert_eq!(r.point, Point2::ORIGIN);
        assert_eq!(r.certificate.kind, CertificateKind::FocalPoint);
        assert_eq!(r.certificate.focus_index, Some(1));
        assert_eq!(r.certificate.n_vector.norm(), 0.0);
        assert!(r.non_unique);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn smooth_certificate_examples() {
        let square = set(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 1.0), (0.0, 1.0, 1.0)]);
        let c = check_smooth_optimality(&square, Point2::new(0.5, 0.5)).unwrap();
        assert!(c.residual < 1e-15);
        let lone = set(&[(0.0, 0.0, 1.0)]);
        assert_eq!(check_smooth_optimality(&lone, Point2::new(1.0, 0.0)).unwrap().residual, 1.0);
        assert!(matches!(check_smooth_optimality(&lone, Point2::ORIGIN), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn focal_certificate_examples() {
        let line = set(&[(-1.0, 0.0, 1.0), (0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]);
        let c = check_focal_optimality(&line, 1).unwrap();
        assert_eq!((c.residual, c.kind), (0.0, CertificateKind::FocalPoint));
        let heavy = set(&[(0.0, 0.0, 3.0), (1.0, 0.0, 1.0)]);
        let c = check_focal_optimality(&heavy, 0).unwrap();
        assert_eq!(c.n_vector.norm(), 1.0);
        assert!(c.passes(0.0));
        let pair = set(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]);
        assert!(check_focal_optimality(&pair, 0).unwrap().passes(0.0));
        // An end of a collinear triple is never optimal.
        assert_eq!(check_focal_optimality(&line, 0).unwrap().residual, 1.0);
        assert!(matches!(check_focal_optimality(&line, 7), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn step_leaves_non_optimal_focus_downhill() {
        let fs = set(&[(0.0, 0.0, 1.0), (4.0, 0.0, 1.0), (0.0, 3.0, 1.0)]);
        let before = fs.eval(Point2::ORIGIN);
        match weiszfeld_step(&fs, Point2::ORIGIN, default_cert_tol(&fs)) {
            Step::LeftFocus { focus_index, to } => {
                assert_eq!(focus_index, 0);
                assert!(fs.eval(to) < before);
            }
            other => panic!("unexpected step {other:?}"),
        }
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let fs = set(&[(0.0, 0.0, 1.0)]);
        assert!(weiszfeld_minimize(&fs, 0.0, 10).is_err());
    }

    #[test]
    fn reports_no_convergence_with_best_iterate() {
        let fs = set(&[(0.0, 0.0, 1.0), (4.0, 0.0, 1.0), (0.0, 3.0, 1.0)]);
        match weiszfeld_minimize(&fs, 1e-300, 3) {
            Err(Error::NoConvergence(r)) => {
                assert_eq!(r.iterations, 3);
                assert!(!r.certificate.passes(1e-300));
                assert!(r.value <= fs.eval(fs.weighted_centroid()));
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
