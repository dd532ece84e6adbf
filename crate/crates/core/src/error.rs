use thiserror::Error;

use crate::fermat_weber::MinimizeResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("focal set is empty")]
    EmptyFocalSet,

    #[error("focus {index} has weight {weight}; weights must be positive and finite")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("point lies within {distance:e} of focus {focus_index}; derivative is one-sided there")]
    SingularPoint { focus_index: usize, distance: f64 },

    #[error("gradient vanishes (norm {norm:e}); the point is the minimizer and curvature is undefined")]
    ZeroGradient { norm: f64 },

    #[error("focus index {index} out of range for a set of {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Weiszfeld iteration did not certify after {} iterations (residual {:e})",
        .0.iterations, .0.certificate.residual)]
    NoConvergence(Box<MinimizeResult>),

    #[error("level {level} is below the minimum {minimum} of the distance sum")]
    LevelBelowMinimum { level: f64, minimum: f64 },

    #[error("level {level} equals the minimum {minimum}; the level set is degenerate")]
    LevelAtMinimum { level: f64, minimum: f64 },

    #[error("could not bracket the level along direction {angle} rad")]
    BracketFailure { angle: f64 },

    #[error("focal set is not invariant under the dihedral action: {0}")]
    NotSymmetric(String),

    #[error("vertex {vertex} has value {value} above the level {level}; curve does not enclose the polygon")]
    NotCircumscribed { vertex: usize, value: f64, level: f64 },

    #[error("traced sample at radius {radius} leaves the ring [{inner}, {outer}]")]
    RingViolation { radius: f64, inner: f64, outer: f64 },

    #[error("point ({x}, {y}) is not a focus")]
    NotAFocus { x: f64, y: f64 },

    #[error("points are collinear; no circle passes through them")]
    CollinearPoints,

    #[error("edge-midpoint arc point lies within {distance:e} of a focus; excise it first")]
    SingularQ { distance: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureFailure { tol: f64, estimate: f64 },
}
