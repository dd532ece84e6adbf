//! Polyellipses and generalized conics.
//!
//! A polyellipse is a level curve `{X : Σ w_i d(X, F_i) = c}` of a weighted
//! sum of distances to finitely many focuses. A generalized conic replaces
//! the finite sum by the average distance to a curve. This crate evaluates
//! these functions and their derivatives, minimizes them with certified
//! optimality, traces level curves, measures Hausdorff distances, and
//! symmetrizes polyellipses around regular polygons.
//!
//! ```
//! use polyconic::{Point2, Polyellipse, TraceConfig, WeightedFocalSet, trace_level_set};
//!
//! let foci = WeightedFocalSet::unit_weights([Point2::new(-3.0, 0.0), Point2::new(3.0, 0.0)])?;
//! let ellipse = Polyellipse::new(foci, 10.0)?;
//! let curve = trace_level_set(&ellipse, &TraceConfig::default())?;
//! let v = curve.vertices()[0];
//! assert!((v.x - 5.0).abs() < 1e-10);
//! # Ok::<(), polyconic::Error>(())
//! ```

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conic;
pub mod error;
pub mod fermat_weber;
pub mod focal;
pub mod geom;
pub mod hausdorff;
pub mod quadrature;
pub mod sampling;
pub mod symmetry;
pub mod trace;

pub use conic::{
    approx_polyellipse, arclength, avg_distance, conic_convergence, equidistant_partition, min_partition_for,
    riemann_envelope, sandwich_check, GeneralizedConic, ParamCurve, PartitionMode, RiemannEnvelope,
};
pub use error::{Error, Result};
pub use fermat_weber::{minimize, weiszfeld_minimize, MinimizeResult, OptimalityCertificate};
pub use focal::{Focus, Polyellipse, WeightedFocalSet};
pub use geom::{ClosedPolyline, Point2, SymMatrix2, Vector2};
pub use hausdorff::{directed_hausdorff, hausdorff_distance, CompactSetRep, RegularPolygonRep};
pub use symmetry::{curvature_bound_report, dihedral_orbit, symmetrize_polyellipse, CurvatureBoundReport, DihedralAction};
pub use trace::{arc_point_on_axis, trace_level_set, CenterMode, TraceConfig};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/polyellipses.md")]
    mod polyellipses {}
    #[doc = include_str!("../../../book/src/fermat-weber.md")]
    mod fermat_weber {}
    #[doc = include_str!("../../../book/src/tracing.md")]
    mod tracing {}
    #[doc = include_str!("../../../book/src/hausdorff.md")]
    mod hausdorff {}
    #[doc = include_str!("../../../book/src/symmetrization.md")]
    mod symmetrization {}
    #[doc = include_str!("../../../book/src/generalized-conics.md")]
    mod generalized_conics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
