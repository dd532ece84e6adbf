//! Scene files: the JSON input shared by every subcommand.

use std::fs;
use std::path::Path;

use polyconic::conic::{ParamCurve, PartitionMode, DEFAULT_QUAD_TOL};
use polyconic::trace::{DEFAULT_N_RAYS, DEFAULT_ROOT_TOL};
use polyconic::{CompactSetRep, Focus, Point2, RegularPolygonRep, WeightedFocalSet};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub focuses: Vec<FocusSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<PolygonSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    /// The two sets compared by `hausdorff`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<SetSpec>,
    #[serde(default, skip_serializing_if = "Experiment::is_default")]
    pub experiment: Experiment,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocusSpec {
    pub point: [f64; 2],
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonSpec {
    pub p: usize,
    #[serde(default)]
    pub center: [f64; 2],
    #[serde(default = "one")]
    pub circumradius: f64,
    /// Angle of the first vertex, in radians.
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
    /// `t ↦ (t, sin t)` on `[t0, t1]`.
    SineWave {
        #[serde(default)]
        t0: f64,
        #[serde(default = "tau")]
        t1: f64,
    },
    Polyline {
        points: Vec<[f64; 2]>,
        #[serde(default)]
        closed: bool,
    },
}

fn tau() -> f64 {
    std::f64::consts::TAU
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Points { points: Vec<[f64; 2]> },
    Polyline { points: Vec<[f64; 2]> },
    Circle {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Polygon(PolygonSpec),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_rays: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Random instance count for `theorem-check`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    /// Partition sizes for `conic`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m_list: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionMode>,
    /// Inclusive range of polygon sizes for the `conic` polygon-error table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon_error: Option<[usize; 2]>,
}

impl Experiment {
    fn is_default(&self) -> bool {
        *self == Self::default()
    }
}

/// Scene values after command-line overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub n_rays: usize,
    pub root_tol: f64,
    pub quad_tol: f64,
    pub seed: u64,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn point(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

fn check_finite(what: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(invalid(format!("{what}: non-finite value {v}"))),
        None => Ok(()),
    }
}

impl SceneFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(m) => invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scene: SceneFile = serde_json::from_str(text).map_err(|e| invalid(format!("scene: {e}")))?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.version != SCENE_VERSION {
            return Err(invalid(format!("unsupported scene version {} (expected {SCENE_VERSION})", self.version)));
        }
        for (i, f) in self.focuses.iter().enumerate() {
            check_finite(&format!("focus {i}"), &[f.point[0], f.point[1], f.weight])?;
        }
        check_finite("levels", &self.levels)?;
        if let Some(p) = &self.polygon {
            check_finite("polygon", &[p.center[0], p.center[1], p.circumradius, p.phase])?;
        }
        if let Some(c) = &self.curve {
            let values: Vec<f64> = match c {
                CurveSpec::Circle { center, radius } => vec![center[0], center[1], *radius],
                CurveSpec::Segment { a, b } => vec![a[0], a[1], b[0], b[1]],
                CurveSpec::SineWave { t0, t1 } => vec![*t0, *t1],
                CurveSpec::Polyline { points, .. } => points.iter().flatten().copied().collect(),
            };
            check_finite("curve", &values)?;
        }
        for (i, s) in self.sets.iter().enumerate() {
            let values: Vec<f64> = match s {
                SetSpec::Points { points } | SetSpec::Polyline { points } => points.iter().flatten().copied().collect(),
                SetSpec::Circle { center, radius } => vec![center[0], center[1], *radius],
                SetSpec::Polygon(p) => vec![p.center[0], p.center[1], p.circumradius, p.phase],
            };
            check_finite(&format!("set {i}"), &values)?;
        }
        let e = &self.experiment;
        check_finite("experiment", &[e.root_tol.unwrap_or(1.0), e.quad_tol.unwrap_or(1.0)])?;
        Ok(())
    }

    pub fn focal_set(&self) -> Result<WeightedFocalSet, CliError> {
        if self.focuses.is_empty() {
            return Err(invalid("scene has no focuses"));
        }
        Ok(WeightedFocalSet::new(self.focuses.iter().map(|f| Focus::new(point(f.point), f.weight)).collect())?)
    }

    pub fn polygon(&self) -> Result<RegularPolygonRep, CliError> {
        let p = self.polygon.as_ref().ok_or_else(|| invalid("scene has no polygon"))?;
        p.build()
    }

    pub fn curve(&self) -> Result<ParamCurve, CliError> {
        Ok(match self.curve.as_ref().ok_or_else(|| invalid("scene has no curve"))? {
            CurveSpec::Circle { center, radius } => ParamCurve::circle(point(*center), *radius)?,
            CurveSpec::Segment { a, b } => ParamCurve::segment(point(*a), point(*b))?,
            CurveSpec::SineWave { t0, t1 } => ParamCurve::sine_wave(*t0, *t1)?,
            CurveSpec::Polyline { points, closed } => {
                ParamCurve::polyline(points.iter().copied().map(point).collect(), *closed)?
            }
        })
    }

    pub fn settings(&self, overrides: &Overrides) -> Result<Settings, CliError> {
        let e = &self.experiment;
        let s = Settings {
            n_rays: overrides.rays.or(e.n_rays).unwrap_or(DEFAULT_N_RAYS),
            root_tol: overrides.tol_root.or(e.root_tol).unwrap_or(DEFAULT_ROOT_TOL),
            quad_tol: overrides.tol_quad.or(e.quad_tol).unwrap_or(DEFAULT_QUAD_TOL),
            seed: overrides.seed.or(e.seed).unwrap_or(0),
        };
        if s.n_rays < 8 {
            return Err(invalid(format!("rays must be at least 8, got {}", s.n_rays)));
        }
        if !(s.root_tol > 0.0 && s.root_tol.is_finite()) || !(s.quad_tol > 0.0 && s.quad_tol.is_finite()) {
            return Err(invalid("tolerances must be positive and finite"));
        }
        Ok(s)
    }

    pub fn from_focal_set(fs: &WeightedFocalSet) -> Self {
        Self {
            version: SCENE_VERSION,
            focuses: fs.entries().iter().map(|f| FocusSpec { point: [f.point.x, f.point.y], weight: f.weight }).collect(),
            levels: Vec::new(),
            polygon: None,
            curve: None,
            sets: Vec::new(),
            experiment: Experiment::default(),
        }
    }
}

impl PolygonSpec {
    pub fn build(&self) -> Result<RegularPolygonRep, CliError> {
        Ok(RegularPolygonRep::new(self.p, point(self.center), self.circumradius, self.phase)?)
    }
}

impl SetSpec {
    pub fn build(&self) -> Result<CompactSetRep, CliError> {
        let pts = |v: &[[f64; 2]]| v.iter().copied().map(point).collect::<Vec<_>>();
        Ok(match self {
            SetSpec::Points { points } => CompactSetRep::point_set(pts(points))?,
            SetSpec::Polyline { points } => CompactSetRep::Polyline(polyconic::ClosedPolyline::new(pts(points))?),
            SetSpec::Circle { center, radius } => CompactSetRep::circle(point(*center), *radius)?,
            SetSpec::Polygon(p) => CompactSetRep::RegularPolygon(p.build()?),
        })
    }
}

/// Values given on the command line, which take precedence over the scene.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol_root: Option<f64>,
    pub tol_quad: Option<f64>,
    pub rays: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene() {
        let s = SceneFile::parse(r#"{"version": 1, "focuses": [{"point": [0, 0]}], "levels": [2]}"#).unwrap();
        assert_eq!(s.focuses[0].weight, 1.0);
        assert_eq!(s.focal_set().unwrap().total_weight(), 1.0);
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = SceneFile::parse(r#"{"version": 1, "focus": []}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field `focus`"), "{err}");
        let err = SceneFile::parse(r#"{"version": 1, "curve": {"kind": "circle", "radius": 1, "r": 2}}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn version_checked() {
        assert!(SceneFile::parse(r#"{"version": 2}"#).is_err());
        assert!(SceneFile::parse(r#"{}"#).is_err());
    }

    #[test]
    fn overflowing_numbers_rejected() {
        assert!(SceneFile::parse(r#"{"version": 1, "levels": [1e400]}"#).is_err());
    }

    #[test]
    fn overrides_win() {
        let s = SceneFile::parse(r#"{"version": 1, "experiment": {"n_rays": 64, "seed": 5}}"#).unwrap();
        let o = Overrides { rays: Some(32), ..Default::default() };
        let set = s.settings(&o).unwrap();
        assert_eq!((set.n_rays, set.seed), (32, 5));
        assert!(s.settings(&Overrides { rays: Some(4), ..Default::default() }).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"version":1,"focuses":[{"point":[0.5,-1.0],"weight":2.0}],"levels":[3.0],
            "polygon":{"p":3,"center":[0.0,0.0],"circumradius":1.0,"phase":0.0},
            "curve":{"kind":"sine-wave","t0":0.0,"t1":6.0},
            "sets":[{"kind":"circle","center":[0.0,0.0],"radius":1.0},{"kind":"polygon","p":4}],
            "experiment":{"m_list":[8,16],"partition":"parameter"}}"#;
        let s = SceneFile::parse(text).unwrap();
        let again = SceneFile::parse(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(s, again);
    }
}
