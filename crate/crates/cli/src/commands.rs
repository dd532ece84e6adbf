//! Subcommand implementations. Each writes its artifacts and a `report.json`
//! into the output directory, then returns whether every check passed.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::time::Instant;

use polyconic::conic::{conic_convergence, GeneralizedConic, PartitionMode};
use polyconic::fermat_weber::{default_cert_tol, minimize, CertificateKind};
use polyconic::hausdorff::{directed_hausdorff, hausdorff_witness, HausdorffWitness};
use polyconic::sampling::{random_invariant_focal_set, rng_from_seed};
use polyconic::symmetry::{check_circumscribed, curvature_bound_report};
use polyconic::trace::trace_center;
use polyconic::{
    symmetrize_polyellipse, trace_level_set, CenterMode, ClosedPolyline, CompactSetRep, CurvatureBoundReport, Point2,
    Polyellipse, RegularPolygonRep, TraceConfig, WeightedFocalSet,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{num, read_xy_csv, Csv, OutDir, Stroke, Svg, PALETTE};
use crate::scene::{PolygonSpec, SceneFile, Settings};

/// Tolerance of the symmetrization non-expansiveness check.
pub const NON_EXPANSIVE_SLACK: f64 = 1e-6;

/// Default partition sizes for `conic`.
pub const DEFAULT_M_LIST: [usize; 4] = [8, 16, 32, 64];

/// Default random instance count for `theorem-check`.
pub const DEFAULT_INSTANCES: usize = 200;

pub struct Context {
    pub scene: Option<SceneFile>,
    pub scene_path: Option<String>,
    pub settings: Settings,
    pub out: OutDir,
    pub svg: bool,
    pub started: Option<Instant>,
}

#[derive(Serialize)]
struct RunReport<'a, S: Serialize> {
    command: &'a str,
    scene: Option<&'a str>,
    settings: Settings,
    outputs: Vec<String>,
    pass: bool,
    summary: S,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_seconds: Option<f64>,
}

pub struct Outcome {
    pub pass: bool,
    pub message: String,
}

impl Context {
    fn scene(&self) -> Result<&SceneFile, CliError> {
        self.scene.as_ref().ok_or_else(|| CliError::Validation("--scene is required".into()))
    }

    fn finish<S: Serialize>(&mut self, command: &str, pass: bool, summary: S, message: String) -> Result<Outcome, CliError> {
        let mut outputs = self.out.written().to_vec();
        outputs.push("report.json".into());
        let report = RunReport {
            command,
            scene: self.scene_path.as_deref(),
            settings: self.settings,
            outputs,
            pass,
            summary,
            wall_clock_seconds: self.started.map(|t| t.elapsed().as_secs_f64()),
        };
        self.out.write_json("report.json", &report)?;
        Ok(Outcome { pass, message })
    }

    fn trace_config(&self, center: Point2) -> TraceConfig {
        TraceConfig::default().with_rays(self.settings.n_rays).with_root_tol(self.settings.root_tol).with_center(center)
    }
}

fn angle(center: Point2, x: Point2) -> f64 {
    let v = x - center;
    v.dy.atan2(v.dx).rem_euclid(TAU)
}

/// `theta,x,y,F` rows for the vertices of a traced curve.
fn curve_csv(line: &ClosedPolyline, center: Point2, value: impl Fn(Point2) -> Result<f64, CliError>) -> Result<Csv, CliError> {
    let mut csv = Csv::new(&["theta", "x", "y", "F"])?;
    for v in line.vertices() {
        csv.row([num(angle(center, *v)), num(v.x), num(v.y), num(value(*v)?)])?;
    }
    Ok(csv)
}

#[derive(Serialize)]
struct LevelSummary {
    level: f64,
    file: String,
    vertices: usize,
    perimeter: f64,
    max_residual: f64,
}

#[derive(Serialize)]
struct TraceSummary {
    center: Point2,
    minimum: f64,
    levels: Vec<LevelSummary>,
}

pub fn trace(ctx: &mut Context) -> Result<Outcome, CliError> {
    let scene = ctx.scene()?.clone();
    let fs = scene.focal_set()?;
    if scene.levels.is_empty() {
        return Err(CliError::Validation("scene has no levels".into()));
    }
    let center = trace_center(&fs, CenterMode::Minimizer);
    let cfg = ctx.trace_config(center);
    let mut svg = Svg::new();
    let mut levels = Vec::new();
    for (i, &level) in scene.levels.iter().enumerate() {
        let what = format!("level {i} ({level})");
        let pe = Polyellipse::new(fs.clone(), level).map_err(|e| CliError::from(e).context(&what))?;
        let line = trace_level_set(&pe, &cfg).map_err(|e| CliError::from(e).context(&what))?;
        let file = format!("level_{i}.csv");
        ctx.out.write_csv(&file, curve_csv(&line, center, |x| Ok(fs.eval(x)))?)?;
        svg.path(line.vertices(), true, Stroke::Solid, PALETTE[i % PALETTE.len()]);
        levels.push(LevelSummary {
            level,
            file,
            vertices: line.len(),
            perimeter: line.perimeter(),
            max_residual: line.vertices().iter().map(|x| (fs.eval(*x) - level).abs()).fold(0.0, f64::max),
        });
    }
    svg.dots(fs.points());
    if ctx.svg {
        ctx.out.write("trace.svg", svg.render().as_bytes())?;
    }
    let message = format!("traced {} level curves", levels.len());
    let summary = TraceSummary { center, minimum: fs.eval(center), levels };
    ctx.finish("trace", true, summary, message)
}

#[derive(Serialize)]
struct MinimizeSummary {
    point: Point2,
    value: f64,
    certificate_kind: CertificateKind,
    certificate_residual: f64,
    focus_index: Option<usize>,
    n_vector: [f64; 2],
    cert_tol: f64,
    iterations: usize,
    non_unique: bool,
}

pub fn minimize_cmd(ctx: &mut Context) -> Result<Outcome, CliError> {
    let fs = ctx.scene()?.focal_set()?;
    let r = minimize(&fs)?;
    let cert_tol = default_cert_tol(&fs);
    let pass = r.certificate.passes(cert_tol);
    let message = format!("minimum {} at ({}, {})", r.value, r.point.x, r.point.y);
    let summary = MinimizeSummary {
        point: r.point,
        value: r.value,
        certificate_kind: r.certificate.kind,
        certificate_residual: r.certificate.residual,
        focus_index: r.certificate.focus_index,
        n_vector: [r.certificate.n_vector.dx, r.certificate.n_vector.dy],
        cert_tol,
        iterations: r.iterations,
        non_unique: r.non_unique,
    };
    ctx.finish("minimize", pass, summary, message)
}

/// A compact set described by a file: a CSV with `x` and `y` columns is a
/// closed polyline (a point set below three rows); a scene contributes its
/// first set, otherwise its traced level curve or generalized conic.
pub fn load_set(path: &Path, settings: &Settings) -> Result<CompactSetRep, CliError> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if !is_json {
        let points = read_xy_csv(path)?;
        return Ok(if points.len() < 3 {
            CompactSetRep::point_set(points)?
        } else {
            CompactSetRep::Polyline(ClosedPolyline::new(points)?)
        });
    }
    let scene = SceneFile::load(path)?;
    scene_set(&scene, settings).map_err(|e| e.context(path.display()))
}

fn scene_set(scene: &SceneFile, settings: &Settings) -> Result<CompactSetRep, CliError> {
    if let Some(s) = scene.sets.first() {
        return s.build();
    }
    let level = *scene.levels.first().ok_or_else(|| CliError::Validation("scene has no sets and no level".into()))?;
    if scene.curve.is_some() {
        let conic = GeneralizedConic::new(scene.curve()?, level, settings.quad_tol)?;
        return Ok(CompactSetRep::Polyline(conic.trace(settings.n_rays, settings.root_tol)?));
    }
    let fs = scene.focal_set()?;
    let center = trace_center(&fs, CenterMode::Minimizer);
    let cfg = TraceConfig::default().with_rays(settings.n_rays).with_root_tol(settings.root_tol).with_center(center);
    Ok(CompactSetRep::Polyline(trace_level_set(&Polyellipse::new(fs, level)?, &cfg)?))
}

#[derive(Serialize)]
struct HausdorffSummary {
    distance: f64,
    directed_ab: f64,
    directed_ba: f64,
    witness: HausdorffWitness,
}

pub fn hausdorff(ctx: &mut Context, files: &[std::path::PathBuf]) -> Result<Outcome, CliError> {
    let (a, b) = match files {
        [] => {
            let scene = ctx.scene()?;
            if scene.sets.len() != 2 {
                return Err(CliError::Validation(format!("hausdorff needs exactly 2 sets, scene has {}", scene.sets.len())));
            }
            (scene.sets[0].build()?, scene.sets[1].build()?)
        }
        [fa, fb] => (load_set(fa, &ctx.settings)?, load_set(fb, &ctx.settings)?),
        _ => return Err(CliError::Validation(format!("hausdorff takes 0 or 2 files, got {}", files.len()))),
    };
    let witness = hausdorff_witness(&a, &b);
    let summary = HausdorffSummary {
        distance: witness.distance,
        directed_ab: directed_hausdorff(&a, &b),
        directed_ba: directed_hausdorff(&b, &a),
        witness,
    };
    let message = format!("hausdorff distance {}", witness.distance);
    ctx.finish("hausdorff", true, summary, message)
}

#[derive(Serialize)]
struct SymmetrizeSummary {
    level: f64,
    symmetrized_level: f64,
    focuses: usize,
    vertex_values: Vec<f64>,
    hausdorff_before: f64,
    hausdorff_after: f64,
    non_expansive: bool,
}

pub fn symmetrize(ctx: &mut Context) -> Result<Outcome, CliError> {
    let scene = ctx.scene()?.clone();
    let fs = scene.focal_set()?;
    let poly = scene.polygon()?;
    let level = match scene.levels.as_slice() {
        [c] => *c,
        other => return Err(CliError::Validation(format!("symmetrize needs exactly 1 level, scene has {}", other.len()))),
    };
    let pe = Polyellipse::new(fs, level)?;
    check_circumscribed(&pe, &poly)?;
    let sym = symmetrize_polyellipse(&pe, &poly)?;
    let g = sym.focal_set();

    let poly_set = CompactSetRep::RegularPolygon(poly);
    let before = trace_level_set(&pe, &ctx.trace_config(trace_center(pe.focal_set(), CenterMode::Minimizer)))?;
    let after = trace_level_set(&sym, &ctx.trace_config(poly.center))?;
    let hausdorff_before = polyconic::hausdorff_distance(&poly_set, &CompactSetRep::Polyline(before.clone()));
    let hausdorff_after = polyconic::hausdorff_distance(&poly_set, &CompactSetRep::Polyline(after.clone()));
    let non_expansive = hausdorff_after <= hausdorff_before + NON_EXPANSIVE_SLACK;

    let mut out_scene = SceneFile::from_focal_set(g);
    out_scene.levels = vec![sym.level()];
    out_scene.polygon = scene.polygon;
    out_scene.experiment = scene.experiment.clone();
    ctx.out.write_json("symmetrized.json", &out_scene)?;
    if ctx.svg {
        let mut svg = Svg::new();
        svg.path(&poly.vertices(), true, Stroke::Thin, "#000000");
        svg.path(before.vertices(), true, Stroke::Dotted, PALETTE[0]);
        svg.path(after.vertices(), true, Stroke::Solid, PALETTE[1]);
        svg.dots(g.points());
        ctx.out.write("symmetrize.svg", svg.render().as_bytes())?;
    }
    let summary = SymmetrizeSummary {
        level,
        symmetrized_level: sym.level(),
        focuses: g.len(),
        vertex_values: poly.vertices().iter().map(|v| g.eval(*v)).collect(),
        hausdorff_before,
        hausdorff_after,
        non_expansive,
    };
    let message = format!(
        "{} focuses, level {}; h(P, E) = {hausdorff_before}, h(P, E_sym) = {hausdorff_after}",
        g.len(),
        sym.level()
    );
    ctx.finish("symmetrize", non_expansive, summary, message)
}

#[derive(Serialize)]
struct TheoremSummary {
    p: usize,
    instances: usize,
    reports: usize,
    valid: usize,
    kappa_violations: usize,
    d1f_violations: usize,
    d2d2f_violations: usize,
    min_kappa_over_floor: Option<f64>,
}

const REPORT_COLUMNS: [&str; 16] = [
    "instance",
    "status",
    "p",
    "level",
    "kappa_measured",
    "kappa_floor",
    "d1f_measured",
    "d1f_upper",
    "d2d2f_measured",
    "d2d2f_lower",
    "q_x",
    "q_y",
    "q_in_unit_disk",
    "q_clear_of_focuses",
    "valid",
    "holds",
];

fn report_row(i: usize, r: &Result<CurvatureBoundReport, CliError>) -> Vec<String> {
    match r {
        Ok(r) => vec![
            i.to_string(),
            "ok".into(),
            r.p.to_string(),
            num(r.level),
            num(r.kappa_measured),
            num(r.kappa_floor),
            num(r.d1f_measured),
            num(r.d1f_upper),
            num(r.d2d2f_measured),
            num(r.d2d2f_lower),
            num(r.q_point.x),
            num(r.q_point.y),
            r.q_in_unit_disk.to_string(),
            r.q_clear_of_focuses.to_string(),
            r.is_valid().to_string(),
            r.holds().to_string(),
        ],
        Err(e) => {
            let mut row = vec![i.to_string(), e.to_string()];
            row.resize(REPORT_COLUMNS.len(), String::new());
            row
        }
    }
}

pub fn theorem_check(ctx: &mut Context) -> Result<Outcome, CliError> {
    let scene = ctx.scene()?.clone();
    let spec = scene.polygon.unwrap_or(PolygonSpec { p: 3, center: [0.0, 0.0], circumradius: 1.0, phase: 0.0 });
    let poly = spec.build()?;
    let instances = scene.experiment.instances.unwrap_or(DEFAULT_INSTANCES);
    let mut rng = rng_from_seed(ctx.settings.seed);
    let sets: Vec<WeightedFocalSet> =
        (0..instances).map(|_| random_invariant_focal_set(&mut rng, &poly)).collect::<Result<_, _>>()?;
    let reports: Vec<Result<CurvatureBoundReport, CliError>> =
        sets.par_iter().map(|g| curvature_bound_report(g, &poly).map_err(CliError::from)).collect();

    let mut csv = Csv::new(&REPORT_COLUMNS)?;
    for (i, r) in reports.iter().enumerate() {
        csv.row(report_row(i, r))?;
    }
    ctx.out.write_csv("theorem_check.csv", csv)?;

    let ok: Vec<&CurvatureBoundReport> = reports.iter().filter_map(|r| r.as_ref().ok()).collect();
    let valid: Vec<&&CurvatureBoundReport> = ok.iter().filter(|r| r.is_valid()).collect();
    let summary = TheoremSummary {
        p: poly.p,
        instances,
        reports: ok.len(),
        valid: valid.len(),
        kappa_violations: valid.iter().filter(|r| !r.kappa_ok()).count(),
        d1f_violations: valid.iter().filter(|r| !r.d1f_ok()).count(),
        d2d2f_violations: valid.iter().filter(|r| !r.d2d2f_ok()).count(),
        min_kappa_over_floor: valid.iter().map(|r| r.kappa_measured / r.kappa_floor).reduce(f64::min),
    };
    let pass = summary.kappa_violations == 0;
    let message = format!(
        "p = {}: {} valid of {} reports, {} curvature floor violations",
        poly.p, summary.valid, instances, summary.kappa_violations
    );
    ctx.finish("theorem-check", pass, summary, message)
}

#[derive(Serialize)]
struct ConicSummary {
    level: f64,
    length: f64,
    center: Point2,
    partition: PartitionMode,
    rows: Vec<ConicRow>,
    hausdorff_decreasing: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    polygon_error: Vec<PolygonErrorRow>,
}

#[derive(Serialize)]
struct ConicRow {
    m: usize,
    uniform_bound: f64,
    max_deviation: f64,
    hausdorff: f64,
    within_bound: bool,
}

#[derive(Serialize)]
struct PolygonErrorRow {
    p: usize,
    formula: f64,
    polygon_to_curve: f64,
    polygon_to_polyellipse: f64,
    bound: f64,
    ok: bool,
}

pub fn conic(ctx: &mut Context) -> Result<Outcome, CliError> {
    let scene = ctx.scene()?.clone();
    let curve = scene.curve()?;
    let level = match scene.levels.as_slice() {
        [c] => *c,
        other => return Err(CliError::Validation(format!("conic needs exactly 1 level, scene has {}", other.len()))),
    };
    let e = &scene.experiment;
    let m_list = if e.m_list.is_empty() { DEFAULT_M_LIST.to_vec() } else { e.m_list.clone() };
    let mode = e.partition.unwrap_or_default();
    let tol = ctx.settings.quad_tol;
    let n_rays = ctx.settings.n_rays;

    let what = format!("{} conic at level {level}", curve.label());
    let conic = GeneralizedConic::new(curve, level, tol).map_err(|e| CliError::from(e).context(&what))?;
    let study = conic_convergence(&conic, &m_list, mode, n_rays).map_err(|e| CliError::from(e).context(&what))?;
    let center = conic.center();
    let value = |x| conic.avg_distance(x).map_err(|e| CliError::from(e).context(&what));
    ctx.out.write_csv("conic.csv", curve_csv(&study.conic_trace, center, value)?)?;

    let mut rows = Vec::new();
    let mut table = Csv::new(&["m", "uniform_bound", "max_deviation", "hausdorff", "within_bound"])?;
    for ((row, fs), line) in study.rows.iter().zip(&study.focal_sets).zip(&study.traces) {
        // The uniform bound is proven for arclength partitions only.
        let within_bound = mode != PartitionMode::Arclength || row.max_deviation <= row.uniform_bound + 2.0 * tol;
        table.row([
            row.m.to_string(),
            num(row.uniform_bound),
            num(row.max_deviation),
            num(row.hausdorff),
            within_bound.to_string(),
        ])?;
        ctx.out.write_csv(&format!("polyellipse_m{}.csv", row.m), curve_csv(line, center, |x| Ok(fs.eval(x)))?)?;
        if ctx.svg {
            let mut svg = Svg::new();
            let (t0, t1) = conic.curve().domain();
            let gamma: Vec<Point2> = (0..=256).map(|k| conic.curve().position(t0 + (t1 - t0) * k as f64 / 256.0)).collect();
            svg.path(&gamma, false, Stroke::Thin, "#7f7f7f");
            svg.path(line.vertices(), true, Stroke::Solid, PALETTE[0]);
            svg.path(study.conic_trace.vertices(), true, Stroke::Dotted, PALETTE[1]);
            svg.dots(fs.points());
            ctx.out.write(&format!("conic_m{}.svg", row.m), svg.render().as_bytes())?;
        }
        rows.push(ConicRow {
            m: row.m,
            uniform_bound: row.uniform_bound,
            max_deviation: row.max_deviation,
            hausdorff: row.hausdorff,
            within_bound,
        });
    }
    ctx.out.write_csv("convergence.csv", table)?;

    let polygon_error = match e.polygon_error {
        Some(range) => polygon_error_table(ctx, &scene, &study.traces, &study.rows, range)?,
        None => Vec::new(),
    };
    let hausdorff_decreasing = rows.windows(2).all(|w| w[1].hausdorff < w[0].hausdorff);
    let pass = rows.iter().all(|r| r.within_bound) && polygon_error.iter().all(|r| r.ok);
    let message = format!(
        "{} partitions, h from {} to {}",
        rows.len(),
        rows.first().map_or(f64::NAN, |r| r.hausdorff),
        rows.last().map_or(f64::NAN, |r| r.hausdorff)
    );
    let summary = ConicSummary {
        level,
        length: conic.length(),
        center,
        partition: mode,
        rows,
        hausdorff_decreasing,
        polygon_error,
    };
    ctx.finish("conic", pass, summary, message)
}

/// For a circle `Γ` of radius `r`: `h(P, Γ) = r(1 - cos(π/p))` for the
/// inscribed p-gon, and `h(P, E_M)` is at most that plus the distance from
/// `E_M` to `Γ`, measured on the largest `M` and padded by the chord sag of
/// the traced circle.
fn polygon_error_table(
    ctx: &mut Context,
    scene: &SceneFile,
    traces: &[ClosedPolyline],
    rows: &[polyconic::conic::ConvergenceRow],
    [p_min, p_max]: [usize; 2],
) -> Result<Vec<PolygonErrorRow>, CliError> {
    let Some(crate::scene::CurveSpec::Circle { center, radius }) = scene.curve else {
        return Err(CliError::Validation("polygon_error needs a circle curve".into()));
    };
    if p_min < 3 || p_max < p_min {
        return Err(CliError::Validation(format!("polygon_error range [{p_min}, {p_max}] is invalid")));
    }
    let (Some(last), Some(row)) = (traces.last(), rows.last()) else {
        return Err(CliError::Validation("polygon_error needs a non-empty m_list".into()));
    };
    let center = Point2::new(center[0], center[1]);
    let circle = CompactSetRep::circle(center, radius)?;
    let polyellipse = CompactSetRep::Polyline(last.clone());
    let band = row.hausdorff + radius * (1.0 - (PI / ctx.settings.n_rays as f64).cos()) + 1e-9 * radius;
    let mut csv = Csv::new(&["p", "formula", "polygon_to_curve", "polygon_to_polyellipse", "bound", "ok"])?;
    let mut table = Vec::new();
    for p in p_min..=p_max {
        let poly = CompactSetRep::RegularPolygon(RegularPolygonRep::new(p, center, radius, 0.0)?);
        let formula = radius * (1.0 - (PI / p as f64).cos());
        let polygon_to_curve = polyconic::hausdorff_distance(&poly, &circle);
        let polygon_to_polyellipse = polyconic::hausdorff_distance(&poly, &polyellipse);
        let bound = formula + band;
        let ok = polygon_to_polyellipse <= bound;
        csv.row([
            p.to_string(),
            num(formula),
            num(polygon_to_curve),
            num(polygon_to_polyellipse),
            num(bound),
            ok.to_string(),
        ])?;
        table.push(PolygonErrorRow { p, formula, polygon_to_curve, polygon_to_polyellipse, bound, ok });
    }
    ctx.out.write_csv("polygon_error.csv", csv)?;
    Ok(table)
}
