//! Atomic file output, CSV and SVG emission.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use polyconic::Point2;
use serde::Serialize;

use crate::error::CliError;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes into an output directory, each file through a temporary file in
/// the same directory followed by a rename.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::Io(format!("cannot create {}: {e}", root.display())))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.root.join(name);
        let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root).map_err(io)?;
        tmp.write_all(bytes).map_err(io)?;
        tmp.persist(&path).map_err(|e| io(e.error))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_csv(&mut self, name: &str, csv: Csv) -> Result<(), CliError> {
        let bytes = csv.finish()?;
        self.write(name, &bytes)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// File names written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }
}

pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).map_err(csv_err)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(csv_err)
    }

    fn finish(self) -> Result<Vec<u8>, CliError> {
        self.writer.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Reads the `x` and `y` columns of a CSV file with a header row.
pub fn read_xy_csv(path: &Path) -> Result<Vec<Point2>, CliError> {
    let bad = |m: String| CliError::Validation(format!("{}: {m}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| header.iter().position(|h| h.trim() == name).ok_or_else(|| bad(format!("no `{name}` column")));
    let (ix, iy) = (col("x")?, col("y")?);
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| -> Result<f64, CliError> {
            let text = record.get(i).unwrap_or("").trim();
            text.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("row {}: `{text}` is not a finite number", line + 1)))
        };
        points.push(Point2::new(field(ix)?, field(iy)?));
    }
    if points.is_empty() {
        return Err(bad("no rows".into()));
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dotted,
    Thin,
}

enum Item {
    Path { points: Vec<Point2>, closed: bool, stroke: Stroke, color: &'static str },
    Dot { at: Point2 },
}

pub const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// An SVG drawing in scene coordinates. The view box is the bounding box of
/// everything drawn, padded by 5% of its larger side, with `y` pointing up.
#[derive(Default)]
pub struct Svg {
    items: Vec<Item>,
}

impl Svg {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn path(&mut self, points: &[Point2], closed: bool, stroke: Stroke, color: &'static str) {
        self.items.push(Item::Path { points: points.to_vec(), closed, stroke, color });
    }

    pub fn dots(&mut self, points: impl IntoIterator<Item = Point2>) {
        self.items.extend(points.into_iter().map(|at| Item::Dot { at }));
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: &Point2| {
            b = (b.0.min(p.x), b.1.min(p.y), b.2.max(p.x), b.3.max(p.y));
        };
        for item in &self.items {
            match item {
                Item::Path { points, .. } => points.iter().for_each(&mut add),
                Item::Dot { at } => add(at),
            }
        }
        if b.0 > b.2 {
            return (-1.0, -1.0, 1.0, 1.0);
        }
        b
    }

    pub fn render(&self) -> String {
        let (x0, y0, x1, y1) = self.bounds();
        let side = (x1 - x0).max(y1 - y0).max(1e-9);
        let pad = 0.05 * side;
        let (vx, vy, vw, vh) = (x0 - pad, -(y1 + pad), x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
        let width = 0.004 * side;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
            f(vx),
            f(vy),
            f(vw),
            f(vh),
            (800.0 * vh / vw).round()
        );
        for item in &self.items {
            match item {
                Item::Path { points, closed, stroke, color } => {
                    let coords: Vec<String> = points.iter().map(|p| format!("{},{}", f(p.x), f(-p.y))).collect();
                    let tag = if *closed { "polygon" } else { "polyline" };
                    let (w, dash) = match stroke {
                        Stroke::Solid => (width, String::new()),
                        Stroke::Thin => (0.5 * width, String::new()),
                        Stroke::Dotted => (1.5 * width, format!(r#" stroke-dasharray="{} {}" stroke-linecap="round""#, f(0.0), f(3.0 * width))),
                    };
                    let _ = writeln!(
                        out,
                        r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="{}"{dash}/>"#,
                        coords.join(" "),
                        f(w)
                    );
                }
                Item::Dot { at } => {
                    let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#, f(at.x), f(-at.y), f(3.0 * width));
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}
