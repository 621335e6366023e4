//! Configuration files (JSON), CSV export, JSON reports and SVG pictures.
//!
//! Floats are written with the shortest representation that reads back to
//! the same bits, so tangency residuals survive a round trip.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{Configuration, Container};
use crate::error::{Error, Result};
use crate::geom::{Point2, Tolerances};
use crate::verifier::{contact_graph, report_from_graph, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PlaneTag {
    Plane,
}

/// The `box` field: `"plane"`, `{width, height}` anchored at the origin, or
/// explicit walls where `null` means open on that side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum BoxSpec {
    Plane(PlaneTag),
    Size(SizeBox),
    Walls(WallBox),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SizeBox {
    width: f64,
    height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WallBox {
    x_min: Option<f64>,
    x_max: Option<f64>,
    y_min: Option<f64>,
    y_max: Option<f64>,
}

impl From<Container> for BoxSpec {
    fn from(c: Container) -> Self {
        if c.is_plane() {
            return BoxSpec::Plane(PlaneTag::Plane);
        }
        match (c.x_min, c.y_min, c.width(), c.height()) {
            (Some(x0), Some(y0), Some(width), Some(height)) if x0 == 0.0 && y0 == 0.0 => {
                BoxSpec::Size(SizeBox { width, height })
            }
            _ => BoxSpec::Walls(WallBox { x_min: c.x_min, x_max: c.x_max, y_min: c.y_min, y_max: c.y_max }),
        }
    }
}

impl From<BoxSpec> for Container {
    fn from(b: BoxSpec) -> Self {
        match b {
            BoxSpec::Plane(_) => Container::PLANE,
            BoxSpec::Size(s) => Container::rect(0.0, 0.0, s.width, s.height),
            BoxSpec::Walls(w) => Container { x_min: w.x_min, x_max: w.x_max, y_min: w.y_min, y_max: w.y_max },
        }
    }
}

/// Where a configuration came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub bridge_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    schema_version: u32,
    #[serde(rename = "box")]
    container: BoxSpec,
    radius: f64,
    centers: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Metadata>,
}

fn schema(path: &Path, reason: impl Into<String>) -> Error {
    Error::Schema { path: path.to_path_buf(), reason: reason.into() }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

pub fn config_to_string(config: &Configuration, metadata: Option<&Metadata>) -> String {
    let file = ConfigFile {
        schema_version: SCHEMA_VERSION,
        container: config.container.into(),
        radius: config.radius,
        centers: config.centers.clone(),
        metadata: metadata.cloned(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("configuration serializes");
    s.push('\n');
    s
}

/// Parse a configuration file body; `origin` only labels errors.
pub fn config_from_str(text: &str, origin: &Path) -> Result<(Configuration, Option<Metadata>)> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| schema(origin, e.to_string()))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => return Err(schema(origin, format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}"))),
        None => return Err(schema(origin, "missing field `schema_version`")),
    }
    let file: ConfigFile = serde_json::from_value(value).map_err(|e| schema(origin, e.to_string()))?;
    let container: Container = file.container.into();
    let walls_ok = [container.x_min, container.x_max, container.y_min, container.y_max]
        .iter()
        .flatten()
        .all(|v| v.is_finite());
    if !walls_ok {
        return Err(schema(origin, "box has a non-finite wall"));
    }
    let config = Configuration::new(file.radius, file.centers, container).map_err(|e| schema(origin, e.to_string()))?;
    Ok((config, file.metadata))
}

pub fn write_config(path: &Path, config: &Configuration, metadata: Option<&Metadata>) -> Result<()> {
    fs::write(path, config_to_string(config, metadata)).map_err(io_err(path))
}

pub fn read_config(path: &Path) -> Result<(Configuration, Option<Metadata>)> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    config_from_str(&text, path)
}

/// `radius,<r>` then `x,y` then one row per center.
pub fn csv_string(config: &Configuration) -> String {
    let mut s = format!("radius,{}\nx,y\n", config.radius);
    for p in &config.centers {
        let _ = writeln!(s, "{},{}", p.x, p.y);
    }
    s
}

pub fn write_csv(path: &Path, config: &Configuration) -> Result<()> {
    fs::write(path, csv_string(config)).map_err(io_err(path))
}

/// Pretty JSON in declaration order of the report's fields.
pub fn report_to_string<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    fs::write(path, report_to_string(report)).map_err(io_err(path))
}

/// Resolve `name` against an optional output directory.
pub fn output_path(dir: Option<&Path>, name: &Path) -> PathBuf {
    match dir {
        Some(d) if name.is_relative() => d.join(name),
        _ => name.to_path_buf(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Width of the picture in pixels; the height follows the aspect ratio.
    pub width_px: f64,
    /// Draw a segment between the centers of touching discs.
    pub contacts: bool,
    /// Colour discs by verdict: jammed, movable or rattler.
    pub jamming: bool,
    pub tol: Tolerances,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { width_px: 600.0, contacts: false, jamming: false, tol: Tolerances::default() }
    }
}

const FILL_PLAIN: &str = "#d9d9d9";
const FILL_JAMMED: &str = "#9ecae1";
const FILL_MOVABLE: &str = "#fc9272";
const FILL_RATTLER: &str = "#fdd49e";

fn view_bounds(config: &Configuration) -> (Point2, Point2) {
    let c = config.container;
    let (dlo, dhi) = config.disc_bounds().unwrap_or((Point2::ORIGIN, Point2::new(1.0, 1.0)));
    let lo = Point2::new(c.x_min.unwrap_or(dlo.x), c.y_min.unwrap_or(dlo.y));
    let hi = Point2::new(c.x_max.unwrap_or(dhi.x), c.y_max.unwrap_or(dhi.y));
    let pad = 0.02 * (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    (lo - Point2::new(pad, pad), hi + Point2::new(pad, pad))
}

/// SVG 1.1 picture with one `<circle>` per disc. The y-axis points up.
/// Overlays that need a contact graph are skipped for invalid
/// configurations.
pub fn render_svg(config: &Configuration, opts: &SvgOptions) -> String {
    let (lo, hi) = view_bounds(config);
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let scale = opts.width_px / w;
    let px = |p: Point2| ((p.x - lo.x) * scale, (hi.y - p.y) * scale);
    let num = |v: f64| format!("{v:.4}");

    let graph = if opts.contacts || opts.jamming { contact_graph(config, &opts.tol).ok() } else { None };
    let verdicts: Option<Vec<Verdict>> =
        if opts.jamming { graph.as_ref().map(|g| report_from_graph(g, &opts.tol).verdicts) } else { None };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w * scale),
        num(h * scale),
        num(w * scale),
        num(h * scale)
    );
    let c = config.container;
    if !c.is_plane() {
        let x0 = c.x_min.unwrap_or(lo.x);
        let x1 = c.x_max.unwrap_or(hi.x);
        let y0 = c.y_min.unwrap_or(lo.y);
        let y1 = c.y_max.unwrap_or(hi.y);
        let (ax, ay) = px(Point2::new(x0, y1));
        let _ = writeln!(
            s,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#404040" stroke-width="1"/>"##,
            num(ax),
            num(ay),
            num((x1 - x0) * scale),
            num((y1 - y0) * scale)
        );
    }
    let _ = writeln!(s, r##"<g stroke="#303030" stroke-width="0.5">"##);
    for (i, &p) in config.centers.iter().enumerate() {
        let fill = match verdicts.as_ref().map(|v| &v[i]) {
            None => FILL_PLAIN,
            Some(Verdict::Jammed) => FILL_JAMMED,
            Some(Verdict::Movable { .. }) => FILL_MOVABLE,
            Some(Verdict::Rattler) => FILL_RATTLER,
        };
        let (x, y) = px(p);
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#, num(x), num(y), num(config.radius * scale));
    }
    let _ = writeln!(s, "</g>");
    if opts.contacts {
        if let Some(g) = &graph {
            let _ = writeln!(s, r##"<g stroke="#c0392b" stroke-width="1">"##);
            for (i, j) in g.disc_edges() {
                let (x1, y1) = px(config.centers[i]);
                let (x2, y2) = px(config.centers[j]);
                let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(x1), num(y1), num(x2), num(y2));
            }
            let _ = writeln!(s, "</g>");
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}
