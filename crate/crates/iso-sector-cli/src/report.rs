//! Output writers: CSV tables, schema-tagged JSON and SVG plots.
//!
//! Every float in CSV and JSON is written with 17 significant digits in
//! scientific notation, so identical inputs give identical bytes and the
//! values parse back exactly.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA: &str = "iso-sector/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV table with a fixed header; cells are written as given.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `{"schema": ..., "command": ..., <fields>}` rendered with fixed float
/// formatting and sorted keys.
pub fn json_document(command: &str, fields: Vec<(&str, Value)>) -> String {
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(SCHEMA.into()));
    map.insert("command".into(), Value::String(command.into()));
    for (k, v) in fields {
        map.insert(k.into(), v);
    }
    let mut out = String::new();
    write_json(&Value::Object(map), 0, &mut out);
    out.push('\n');
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Domain(format!("serialization failed: {e}")))
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&num(n.as_f64().unwrap()));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            if items.iter().all(|x| matches!(x, Value::Number(_))) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_json(x, indent + 1, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_json(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&close);
            out.push('}');
        }
    }
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

pub fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("--format {} is not available for {command}", format.name()))
}

/// One polyline in plot coordinates.
pub struct Series<'a> {
    pub points: Vec<(f64, f64)>,
    pub stroke: &'a str,
    pub label: String,
}

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    size: f64,
}

impl Frame {
    /// Fits the bounding box of `pts` into a square canvas with a margin,
    /// centring the shorter side.
    fn fit(pts: impl Iterator<Item = (f64, f64)>, size: f64) -> Self {
        let (mut xmin, mut xmax, mut ymin, mut ymax) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        let span = (xmax - xmin).max(ymax - ymin).max(1e-12);
        let margin = 0.06 * size;
        let scale = (size - 2.0 * margin) / span;
        Frame {
            x0: xmin - margin / scale - 0.5 * (span - (xmax - xmin)),
            y0: ymin - margin / scale - 0.5 * (span - (ymax - ymin)),
            scale,
            size,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.x0) * self.scale, self.size - (y - self.y0) * self.scale)
    }
}

fn polyline(frame: &Frame, pts: &[(f64, f64)], stroke: &str, width: f64) -> String {
    let mut coords = String::new();
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = frame.map(p);
        if i > 0 {
            coords.push(' ');
        }
        let _ = write!(coords, "{x:.4},{y:.4}");
    }
    format!("  <polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\" points=\"{coords}\"/>\n")
}

fn svg_open(size: f64, title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n  <title>{}</title>\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        escape(title)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Curves given in polar form (θ, r), drawn in the plane with the sector
/// wedge 0 ≤ θ ≤ θ₀ outlined.
pub fn sector_svg(title: &str, theta0: f64, curves: &[Series]) -> String {
    let reach = curves.iter().flat_map(|c| c.points.iter().map(|p| p.1)).fold(0.0f64, f64::max).max(1e-12) * 1.15;
    let cart = |(t, r): (f64, f64)| (r * t.cos(), r * t.sin());
    let wedge_arc: Vec<(f64, f64)> = (0..=256).map(|i| cart((theta0 * i as f64 / 256.0, reach))).collect();
    let mut extent: Vec<(f64, f64)> = wedge_arc.clone();
    extent.push((0.0, 0.0));
    let frame = Frame::fit(extent.iter().copied(), 640.0);
    let mut out = svg_open(640.0, title);
    let edges = vec![cart((theta0, reach)), (0.0, 0.0), cart((0.0, reach))];
    out.push_str(&polyline(&frame, &edges, "black", 1.5));
    out.push_str(&polyline(&frame, &wedge_arc, "#bbbbbb", 0.75));
    for c in curves {
        let pts: Vec<(f64, f64)> = c.points.iter().map(|&p| cart(p)).collect();
        out.push_str(&format!("  <!-- {} -->\n", escape(&c.label)));
        out.push_str(&polyline(&frame, &pts, c.stroke, 2.0));
    }
    out.push_str("</svg>\n");
    out
}

/// Plain x–y line plot with a bounding box.
pub fn xy_svg(title: &str, series: &[Series]) -> String {
    let frame = Frame::fit(series.iter().flat_map(|s| s.points.iter().copied()), 640.0);
    let mut out = svg_open(640.0, title);
    for s in series {
        out.push_str(&format!("  <!-- {} -->\n", escape(&s.label)));
        out.push_str(&polyline(&frame, &s.points, s.stroke, 2.0));
    }
    out.push_str("</svg>\n");
    out
}

/// Coloured cells on a (x, y) lattice, one colour per label.
pub fn cells_svg(title: &str, xs: &[f64], ys: &[f64], label: impl Fn(usize, usize) -> &'static str) -> String {
    let size = 640.0;
    let margin = 40.0;
    let w = (size - 2.0 * margin) / xs.len() as f64;
    let h = (size - 2.0 * margin) / ys.len() as f64;
    let mut out = svg_open(size, title);
    for (j, _) in ys.iter().enumerate() {
        for (i, _) in xs.iter().enumerate() {
            let fill = match label(i, j) {
                "arc" => "#4c72b0",
                "undulary" => "#dd8452",
                "semicircle" => "#55a868",
                "tie" => "#8172b3",
                _ => "#cccccc",
            };
            let x = margin + i as f64 * w;
            let y = size - margin - (j + 1) as f64 * h;
            let _ =
                writeln!(out, "  <rect x=\"{x:.3}\" y=\"{y:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"{fill}\"/>");
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits_and_parse_back() {
        for x in [0.1, 1.0 / 3.0, 2.725_680_889_248_208_5, 1e-300, -7.5e12] {
            let s = num(x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_quotes_cells_with_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "plain".into()]);
        assert_eq!(t.render(), "a,b\n\"x,y\",plain\n");
    }

    #[test]
    fn json_document_is_valid_and_tagged() {
        let doc =
            json_document("demo", vec![("values", serde_json::json!([0.5, 2.0])), ("name", serde_json::json!("x"))]);
        let v: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["command"], "demo");
        assert_eq!(v["values"][1].as_f64(), Some(2.0));
    }

    #[test]
    fn sector_plot_has_wedge_and_curve() {
        let pts: Vec<(f64, f64)> = (0..600).map(|i| (i as f64 / 599.0, 1.0)).collect();
        let svg = sector_svg("t", 1.0, &[Series { points: pts, stroke: "red", label: "arc".into() }]);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("stroke=\"red\""));
    }
}
