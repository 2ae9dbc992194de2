//! Run reports and their CSV, SVG, text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-point output; `plot` names the default x and y columns of the SVG rendering.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub plot: [usize; 2],
}

impl Table {
    pub fn new(columns: &[&str], plot: [usize; 2]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), plot }
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub stats: BTreeMap<String, f64>,
    pub verdicts: Vec<VerdictLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub transcript: String,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            config_hash: None,
            stats: BTreeMap::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            table: None,
            transcript: String::new(),
            wall_time_s: 0.0,
        }
    }

    pub fn stat(&mut self, name: &str, value: f64) {
        self.stats.insert(name.into(), value);
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(VerdictLine { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        if let Some(h) = &self.config_hash {
            let _ = writeln!(s, "config sha256: {h}");
        }
        for (k, v) in &self.stats {
            let _ = writeln!(s, "{k} = {}", fmt_stat(*v));
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "{} {}: {}", if v.passed { "PASS" } else { "FAIL" }, v.name, v.detail);
        }
        let _ = writeln!(s, "wall time: {:.3} s", self.wall_time_s);
        s
    }
}

fn fmt_stat(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.0}")
    } else {
        format!("{v:.6e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

/// Floating point text with 17 significant digits and a dot decimal separator.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_csv(t: &Table) -> String {
    let mut s = t.columns.join(",");
    s.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 20.0;

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if lo > hi {
        return None;
    }
    Some(if hi - lo > 0.0 { (lo, hi) } else { (lo - 0.5, hi + 0.5) })
}

fn svg_frame(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// Polyline of column `y` against column `x`.
pub fn to_svg_polyline(t: &Table, x: usize, y: usize) -> Result<String, CliError> {
    let pts: Vec<(f64, f64)> =
        t.rows.iter().map(|r| (r[x], r[y])).filter(|(a, b)| a.is_finite() && b.is_finite()).collect();
    let (x0, x1) = range(pts.iter().map(|p| p.0)).ok_or_else(|| CliError::Usage("no finite points to plot".into()))?;
    let (y0, y1) = range(pts.iter().map(|p| p.1)).unwrap_or((0.0, 1.0));
    let mut line = String::new();
    for (a, b) in pts {
        let px = MARGIN + (a - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
        let py = HEIGHT - MARGIN - (b - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
        let _ = write!(line, "{px:.3},{py:.3} ");
    }
    Ok(svg_frame(&format!(
        "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"{}\"/>\n",
        line.trim_end()
    )))
}

/// Gray-scale heat map of `log10 |value|` over an `(x, y)` grid.
pub fn to_svg_heatmap(t: &Table, value: usize) -> Result<String, CliError> {
    let xs = range(t.rows.iter().map(|r| r[0])).ok_or_else(|| CliError::Usage("no finite points to plot".into()))?;
    let ys = range(t.rows.iter().map(|r| r[1])).unwrap_or((0.0, 1.0));
    let mag = |v: f64| v.abs().max(1e-300).log10();
    let (m0, m1) = range(t.rows.iter().map(|r| mag(r[value]))).unwrap_or((0.0, 1.0));
    let n = (t.rows.len() as f64).sqrt().max(1.0);
    let (cw, ch) = ((WIDTH - 2.0 * MARGIN) / n, (HEIGHT - 2.0 * MARGIN) / n);
    let mut body = String::new();
    for r in &t.rows {
        let px = MARGIN + (r[0] - xs.0) / (xs.1 - xs.0) * (WIDTH - 2.0 * MARGIN - cw);
        let py = HEIGHT - MARGIN - ch - (r[1] - ys.0) / (ys.1 - ys.0) * (HEIGHT - 2.0 * MARGIN - ch);
        let level = (255.0 * (1.0 - (mag(r[value]) - m0) / (m1 - m0))).round().clamp(0.0, 255.0) as u8;
        let _ = writeln!(
            body,
            "<rect x=\"{px:.3}\" y=\"{py:.3}\" width=\"{cw:.3}\" height=\"{ch:.3}\" fill=\"rgb({level},{level},{level})\"/>"
        );
    }
    Ok(svg_frame(&body))
}

/// Renders `report` in `format`; `column` overrides the plotted y column.
pub fn render(report: &RunReport, format: Format, column: Option<&str>) -> Result<String, CliError> {
    let table = || report.table.as_ref().ok_or_else(|| CliError::Usage("the report has no table to export".into()));
    match format {
        Format::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| CliError::Usage(format!("cannot serialize report: {e}"))),
        Format::Text => Ok(if report.transcript.is_empty() { report.summary() } else { report.transcript.clone() }),
        Format::Csv => Ok(to_csv(table()?)),
        Format::Svg => {
            let t = table()?;
            let y = match column {
                Some(name) => {
                    t.column(name).ok_or_else(|| CliError::Usage(format!("no column {name:?} in the report")))?
                }
                None => t.plot[1],
            };
            if t.columns.len() == 3 && t.columns[0] == "x" && t.columns[1] == "y" {
                to_svg_heatmap(t, y)
            } else {
                to_svg_polyline(t, t.plot[0], y)
            }
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}
