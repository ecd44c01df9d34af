//! Export of pavings: box files, SVG pictures and JSON statistics.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalBox};
use crate::search::{Algorithm, PavingResult, SolveOptions, SolveStats};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot draw a {0}-dimensional paving; only 2 dimensions are supported")]
    UnsupportedDimension(usize),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn write_file(path: &Path, text: &str) -> Result<(), ReportError> {
    fs::write(path, text).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn push_bounds(line: &mut String, b: &IntervalBox) {
    for x in b.iter() {
        // Display prints the shortest decimal that reads back to the same f64.
        let _ = write!(line, " {} {}", x.lo(), x.hi());
    }
}

/// Box file text. With `running` the boundary lines end with the ids of
/// their running constraints.
pub fn format_boxes(result: &PavingResult, running: bool) -> String {
    let mut out = format!("# problem {} eps {} vars {}\n", result.problem, join(&result.eps, " "), result.var_names.join(" "));
    for b in &result.inner {
        let mut line = String::from("inner");
        push_bounds(&mut line, b);
        out.push_str(&line);
        out.push('\n');
    }
    for b in &result.boundary {
        let mut line = String::from("boundary");
        push_bounds(&mut line, &b.bx);
        if running {
            let _ = write!(line, " [{}]", join(b.running.iter(), ","));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn write_boxes(result: &PavingResult, path: &Path, running: bool) -> Result<(), ReportError> {
    write_file(path, &format_boxes(result, running))
}

/// Contents of a box file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoxFile {
    pub problem: String,
    pub eps: Vec<f64>,
    pub vars: Vec<String>,
    pub inner: Vec<IntervalBox>,
    pub boundary: Vec<(IntervalBox, Option<Vec<usize>>)>,
}

impl BoxFile {
    pub fn inner_volume(&self) -> f64 {
        self.inner.iter().map(IntervalBox::volume).sum()
    }

    pub fn boundary_volume(&self) -> f64 {
        self.boundary.iter().map(|(b, _)| b.volume()).sum()
    }
}

pub fn parse_boxes(text: &str) -> Result<BoxFile, ReportError> {
    let err = |line: usize, message: String| ReportError::Parse { line, message };
    let mut file = BoxFile::default();
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(err(1, "missing header".into()));
    };
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() < 3 || words[0] != "#" || words[1] != "problem" {
        return Err(err(1, "header must start with '# problem'".into()));
    }
    file.problem = words[2].to_string();
    let eps_at = words.iter().position(|w| *w == "eps").ok_or_else(|| err(1, "header lacks 'eps'".into()))?;
    let vars_at = words.iter().position(|w| *w == "vars").ok_or_else(|| err(1, "header lacks 'vars'".into()))?;
    file.eps = words[eps_at + 1..vars_at]
        .iter()
        .map(|w| w.parse::<f64>().map_err(|e| err(1, format!("bad eps '{w}': {e}"))))
        .collect::<Result<_, _>>()?;
    file.vars = words[vars_at + 1..].iter().map(|s| s.to_string()).collect();
    let n = file.vars.len();
    for (i, line) in lines {
        let lineno = i + 1;
        let mut words: Vec<&str> = line.split_whitespace().collect();
        if words.is_empty() || words[0].starts_with('#') {
            continue;
        }
        let kind = words.remove(0);
        let running = match words.last() {
            Some(w) if w.starts_with('[') => {
                let inner = w.trim_start_matches('[').trim_end_matches(']');
                let ids = inner
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|e| err(lineno, format!("bad constraint id '{s}': {e}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                words.pop();
                Some(ids)
            }
            _ => None,
        };
        if words.len() != 2 * n {
            return Err(err(lineno, format!("expected {} bounds, found {}", 2 * n, words.len())));
        }
        let nums = words.iter().map(|w| w.parse::<f64>().map_err(|e| err(lineno, format!("bad number '{w}': {e}")))).collect::<Result<Vec<_>, _>>()?;
        let b: IntervalBox = nums.chunks(2).map(|p| Interval::new(p[0], p[1])).collect();
        match kind {
            "inner" if running.is_none() => file.inner.push(b),
            "boundary" => file.boundary.push((b, running)),
            _ => return Err(err(lineno, format!("unexpected line kind '{kind}'"))),
        }
    }
    Ok(file)
}

pub fn read_boxes(path: &Path) -> Result<BoxFile, ReportError> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })?;
    parse_boxes(&text)
}

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 60.0;

/// SVG picture of a 2-D paving over `domain`: inner boxes dark grey,
/// boundary boxes light grey, y axis pointing up.
pub fn svg_string(result: &PavingResult, domain: &IntervalBox) -> Result<String, ReportError> {
    if domain.dim() != 2 {
        return Err(ReportError::UnsupportedDimension(domain.dim()));
    }
    let (dx, dy) = (domain[0], domain[1]);
    let sx = CANVAS / dx.width();
    let sy = CANVAS / dy.width();
    let px = |x: f64| MARGIN + (x - dx.lo()) * sx;
    let py = |y: f64| MARGIN + (dy.hi() - y) * sy;
    let size = CANVAS + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    let mut rect = |b: &IntervalBox, fill: &str| {
        let (x0, x1) = (px(b[0].lo()), px(b[0].hi()));
        let (y0, y1) = (py(b[1].hi()), py(b[1].lo()));
        let _ = writeln!(s, r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{fill}" stroke="black" stroke-width="0.2"/>"#, x1 - x0, y1 - y0);
    };
    for b in &result.inner {
        rect(b, "#555555");
    }
    for b in &result.boundary {
        rect(&b.bx, "#cccccc");
    }
    let (l, r, t, btm) = (MARGIN, MARGIN + CANVAS, MARGIN, MARGIN + CANVAS);
    let _ = writeln!(s, r#"<rect x="{l}" y="{t}" width="{CANVAS}" height="{CANVAS}" fill="none" stroke="black"/>"#);
    let name = |i: usize| result.var_names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = dx.lo() + f * dx.width();
        let yv = dy.lo() + f * dy.width();
        let (xp, yp) = (px(xv), py(yv));
        let _ = writeln!(s, r#"<line x1="{xp:.3}" y1="{btm}" x2="{xp:.3}" y2="{:.3}" stroke="black"/>"#, btm + 5.0);
        let _ = writeln!(s, r#"<text x="{xp:.3}" y="{:.3}" font-size="12" text-anchor="middle">{}</text>"#, btm + 20.0, fmt_tick(xv));
        let _ = writeln!(s, r#"<line x1="{:.3}" y1="{yp:.3}" x2="{l}" y2="{yp:.3}" stroke="black"/>"#, l - 5.0);
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="12" text-anchor="end">{}</text>"#, l - 8.0, yp + 4.0, fmt_tick(yv));
    }
    let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle">{}</text>"#, (l + r) / 2.0, btm + 45.0, name(0));
    let _ = writeln!(s, r#"<text x="20" y="{:.3}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.3})">{}</text>"#, (t + btm) / 2.0, (t + btm) / 2.0, name(1));
    s.push_str("</svg>\n");
    Ok(s)
}

fn fmt_tick(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    format!("{r}")
}

pub fn write_svg(result: &PavingResult, domain: &IntervalBox, path: &Path) -> Result<(), ReportError> {
    let svg = svg_string(result, domain)?;
    write_file(path, &svg)
}

/// Machine-readable summary of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub algorithm: Algorithm,
    pub options: SolveOptions,
    pub stats: SolveStats,
    pub files: Vec<String>,
}

impl RunReport {
    pub fn new(result: &PavingResult, options: &SolveOptions) -> RunReport {
        RunReport {
            problem: result.problem.clone(),
            algorithm: result.algorithm,
            options: options.clone(),
            stats: result.stats.clone(),
            files: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn stats_json(report: &RunReport, path: &Path) -> Result<(), ReportError> {
    let mut text = report.to_json()?;
    text.push('\n');
    write_file(path, &text)
}
