//! Rendering of command results as JSON, CSV or SVG.

use std::fmt::Write;

use serde_json::{json, Value};

use owent::entropy::{EntropyReport, OWEstimate};

use crate::args::Format;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// A line to plot: label plus `(x, y)` points.
#[derive(Clone, Debug)]
pub struct Trace {
    pub title: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

/// What a command produced, before formatting.
#[derive(Debug)]
pub struct Rendered {
    pub command: &'static str,
    pub result: Value,
    /// `None` when the command has no verdict.
    pub passed: Option<bool>,
    pub csv: Option<String>,
    pub trace: Option<Trace>,
}

impl Rendered {
    pub fn new(command: &'static str, result: Value, passed: Option<bool>) -> Self {
        Rendered { command, result, passed, csv: None, trace: None }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_trace(mut self, trace: Trace) -> Self {
        self.trace = Some(trace);
        self
    }

    pub fn verdict(&self) -> &'static str {
        match self.passed {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "none",
        }
    }

    pub fn format(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let doc = json!({
                    "schemaVersion": SCHEMA_VERSION,
                    "command": self.command,
                    "verdict": self.verdict(),
                    "result": self.result,
                });
                Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
            }
            Format::Csv => self.csv.clone().ok_or_else(|| CliError::input(format!("{} has no CSV output", self.command))),
            Format::Svg => self.trace.as_ref().map(svg).ok_or_else(|| CliError::input(format!("{} has no SVG output", self.command))),
        }
    }
}

pub fn estimate_csv(est: &OWEstimate) -> String {
    let mut out = String::from("index,measure,f_exact,value\n");
    for r in &est.rows {
        let _ = writeln!(out, "{},{},{},{}", r.index, r.measure, quote(&r.f_exact), r.value);
    }
    out
}

pub fn estimate_trace(est: &OWEstimate) -> Trace {
    Trace {
        title: format!("{} along {}", est.function, est.sequence),
        y_label: "f(A_i)/|A_i|".into(),
        points: est.rows.iter().map(|r| (r.index as f64, r.value)).collect(),
    }
}

/// One row per (scale, index).
pub fn entropy_csv(report: &EntropyReport) -> String {
    let mut out = String::from("radius,index,measure,f_exact,value\n");
    for s in &report.per_scale {
        for r in &s.estimate.rows {
            let _ = writeln!(out, "{},{},{},{},{}", s.radius, r.index, r.measure, quote(&r.f_exact), r.value);
        }
    }
    out
}

/// The trace at the maximizing scale.
pub fn entropy_trace(report: &EntropyReport) -> Trace {
    let points = report.scale(report.sup_radius).map(|e| e.rows.iter().map(|r| (r.index as f64, r.value)).collect()).unwrap_or_default();
    Trace {
        title: format!("{} along {}, r = {}", report.system, report.sequence, report.sup_radius),
        y_label: format!("entropy trace (log base {})", report.log_base),
        points,
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A self-contained SVG line chart.
pub fn svg(trace: &Trace) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 60.0;
    let pts = &trace.points;
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let path: Vec<String> =
        pts.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y))).collect();
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(&trace.title)
    );
    let _ = writeln!(out, r#"<path d="M{PAD},{} L{PAD},{} L{},{}" fill="none" stroke="black"/>"#, PAD, H - PAD, W - PAD, H - PAD);
    for (v, y) in [(y0, H - PAD), (y1, PAD)] {
        let _ = writeln!(out, r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.6}</text>"#, PAD - 6.0);
    }
    for (v, x) in [(x0, PAD), (x1, W - PAD)] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{v}</text>"#,
            H - PAD + 16.0
        );
    }
    let _ =
        writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">i</text>"#, W / 2.0, H - 16.0);
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(&trace.y_label)
    );
    if !path.is_empty() {
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.join(" "));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_standalone() {
        let t = Trace { title: "a < b".into(), y_label: "y".into(), points: vec![(1.0, 0.5), (2.0, 0.25), (3.0, f64::NAN)] };
        let s = svg(&t);
        assert!(s.starts_with("<svg xmlns="));
        assert!(s.contains("a &lt; b"));
        assert!(s.contains("<polyline"));
        assert!(!s.contains("href"));
    }

    #[test]
    fn csv_requires_support() {
        let r = Rendered::new("bernoulli", json!({}), Some(true));
        assert!(r.format(Format::Csv).is_err());
        assert!(r.format(Format::Json).unwrap().contains("\"schemaVersion\": 1"));
    }
}
