//! Predicted-vs-measured scatter plot with the identity ("Line 1")
//! diagonal. Output is a pure function of the report: coordinates are
//! printed with two decimals and nothing depends on time or locale.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::{fmt_opt, EvalReport};

/// Width and height of the SVG viewport, px.
pub const SVG_SIZE: f64 = 640.0;

const LEFT: f64 = 80.0;
const TOP: f64 = 70.0;
const SIDE: f64 = 500.0;

/// Shared data range and pixel mapping of both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotGeometry {
    pub lo: f64,
    pub hi: f64,
}

impl PlotGeometry {
    /// Range covering every measured and predicted value with 5 % padding.
    pub fn for_report(report: &EvalReport) -> Self {
        let values = report.pairs.iter().flat_map(|p| [p.measured, p.predicted]);
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let span = hi - lo;
        let pad = if span > 0.0 { 0.05 * span } else { 1.0 };
        Self { lo: lo - pad, hi: hi + pad }
    }

    pub fn x(&self, measured: f64) -> f64 {
        LEFT + (measured - self.lo) / (self.hi - self.lo) * SIDE
    }

    pub fn y(&self, predicted: f64) -> f64 {
        TOP + SIDE - (predicted - self.lo) / (self.hi - self.lo) * SIDE
    }

    /// Plot-area corners `(x0, y0, x1, y1)` of the identity line, from
    /// bottom-left to top-right.
    pub fn identity_line(&self) -> (f64, f64, f64, f64) {
        (LEFT, TOP + SIDE, LEFT + SIDE, TOP)
    }

    fn ticks(&self) -> (Vec<f64>, usize) {
        let raw = (self.hi - self.lo) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
        let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        ((first..=last).map(|k| k as f64 * step).collect(), decimals)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_scatter(report: &EvalReport) -> Result<String> {
    if report.pairs.is_empty() {
        return Err(Error::EmptyReport);
    }
    let g = PlotGeometry::for_report(report);
    let t = report.target.label();
    let mut s = String::new();
    // write! into a String cannot fail
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="640" height="640" viewBox="0 0 640 640">"#
    );
    s.push_str(concat!(
        "<style>\n",
        "text { font-family: sans-serif; fill: #222222; }\n",
        ".title { font-size: 16px; font-weight: bold; }\n",
        ".subtitle { font-size: 13px; }\n",
        ".tick { font-size: 11px; }\n",
        ".axis { font-size: 13px; }\n",
        ".frame { fill: none; stroke: #444444; stroke-width: 1; }\n",
        ".grid { stroke: #dddddd; stroke-width: 1; }\n",
        ".line1 { stroke: #777777; stroke-width: 1.5; stroke-dasharray: 8 6; }\n",
        ".pt { fill: #1f77b4; stroke: #ffffff; stroke-width: 1; }\n",
        ".pt-invalid { fill: #d62728; stroke: #000000; stroke-width: 1.5; }\n",
        "</style>\n",
    ));
    let _ = writeln!(s, r##"<rect x="0" y="0" width="640" height="640" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"<text class="title" x="320" y="28" text-anchor="middle">{t}: {} predicted vs measured</text>"#,
        report.model_kind
    );
    let _ = writeln!(
        s,
        r#"<text class="subtitle" x="320" y="50" text-anchor="middle">R² (cod) = {}   R² (pearson) = {}   n = {}</text>"#,
        fmt_opt(report.metrics.r2_cod),
        fmt_opt(report.metrics.r2_pearson),
        report.metrics.n
    );

    let (ticks, decimals) = g.ticks();
    for v in &ticks {
        let (x, y) = (g.x(*v), g.y(*v));
        let _ = writeln!(s, r#"<line class="grid" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#, TOP, TOP + SIDE);
        let _ = writeln!(s, r#"<line class="grid" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#, LEFT, LEFT + SIDE);
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{x:.2}" y="{:.2}" text-anchor="middle">{v:.decimals$}</text>"#,
            TOP + SIDE + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">{v:.decimals$}</text>"#,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(s, r#"<rect class="frame" x="{LEFT:.2}" y="{TOP:.2}" width="{SIDE:.2}" height="{SIDE:.2}"/>"#);

    let (x0, y0, x1, y1) = g.identity_line();
    let _ = writeln!(s, r#"<line class="line1" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}"/>"#);
    let _ =
        writeln!(s, r#"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">Line 1</text>"#, x1 - 6.0, y1 + 16.0);

    s.push_str("<g>\n");
    for p in &report.pairs {
        let class = if p.validity.is_valid() { "pt" } else { "pt-invalid" };
        let _ = writeln!(
            s,
            r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="5"><title>{}: measured {:.2}, predicted {:.2} ({})</title></circle>"#,
            g.x(p.measured),
            g.y(p.predicted),
            escape(&p.id),
            p.measured,
            p.predicted,
            p.validity.key()
        );
    }
    s.push_str("</g>\n");

    let _ = writeln!(
        s,
        r#"<text class="axis" x="{:.2}" y="{:.2}" text-anchor="middle">Measured {t} (%)</text>"#,
        LEFT + SIDE / 2.0,
        TOP + SIDE + 44.0
    );
    let cy = TOP + SIDE / 2.0;
    let _ = writeln!(
        s,
        r#"<text class="axis" x="24" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 24 {cy:.2})">Predicted {t} (%)</text>"#
    );
    if report.counts.invalid() > 0 {
        let _ = writeln!(
            s,
            r#"<text class="tick" x="{:.2}" y="{:.2}">red: physically invalid prediction ({} of {})</text>"#,
            LEFT,
            TOP + SIDE + 62.0,
            report.counts.invalid(),
            report.metrics.n
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn export_scatter(report: &EvalReport, path: &Path) -> Result<String> {
    let svg = render_scatter(report)?;
    fs::write(path, &svg)?;
    Ok(svg)
}
