use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::{EvalReport, PredictionPair};
use crate::geotech::Validity;

pub const EVAL_CSV_HEADER: &str = "id,measured_pct,predicted_pct,validity,extrapolated";

/// Rows plus metric comment lines; values use shortest round-trip decimals.
pub fn render_eval_csv(report: &EvalReport) -> Result<String> {
    if report.pairs.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut out = String::from(EVAL_CSV_HEADER);
    out.push('\n');
    for p in &report.pairs {
        out.push_str(&format!("{},{},{},{},{}\n", p.id, p.measured, p.predicted, p.validity.key(), p.extrapolated));
    }
    let m = &report.metrics;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "undefined".into());
    let comments = [
        ("target", report.target.key().to_string()),
        ("model", report.model_kind.key().to_string()),
        ("n", m.n.to_string()),
        ("r2_cod", opt(m.r2_cod)),
        ("r2_pearson", opt(m.r2_pearson)),
        ("rmse", m.rmse.to_string()),
        ("mean_abs_line1_deviation", m.mean_abs_line1_deviation.to_string()),
        ("invalid_negative", report.counts.negative.to_string()),
        ("invalid_above_hundred", report.counts.above_hundred.to_string()),
        ("extrapolated", report.extrapolated_count().to_string()),
    ];
    for (k, v) in comments {
        out.push_str(&format!("# {k}={v}\n"));
    }
    Ok(out)
}

pub fn export_eval_csv(report: &EvalReport, path: &Path) -> Result<String> {
    let csv = render_eval_csv(report)?;
    fs::write(path, &csv)?;
    Ok(csv)
}

/// Parsed evaluation CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalCsv {
    pub pairs: Vec<PredictionPair>,
    pub metrics: BTreeMap<String, String>,
}

pub fn parse_eval_csv(text: &str) -> Result<EvalCsv> {
    let err = |line: usize, message: String| Error::EvalCsv { line, message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == EVAL_CSV_HEADER => {}
        _ => return Err(err(1, "missing header".into())),
    }
    let mut pairs = Vec::new();
    let mut metrics = BTreeMap::new();
    for (i, line) in lines {
        let n = i + 1;
        if let Some(c) = line.strip_prefix("# ") {
            let (k, v) = c.split_once('=').ok_or_else(|| err(n, "comment is not key=value".into()))?;
            metrics.insert(k.to_string(), v.to_string());
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(err(n, format!("expected 5 fields, found {}", cells.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| err(n, format!("bad number {s:?}")));
        pairs.push(PredictionPair {
            id: cells[0].to_string(),
            measured: num(cells[1])?,
            predicted: num(cells[2])?,
            validity: Validity::from_key(cells[3]).ok_or_else(|| err(n, format!("bad validity {:?}", cells[3])))?,
            extrapolated: cells[4].parse().map_err(|_| err(n, format!("bad flag {:?}", cells[4])))?,
        });
    }
    Ok(EvalCsv { pairs, metrics })
}
