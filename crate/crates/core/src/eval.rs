//! Goodness-of-fit metrics and the predicted-vs-measured comparison.
//!
//! Two R² values are reported. `r2_cod` is the coefficient of determination
//! `1 − SS_res/SS_tot` and can go negative on held-out data. `r2_pearson` is
//! the squared correlation of predicted against measured, which ignores any
//! affine miscalibration of the predictions.

use crate::dataset::{Dataset, Target};
use crate::error::{Error, Result};
use crate::geotech::{check_validity, Validity};
use crate::model::{Model, ModelKind};
use crate::Prediction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub n: usize,
    /// `None` when the measured values have zero variance.
    pub r2_cod: Option<f64>,
    /// `None` when either series has zero variance.
    pub r2_pearson: Option<f64>,
    pub rmse: f64,
    pub mean_abs_line1_deviation: f64,
}

/// Core metrics of `predicted` against `measured`, both in percent.
pub fn evaluate(measured: &[f64], predicted: &[f64]) -> Result<Metrics> {
    if measured.len() != predicted.len() {
        return Err(Error::LengthMismatch { measured: measured.len(), predicted: predicted.len() });
    }
    if measured.is_empty() {
        return Err(Error::EmptyReport);
    }
    if measured.iter().chain(predicted).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("evaluation inputs"));
    }
    let n = measured.len() as f64;
    let mean_m = measured.iter().sum::<f64>() / n;
    let mean_p = predicted.iter().sum::<f64>() / n;

    let (mut ss_res, mut ss_tot, mut ss_p, mut cov, mut abs_dev) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&m, &p) in measured.iter().zip(predicted) {
        let e = p - m;
        ss_res += e * e;
        abs_dev += e.abs();
        ss_tot += (m - mean_m) * (m - mean_m);
        ss_p += (p - mean_p) * (p - mean_p);
        cov += (m - mean_m) * (p - mean_p);
    }

    let r2_cod = (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot);
    let r2_pearson = (ss_tot > 0.0 && ss_p > 0.0).then(|| (cov * cov / (ss_tot * ss_p)).clamp(0.0, 1.0));
    Ok(Metrics {
        n: measured.len(),
        r2_cod,
        r2_pearson,
        rmse: (ss_res / n).sqrt(),
        mean_abs_line1_deviation: abs_dev / n,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionPair {
    pub id: String,
    pub measured: f64,
    pub predicted: f64,
    pub validity: Validity,
    pub extrapolated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidityCounts {
    pub valid: usize,
    pub negative: usize,
    pub above_hundred: usize,
}

impl ValidityCounts {
    pub fn invalid(&self) -> usize {
        self.negative + self.above_hundred
    }
}

/// `(id, measured, prediction)` before screening.
pub type RawPair = (String, f64, Prediction);

/// Attaches a validity flag to every prediction and tallies the statuses.
pub fn screen_predictions(pairs: Vec<RawPair>) -> Result<(Vec<PredictionPair>, ValidityCounts)> {
    let mut counts = ValidityCounts::default();
    let mut out = Vec::with_capacity(pairs.len());
    for (id, measured, pred) in pairs {
        let flag = check_validity(pred.value)?;
        match flag.status {
            Validity::Valid => counts.valid += 1,
            Validity::NegativeInvalid => counts.negative += 1,
            Validity::AboveHundredInvalid => counts.above_hundred += 1,
        }
        out.push(PredictionPair {
            id,
            measured,
            predicted: pred.value,
            validity: flag.status,
            extrapolated: pred.extrapolated,
        });
    }
    Ok((out, counts))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub target: Target,
    pub model_kind: ModelKind,
    pub pairs: Vec<PredictionPair>,
    pub metrics: Metrics,
    pub counts: ValidityCounts,
}

impl EvalReport {
    pub fn from_pairs(target: Target, model_kind: ModelKind, raw: Vec<RawPair>) -> Result<Self> {
        let (pairs, counts) = screen_predictions(raw)?;
        let measured: Vec<f64> = pairs.iter().map(|p| p.measured).collect();
        let predicted: Vec<f64> = pairs.iter().map(|p| p.predicted).collect();
        let metrics = evaluate(&measured, &predicted)?;
        Ok(Self { target, model_kind, pairs, metrics, counts })
    }

    /// Scores `model` on every sample of `data` (restricted to `indices`
    /// when given) that carries the model's target.
    pub fn for_model(model: &Model, data: &Dataset, indices: Option<&[usize]>) -> Result<Self> {
        let target = model.target();
        let all: Vec<usize>;
        let indices = match indices {
            Some(ix) => ix,
            None => {
                all = (0..data.len()).collect();
                &all
            }
        };
        let mut raw = Vec::new();
        for &i in indices {
            let s = &data.samples[i];
            if let Some(y) = s.target(target) {
                raw.push((s.id.clone(), y, model.predict(&s.features())?));
            }
        }
        if raw.is_empty() {
            return Err(Error::TargetAbsent(target.label()));
        }
        Self::from_pairs(target, model.kind(), raw)
    }

    pub fn extrapolated_count(&self) -> usize {
        self.pairs.iter().filter(|p| p.extrapolated).count()
    }

    /// Space-separated `key=value` summary.
    pub fn summary_line(&self) -> String {
        let m = &self.metrics;
        format!(
            "target={} model={} n={} r2_cod={} r2_pearson={} rmse={:.3} mae_line1={:.3} invalid_negative={} invalid_above_hundred={} extrapolated={}",
            self.target.key(),
            self.model_kind.key(),
            m.n,
            fmt_opt(m.r2_cod),
            fmt_opt(m.r2_pearson),
            m.rmse,
            m.mean_abs_line1_deviation,
            self.counts.negative,
            self.counts.above_hundred,
            self.extrapolated_count(),
        )
    }

    /// Human-readable per-sample table.
    pub fn table(&self) -> String {
        let mut out =
            format!("{:<12} {:>12} {:>12} {:>22} {:>6}\n", "id", "measured_%", "predicted_%", "validity", "extrap");
        for p in &self.pairs {
            out.push_str(&format!(
                "{:<12} {:>12.3} {:>12.3} {:>22} {:>6}\n",
                p.id,
                p.measured,
                p.predicted,
                p.validity.key(),
                if p.extrapolated { "yes" } else { "no" }
            ));
        }
        out
    }
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "undefined".into())
}
