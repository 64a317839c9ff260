//! Versioned JSON model files.
//!
//! Floats are written in shortest round-trip decimal form and parsed with
//! correctly rounded conversion, so every parameter survives a save/load
//! cycle bit-exactly. See `docs/model-format.md` for the schema.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ann::{LmConfig, MlpModel, Network, StopReason, TargetScale, TrainReport};
use crate::dataset::{FeatureScaler, Target};
use crate::error::{Error, Result};
use crate::linreg::LinearModel;
use crate::model::{Model, ModelKind};

pub const FORMAT_VERSION: u64 = 1;

const HIDDEN_ACTIVATION: &str = "tanh";
const OUTPUT_ACTIVATION: &str = "identity";
const PARAMETER_LAYOUT: &str = "w1_row_major,b1,w2,b_out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSection {
    pub intercept: f64,
    /// Slopes for normalized velocity, density, porosity.
    pub coefficients: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub hidden: usize,
    pub hidden_activation: String,
    pub output_activation: String,
    pub parameter_layout: String,
    pub parameters: Vec<f64>,
    pub target_scale: TargetScale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSummary {
    pub stop_reason: StopReason,
    pub epochs_run: usize,
    pub final_train_mse: f64,
    pub final_mu: f64,
    pub best_epoch: usize,
    pub n_train: usize,
    pub n_validation: usize,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl From<&TrainReport> for TrainingSummary {
    fn from(r: &TrainReport) -> Self {
        Self {
            stop_reason: r.stop_reason,
            epochs_run: r.epochs_run,
            final_train_mse: r.final_train_mse,
            final_mu: r.final_mu,
            best_epoch: r.best_epoch,
            n_train: r.n_train,
            n_validation: r.n_validation,
            seed: r.seed,
            warnings: r.warnings.clone(),
        }
    }
}

/// Where a model came from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool_version: String,
    /// SHA-256 of the canonical CSV of the full input dataset.
    pub dataset_fingerprint: String,
    /// Seconds since the Unix epoch; `null` in timestamp-free mode.
    pub created_unix: Option<u64>,
    /// Features were min-max scaled to [−1, 1] before fitting.
    pub normalized_inputs: bool,
    pub split_seed: Option<u64>,
    /// Train/validation/test fractions.
    pub split_ratios: Option<[f64; 3]>,
    pub restarts: Option<usize>,
    pub lm_config: Option<LmConfig>,
    pub training: Option<TrainingSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format_version: u64,
    pub target: Target,
    pub model_kind: ModelKind,
    pub scaler: FeatureScaler,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkSection>,
    pub provenance: Provenance,
}

impl ModelFile {
    pub fn from_model(model: &Model, provenance: Provenance) -> Self {
        match model {
            Model::Linear(m) => Self {
                format_version: FORMAT_VERSION,
                target: m.target,
                model_kind: ModelKind::Ols,
                scaler: m.scaler,
                linear: Some(LinearSection { intercept: m.intercept, coefficients: m.coefficients }),
                network: None,
                provenance,
            },
            Model::Mlp(m) => Self {
                format_version: FORMAT_VERSION,
                target: m.target,
                model_kind: ModelKind::Ann,
                scaler: m.scaler,
                linear: None,
                network: Some(NetworkSection {
                    hidden: m.hidden(),
                    hidden_activation: HIDDEN_ACTIVATION.into(),
                    output_activation: OUTPUT_ACTIVATION.into(),
                    parameter_layout: PARAMETER_LAYOUT.into(),
                    parameters: m.network.params().to_vec(),
                    target_scale: m.target_scale,
                }),
                provenance,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model file serializes");
        s.push('\n');
        s
    }

    /// Parses a model file, rejecting any `format_version` other than
    /// [`FORMAT_VERSION`].
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_error(text, &e))?;
        match value.get("format_version").and_then(serde_json::Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            Some(v) => return Err(Error::UnsupportedVersion(v)),
            None => {
                return Err(Error::ModelParse { offset: 0, message: "missing or non-integer format_version".into() })
            }
        }
        serde_json::from_str(text).map_err(|e| parse_error(text, &e))
    }

    pub fn to_model(&self) -> Result<Model> {
        let bad = |m: &str| Error::ModelParse { offset: 0, message: m.to_string() };
        match (self.model_kind, &self.linear, &self.network) {
            (ModelKind::Ols, Some(l), None) => {
                if !l.intercept.is_finite() || l.coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::NonFinite("linear model parameters"));
                }
                Ok(Model::Linear(LinearModel {
                    target: self.target,
                    intercept: l.intercept,
                    coefficients: l.coefficients,
                    scaler: self.scaler,
                }))
            }
            (ModelKind::Ann, None, Some(n)) => {
                if n.hidden_activation != HIDDEN_ACTIVATION || n.output_activation != OUTPUT_ACTIVATION {
                    return Err(bad("unsupported activation functions"));
                }
                if n.parameter_layout != PARAMETER_LAYOUT {
                    return Err(bad("unsupported parameter layout"));
                }
                if !(n.target_scale.half_range > 0.0) {
                    return Err(bad("target_scale.half_range must be > 0"));
                }
                Ok(Model::Mlp(MlpModel {
                    target: self.target,
                    network: Network::new(n.hidden, n.parameters.clone())?,
                    scaler: self.scaler,
                    target_scale: n.target_scale,
                }))
            }
            _ => Err(bad("model_kind does not match the parameter section")),
        }
    }
}

fn parse_error(text: &str, e: &serde_json::Error) -> Error {
    // serde_json reports a 1-based line and 1-based byte column; the offset
    // is 0-based
    let line_start: usize = text.split_inclusive('\n').take(e.line().saturating_sub(1)).map(str::len).sum();
    let offset = line_start + e.column().saturating_sub(1);
    Error::ModelParse { offset: offset.min(text.len()), message: e.to_string() }
}

pub fn save_model(model: &Model, provenance: Provenance, path: &Path) -> Result<String> {
    let json = ModelFile::from_model(model, provenance).to_json();
    fs::write(path, &json)?;
    Ok(json)
}

pub fn load_model(path: &Path) -> Result<(Model, ModelFile)> {
    let text = fs::read_to_string(path)?;
    let file = ModelFile::parse(&text)?;
    Ok((file.to_model()?, file))
}
