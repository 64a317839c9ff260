use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ann::MlpModel;
use crate::dataset::{Features, Target};
use crate::error::Result;
use crate::linreg::LinearModel;
use crate::Prediction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ols,
    Ann,
}

impl ModelKind {
    pub fn key(self) -> &'static str {
        match self {
            ModelKind::Ols => "ols",
            ModelKind::Ann => "ann",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Ols => "OLS",
            ModelKind::Ann => "ANN",
        })
    }
}

/// Either fitted model family.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinearModel),
    Mlp(MlpModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Linear(_) => ModelKind::Ols,
            Model::Mlp(_) => ModelKind::Ann,
        }
    }

    pub fn target(&self) -> Target {
        match self {
            Model::Linear(m) => m.target,
            Model::Mlp(m) => m.target,
        }
    }

    pub fn predict(&self, features: &Features) -> Result<Prediction> {
        match self {
            Model::Linear(m) => m.predict(features),
            Model::Mlp(m) => m.predict(features),
        }
    }
}

impl From<LinearModel> for Model {
    fn from(m: LinearModel) -> Self {
        Model::Linear(m)
    }
}

impl From<MlpModel> for Model {
    fn from(m: MlpModel) -> Self {
        Model::Mlp(m)
    }
}
