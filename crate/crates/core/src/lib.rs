//! Prediction of Los Angeles (fragmentation) and Micro-Deval (abrasion)
//! coefficients of carbonate rock aggregates from three cheap physical
//! measurements: ultrasonic pulse velocity, bulk density and effective
//! porosity.
//!
//! Two model families are fitted per target and compared on the same
//! normalized inputs:
//!
//! - [`linreg::LinearModel`]: multiple linear regression solved by QR.
//! - [`ann::MlpModel`]: a 3→H→1 tanh network trained with
//!   Levenberg-Marquardt ([`ann::train_lm`]).
//!
//! [`eval`] scores predictions against measurements (both R² variants,
//! RMSE, Line-1 deviation, physical validity), [`artifacts`] persists models
//! and renders predicted-vs-measured scatter plots, and [`cli`] ties the
//! pipeline together.
//!
//! Independent training restarts and leave-one-out folds run on rayon when
//! the `parallel` feature is enabled (default); see [`par`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ann;
pub mod artifacts;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod geotech;
pub mod linreg;
pub mod model;
pub mod par;
pub mod synthetic;

pub use ann::{LmConfig, MlpModel, StopReason, TrainReport};
pub use dataset::{DataSplit, Dataset, FeatureScaler, Features, RockSample, SplitRatios, Target};
pub use error::{Error, Result};
pub use eval::{EvalReport, Metrics};
pub use geotech::{Validity, ValidityFlag};
pub use linreg::LinearModel;
pub use model::{Model, ModelKind};
pub use par::Execution;

/// A point prediction in percent, with a flag set when any input feature
/// lies outside the range the model's scaler was fitted on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub value: f64,
    pub extrapolated: bool,
}
