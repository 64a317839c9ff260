//! Feed-forward network with three inputs, one tanh hidden layer and a
//! single linear output, trained by Levenberg-Marquardt.

mod lm;
mod mlp;

pub use lm::{lm_attempt, lm_step, train_lm, train_lm_restarts, Batch, LmConfig, StepOutcome, StopReason, TrainReport};
pub use mlp::{init_weights, param_count, MlpModel, Network, TargetScale, INPUTS};
