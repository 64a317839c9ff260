use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lm::LmConfig;
use crate::dataset::{FeatureScaler, Features, Target};
use crate::error::{Error, Result};
use crate::Prediction;

/// Input dimension: velocity, density, porosity.
pub const INPUTS: usize = 3;

/// Number of trainable parameters of a 3→H→1 network.
pub const fn param_count(hidden: usize) -> usize {
    5 * hidden + 1
}

/// Raw 3→H→1 network in normalized units.
///
/// Parameters live in one flat vector with a fixed layout, which is also
/// the column order of [`Network::jacobian`]:
///
/// | range            | meaning                                   |
/// |------------------|-------------------------------------------|
/// | `0 .. 3H`        | input→hidden weights, row-major `w1[h][j]` |
/// | `3H .. 4H`       | hidden biases `b1[h]`                     |
/// | `4H .. 5H`       | hidden→output weights `w2[h]`             |
/// | `5H`             | output bias                               |
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    hidden: usize,
    params: Vec<f64>,
}

impl Network {
    pub fn new(hidden: usize, params: Vec<f64>) -> Result<Self> {
        if hidden < 1 {
            return Err(Error::InvalidConfig("hidden layer needs at least one unit".into()));
        }
        if params.len() != param_count(hidden) {
            return Err(Error::InvalidConfig(format!(
                "a 3-{hidden}-1 network has {} parameters, got {}",
                param_count(hidden),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("network parameters"));
        }
        Ok(Self { hidden, params })
    }

    pub fn zeros(hidden: usize) -> Result<Self> {
        Self::new(hidden, vec![0.0; param_count(hidden)])
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn into_params(self) -> Vec<f64> {
        self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn w1(&self, h: usize, j: usize) -> f64 {
        self.params[h * INPUTS + j]
    }

    pub fn b1(&self, h: usize) -> f64 {
        self.params[INPUTS * self.hidden + h]
    }

    pub fn w2(&self, h: usize) -> f64 {
        self.params[4 * self.hidden + h]
    }

    pub fn b_out(&self) -> f64 {
        self.params[5 * self.hidden]
    }

    fn pre_activation(&self, h: usize, x: &[f64; 3]) -> f64 {
        let w = &self.params[h * INPUTS..(h + 1) * INPUTS];
        self.b1(h) + w[0] * x[0] + w[1] * x[1] + w[2] * x[2]
    }

    /// Network output for normalized inputs. No input validation.
    pub fn forward(&self, x: &[f64; 3]) -> f64 {
        (0..self.hidden).fold(self.b_out(), |acc, h| acc + self.w2(h) * self.pre_activation(h, x).tanh())
    }

    pub fn forward_checked(&self, x: &[f64; 3]) -> Result<f64> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("network input"));
        }
        Ok(self.forward(x))
    }

    /// N×P matrix of ∂(prediction_i − target_i)/∂param_p. The residual's
    /// target term is constant, so this is the output Jacobian.
    pub fn jacobian(&self, inputs: &[[f64; 3]]) -> Result<DMatrix<f64>> {
        if inputs.is_empty() {
            return Err(Error::InsufficientSamples { needed: 1, found: 0 });
        }
        let hn = self.hidden;
        let mut jac = DMatrix::zeros(inputs.len(), self.params.len());
        for (i, x) in inputs.iter().enumerate() {
            for h in 0..hn {
                let a = self.pre_activation(h, x).tanh();
                let delta = self.w2(h) * (1.0 - a * a);
                for j in 0..INPUTS {
                    jac[(i, h * INPUTS + j)] = delta * x[j];
                }
                jac[(i, INPUTS * hn + h)] = delta;
                jac[(i, 4 * hn + h)] = a;
            }
            jac[(i, 5 * hn)] = 1.0;
        }
        Ok(jac)
    }

    /// Residuals `prediction − target`.
    pub fn residuals(&self, inputs: &[[f64; 3]], targets: &[f64]) -> Vec<f64> {
        inputs.iter().zip(targets).map(|(x, y)| self.forward(x) - y).collect()
    }

    pub fn sse(&self, inputs: &[[f64; 3]], targets: &[f64]) -> f64 {
        self.residuals(inputs, targets).iter().map(|r| r * r).sum()
    }

    /// Reorders hidden units: unit `h` of the result is unit `perm[h]` of
    /// `self`.
    pub fn permute_hidden(&self, perm: &[usize]) -> Result<Self> {
        let hn = self.hidden;
        let mut seen = vec![false; hn];
        if perm.len() != hn || perm.iter().any(|&p| p >= hn || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidConfig("not a permutation of the hidden units".into()));
        }
        let mut params = self.params.clone();
        for (h, &src) in perm.iter().enumerate() {
            for j in 0..INPUTS {
                params[h * INPUTS + j] = self.w1(src, j);
            }
            params[INPUTS * hn + h] = self.b1(src);
            params[4 * hn + h] = self.w2(src);
        }
        Self::new(hn, params)
    }
}

/// Untrained network with every parameter drawn i.i.d. uniform on
/// [−0.5, 0.5] from a ChaCha8 stream seeded by `config.seed`.
pub fn init_weights(config: &LmConfig) -> Result<Network> {
    if config.hidden < 1 {
        return Err(Error::InvalidConfig("hidden layer needs at least one unit".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let params = (0..param_count(config.hidden)).map(|_| rng.random_range(-0.5..=0.5)).collect();
    Network::new(config.hidden, params)
}

/// Affine map between target percent and the normalized training range
/// [−1, 1]: `normalized = (y − center) / half_range`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetScale {
    pub center: f64,
    pub half_range: f64,
}

impl TargetScale {
    /// Fits on training targets. A constant target keeps unit scale and is
    /// centred on its value.
    pub fn fit(targets: &[f64]) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if targets.iter().any(|y| !y.is_finite()) {
            return Err(Error::NonFinite("target"));
        }
        let lo = targets.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = targets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            Ok(Self { center: 0.5 * (hi + lo), half_range: 0.5 * (hi - lo) })
        } else {
            Ok(Self { center: lo, half_range: 1.0 })
        }
    }

    pub fn normalize(&self, y: f64) -> f64 {
        (y - self.center) / self.half_range
    }

    pub fn denormalize(&self, z: f64) -> f64 {
        self.center + self.half_range * z
    }
}

/// A trained network together with the input and output scaling it was
/// trained under.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub target: Target,
    pub network: Network,
    pub scaler: FeatureScaler,
    pub target_scale: TargetScale,
}

impl MlpModel {
    pub fn hidden(&self) -> usize {
        self.network.hidden()
    }

    /// Predicted coefficient in percent, unclamped.
    pub fn predict(&self, features: &Features) -> Result<Prediction> {
        if !features.is_finite() {
            return Err(Error::NonFinite("features"));
        }
        let value = self.target_scale.denormalize(self.network.forward(&self.scaler.apply(features)));
        if !value.is_finite() {
            return Err(Error::Numerical(format!("non-finite prediction {value}")));
        }
        Ok(Prediction { value, extrapolated: !self.scaler.contains(features) })
    }
}
