//! Multiple linear regression of one target coefficient on the three
//! normalized features.

use nalgebra::{DMatrix, DVector};

use crate::dataset::{FeatureScaler, Features, Target};
use crate::error::{Error, Result};
use crate::Prediction;

/// Intercept + one slope per normalized feature (velocity, density,
/// porosity). The scaler is the one fitted on the training samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub target: Target,
    pub intercept: f64,
    pub coefficients: [f64; 3],
    pub scaler: FeatureScaler,
}

/// Relative threshold on |R_jj| below which a design column is treated as
/// linearly dependent on the preceding ones.
const RANK_TOL: f64 = 1e-10;

/// Least-squares solution of `design · β ≈ y` via Householder QR.
///
/// Fails with [`Error::RankDeficient`] instead of falling back to a
/// pseudo-inverse.
pub fn least_squares(design: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let (n, p) = design.shape();
    if n < p {
        return Err(Error::InsufficientSamples { needed: p, found: n });
    }
    let scale = design.column_iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    let qr = design.clone().qr();
    let r = qr.r();
    for j in 0..p {
        if !(r[(j, j)].abs() > RANK_TOL * scale) {
            return Err(Error::RankDeficient { column: j });
        }
    }
    let qty = qr.q().transpose() * y;
    r.solve_upper_triangular(&qty).ok_or_else(|| Error::Numerical("triangular solve failed".into()))
}

fn design_row(x: [f64; 3]) -> [f64; 4] {
    [1.0, x[0], x[1], x[2]]
}

impl LinearModel {
    /// Ordinary least squares on `(features, measured)` pairs. The feature
    /// scaler is fitted on the same pairs.
    pub fn fit(samples: &[(Features, f64)], target: Target) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::InsufficientSamples { needed: 4, found: samples.len() });
        }
        if samples.iter().any(|(_, y)| !y.is_finite()) {
            return Err(Error::NonFinite("target"));
        }
        let scaler = FeatureScaler::fit(samples.iter().map(|(f, _)| f))?;
        Self::fit_scaled(samples, target, scaler)
    }

    /// OLS with a caller-provided scaler.
    pub fn fit_scaled(samples: &[(Features, f64)], target: Target, scaler: FeatureScaler) -> Result<Self> {
        let n = samples.len();
        if n < 4 {
            return Err(Error::InsufficientSamples { needed: 4, found: n });
        }
        let design = DMatrix::from_fn(n, 4, |i, j| design_row(scaler.apply(&samples[i].0))[j]);
        let y = DVector::from_iterator(n, samples.iter().map(|(_, y)| *y));
        let beta = least_squares(&design, &y)?;
        if beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Numerical("non-finite regression coefficients".into()));
        }
        Ok(Self { target, intercept: beta[0], coefficients: [beta[1], beta[2], beta[3]], scaler })
    }

    /// Prediction from already-normalized features.
    pub fn predict_normalized(&self, x: [f64; 3]) -> f64 {
        self.intercept + self.coefficients[0] * x[0] + self.coefficients[1] * x[1] + self.coefficients[2] * x[2]
    }

    /// Predicted coefficient in percent, unclamped.
    pub fn predict(&self, features: &Features) -> Result<Prediction> {
        if !features.is_finite() {
            return Err(Error::NonFinite("features"));
        }
        let value = self.predict_normalized(self.scaler.apply(features));
        if !value.is_finite() {
            return Err(Error::Numerical(format!("non-finite prediction {value}")));
        }
        Ok(Prediction { value, extrapolated: !self.scaler.contains(features) })
    }
}

/// Free-function form of [`LinearModel::fit`].
pub fn fit_ols(samples: &[(Features, f64)], target: Target) -> Result<LinearModel> {
    LinearModel::fit(samples, target)
}
