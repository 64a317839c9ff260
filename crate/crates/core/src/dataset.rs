//! Sample data model, CSV ingestion, feature scaling and deterministic
//! train/validation/test splitting.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Exact CSV header accepted by [`Dataset::load_csv`].
pub const CSV_HEADER: &str = "id,velocity_mps,density_gcm3,porosity_pct,la_pct,mde_pct";

const CSV_COLUMNS: [&str; 6] = ["id", "velocity_mps", "density_gcm3", "porosity_pct", "la_pct", "mde_pct"];

/// Which attrition coefficient a model predicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    La,
    Mde,
}

impl Target {
    pub fn label(self) -> &'static str {
        match self {
            Target::La => "LA",
            Target::Mde => "MDE",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Target::La => "la",
            Target::Mde => "mde",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The three model inputs in their physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Features {
    /// Ultrasonic pulse velocity, m/s.
    pub velocity: f64,
    /// Bulk density, g/cm³.
    pub density: f64,
    /// Effective porosity, percent.
    pub porosity: f64,
}

impl Features {
    pub fn new(velocity: f64, density: f64, porosity: f64) -> Self {
        Self { velocity, density, porosity }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.velocity, self.density, self.porosity]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RockSample {
    pub id: String,
    pub velocity: f64,
    pub density: f64,
    pub porosity: f64,
    pub la: Option<f64>,
    pub mde: Option<f64>,
}

impl RockSample {
    pub fn features(&self) -> Features {
        Features::new(self.velocity, self.density, self.porosity)
    }

    pub fn target(&self, target: Target) -> Option<f64> {
        match target {
            Target::La => self.la,
            Target::Mde => self.mde,
        }
    }

    /// Checks the physical-range invariants. `row` is only used for error
    /// reporting.
    fn validate(&self, row: usize) -> Result<()> {
        let out = |field, value, range| Err(Error::OutOfRange { row, field, value, range });
        if self.id.is_empty() {
            return Err(Error::EmptyId { row });
        }
        if !(self.velocity > 0.0) {
            return out("velocity_mps", self.velocity, "> 0");
        }
        if !(self.density > 0.0) {
            return out("density_gcm3", self.density, "> 0");
        }
        if !(0.0..=100.0).contains(&self.porosity) {
            return out("porosity_pct", self.porosity, "0..=100");
        }
        for (field, value) in [("la_pct", self.la), ("mde_pct", self.mde)] {
            if let Some(v) = value {
                if !(0.0..=100.0).contains(&v) {
                    return out(field, v, "0..=100");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub samples: Vec<RockSample>,
    /// Free-form metadata such as "10/14 mm".
    pub grain_class: Option<String>,
}

impl Dataset {
    /// Builds a dataset, enforcing the per-sample range invariants and id
    /// uniqueness. Rows in errors are numbered as they would be in a CSV
    /// file (header is row 1).
    pub fn new(samples: Vec<RockSample>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, s) in samples.iter().enumerate() {
            s.validate(i + 2)?;
            if !seen.insert(s.id.as_str()) {
                return Err(Error::DuplicateId { row: i + 2, id: s.id.clone() });
            }
        }
        Ok(Self { samples, grain_class: None })
    }

    pub fn with_grain_class(mut self, grain_class: impl Into<String>) -> Self {
        self.grain_class = Some(grain_class.into());
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Parses the CSV format described by [`CSV_HEADER`].
    pub fn load_csv<R: Read>(mut source: R) -> Result<Self> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        let text = std::str::from_utf8(&bytes).map_err(|_| Error::NotUtf8)?;
        Self::parse_csv(text)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
        let header = lines.next().unwrap_or("");
        if header != CSV_HEADER {
            return Err(Error::Header { found: header.to_string(), expected: CSV_HEADER });
        }

        let mut samples = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in lines.enumerate() {
            let row = i + 2;
            if line.is_empty() {
                continue;
            }
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != CSV_COLUMNS.len() {
                return Err(Error::FieldCount { row, expected: CSV_COLUMNS.len(), found: cells.len() });
            }
            let number = |col: usize| -> Result<f64> {
                parse_decimal(cells[col]).ok_or_else(|| Error::NonNumeric {
                    row,
                    column: CSV_COLUMNS[col],
                    value: cells[col].to_string(),
                })
            };
            let optional = |col: usize| -> Result<Option<f64>> {
                if cells[col].is_empty() {
                    Ok(None)
                } else {
                    number(col).map(Some)
                }
            };
            let sample = RockSample {
                id: cells[0].to_string(),
                velocity: number(1)?,
                density: number(2)?,
                porosity: number(3)?,
                la: optional(4)?,
                mde: optional(5)?,
            };
            sample.validate(row)?;
            if !seen.insert(sample.id.clone()) {
                return Err(Error::DuplicateId { row, id: sample.id });
            }
            samples.push(sample);
        }
        Ok(Self { samples, grain_class: None })
    }

    /// Canonical CSV rendering: exact header, LF line endings, floats in
    /// shortest round-trip form. `parse_csv(to_csv())` reproduces the
    /// dataset exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.samples.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.id,
                s.velocity,
                s.density,
                s.porosity,
                opt(s.la),
                opt(s.mde)
            ));
        }
        out
    }

    /// SHA-256 (hex) of the canonical CSV rendering.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_csv().as_bytes()))
    }

    /// Indices of samples that carry a measured value for `target`.
    pub fn indices_with_target(&self, target: Target) -> Vec<usize> {
        (0..self.samples.len()).filter(|&i| self.samples[i].target(target).is_some()).collect()
    }

    /// Feature/target pairs for the given indices, skipping samples without
    /// the target.
    pub fn labelled(&self, indices: &[usize], target: Target) -> Vec<(Features, f64)> {
        indices
            .iter()
            .filter_map(|&i| {
                let s = &self.samples[i];
                s.target(target).map(|y| (s.features(), y))
            })
            .collect()
    }
}

fn parse_decimal(cell: &str) -> Option<f64> {
    // Rust's float parser also accepts "inf" and "NaN"; neither is a decimal literal.
    let ok =
        !cell.is_empty() && cell.bytes().all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    if !ok {
        return None;
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Observed range of one feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureRange {
    pub min: f64,
    pub max: f64,
}

impl FeatureRange {
    fn apply(&self, x: f64) -> f64 {
        2.0 * (x - self.min) / (self.max - self.min) - 1.0
    }

    fn invert(&self, y: f64) -> f64 {
        self.min + (y + 1.0) * 0.5 * (self.max - self.min)
    }

    fn contains(&self, x: f64) -> bool {
        (self.min..=self.max).contains(&x)
    }
}

/// Per-feature min-max scaling onto [−1, +1]. Values outside the fitted
/// range extrapolate linearly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub velocity: FeatureRange,
    pub density: FeatureRange,
    pub porosity: FeatureRange,
}

impl FeatureScaler {
    pub fn fit<'a, I>(features: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Features>,
    {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        let mut n = 0usize;
        for f in features {
            if !f.is_finite() {
                return Err(Error::NonFinite("features"));
            }
            for (k, v) in f.as_array().into_iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        const NAMES: [&str; 3] = ["velocity", "density", "porosity"];
        for k in 0..3 {
            if hi[k] <= lo[k] {
                return Err(Error::ConstantFeature { feature: NAMES[k] });
            }
        }
        let r = |k: usize| FeatureRange { min: lo[k], max: hi[k] };
        Ok(Self { velocity: r(0), density: r(1), porosity: r(2) })
    }

    pub fn fit_dataset(data: &Dataset) -> Result<Self> {
        let features: Vec<Features> = data.samples.iter().map(RockSample::features).collect();
        Self::fit(&features)
    }

    fn ranges(&self) -> [&FeatureRange; 3] {
        [&self.velocity, &self.density, &self.porosity]
    }

    pub fn apply(&self, f: &Features) -> [f64; 3] {
        let x = f.as_array();
        let r = self.ranges();
        [r[0].apply(x[0]), r[1].apply(x[1]), r[2].apply(x[2])]
    }

    pub fn invert(&self, normalized: [f64; 3]) -> Features {
        let r = self.ranges();
        Features::new(r[0].invert(normalized[0]), r[1].invert(normalized[1]), r[2].invert(normalized[2]))
    }

    /// True when every feature lies inside its fitted range.
    pub fn contains(&self, f: &Features) -> bool {
        let x = f.as_array();
        self.ranges().iter().zip(x).all(|(r, v)| r.contains(v))
    }
}

/// Train/validation/test fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl SplitRatios {
    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self> {
        let all = [train, validation, test];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidRatios("fractions must be finite and non-negative".into()));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRatios(format!("fractions sum to {sum}, not 1")));
        }
        Ok(Self { train, validation, test })
    }

    /// Parses proportions such as `5:1:1` and normalizes them to fractions.
    pub fn parse_proportions(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidRatios(format!("expected a:b:c, got {text:?}")));
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite() && *x >= 0.0)
                .ok_or_else(|| Error::InvalidRatios(format!("bad proportion {p:?}")))?;
        }
        let total: f64 = v.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidRatios("proportions sum to zero".into()));
        }
        Self::new(v[0] / total, v[1] / total, v[2] / total)
    }
}

impl Default for SplitRatios {
    /// 5:1:1, one validation and one verification sample out of seven.
    fn default() -> Self {
        Self { train: 5.0 / 7.0, validation: 1.0 / 7.0, test: 1.0 / 7.0 }
    }
}

/// Disjoint index lists into a [`Dataset`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DataSplit {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

impl DataSplit {
    /// Everything in train.
    pub fn all_train(n: usize) -> Self {
        Self { train: (0..n).collect(), ..Self::default() }
    }
}

/// Seeded shuffle followed by a contiguous train/validation/test partition.
/// Validation and test sizes are `round(fraction × N)`; train takes the rest.
pub fn split(data: &Dataset, ratios: SplitRatios, seed: u64) -> Result<DataSplit> {
    let n = data.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let n_val = (ratios.validation * n as f64).round() as usize;
    let n_test = (ratios.test * n as f64).round() as usize;
    if n_val + n_test >= n {
        return Err(Error::InvalidRatios(format!(
            "no training samples left ({n_val} validation + {n_test} test of {n})"
        )));
    }
    let n_train = n - n_val - n_test;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Ok(DataSplit {
        train: order[..n_train].to_vec(),
        validation: order[n_train..n_train + n_val].to_vec(),
        test: order[n_train + n_val..].to_vec(),
    })
}

/// Leave-one-out: split `k` tests on sample `k` and trains on the rest.
pub fn loocv_splits(data: &Dataset) -> Result<Vec<DataSplit>> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, found: n });
    }
    Ok((0..n)
        .map(|k| DataSplit { train: (0..n).filter(|&i| i != k).collect(), validation: Vec::new(), test: vec![k] })
        .collect())
}
