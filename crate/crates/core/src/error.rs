use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("row 1: malformed header {found:?}, expected {expected:?}")]
    Header { found: String, expected: &'static str },

    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount { row: usize, expected: usize, found: usize },

    #[error("row {row}: column {column}: not a finite decimal number: {value:?}")]
    NonNumeric { row: usize, column: &'static str, value: String },

    #[error("row {row}: {field} = {value} is out of range ({range})")]
    OutOfRange { row: usize, field: &'static str, value: f64, range: &'static str },

    #[error("row {row}: empty sample id")]
    EmptyId { row: usize },

    #[error("row {row}: duplicate sample id {id:?}")]
    DuplicateId { row: usize, id: String },

    #[error("input is not valid UTF-8")]
    NotUtf8,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("feature {feature} is constant across the fitting samples")]
    ConstantFeature { feature: &'static str },

    #[error("need ≥ {needed} samples, found {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("design matrix is rank deficient (column {column} is linearly dependent)")]
    RankDeficient { column: usize },

    #[error("invalid masses: {0}")]
    InvalidMass(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("--{flag}: not a finite decimal number: {value:?}")]
    InvalidFeature { flag: &'static str, value: String },

    #[error("length mismatch: {measured} measured vs {predicted} predicted")]
    LengthMismatch { measured: usize, predicted: usize },

    #[error("no samples carry a measured {0} value")]
    TargetAbsent(&'static str),

    #[error("report is empty")]
    EmptyReport,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported model format_version {0}")]
    UnsupportedVersion(u64),

    #[error("model file parse error at byte {offset}: {message}")]
    ModelParse { offset: usize, message: String },

    #[error("eval CSV parse error at line {line}: {message}")]
    EvalCsv { line: usize, message: String },
}

impl Error {
    /// Process exit code: 2 for data problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) => 3,
            _ => 2,
        }
    }
}
