//! Citation-count prediction: feature assembly, a seeded train/test split,
//! least-squares and nearest-neighbour regressors, and their metrics.

mod features;
mod knn;
mod linear;
mod metrics;

use thiserror::Error;

use crate::graph::GraphError;

pub use features::{
    assemble_features, read_features, split, write_features, FeatureRow, FeatureSet, SplitSpec,
    FEATURE_WINDOW_YEARS, HORIZONS,
};
pub use knn::{KnnModel, DEFAULT_K};
pub use linear::LinearModel;
pub use metrics::{mse, r_squared, ModelReport, RegressionMetrics};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PredictorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("horizon {0} is not one of 1, 5, 10")]
    InvalidHorizon(usize),
    #[error("train fraction {0} is outside (0, 1)")]
    InvalidFraction(f64),
    #[error("need at least {needed} rows, got {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("training set is empty")]
    EmptyTrain,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("training set has {n} rows, fewer than k = {k}")]
    TrainSmallerThanK { k: usize, n: usize },
    #[error("feature rows have inconsistent widths ({expected} vs {found})")]
    FeatureWidth { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    Empty,
    #[error("actual values are constant; R-squared is undefined")]
    ConstantActual,
    #[error("feature table: {0}")]
    Table(String),
}
