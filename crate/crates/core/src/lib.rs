//! Citation structural diversity toolkit.
//!
//! Pipeline: [`corpus`] ingestion and cleaning, the interned [`graph`],
//! embedding similarities in [`semantic`], the six diversity measures in
//! [`diversity`], and the statistics built on top of them in [`analytics`]
//! and [`predictor`].
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`, which is what the pipeline uses.

pub mod analytics;
pub mod corpus;
pub mod diversity;
pub mod graph;
pub mod predictor;
pub mod scalar;
pub mod semantic;
pub mod stats;

#[cfg(test)]
mod test_fixtures;

pub use corpus::{Corpus, CorpusError, CorpusFormat, PaperRecord, VenueRank};
pub use diversity::{DiversityError, DiversityVariant};
pub use graph::{CitationGraph, GraphError, NodeId};
pub use scalar::Real;
pub use semantic::{EmbeddingTable, SemanticError};

pub type SimilarityMatrix = semantic::SimilarityMatrix<f64>;
pub type SimilarityMatrixF32 = semantic::SimilarityMatrix<f32>;
pub type ReferenceSimilarities = diversity::ReferenceSimilarities<f64>;
pub type ThresholdPolicy = diversity::ThresholdPolicy<f64>;
pub type Thresholds = diversity::Thresholds<f64>;
pub type DiversityResult = diversity::DiversityResult<f64>;
pub type BatchOutcome = diversity::BatchOutcome<f64>;
pub type CorrelationReport = analytics::CorrelationReport<f64>;
pub type TrendSeries = analytics::TrendSeries<f64>;
pub type LinearModel = predictor::LinearModel<f64>;
pub type KnnModel = predictor::KnnModel<f64>;
pub type RegressionMetrics = predictor::RegressionMetrics<f64>;
