//! Citation structural diversity: the number of connected components among a
//! paper's references, under six ways of linking those references.
//!
//! Every edge set is scoped to one target paper `v` and its reference set
//! `R`. Pairs are unordered; direction stops mattering once the reference
//! subgraph is turned into its undirected base graph.

mod batch;
mod csv_io;
mod edges;
mod thresholds;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphError;

pub use batch::{compute_all, evaluate, structural_diversity, BatchOutcome, DiversityResult, TargetFailure};
pub use csv_io::{read_diversity_csv, write_diversity_csv, DIVERSITY_CSV_HEADER};
pub use edges::{
    citation_pairs, co_citation_edges, coupling_edges, filtered_co_citation_edges,
    filtered_coupling_edges, semantic_edges, NodePair, ReferenceScope, ReferenceSimilarities,
};
pub use thresholds::{resolve_thresholds, Theta1Rule, Theta2Rule, ThresholdPolicy, Thresholds};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiversityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("variant {0} needs embedding similarities but none were supplied")]
    MissingSimilarities(DiversityVariant),
    #[error("no embedding vector for paper {0:?}")]
    MissingEmbedding(String),
    #[error("no similarities available to resolve {0}")]
    NoSimilaritiesForThreshold(&'static str),
    #[error("threshold {name} resolved to a non-finite value")]
    NonFiniteThreshold { name: &'static str },
    #[error("similarity data covers {found} references, expected {expected}")]
    SimilarityShape { expected: usize, found: usize },
    #[error("no target papers to evaluate")]
    NoTargets,
    #[error("unknown diversity variant {0:?}")]
    UnknownVariant(String),
    #[error("malformed diversity table: {0}")]
    Table(String),
}

/// The six diversity measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiversityVariant {
    /// Direct citations only (`sd_r`).
    Plain,
    /// Direct citations plus co-citation and coupling (`sd_c`).
    Combined,
    /// Direct citations plus similarity edges at θ₁ (`sd_ss`).
    SemanticEnhanced,
    /// Direct citations plus co-citation/coupling filtered at θ₂ (`sd_cs`).
    CombinedEnhanced,
    /// Union of the semantic-enhanced and combined-enhanced graphs (`sd_scs`).
    SemanticCombinedEnhanced,
    /// Union of the combined and semantic-enhanced graphs (`sd_css`).
    CombinedSemanticEnhanced,
}

impl DiversityVariant {
    pub const ALL: [DiversityVariant; 6] = [
        DiversityVariant::Plain,
        DiversityVariant::Combined,
        DiversityVariant::SemanticEnhanced,
        DiversityVariant::CombinedEnhanced,
        DiversityVariant::SemanticCombinedEnhanced,
        DiversityVariant::CombinedSemanticEnhanced,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            DiversityVariant::Plain => "plain",
            DiversityVariant::Combined => "combined",
            DiversityVariant::SemanticEnhanced => "semantic_enhanced",
            DiversityVariant::CombinedEnhanced => "combined_enhanced",
            DiversityVariant::SemanticCombinedEnhanced => "semantic_combined_enhanced",
            DiversityVariant::CombinedSemanticEnhanced => "combined_semantic_enhanced",
        }
    }

    /// Column name in tabular output.
    pub fn column(self) -> &'static str {
        match self {
            DiversityVariant::Plain => "sd_r",
            DiversityVariant::Combined => "sd_c",
            DiversityVariant::SemanticEnhanced => "sd_ss",
            DiversityVariant::CombinedEnhanced => "sd_cs",
            DiversityVariant::SemanticCombinedEnhanced => "sd_scs",
            DiversityVariant::CombinedSemanticEnhanced => "sd_css",
        }
    }

    pub fn needs_similarity(self) -> bool {
        !matches!(self, DiversityVariant::Plain | DiversityVariant::Combined)
    }

    pub fn uses_theta1(self) -> bool {
        matches!(
            self,
            DiversityVariant::SemanticEnhanced
                | DiversityVariant::SemanticCombinedEnhanced
                | DiversityVariant::CombinedSemanticEnhanced
        )
    }

    pub fn uses_theta2(self) -> bool {
        matches!(
            self,
            DiversityVariant::CombinedEnhanced | DiversityVariant::SemanticCombinedEnhanced
        )
    }
}

impl fmt::Display for DiversityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiversityVariant {
    type Err = DiversityError;

    /// Accepts either the long name or the column name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        DiversityVariant::ALL
            .into_iter()
            .find(|v| v.name() == t || v.column() == t)
            .ok_or_else(|| DiversityError::UnknownVariant(t.to_string()))
    }
}

/// One optional value per variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VariantCounts([Option<usize>; 6]);

impl VariantCounts {
    pub fn get(&self, v: DiversityVariant) -> Option<usize> {
        self.0[v.index()]
    }

    pub fn set(&mut self, v: DiversityVariant, value: usize) {
        self.0[v.index()] = Some(value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (DiversityVariant, Option<usize>)> + '_ {
        DiversityVariant::ALL.into_iter().map(|v| (v, self.get(v)))
    }
}
