//! Statistics relating diversity to citation outcomes: grouped and
//! per-paper correlations, normalized citation trends by diversity bin, and
//! the topic-count correlation.

mod correlation;
mod trend;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CitationGraph, GraphError, NodeId};
use crate::stats::StatsError;

pub use correlation::{
    correlation_by_diversity, topic_correlation, write_correlation_csv, CorrelationReport,
    CorrelationSummary, GroupStat, TopicCorrelation,
};
pub use trend::{
    normalize_trend, trend_by_bin, write_trend_csv, DiversityBin, TrendReport, TrendSeries,
    TREND_YEARS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("fewer than 2 diversity groups")]
    FewerThanTwoGroups,
    #[error("no paper carries topic data")]
    NoTopicData,
    #[error("trend series has {found} entries, expected {expected}")]
    TrendLength { expected: usize, found: usize },
    #[error("citation counts must be non-negative and finite")]
    InvalidCount,
    #[error("{results} diversity results but {series} citation series")]
    SeriesMismatch { results: usize, series: usize },
    #[error("unknown statistic {0:?} (expected median or iqrmean)")]
    UnknownStat(String),
}

/// Per-group summary statistic of citation counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatKind {
    #[serde(rename = "median")]
    Median,
    #[serde(rename = "iqrmean")]
    IqrMean,
}

impl StatKind {
    pub const ALL: [StatKind; 2] = [StatKind::Median, StatKind::IqrMean];

    pub fn as_str(self) -> &'static str {
        match self {
            StatKind::Median => "median",
            StatKind::IqrMean => "iqrmean",
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatKind {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "median" => Ok(StatKind::Median),
            "iqrmean" | "iqr_mean" => Ok(StatKind::IqrMean),
            other => Err(AnalyticsError::UnknownStat(other.to_string())),
        }
    }
}

/// Whether the correlation runs over per-group statistics or raw papers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMode {
    /// One point per distinct diversity value: (sd, statistic of citations).
    Grouped,
    /// One point per paper: (sd, citations).
    PerPaper,
}

impl CorrelationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationMode::Grouped => "grouped",
            CorrelationMode::PerPaper => "per_paper",
        }
    }
}

/// Citations received by `v` in each of the `years` calendar years starting
/// at its publication year. `None` when `v` has no year.
pub fn citation_window(
    graph: &CitationGraph,
    v: NodeId,
    years: usize,
) -> Result<Option<Vec<u32>>, GraphError> {
    match graph.year(v) {
        None => Ok(None),
        Some(y) => Ok(Some(graph.citation_series(v, y, years)?.counts)),
    }
}
