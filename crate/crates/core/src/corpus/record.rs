use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Venue ranking label carried through from the source data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VenueRank {
    Q1,
    Q2,
    Q3,
    Q4,
    A,
    B,
    C,
    Unranked,
}

impl VenueRank {
    pub const ALL: [VenueRank; 8] = [
        VenueRank::Q1,
        VenueRank::Q2,
        VenueRank::Q3,
        VenueRank::Q4,
        VenueRank::A,
        VenueRank::B,
        VenueRank::C,
        VenueRank::Unranked,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VenueRank::Q1 => "Q1",
            VenueRank::Q2 => "Q2",
            VenueRank::Q3 => "Q3",
            VenueRank::Q4 => "Q4",
            VenueRank::A => "A",
            VenueRank::B => "B",
            VenueRank::C => "C",
            VenueRank::Unranked => "Unranked",
        }
    }

    /// Lenient parse: anything unrecognised is `Unranked`.
    pub fn parse_lenient(s: &str) -> VenueRank {
        s.parse().unwrap_or(VenueRank::Unranked)
    }
}

impl fmt::Display for VenueRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VenueRank {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        VenueRank::ALL
            .iter()
            .copied()
            .find(|r| r.as_str().eq_ignore_ascii_case(t))
            .ok_or_else(|| format!("unknown venue rank {t:?}"))
    }
}

/// One bibliographic entry.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PaperRecord {
    pub id: String,
    pub title: String,
    pub abstract_text: String,
    pub year: Option<i32>,
    pub venue: String,
    pub rank: Option<VenueRank>,
    /// Sorted and free of duplicates once the record has been normalized.
    pub references: Vec<String>,
    pub topics: Option<Vec<String>>,
}

/// Counters produced while normalizing a record's reference list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct ReferenceFixups {
    pub self_references: usize,
    pub duplicates: usize,
}

impl PaperRecord {
    pub fn new(id: impl Into<String>) -> Self {
        PaperRecord {
            id: id.into(),
            ..Default::default()
        }
    }

    pub fn with_references<I, S>(mut self, refs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.references = refs.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = Some(year);
        self
    }

    pub fn n_topics(&self) -> usize {
        self.topics.as_ref().map_or(0, Vec::len)
    }

    /// Sorts references, drops duplicates and self-citations, and dedups topics.
    pub(crate) fn normalize(&mut self) -> ReferenceFixups {
        if let Some(topics) = self.topics.as_mut() {
            topics.sort_unstable();
            topics.dedup();
        }
        let before = self.references.len();
        let own = self.id.as_str();
        self.references.retain(|r| r != own);
        let self_references = before - self.references.len();
        self.references.sort_unstable();
        let with_dups = self.references.len();
        self.references.dedup();
        ReferenceFixups {
            self_references,
            duplicates: with_dups - self.references.len(),
        }
    }
}
