//! Corpus ingestion: canonical records, format adapters, cleaning and
//! subset selection.

mod clean;
mod formats;
mod record;
mod select;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

pub use clean::{clean, CleanPolicy, CleanReport};
pub use formats::{parse_corpus, parse_reader, to_canonical_line, write_canonical};
pub use record::{PaperRecord, VenueRank};
pub use select::{largest_weak_component, select_group, GroupSpec};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no parseable records in {0}")]
    NoRecords(String),
    #[error("duplicate id {id:?} at offsets {first} and {second}")]
    DuplicateId {
        id: String,
        first: u64,
        second: u64,
    },
    #[error("record at offset {offset} has an empty id")]
    EmptyId { offset: u64 },
    #[error("cleaning policy removed every record")]
    CleanedToEmpty,
    #[error("corpus is empty")]
    Empty,
    #[error("group filter must set at least one of year, venue, rank")]
    EmptyGroupSpec,
    #[error("unknown corpus format {0:?} (expected dblp_v13, pubmed or canonical)")]
    UnknownFormat(String),
}

/// Source layouts understood by [`parse_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusFormat {
    /// DBLP citation network V13 dump: a JSON array of objects keyed by `_id`.
    DblpV13,
    /// PubMed-derived JSON Lines keyed by `pmid`.
    Pubmed,
    /// The crate's own JSON Lines interchange format.
    Canonical,
}

impl CorpusFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            CorpusFormat::DblpV13 => "dblp_v13",
            CorpusFormat::Pubmed => "pubmed",
            CorpusFormat::Canonical => "canonical",
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dblp_v13" => Ok(CorpusFormat::DblpV13),
            "pubmed" => Ok(CorpusFormat::Pubmed),
            "canonical" => Ok(CorpusFormat::Canonical),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

/// Counters gathered while reading a source file.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IngestReport {
    pub entries_seen: usize,
    pub malformed: usize,
    pub self_references_dropped: usize,
    pub duplicate_references_dropped: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    pub source: Option<PathBuf>,
    pub format: Option<CorpusFormat>,
    pub cleaning: Option<CleanPolicy>,
    pub ingest: IngestReport,
}

/// An id-sorted collection of [`PaperRecord`]s with unique ids.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    records: Vec<PaperRecord>,
    provenance: Provenance,
}

impl Corpus {
    /// Builds a corpus from records, normalizing reference lists.
    ///
    /// Record position in `records` stands in for the source offset when a
    /// duplicate id is reported.
    pub fn from_records(records: Vec<PaperRecord>) -> Result<Self, CorpusError> {
        let offsets = (0..records.len() as u64).collect::<Vec<_>>();
        Self::from_located(records.into_iter().zip(offsets).collect(), Provenance::default())
    }

    pub(crate) fn from_located(
        located: Vec<(PaperRecord, u64)>,
        mut provenance: Provenance,
    ) -> Result<Self, CorpusError> {
        let mut located = located;
        for (rec, offset) in &mut located {
            if rec.id.is_empty() {
                return Err(CorpusError::EmptyId { offset: *offset });
            }
            let fx = rec.normalize();
            provenance.ingest.self_references_dropped += fx.self_references;
            provenance.ingest.duplicate_references_dropped += fx.duplicates;
        }
        located.sort_by(|a, b| a.0.id.cmp(&b.0.id).then(a.1.cmp(&b.1)));
        if let Some(w) = located.windows(2).find(|w| w[0].0.id == w[1].0.id) {
            return Err(CorpusError::DuplicateId {
                id: w[0].0.id.clone(),
                first: w[0].1,
                second: w[1].1,
            });
        }
        Ok(Corpus {
            records: located.into_iter().map(|(r, _)| r).collect(),
            provenance,
        })
    }

    /// Wraps records that are already normalized and sorted by unique id.
    pub(crate) fn from_sorted(records: Vec<PaperRecord>, provenance: Provenance) -> Self {
        debug_assert!(records.windows(2).all(|w| w[0].id < w[1].id));
        Corpus {
            records,
            provenance,
        }
    }

    pub fn records(&self) -> &[PaperRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<PaperRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_source(&mut self, source: impl AsRef<Path>) {
        self.provenance.source = Some(source.as_ref().to_path_buf());
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.records
            .binary_search_by(|r| r.id.as_str().cmp(id))
            .ok()
    }

    pub fn get(&self, id: &str) -> Option<&PaperRecord> {
        self.position(id).map(|i| &self.records[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.position(id).is_some()
    }

    /// Number of reference entries that do not resolve inside the corpus.
    pub fn dangling_references(&self) -> usize {
        self.records
            .iter()
            .flat_map(|r| &r.references)
            .filter(|id| !self.contains(id))
            .count()
    }

    /// Distinct unresolved reference ids, sorted.
    pub fn dangling_ids(&self) -> Vec<String> {
        let set: HashSet<&str> = self
            .records
            .iter()
            .flat_map(|r| &r.references)
            .filter(|id| !self.contains(id))
            .map(String::as_str)
            .collect();
        let mut out: Vec<String> = set.into_iter().map(str::to_string).collect();
        out.sort_unstable();
        out
    }
}
