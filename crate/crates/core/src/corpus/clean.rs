use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, PaperRecord};

/// Record-level filters applied by [`clean`]. The default disables every rule.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleanPolicy {
    pub require_title: bool,
    pub require_abstract: bool,
    pub min_references: usize,
    pub drop_dangling_refs: bool,
}

/// Per-rule removal counts. A record failing several rules is attributed to
/// the first one in field order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CleanReport {
    pub input_records: usize,
    pub output_records: usize,
    pub removed_missing_title: usize,
    pub removed_missing_abstract: usize,
    pub removed_too_few_references: usize,
    pub dangling_references_dropped: usize,
    /// Filter passes needed to reach a fixed point.
    pub passes: usize,
}

enum Verdict {
    Keep,
    MissingTitle,
    MissingAbstract,
    TooFewReferences,
}

fn judge(policy: &CleanPolicy, r: &PaperRecord) -> Verdict {
    if policy.require_title && r.title.trim().is_empty() {
        Verdict::MissingTitle
    } else if policy.require_abstract && r.abstract_text.trim().is_empty() {
        Verdict::MissingAbstract
    } else if r.references.len() < policy.min_references {
        Verdict::TooFewReferences
    } else {
        Verdict::Keep
    }
}

/// Applies `policy` until nothing changes, so that `clean` is idempotent even
/// when dropping records turns other records' references into dangling ones.
pub fn clean(corpus: &Corpus, policy: &CleanPolicy) -> Result<(Corpus, CleanReport), CorpusError> {
    let mut report = CleanReport {
        input_records: corpus.len(),
        ..Default::default()
    };
    let mut records: Vec<PaperRecord> = corpus.records().to_vec();
    loop {
        report.passes += 1;
        let mut changed = false;

        if policy.drop_dangling_refs {
            let ids: Vec<String> = records.iter().map(|r| r.id.clone()).collect();
            for r in &mut records {
                let before = r.references.len();
                r.references.retain(|id| ids.binary_search(id).is_ok());
                let dropped = before - r.references.len();
                report.dangling_references_dropped += dropped;
                changed |= dropped > 0;
            }
        }

        let before = records.len();
        records.retain(|r| match judge(policy, r) {
            Verdict::Keep => true,
            Verdict::MissingTitle => {
                report.removed_missing_title += 1;
                false
            }
            Verdict::MissingAbstract => {
                report.removed_missing_abstract += 1;
                false
            }
            Verdict::TooFewReferences => {
                report.removed_too_few_references += 1;
                false
            }
        });
        let removed_any = records.len() != before;

        if !removed_any && !changed {
            break;
        }
    }
    if records.is_empty() {
        return Err(CorpusError::CleanedToEmpty);
    }
    report.output_records = records.len();
    let mut provenance = corpus.provenance().clone();
    provenance.cleaning = Some(policy.clone());
    Ok((Corpus::from_sorted(records, provenance), report))
}
