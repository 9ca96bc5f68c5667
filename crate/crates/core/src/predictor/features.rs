use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Corpus;
use crate::diversity::{DiversityResult, DiversityVariant};
use crate::graph::CitationGraph;
use crate::scalar::Real;

use super::PredictorError;

pub const HORIZONS: [usize; 3] = [1, 5, 10];

/// Years of early citations used as a feature.
pub const FEATURE_WINDOW_YEARS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureRow {
    pub id: String,
    pub n_references: u64,
    pub citations_3yr: u64,
    /// Absent in baseline rows.
    pub sd_value: Option<u64>,
    pub target: u64,
}

impl FeatureRow {
    pub fn features<F: Real>(&self) -> Vec<F> {
        let mut x = vec![
            F::from_u64(self.n_references).unwrap_or_else(F::nan),
            F::from_u64(self.citations_3yr).unwrap_or_else(F::nan),
        ];
        if let Some(sd) = self.sd_value {
            x.push(F::from_u64(sd).unwrap_or_else(F::nan));
        }
        x
    }

    pub fn target_value<F: Real>(&self) -> F {
        F::from_u64(self.target).unwrap_or_else(F::nan)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    /// `None` for the baseline feature set.
    pub variant: Option<DiversityVariant>,
    pub horizon: usize,
    /// Sorted by id.
    pub rows: Vec<FeatureRow>,
    pub excluded_no_year: usize,
    pub excluded_no_sd: usize,
}

impl FeatureSet {
    pub fn label(&self) -> &'static str {
        self.variant.map(|v| v.name()).unwrap_or("baseline")
    }

    pub fn design<F: Real>(rows: &[FeatureRow]) -> (Vec<Vec<F>>, Vec<F>) {
        (
            rows.iter().map(FeatureRow::features).collect(),
            rows.iter().map(FeatureRow::target_value).collect(),
        )
    }
}

/// One row per diversity result whose paper has a year (and, with a
/// variant, a value for it).
///
/// `citations_3yr` counts citations in the first three calendar years from
/// publication; the target counts the `horizon` years that follow, so the
/// target never overlaps the early-citation feature.
pub fn assemble_features<F: Real>(
    corpus: &Corpus,
    graph: &CitationGraph,
    results: &[DiversityResult<F>],
    variant: Option<DiversityVariant>,
    horizon: usize,
) -> Result<FeatureSet, PredictorError> {
    if !HORIZONS.contains(&horizon) {
        return Err(PredictorError::InvalidHorizon(horizon));
    }
    let mut set = FeatureSet {
        variant,
        horizon,
        rows: Vec::with_capacity(results.len()),
        excluded_no_year: 0,
        excluded_no_sd: 0,
    };
    for res in results {
        let v = res.target;
        let Some(year) = graph.year(v) else {
            set.excluded_no_year += 1;
            continue;
        };
        let sd_value = match variant {
            None => None,
            Some(var) => match res.get(var) {
                Some(sd) => Some(sd as u64),
                None => {
                    set.excluded_no_sd += 1;
                    continue;
                }
            },
        };
        let n_references = corpus
            .get(graph.id(v))
            .map_or(graph.references(v).len(), |r| r.references.len()) as u64;
        let early = graph.citation_series(v, year, FEATURE_WINDOW_YEARS)?.total();
        let later = graph
            .citation_series(v, year + FEATURE_WINDOW_YEARS as i32, horizon)?
            .total();
        set.rows.push(FeatureRow {
            id: graph.id(v).to_string(),
            n_references,
            citations_3yr: early,
            sd_value,
            target: later,
        });
    }
    set.rows.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(seed: u64) -> Self {
        SplitSpec {
            train_fraction: 0.8,
            seed,
        }
    }
}

/// Seeded shuffle, then the first `floor(fraction * n)` rows train.
pub fn split(
    rows: &[FeatureRow],
    spec: SplitSpec,
) -> Result<(Vec<FeatureRow>, Vec<FeatureRow>), PredictorError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(PredictorError::InvalidFraction(spec.train_fraction));
    }
    if rows.len() < 5 {
        return Err(PredictorError::TooFewRows {
            needed: 5,
            found: rows.len(),
        });
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
    let n_train = (spec.train_fraction * rows.len() as f64).floor() as usize;
    let pick = |idx: &[usize]| idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>();
    Ok((pick(&order[..n_train]), pick(&order[n_train..])))
}

/// Writes `id,n_references,citations_3yr[,sd_value],target_h{h}` sorted by id.
pub fn write_features<W: Write>(set: &FeatureSet, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let target = format!("target_h{}", set.horizon);
    let with_sd = set.variant.is_some();
    let mut header = vec!["id", "n_references", "citations_3yr"];
    if with_sd {
        header.push("sd_value");
    }
    header.push(&target);
    w.write_record(&header)?;
    let mut rows: Vec<&FeatureRow> = set.rows.iter().collect();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    for r in rows {
        let mut rec = vec![r.id.clone(), r.n_references.to_string(), r.citations_3yr.to_string()];
        if with_sd {
            rec.push(r.sd_value.map(|v| v.to_string()).unwrap_or_default());
        }
        rec.push(r.target.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a feature CSV. The variant is not recoverable from the file, so
/// rows with an `sd_value` column come back with `variant` unset and each
/// row's `sd_value` filled.
pub fn read_features<R: Read>(input: R) -> Result<(Vec<FeatureRow>, usize), PredictorError> {
    let table = |e: csv::Error| PredictorError::Table(e.to_string());
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers().map_err(table)?.iter().map(str::to_string).collect();
    let with_sd = match header.len() {
        4 => false,
        5 if header[3] == "sd_value" => true,
        _ => return Err(PredictorError::Table(format!("unexpected header {header:?}"))),
    };
    if header[..3] != ["id", "n_references", "citations_3yr"] {
        return Err(PredictorError::Table(format!("unexpected header {header:?}")));
    }
    let horizon: usize = header
        .last()
        .and_then(|h| h.strip_prefix("target_h"))
        .and_then(|h| h.parse().ok())
        .filter(|h| HORIZONS.contains(h))
        .ok_or_else(|| PredictorError::Table(format!("bad target column {:?}", header.last())))?;
    let num = |s: &str, line: usize| {
        s.parse::<u64>()
            .map_err(|_| PredictorError::Table(format!("line {line}: {s:?} is not a count")))
    };
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(table)?;
        let line = i + 2;
        let sd_value = if with_sd { Some(num(&rec[3], line)?) } else { None };
        rows.push(FeatureRow {
            id: rec[0].to_string(),
            n_references: num(&rec[1], line)?,
            citations_3yr: num(&rec[2], line)?,
            sd_value,
            target: num(&rec[header.len() - 1], line)?,
        });
    }
    Ok((rows, horizon))
}
