use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::diversity::{DiversityResult, DiversityVariant};
use crate::scalar::Real;
use crate::stats::{iqr_mean, median, pearson, StatsError};

use super::{AnalyticsError, CorrelationMode, StatKind};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupStat<F> {
    pub sd: usize,
    pub n_papers: usize,
    pub value: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport<F> {
    pub variant: Option<DiversityVariant>,
    pub stat: StatKind,
    pub mode: CorrelationMode,
    /// Groups in ascending diversity order.
    pub groups: Vec<GroupStat<F>>,
    /// `None` when the correlation is undefined (a constant series).
    pub r: Option<F>,
}

/// Machine-readable summary of a [`CorrelationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSummary {
    pub variant: Option<DiversityVariant>,
    pub stat: StatKind,
    pub r: Option<f64>,
    pub n_groups: usize,
    pub mode: CorrelationMode,
}

impl<F: Real> CorrelationReport<F> {
    pub fn with_variant(mut self, variant: DiversityVariant) -> Self {
        self.variant = Some(variant);
        self
    }

    pub fn summary(&self) -> CorrelationSummary {
        CorrelationSummary {
            variant: self.variant,
            stat: self.stat,
            r: self.r.map(Real::to_f64_lossy),
            n_groups: self.groups.len(),
            mode: self.mode,
        }
    }
}

fn statistic<F: Real>(stat: StatKind, values: &[F]) -> Result<F, StatsError> {
    match stat {
        StatKind::Median => median(values),
        StatKind::IqrMean => iqr_mean(values),
    }
}

fn defined<F: Real>(r: Result<F, StatsError>) -> Result<Option<F>, AnalyticsError> {
    match r {
        Ok(r) => Ok(Some(r)),
        Err(StatsError::ConstantSeries) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Groups `(sd, citations)` points by exact diversity value and correlates.
///
/// In grouped mode the points are `(sd, statistic of the group's citations)`;
/// in per-paper mode the raw points are used. Both need at least two
/// distinct diversity values.
pub fn correlation_by_diversity<F: Real>(
    points: &[(usize, F)],
    stat: StatKind,
    mode: CorrelationMode,
) -> Result<CorrelationReport<F>, AnalyticsError> {
    if points.iter().any(|p| !p.1.is_finite()) {
        return Err(AnalyticsError::InvalidCount);
    }
    let mut by_sd: BTreeMap<usize, Vec<F>> = BTreeMap::new();
    for &(sd, c) in points {
        by_sd.entry(sd).or_default().push(c);
    }
    if by_sd.len() < 2 {
        return Err(AnalyticsError::FewerThanTwoGroups);
    }
    let groups = by_sd
        .iter()
        .map(|(&sd, values)| {
            Ok(GroupStat {
                sd,
                n_papers: values.len(),
                value: statistic(stat, values)?,
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    let r = match mode {
        CorrelationMode::Grouped => {
            let x: Vec<F> = groups.iter().map(|g| F::from_usize_lossy(g.sd)).collect();
            let y: Vec<F> = groups.iter().map(|g| g.value).collect();
            defined(pearson(&x, &y))?
        }
        CorrelationMode::PerPaper => {
            let x: Vec<F> = points.iter().map(|p| F::from_usize_lossy(p.0)).collect();
            let y: Vec<F> = points.iter().map(|p| p.1).collect();
            defined(pearson(&x, &y))?
        }
    };
    Ok(CorrelationReport {
        variant: None,
        stat,
        mode,
        groups,
        r,
    })
}

/// Writes `variant,stat,mode,sd,n_papers,value` rows for each report.
pub fn write_correlation_csv<F: Real, W: Write>(
    reports: &[CorrelationReport<F>],
    out: W,
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variant", "stat", "mode", "sd", "n_papers", "value"])?;
    for rep in reports {
        let variant = rep.variant.map(|v| v.name()).unwrap_or("");
        for g in &rep.groups {
            w.write_record([
                variant,
                rep.stat.as_str(),
                rep.mode.as_str(),
                &g.sd.to_string(),
                &g.n_papers.to_string(),
                &g.value.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicCorrelation<F> {
    pub variant: DiversityVariant,
    pub n_papers: usize,
    /// `None` when either series is constant.
    pub r: Option<F>,
}

/// Per-paper correlation between a variant's diversity and topic count.
/// Papers without topic data or without a value for `variant` are skipped.
pub fn topic_correlation<F: Real>(
    results: &[DiversityResult<F>],
    corpus: &Corpus,
    variant: DiversityVariant,
) -> Result<TopicCorrelation<F>, AnalyticsError> {
    let pairs: Vec<(usize, usize)> = results
        .iter()
        .filter_map(|r| {
            let rec = corpus.get(&r.target_id)?;
            rec.topics.as_ref()?;
            Some((r.get(variant)?, rec.n_topics()))
        })
        .collect();
    if pairs.is_empty() {
        return Err(AnalyticsError::NoTopicData);
    }
    let distinct_sd = pairs.iter().map(|p| p.0).collect::<std::collections::BTreeSet<_>>();
    if distinct_sd.len() < 2 {
        return Err(AnalyticsError::FewerThanTwoGroups);
    }
    let x: Vec<F> = pairs.iter().map(|p| F::from_usize_lossy(p.0)).collect();
    let y: Vec<F> = pairs.iter().map(|p| F::from_usize_lossy(p.1)).collect();
    Ok(TopicCorrelation {
        variant,
        n_papers: pairs.len(),
        r: defined(pearson(&x, &y))?,
    })
}
