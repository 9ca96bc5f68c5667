use std::io::Write;

use serde::Serialize;

use crate::diversity::{DiversityResult, DiversityVariant};
use crate::scalar::Real;

use super::AnalyticsError;

/// Years covered by a citation trend, counted from publication.
pub const TREND_YEARS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiversityBin {
    /// 1 to 3 components.
    Low,
    /// 4 to 6 components.
    Medium,
    /// 7 or more.
    High,
}

impl DiversityBin {
    pub const ALL: [DiversityBin; 3] = [DiversityBin::Low, DiversityBin::Medium, DiversityBin::High];

    /// `None` for 0, which only occurs for papers without references.
    pub fn of(sd: usize) -> Option<DiversityBin> {
        match sd {
            0 => None,
            1..=3 => Some(DiversityBin::Low),
            4..=6 => Some(DiversityBin::Medium),
            _ => Some(DiversityBin::High),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiversityBin::Low => "low",
            DiversityBin::Medium => "medium",
            DiversityBin::High => "high",
        }
    }
}

/// Scales a yearly citation series to sum to 1. An all-zero series stays
/// all zeros.
pub fn normalize_trend<F: Real>(counts: &[F]) -> Result<Vec<F>, AnalyticsError> {
    if counts.len() != TREND_YEARS {
        return Err(AnalyticsError::TrendLength {
            expected: TREND_YEARS,
            found: counts.len(),
        });
    }
    if counts.iter().any(|c| !c.is_finite() || *c < F::zero()) {
        return Err(AnalyticsError::InvalidCount);
    }
    let total: F = counts.iter().copied().sum();
    if total == F::zero() {
        return Ok(vec![F::zero(); TREND_YEARS]);
    }
    Ok(counts.iter().map(|&c| c / total).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendSeries<F> {
    pub bin: DiversityBin,
    pub n_papers: usize,
    /// Mean normalized share of citations per year offset.
    pub mean_normalized: Vec<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport<F> {
    pub variant: DiversityVariant,
    /// Non-empty bins in ascending order.
    pub series: Vec<TrendSeries<F>>,
    /// Papers with diversity 0 or no value for the variant.
    pub unbinned: usize,
}

/// Normalizes each paper's series, then averages within diversity bins.
/// `series[i]` belongs to `results[i]`.
pub fn trend_by_bin<F: Real>(
    results: &[DiversityResult<F>],
    series: &[Vec<F>],
    variant: DiversityVariant,
) -> Result<TrendReport<F>, AnalyticsError> {
    if results.len() != series.len() {
        return Err(AnalyticsError::SeriesMismatch {
            results: results.len(),
            series: series.len(),
        });
    }
    let mut sums = [(); 3].map(|_| (0usize, vec![F::zero(); TREND_YEARS]));
    let mut unbinned = 0;
    for (res, counts) in results.iter().zip(series) {
        let normalized = normalize_trend(counts)?;
        let Some(bin) = res.get(variant).and_then(DiversityBin::of) else {
            unbinned += 1;
            continue;
        };
        let slot = &mut sums[bin as usize];
        slot.0 += 1;
        for (acc, x) in slot.1.iter_mut().zip(normalized) {
            *acc = *acc + x;
        }
    }
    let series = DiversityBin::ALL
        .iter()
        .zip(sums)
        .filter(|(_, (n, _))| *n > 0)
        .map(|(&bin, (n, total))| {
            let denom = F::from_usize_lossy(n);
            TrendSeries {
                bin,
                n_papers: n,
                mean_normalized: total.into_iter().map(|s| s / denom).collect(),
            }
        })
        .collect();
    Ok(TrendReport {
        variant,
        series,
        unbinned,
    })
}

/// Writes `bin,year_offset,mean_normalized,n_papers` rows.
pub fn write_trend_csv<F: Real, W: Write>(report: &TrendReport<F>, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin", "year_offset", "mean_normalized", "n_papers"])?;
    for s in &report.series {
        for (offset, m) in s.mean_normalized.iter().enumerate() {
            w.write_record([
                s.bin.as_str(),
                &offset.to_string(),
                &m.to_string(),
                &s.n_papers.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
