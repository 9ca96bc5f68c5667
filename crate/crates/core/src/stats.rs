//! Order statistics and correlation.
//!
//! The quartile convention used throughout the crate lives here: values are
//! sorted ascending and quartile positions are nearest-rank, 1-based,
//! `q1 = ceil(n / 4)` and `q3 = ceil(3n / 4)`, with the `q1..=q3` slice taken
//! inclusively.

use std::cmp::Ordering;

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("statistic of an empty sample is undefined")]
    Empty,
    #[error("sample lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("correlation needs at least 2 observations, got {0}")]
    TooFewObservations(usize),
    #[error("correlation is undefined for a constant series")]
    ConstantSeries,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

/// 1-based inclusive nearest-rank quartile positions `(q1, q3)` for `n >= 1`.
pub fn quartile_ranks(n: usize) -> (usize, usize) {
    debug_assert!(n > 0);
    (n.div_ceil(4).max(1), (3 * n).div_ceil(4).max(1))
}

fn sorted<F: Real>(values: &[F]) -> Result<Vec<F>, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut out = values.to_vec();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(out)
}

pub fn mean<F: Real>(values: &[F]) -> Result<F, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let total: F = values.iter().copied().sum();
    Ok(total / F::from_usize_lossy(values.len()))
}

/// Median; the mean of the two middle values for even-length samples.
pub fn median<F: Real>(values: &[F]) -> Result<F, StatsError> {
    let v = sorted(values)?;
    let n = v.len();
    if n % 2 == 1 {
        Ok(v[n / 2])
    } else {
        let two = F::one() + F::one();
        Ok((v[n / 2 - 1] + v[n / 2]) / two)
    }
}

/// Value at the lower nearest-rank quartile position.
pub fn lower_quartile<F: Real>(values: &[F]) -> Result<F, StatsError> {
    let v = sorted(values)?;
    let (q1, _) = quartile_ranks(v.len());
    Ok(v[q1 - 1])
}

/// Mean of the sorted values between the lower and upper quartile positions.
///
/// Samples shorter than four fall back to the plain mean; under the rank
/// convention above that is the same slice anyway for `n <= 3`.
pub fn iqr_mean<F: Real>(values: &[F]) -> Result<F, StatsError> {
    let v = sorted(values)?;
    if v.len() < 4 {
        return mean(&v);
    }
    let (q1, q3) = quartile_ranks(v.len());
    mean(&v[q1 - 1..q3])
}

/// Pearson product-moment correlation coefficient, clamped to `[-1, 1]`.
pub fn pearson<F: Real>(x: &[F], y: &[F]) -> Result<F, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewObservations(x.len()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mx = mean(x)?;
    let my = mean(y)?;
    let (mut sxy, mut sxx, mut syy) = (F::zero(), F::zero(), F::zero());
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == F::zero() || syy == F::zero() {
        return Err(StatsError::ConstantSeries);
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-F::one()).min(F::one()))
}
