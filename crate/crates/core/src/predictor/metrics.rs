use serde::Serialize;

use crate::scalar::Real;

use super::PredictorError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionMetrics<F> {
    /// `None` when the actual values are constant.
    pub r_squared: Option<F>,
    pub mse: F,
}

impl<F: Real> RegressionMetrics<F> {
    pub fn evaluate(pred: &[F], actual: &[F]) -> Result<Self, PredictorError> {
        let mse = mse(pred, actual)?;
        let r_squared = match r_squared(pred, actual) {
            Ok(r) => Some(r),
            Err(PredictorError::ConstantActual) => None,
            Err(e) => return Err(e),
        };
        Ok(RegressionMetrics { r_squared, mse })
    }
}

fn check<F>(pred: &[F], actual: &[F]) -> Result<(), PredictorError> {
    if pred.len() != actual.len() {
        return Err(PredictorError::LengthMismatch {
            left: pred.len(),
            right: actual.len(),
        });
    }
    if pred.is_empty() {
        return Err(PredictorError::Empty);
    }
    Ok(())
}

pub fn mse<F: Real>(pred: &[F], actual: &[F]) -> Result<F, PredictorError> {
    check(pred, actual)?;
    let ss: F = pred.iter().zip(actual).map(|(p, a)| (*p - *a) * (*p - *a)).sum();
    Ok(ss / F::from_usize_lossy(pred.len()))
}

/// `1 - SS_res / SS_tot`; negative when worse than predicting the mean.
pub fn r_squared<F: Real>(pred: &[F], actual: &[F]) -> Result<F, PredictorError> {
    check(pred, actual)?;
    let mean = actual.iter().copied().sum::<F>() / F::from_usize_lossy(actual.len());
    let ss_tot: F = actual.iter().map(|a| (*a - mean) * (*a - mean)).sum();
    if ss_tot == F::zero() {
        return Err(PredictorError::ConstantActual);
    }
    let ss_res: F = pred.iter().zip(actual).map(|(p, a)| (*p - *a) * (*p - *a)).sum();
    Ok(F::one() - ss_res / ss_tot)
}

/// One fitted model's scores, as written to the metrics JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub horizon: usize,
    pub variant_or_baseline: String,
    pub r2: Option<f64>,
    pub mse: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_prediction() {
        let a = [1.0, 2.0, 7.0];
        assert_eq!(r_squared(&a, &a).unwrap(), 1.0);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn mean_prediction_scores_zero() {
        let a = [1.0, 2.0, 6.0];
        assert_eq!(r_squared(&[3.0; 3], &a).unwrap(), 0.0);
    }

    #[test]
    fn hand_example() {
        assert_eq!(mse(&[2.0, 4.0], &[1.0, 5.0]).unwrap(), 1.0);
        assert_eq!(r_squared(&[2.0, 4.0], &[1.0, 5.0]).unwrap(), 0.75);
    }

    #[test]
    fn constant_actual_is_undefined() {
        assert_eq!(r_squared(&[1.0, 2.0], &[3.0, 3.0]), Err(PredictorError::ConstantActual));
        let m = RegressionMetrics::evaluate(&[1.0, 2.0], &[3.0, 3.0]).unwrap();
        assert_eq!((m.r_squared, m.mse), (None, 2.5));
    }

    proptest! {
        #[test]
        fn mse_zero_iff_equal(a in prop::collection::vec(-100i32..100, 1..20), b in prop::collection::vec(-100i32..100, 1..20)) {
            let n = a.len().min(b.len());
            let p: Vec<f64> = a[..n].iter().map(|&v| v as f64).collect();
            let q: Vec<f64> = b[..n].iter().map(|&v| v as f64).collect();
            let m = mse(&p, &q).unwrap();
            prop_assert!(m >= 0.0);
            prop_assert_eq!(m == 0.0, p == q);
        }
    }
}
