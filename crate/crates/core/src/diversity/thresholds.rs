use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::stats::{iqr_mean, lower_quartile, mean};

use super::{DiversityError, ReferenceSimilarities};

/// How θ₁ (the semantic-edge threshold) is derived per target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theta1Rule {
    /// Mean of the target-to-reference similarities.
    MeanTargetRef,
    /// Lower nearest-rank quartile of the target-to-reference similarities.
    LowerQuartileTargetRef,
}

/// How θ₂ (the filtered co-citation/coupling threshold) is derived per target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theta2Rule {
    /// IQR-mean of the similarities between distinct references.
    IqrMeanPairwiseRef,
    /// IQR-mean of the target-to-reference similarities.
    IqrMeanTargetRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy<F> {
    pub theta1_rule: Theta1Rule,
    pub theta2_rule: Theta2Rule,
    /// Fixed θ₁, used instead of the rule when set.
    pub theta1_override: Option<F>,
    /// Fixed θ₂, used instead of the rule when set.
    pub theta2_override: Option<F>,
}

impl<F: Real> ThresholdPolicy<F> {
    /// Mean target similarity for θ₁, pairwise IQR-mean for θ₂.
    pub fn dblp() -> Self {
        ThresholdPolicy {
            theta1_rule: Theta1Rule::MeanTargetRef,
            theta2_rule: Theta2Rule::IqrMeanPairwiseRef,
            theta1_override: None,
            theta2_override: None,
        }
    }

    /// Lower-quartile target similarity for θ₁, target IQR-mean for θ₂.
    pub fn pubmed() -> Self {
        ThresholdPolicy {
            theta1_rule: Theta1Rule::LowerQuartileTargetRef,
            theta2_rule: Theta2Rule::IqrMeanTargetRef,
            theta1_override: None,
            theta2_override: None,
        }
    }

    pub fn fixed(theta1: F, theta2: F) -> Self {
        ThresholdPolicy {
            theta1_override: Some(theta1),
            theta2_override: Some(theta2),
            ..Self::dblp()
        }
    }

    pub fn with_overrides(mut self, theta1: Option<F>, theta2: Option<F>) -> Self {
        self.theta1_override = theta1.or(self.theta1_override);
        self.theta2_override = theta2.or(self.theta2_override);
        self
    }

    pub fn is_fully_fixed(&self) -> bool {
        self.theta1_override.is_some() && self.theta2_override.is_some()
    }
}

impl<F: Real> Default for ThresholdPolicy<F> {
    fn default() -> Self {
        Self::dblp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<F> {
    pub theta1: F,
    pub theta2: F,
}

fn finite<F: Real>(name: &'static str, value: F) -> Result<F, DiversityError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DiversityError::NonFiniteThreshold { name })
    }
}

pub(crate) fn resolve_theta1<F: Real>(
    sims: Option<&ReferenceSimilarities<F>>,
    policy: &ThresholdPolicy<F>,
) -> Result<F, DiversityError> {
    if let Some(t) = policy.theta1_override {
        return finite("theta1", t);
    }
    let values = sims
        .map(|s| s.target())
        .filter(|v| !v.is_empty())
        .ok_or(DiversityError::NoSimilaritiesForThreshold("theta1"))?;
    let t = match policy.theta1_rule {
        Theta1Rule::MeanTargetRef => mean(values),
        Theta1Rule::LowerQuartileTargetRef => lower_quartile(values),
    }
    .map_err(|_| DiversityError::NonFiniteThreshold { name: "theta1" })?;
    finite("theta1", t)
}

pub(crate) fn resolve_theta2<F: Real>(
    sims: Option<&ReferenceSimilarities<F>>,
    policy: &ThresholdPolicy<F>,
) -> Result<F, DiversityError> {
    if let Some(t) = policy.theta2_override {
        return finite("theta2", t);
    }
    let sims = sims.ok_or(DiversityError::NoSimilaritiesForThreshold("theta2"))?;
    let values: Vec<F> = match policy.theta2_rule {
        Theta2Rule::IqrMeanPairwiseRef => sims.pairwise().off_diagonal().collect(),
        Theta2Rule::IqrMeanTargetRef => sims.target().to_vec(),
    };
    if values.is_empty() {
        return Err(DiversityError::NoSimilaritiesForThreshold("theta2"));
    }
    let t = iqr_mean(&values).map_err(|_| DiversityError::NonFiniteThreshold { name: "theta2" })?;
    finite("theta2", t)
}

/// Resolves both thresholds for one target. Overrides win over rules.
pub fn resolve_thresholds<F: Real>(
    sims: Option<&ReferenceSimilarities<F>>,
    policy: &ThresholdPolicy<F>,
) -> Result<Thresholds<F>, DiversityError> {
    Ok(Thresholds {
        theta1: resolve_theta1(sims, policy)?,
        theta2: resolve_theta2(sims, policy)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantic::SimilarityMatrix;

    fn sims(target: &[f64], off: f64) -> ReferenceSimilarities<f64> {
        let ids = (0..target.len()).map(|i| i.to_string()).collect();
        let m = SimilarityMatrix::from_fn(ids, |i, j| if i == j { 1.0 } else { off + (i + j) as f64 * 0.01 });
        ReferenceSimilarities::new(target.to_vec(), m).unwrap()
    }

    #[test]
    fn mean_rule() {
        let s = sims(&[0.2, 0.4, 0.6], 0.0);
        let t = resolve_thresholds(Some(&s), &ThresholdPolicy::dblp()).unwrap();
        assert!((t.theta1 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn overrides_returned_verbatim() {
        let t = resolve_thresholds::<f64>(None, &ThresholdPolicy::fixed(0.85, 0.7)).unwrap();
        assert_eq!((t.theta1, t.theta2), (0.85, 0.7));
    }

    #[test]
    fn lower_quartile_rule() {
        let s = sims(&[0.3, 0.1, 0.4, 0.2], 0.0);
        let t = resolve_thresholds(Some(&s), &ThresholdPolicy::pubmed()).unwrap();
        assert_eq!(t.theta1, 0.1);
        // IQR-mean of target sims, ranks 1..=3 of [0.1,0.2,0.3,0.4]
        assert!((t.theta2 - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pairwise_iqr_mean_rule() {
        // three refs: off-diagonal 0.5 + (i+j)/100 -> [0.51, 0.52, 0.53]
        let s = sims(&[0.0, 0.0, 0.0], 0.5);
        let t = resolve_thresholds(Some(&s), &ThresholdPolicy::dblp()).unwrap();
        assert!((t.theta2 - 0.52).abs() < 1e-12);
    }

    #[test]
    fn missing_data_without_override_is_an_error() {
        assert_eq!(
            resolve_thresholds::<f64>(None, &ThresholdPolicy::dblp()).unwrap_err(),
            DiversityError::NoSimilaritiesForThreshold("theta1")
        );
        let single = sims(&[0.4], 0.0);
        assert_eq!(
            resolve_thresholds(Some(&single), &ThresholdPolicy::dblp()).unwrap_err(),
            DiversityError::NoSimilaritiesForThreshold("theta2")
        );
        let partial = ThresholdPolicy::dblp().with_overrides(None, Some(0.3));
        assert_eq!(resolve_thresholds(Some(&single), &partial).unwrap().theta2, 0.3);
    }

    #[test]
    fn non_finite_override_rejected() {
        assert!(matches!(
            resolve_thresholds::<f64>(None, &ThresholdPolicy::fixed(f64::NAN, 0.1)),
            Err(DiversityError::NonFiniteThreshold { name: "theta1" })
        ));
    }
}
