use std::cmp::Ordering;

use crate::scalar::Real;

use super::linear::check_design;
use super::PredictorError;

pub const DEFAULT_K: usize = 7;

/// k-nearest-neighbour regression under Manhattan distance with uniform
/// weights. Features are used unscaled.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel<F> {
    k: usize,
    x: Vec<Vec<F>>,
    y: Vec<F>,
}

impl<F: Real> KnnModel<F> {
    pub fn fit(x: &[Vec<F>], y: &[F], k: usize) -> Result<Self, PredictorError> {
        if k == 0 {
            return Err(PredictorError::ZeroK);
        }
        check_design(x, y)?;
        if x.len() < k {
            return Err(PredictorError::TrainSmallerThanK { k, n: x.len() });
        }
        Ok(KnnModel {
            k,
            x: x.to_vec(),
            y: y.to_vec(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Training indices of the `k` nearest rows; equal distances go to the
    /// lower index.
    pub fn neighbors(&self, query: &[F]) -> Vec<usize> {
        let mut dist: Vec<(F, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let d: F = r.iter().zip(query).map(|(a, b)| (*a - *b).abs()).sum();
                (d, i)
            })
            .collect();
        let by = |a: &(F, usize), b: &(F, usize)| {
            a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1))
        };
        if self.k < dist.len() {
            dist.select_nth_unstable_by(self.k - 1, by);
            dist.truncate(self.k);
        }
        dist.sort_by(by);
        dist.into_iter().map(|(_, i)| i).collect()
    }

    pub fn predict_one(&self, query: &[F]) -> F {
        let idx = self.neighbors(query);
        idx.iter().map(|&i| self.y[i]).sum::<F>() / F::from_usize_lossy(idx.len())
    }

    pub fn predict(&self, rows: &[Vec<F>]) -> Result<Vec<F>, PredictorError> {
        let p = self.x[0].len();
        rows.iter()
            .map(|r| {
                if r.len() != p {
                    return Err(PredictorError::FeatureWidth {
                        expected: p,
                        found: r.len(),
                    });
                }
                Ok(self.predict_one(r))
            })
            .collect()
    }
}
