use crate::scalar::Real;

use super::PredictorError;

/// Ordinary least squares with an intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<F> {
    pub intercept: F,
    pub coefficients: Vec<F>,
    /// Set when the centered design was singular and the minimum-norm
    /// solution was taken.
    pub rank_deficient: bool,
}

pub(crate) fn check_design<F>(x: &[Vec<F>], y: &[F]) -> Result<usize, PredictorError> {
    if x.len() != y.len() {
        return Err(PredictorError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let p = x.first().ok_or(PredictorError::EmptyTrain)?.len();
    if let Some(row) = x.iter().find(|r| r.len() != p) {
        return Err(PredictorError::FeatureWidth {
            expected: p,
            found: row.len(),
        });
    }
    Ok(p)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and eigenvectors as the columns of `v`.
fn symmetric_eigen<F: Real>(mut a: Vec<Vec<F>>) -> (Vec<F>, Vec<Vec<F>>) {
    let n = a.len();
    let mut v: Vec<Vec<F>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect();
    let two = F::one() + F::one();
    for _sweep in 0..100 {
        let off: F = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: F = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= F::epsilon() * F::epsilon() * diag || off == F::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == F::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt());
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

impl<F: Real> LinearModel<F> {
    /// Solves the centered normal equations through a pseudo-inverse, so a
    /// singular design yields the minimum-norm slopes instead of failing.
    pub fn fit(x: &[Vec<F>], y: &[F]) -> Result<Self, PredictorError> {
        let p = check_design(x, y)?;
        let n = F::from_usize_lossy(x.len());
        let y_mean = y.iter().copied().sum::<F>() / n;
        let x_mean: Vec<F> = (0..p)
            .map(|j| x.iter().map(|r| r[j]).sum::<F>() / n)
            .collect();
        let mut xtx = vec![vec![F::zero(); p]; p];
        let mut xty = vec![F::zero(); p];
        for (row, &yi) in x.iter().zip(y) {
            let c: Vec<F> = row.iter().zip(&x_mean).map(|(a, m)| *a - *m).collect();
            let yc = yi - y_mean;
            for i in 0..p {
                xty[i] = xty[i] + c[i] * yc;
                for j in i..p {
                    xtx[i][j] = xtx[i][j] + c[i] * c[j];
                }
            }
        }
        for i in 0..p {
            for j in 0..i {
                xtx[i][j] = xtx[j][i];
            }
        }
        let (values, vectors) = symmetric_eigen(xtx);
        let largest = values.iter().fold(F::zero(), |m, &l| m.max(l.abs()));
        let cutoff = largest * F::epsilon() * F::from_usize_lossy(p.max(x.len())) * F::from_f64_lossy(16.0);
        let mut rank_deficient = false;
        let mut beta = vec![F::zero(); p];
        for (k, &lambda) in values.iter().enumerate() {
            if lambda <= cutoff {
                rank_deficient = true;
                continue;
            }
            let proj: F = (0..p).map(|i| vectors[i][k] * xty[i]).sum::<F>() / lambda;
            for (i, b) in beta.iter_mut().enumerate() {
                *b = *b + vectors[i][k] * proj;
            }
        }
        let intercept = y_mean - beta.iter().zip(&x_mean).map(|(b, m)| *b * *m).sum::<F>();
        Ok(LinearModel {
            intercept,
            coefficients: beta,
            rank_deficient,
        })
    }

    pub fn predict_one(&self, row: &[F]) -> F {
        self.intercept + self.coefficients.iter().zip(row).map(|(b, x)| *b * *x).sum::<F>()
    }

    pub fn predict(&self, rows: &[Vec<F>]) -> Result<Vec<F>, PredictorError> {
        rows.iter()
            .map(|r| {
                if r.len() != self.coefficients.len() {
                    return Err(PredictorError::FeatureWidth {
                        expected: self.coefficients.len(),
                        found: r.len(),
                    });
                }
                Ok(self.predict_one(r))
            })
            .collect()
    }
}
