//! Formula-independent ground truth from Gaussian quadratic-form identities.
//!
//! For zero-mean `Y ~ N(0, Sigma)` and symmetric `Q`:
//! `E[Y^T Q Y] = tr(Q Sigma)` and `Var[Y^T Q Y] = 2 tr((Q Sigma)^2)`.
//! With `Q = (I - 11^T/n)/(n-1)` the form is `s_n^2`, which is invariant to
//! the mean, so working with `Y = X - mu 1` loses nothing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::moments::{self, MomentQuantity, MomentReport};
use crate::params::Ar1Params;
use crate::process::build_covariance;

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticForm {
    matrix: DenseMatrix,
    label: String,
}

impl QuadraticForm {
    /// Fails unless `matrix` is symmetric to 1e-14.
    pub fn new(matrix: DenseMatrix, label: impl Into<String>) -> Result<Self> {
        if !matrix.is_symmetric(1e-14) {
            return Err(Error::NotSymmetric);
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn evaluate(&self, y: &[f64]) -> Result<f64> {
        self.matrix.quadratic(y)
    }

    /// `Q Sigma` for the given process.
    fn times_covariance(&self, params: &Ar1Params) -> Result<DenseMatrix> {
        if self.dim() != params.n() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: params.n(),
            });
        }
        self.matrix.matmul(&build_covariance(params))
    }
}

/// `Q = (I - 11^T / n) / (n - 1)`, the matrix of the Bessel-corrected variance.
pub fn centering_form(n: usize) -> Result<QuadraticForm> {
    if n < 2 {
        return Err(Error::SampleTooShort(n));
    }
    let inv_n = 1.0 / n as f64;
    let inv_nm1 = 1.0 / (n - 1) as f64;
    let m = DenseMatrix::from_fn(n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        (delta - inv_n) * inv_nm1
    });
    QuadraticForm::new(m, "bessel-variance")
}

/// `tr(Q Sigma)`.
pub fn mean_of_form(form: &QuadraticForm, params: &Ar1Params) -> Result<f64> {
    Ok(form.times_covariance(params)?.trace())
}

/// `2 tr((Q Sigma)^2)`.
pub fn variance_of_form(form: &QuadraticForm, params: &Ar1Params) -> Result<f64> {
    let p = form.times_covariance(params)?;
    Ok(2.0 * p.trace_of_product(&p)?)
}

/// `E[(Y^T Q Y)^2] = tr(Q Sigma)^2 + 2 tr((Q Sigma)^2)`.
pub fn second_moment_of_form(form: &QuadraticForm, params: &Ar1Params) -> Result<f64> {
    let p = form.times_covariance(params)?;
    let mean = p.trace();
    Ok(mean * mean + 2.0 * p.trace_of_product(&p)?)
}

/// `1^T Sigma 1 / n`.
pub fn numerator_variance_oracle(params: &Ar1Params) -> f64 {
    build_covariance(params).total_sum() / params.n() as f64
}

/// `(Sigma 1)_j / n`, 1-based `j`.
pub fn cov_oracle(params: &Ar1Params, j: usize) -> Result<f64> {
    params.check_index(j)?;
    Ok(build_covariance(params).row_sums()[j - 1] / params.n() as f64)
}

/// All `(Sigma 1)_j / n`, one covariance build.
pub fn cov_oracle_all(params: &Ar1Params) -> Vec<f64> {
    let n = params.n() as f64;
    build_covariance(params).row_sums().into_iter().map(|r| r / n).collect()
}

/// Oracle values for the `s_n^2` moments at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S2Oracle {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
}

pub fn s2_oracle(params: &Ar1Params) -> S2Oracle {
    let form = centering_form(params.n()).expect("params guarantee n >= 2");
    let p = form.times_covariance(params).expect("dimensions agree");
    let mean = p.trace();
    let variance = 2.0 * p.trace_of_product(&p).expect("square");
    S2Oracle {
        mean,
        variance,
        second_moment: mean * mean + variance,
    }
}

/// Closed form vs oracle for every scalar moment quantity at `params`.
///
/// The per-index covariance terms are summarised by their worst index.
pub fn moment_reports(params: &Ar1Params) -> Vec<MomentReport> {
    let s2 = s2_oracle(params);
    let cov_oracles = cov_oracle_all(params);
    let worst_cov = (1..=params.n())
        .map(|j| {
            let closed = moments::cov_mean_term(params, j).expect("in range");
            MomentReport::new(MomentQuantity::CovMeanTerm, *params, closed, Some(cov_oracles[j - 1]))
        })
        .max_by(|a, b| a.rel_gap.total_cmp(&b.rel_gap))
        .expect("n >= 2");
    vec![
        MomentReport::new(
            MomentQuantity::NumeratorVariance,
            *params,
            moments::var_scaled_sample_mean(params),
            Some(numerator_variance_oracle(params)),
        ),
        worst_cov,
        MomentReport::new(
            MomentQuantity::SumCov,
            *params,
            moments::sum_cov_identity(params),
            Some(moments::sum_cov_direct(params)),
        ),
        MomentReport::new(
            MomentQuantity::SumCovSquared,
            *params,
            moments::sum_cov_squared(params),
            Some(cov_oracles.iter().map(|c| c * c).sum()),
        ),
        MomentReport::new(
            MomentQuantity::ExpectedS2,
            *params,
            moments::expected_s2(params),
            Some(s2.mean),
        ),
        MomentReport::new(
            MomentQuantity::SecondMomentS2,
            *params,
            moments::second_moment_s2(params),
            Some(s2.second_moment),
        ),
        MomentReport::new(
            MomentQuantity::VarianceS2,
            *params,
            moments::variance_s2(params),
            Some(s2.variance),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(sigma: f64, rho: f64, n: usize) -> Ar1Params {
        Ar1Params::new(0.0, sigma, rho, n).unwrap()
    }

    #[test]
    fn centering_form_examples() {
        let q = centering_form(2).unwrap();
        assert_eq!(q.matrix(), &DenseMatrix::from_rows(&[[0.5, -0.5], [-0.5, 0.5]]));
        for n in [2, 3, 7, 64] {
            let q = centering_form(n).unwrap();
            for r in q.matrix().row_sums() {
                assert!(r.abs() <= 1e-14);
            }
            // (n-1) Q is idempotent.
            let scaled = q.matrix().scale((n - 1) as f64);
            let sq = scaled.matmul(&scaled).unwrap();
            assert!(sq.max_abs_diff(&scaled).unwrap() < 1e-14);
        }
        assert_eq!(centering_form(1).unwrap_err(), Error::SampleTooShort(1));
    }

    #[test]
    fn centering_form_is_sample_variance() {
        use rand::{Rng, SeedableRng};
        let q = centering_form(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
            let mean = y.iter().sum::<f64>() / 3.0;
            let two_pass = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 2.0;
            let form = q.evaluate(&y).unwrap();
            assert!((form - two_pass).abs() <= 1e-12 * two_pass.max(1.0));
        }
    }

    #[test]
    fn form_moment_examples() {
        let q5 = centering_form(5).unwrap();
        assert!((mean_of_form(&q5, &p(1.0, 0.0, 5)).unwrap() - 1.0).abs() < 1e-15);
        assert!((variance_of_form(&q5, &p(1.0, 0.0, 5)).unwrap() - 0.5).abs() < 1e-15);

        let q2 = centering_form(2).unwrap();
        let q = p(1.0, 0.5, 2);
        assert!((mean_of_form(&q2, &q).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((variance_of_form(&q2, &q).unwrap() - 8.0 / 9.0).abs() < 1e-15);
        assert!((second_moment_of_form(&q2, &q).unwrap() - 4.0 / 3.0).abs() < 1e-15);

        assert_eq!(
            mean_of_form(&q5, &q),
            Err(Error::DimensionMismatch { expected: 5, actual: 2 })
        );
    }

    #[test]
    fn chi_square_reduction_at_zero_correlation() {
        for n in [2, 3, 10, 40] {
            for sigma in [0.5, 1.0, 3.0] {
                let o = s2_oracle(&p(sigma, 0.0, n));
                let s4 = sigma.powi(4);
                assert!((o.mean - sigma * sigma).abs() < 1e-13 * sigma * sigma);
                assert!((o.variance - 2.0 * s4 / (n - 1) as f64).abs() < 1e-13 * s4);
            }
        }
    }

    #[test]
    fn numerator_and_cov_examples() {
        assert_eq!(numerator_variance_oracle(&p(1.0, 0.0, 6)), 1.0);
        assert!((numerator_variance_oracle(&p(1.0, 0.5, 2)) - 2.0).abs() < 1e-15);
        assert!((cov_oracle(&p(1.0, 0.0, 5), 2).unwrap() - 0.2).abs() < 1e-15);
        assert!((cov_oracle(&p(1.0, 0.5, 2), 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(cov_oracle(&p(1.0, 0.5, 2), 3).is_err());
    }

    #[test]
    fn rejects_asymmetric_form() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]);
        assert_eq!(QuadraticForm::new(m, "bad").unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn reports_cover_every_quantity() {
        let reports = moment_reports(&p(1.0, 0.5, 10));
        assert_eq!(reports.len(), 7);
        for r in &reports[..5] {
            assert!(!r.discrepancy, "{r:?}");
        }
        // The fourth-order coefficient blocks do not match at rho = 0.5.
        assert!(reports[5].discrepancy);
        assert!(reports[6].discrepancy);
        assert_eq!(reports[6].authoritative(), reports[6].oracle.unwrap());
    }
}
