//! Stationary second-order structure of the AR(1) process and the closed-form
//! matrices built from it.
//!
//! With `Omega_{ij} = rho^{|i-j|} / (1 - rho^2)` the unit-innovation
//! covariance, the process covariance is `Sigma = sigma^2 Omega`. The
//! builders here return
//!
//! * `Omega` itself (symmetric Toeplitz, not circulant),
//! * its lower Cholesky factor `M` with `Omega = M M^T`,
//! * the split `M = I + N`,
//! * the tridiagonal precision `A = Omega^{-1}`,
//! * the lower-bidiagonal `L` with `A = L^T L`, so that `L Omega L^T = I`.
//!
//! Every entry comes from a closed-form expression; the generic
//! [`DenseMatrix::cholesky`] exists only to check them.
//!
//! Note the factor ordering: a lower-triangular `M` satisfies `Omega = M M^T`.
//! The transposed product `M^T M` does not reproduce the Toeplitz pattern.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::params::Ar1Params;
use crate::sum::CompensatedSum;

/// Gaussian law `N(mean, variance)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalLaw {
    pub mean: f64,
    pub variance: f64,
}

impl NormalLaw {
    pub fn new(mean: f64, variance: f64) -> Self {
        debug_assert!(variance >= 0.0);
        Self { mean, variance }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

fn powers(rho: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 1.0;
    for _ in 0..count {
        out.push(p);
        p *= rho;
    }
    out
}

/// `Cov(X_t, X_u) = sigma^2 rho^{|t-u|} / (1 - rho^2)`, 1-based indices.
pub fn stationary_cov(params: &Ar1Params, t: usize, u: usize) -> Result<f64> {
    params.check_index(t)?;
    params.check_index(u)?;
    let lag = t.abs_diff(u) as i32;
    Ok(params.stationary_variance() * params.rho().powi(lag))
}

pub fn build_omega(params: &Ar1Params) -> DenseMatrix {
    let rho = params.rho();
    let pw = powers(rho, params.n());
    let scale = 1.0 / (1.0 - rho * rho);
    DenseMatrix::from_fn(params.n(), |i, j| pw[i.abs_diff(j)] * scale)
}

/// `Sigma = sigma^2 Omega`.
pub fn build_covariance(params: &Ar1Params) -> DenseMatrix {
    build_omega(params).scale(params.sigma() * params.sigma())
}

/// Lower Cholesky factor of `Omega`: first column `rho^{i-1} / sqrt(1 - rho^2)`,
/// remaining lower entries `rho^{i-j}`.
pub fn build_m(params: &Ar1Params) -> DenseMatrix {
    let rho = params.rho();
    let pw = powers(rho, params.n());
    let head = 1.0 / (1.0 - rho * rho).sqrt();
    DenseMatrix::from_fn(params.n(), |i, j| match (i, j) {
        (i, 0) => pw[i] * head,
        (i, j) if i >= j => pw[i - j],
        _ => 0.0,
    })
}

/// `N = M - I`.
pub fn build_n_perturbation(params: &Ar1Params) -> DenseMatrix {
    let rho = params.rho();
    let pw = powers(rho, params.n());
    let head = 1.0 / (1.0 - rho * rho).sqrt();
    DenseMatrix::from_fn(params.n(), |i, j| match (i, j) {
        // head >= 1, so head - 1 is exact and I + N recovers M bit for bit.
        (0, 0) => head - 1.0,
        (i, 0) => pw[i] * head,
        (i, j) if i > j => pw[i - j],
        _ => 0.0,
    })
}

/// Precision matrix `A = Omega^{-1}`: tridiagonal with diagonal
/// `(1, 1 + rho^2, ..., 1 + rho^2, 1)` and off-diagonal `-rho`.
pub fn build_a_inverse(params: &Ar1Params) -> DenseMatrix {
    let n = params.n();
    let rho = params.rho();
    DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            if i == 0 || i == n - 1 {
                1.0
            } else {
                1.0 + rho * rho
            }
        } else if i.abs_diff(j) == 1 {
            -rho
        } else {
            0.0
        }
    })
}

/// Whitening factor `L`, lower bidiagonal, `L^T L = A`.
pub fn build_l(params: &Ar1Params) -> DenseMatrix {
    let rho = params.rho();
    let head = (1.0 - rho * rho).sqrt();
    DenseMatrix::from_fn(params.n(), |i, j| match (i, j) {
        (0, 0) => head,
        (i, j) if i == j => 1.0,
        (i, j) if i == j + 1 => -rho,
        _ => 0.0,
    })
}

/// Law of `a^T X` for the stationary process: `N(mu sum(a), sigma^2 a^T Omega a)`,
/// with the variance accumulated as
/// `sum_j a_j^2 Sigma_jj + 2 sum_{j>k} a_j a_k Sigma_jk`.
pub fn linear_form_law(params: &Ar1Params, weights: &[f64]) -> Result<NormalLaw> {
    let n = params.n();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: weights.len(),
        });
    }
    let pw = powers(params.rho(), n);
    let mut diag = CompensatedSum::new();
    let mut cross = CompensatedSum::new();
    for (j, &aj) in weights.iter().enumerate() {
        diag.add(aj * aj);
        for (k, &ak) in weights[..j].iter().enumerate() {
            cross.add(aj * ak * pw[j - k]);
        }
    }
    let variance = params.stationary_variance() * (diag.value() + 2.0 * cross.value());
    let mean = params.mu() * weights.iter().sum::<f64>();
    Ok(NormalLaw::new(mean, variance.max(0.0)))
}
