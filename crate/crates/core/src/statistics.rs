//! Classical and whitened t-statistics and the noncentrality parameter.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Ar1Params;
use crate::path::SamplePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TStatKind {
    Classical,
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TStatResult {
    pub value: f64,
    pub sample_mean: f64,
    pub bessel_variance: f64,
    pub kind: TStatKind,
    /// For the modified statistic, the true mean of the whitened average,
    /// `mu 1^T L 1 / n`. The statistic itself centres on `mu`.
    pub whitened_mean: Option<f64>,
}

/// Two-pass mean and Bessel-corrected variance.
pub fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    (mean, ss / (n - 1.0))
}

fn studentize(values: &[f64], mu: f64, kind: TStatKind) -> Result<TStatResult> {
    if values.len() < 2 {
        return Err(Error::SampleTooShort(values.len()));
    }
    let (mean, var) = mean_and_variance(values);
    if var == 0.0 {
        return Err(Error::DegenerateSample);
    }
    let value = (values.len() as f64).sqrt() * (mean - mu) / var.sqrt();
    Ok(TStatResult {
        value,
        sample_mean: mean,
        bessel_variance: var,
        kind,
        whitened_mean: None,
    })
}

/// `sqrt(n) (Xbar - mu) / s_n` over raw observations.
pub fn t_statistic_of(values: &[f64], mu: f64) -> Result<TStatResult> {
    studentize(values, mu, TStatKind::Classical)
}

pub fn t_statistic(path: &SamplePath, mu: f64) -> Result<TStatResult> {
    t_statistic_of(path.values(), mu)
}

/// `U = L X` in O(n): `U_1 = sqrt(1 - rho^2) X_1`, `U_t = X_t - rho X_{t-1}`.
pub fn whiten_into(params: &Ar1Params, values: &[f64], out: &mut [f64]) {
    debug_assert_eq!(values.len(), out.len());
    let rho = params.rho();
    if let Some(&first) = values.first() {
        out[0] = (1.0 - rho * rho).sqrt() * first;
    }
    for t in 1..values.len() {
        out[t] = values[t] - rho * values[t - 1];
    }
}

pub fn whiten(params: &Ar1Params, values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    whiten_into(params, values, &mut out);
    out
}

/// `mu 1^T L 1 / n`, the expectation of the whitened sample mean.
pub fn whitened_mean(params: &Ar1Params) -> f64 {
    let rho = params.rho();
    let n = params.n() as f64;
    let col_sum = (1.0 - rho * rho).sqrt() + (n - 1.0) * (1.0 - rho);
    params.mu() * col_sum / n
}

/// Modified statistic on pre-whitened values `U = L X`, centred on `mu`.
pub fn modified_t_statistic_of_whitened(params: &Ar1Params, whitened: &[f64]) -> Result<TStatResult> {
    let mut r = studentize(whitened, params.mu(), TStatKind::Modified)?;
    r.whitened_mean = Some(whitened_mean(params));
    Ok(r)
}

/// `sqrt(n) (Ubar - mu) / s~_n` with `U = L X`.
pub fn modified_t_statistic(path: &SamplePath, params: &Ar1Params) -> Result<TStatResult> {
    if path.params() != params {
        return Err(Error::ParamsMismatch);
    }
    let u = whiten(params, path.values());
    modified_t_statistic_of_whitened(params, &u)
}

/// `eta = sqrt(n) mu / sigma`.
pub fn noncentrality(params: &Ar1Params) -> f64 {
    (params.n() as f64).sqrt() * params.mu() / params.sigma()
}
