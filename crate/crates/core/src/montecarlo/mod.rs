//! Reproducible Monte Carlo engine.
//!
//! Replication `i` simulates the path keyed by `(seed, stream = i)`, so the
//! sampled values do not depend on how replications are scheduled. Values
//! are produced in fixed chunks (in parallel when enabled) and reduced
//! sequentially in replication order.

mod kde;
mod ks;

pub use kde::{empirical_density, silverman_bandwidth};
pub use ks::{kolmogorov_survival, ks_test, ks_test_against, KsReport, ReferenceLaw};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::for_each_chunk;
use crate::params::Ar1Params;
use crate::path::{fill_path, stream_rng};
use crate::statistics::{mean_and_variance, whiten_into};
use crate::sum::CompensatedSum;

/// Replications per work unit.
pub const CHUNK_LEN: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub params: Ar1Params,
    pub replications: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(params: Ar1Params, replications: usize, seed: u64, workers: usize) -> Result<Self> {
        if replications == 0 {
            return Err(Error::ZeroCount("replications"));
        }
        if workers == 0 {
            return Err(Error::ZeroCount("workers"));
        }
        Ok(Self {
            params,
            replications,
            seed,
            workers,
        })
    }
}

/// Per-path quantity to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Functional {
    /// `sqrt(n) (Xbar - mu)`.
    #[serde(rename = "mean")]
    SampleMean,
    /// Bessel-corrected `s_n^2`.
    #[serde(rename = "s2")]
    S2,
    /// Classical t-statistic centred on the true `mu`.
    #[serde(rename = "tstat")]
    TStat,
    /// Whitened t-statistic on `U = L X`.
    #[serde(rename = "mtstat")]
    ModifiedTStat,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::SampleMean => "mean",
            Functional::S2 => "s2",
            Functional::TStat => "tstat",
            Functional::ModifiedTStat => "mtstat",
        }
    }

    /// Value for one path, `None` for a degenerate (zero-variance) sample.
    pub fn evaluate(self, params: &Ar1Params, path: &[f64], scratch: &mut [f64]) -> Option<f64> {
        let n = path.len() as f64;
        match self {
            Functional::SampleMean => {
                let mean = path.iter().sum::<f64>() / n;
                Some(n.sqrt() * (mean - params.mu()))
            }
            Functional::S2 => Some(mean_and_variance(path).1),
            Functional::TStat => studentize(path, params.mu()),
            Functional::ModifiedTStat => {
                whiten_into(params, path, scratch);
                studentize(scratch, params.mu())
            }
        }
    }
}

fn studentize(values: &[f64], mu: f64) -> Option<f64> {
    let (mean, var) = mean_and_variance(values);
    (var > 0.0).then(|| (values.len() as f64).sqrt() * (mean - mu) / var.sqrt())
}

/// Raw per-replication values, in replication order. Degenerate samples are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSamples {
    pub functional: Functional,
    pub values: Vec<f64>,
}

impl FunctionalSamples {
    pub fn finite(&self) -> Vec<f64> {
        self.values.iter().copied().filter(|v| v.is_finite()).collect()
    }

    pub fn degenerate(&self) -> usize {
        self.values.iter().filter(|v| v.is_nan()).count()
    }

    pub fn summary(&self) -> Result<EmpiricalSummary> {
        let finite = self.finite();
        let mut s = EmpiricalSummary::from_values(&finite)?;
        s.degenerate = self.values.len() - finite.len();
        Ok(s)
    }
}

pub fn sample_functional(config: &SimulationConfig, functional: Functional) -> FunctionalSamples {
    let params = config.params;
    let n = params.n();
    let seed = config.seed;
    let mut values = vec![0.0; config.replications];
    for_each_chunk(&mut values, CHUNK_LEN, config.workers, |chunk, out| {
        let mut path = vec![0.0; n];
        let mut scratch = vec![0.0; n];
        let first = (chunk * CHUNK_LEN) as u64;
        for (k, slot) in out.iter_mut().enumerate() {
            let mut rng = stream_rng(seed, first + k as u64);
            fill_path(&params, &mut rng, &mut path);
            *slot = functional.evaluate(&params, &path, &mut scratch).unwrap_or(f64::NAN);
        }
    });
    FunctionalSamples { functional, values }
}

/// Mean, variance and raw second moment of a sample with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalSummary {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Mean of the squared values.
    pub second_moment: f64,
    pub std_error_mean: f64,
    /// Large-sample SE of the variance, `sqrt((m4 - m2^2) / R)`.
    pub std_error_variance: f64,
    pub std_error_second_moment: f64,
    pub replications: usize,
    /// Samples excluded as degenerate.
    pub degenerate: usize,
}

impl EmpiricalSummary {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let r = values.len() as f64;
        let mut sum = CompensatedSum::new();
        let mut sum_sq = CompensatedSum::new();
        for &v in values {
            sum.add(v);
            sum_sq.add(v * v);
        }
        let mean = sum.value() / r;
        let second_moment = sum_sq.value() / r;

        let mut m2 = CompensatedSum::new();
        let mut m4 = CompensatedSum::new();
        let mut sq_dev = CompensatedSum::new();
        for &v in values {
            let d = v - mean;
            let d2 = d * d;
            m2.add(d2);
            m4.add(d2 * d2);
            let e = v * v - second_moment;
            sq_dev.add(e * e);
        }
        let central2 = m2.value() / r;
        let central4 = m4.value() / r;
        let (variance, var_sq) = if values.len() > 1 {
            (m2.value() / (r - 1.0), sq_dev.value() / (r - 1.0))
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            mean,
            variance,
            second_moment,
            std_error_mean: (variance / r).sqrt(),
            std_error_variance: ((central4 - central2 * central2).max(0.0) / r).sqrt(),
            std_error_second_moment: (var_sq / r).sqrt(),
            replications: values.len(),
            degenerate: 0,
        })
    }

    /// `|estimate - target|` in units of `se`; infinite when `se` is zero and the gap is not.
    pub fn z_score(estimate: f64, target: f64, se: f64) -> f64 {
        let gap = (estimate - target).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / se
        }
    }
}

pub fn estimate_moments(config: &SimulationConfig, functional: Functional) -> Result<EmpiricalSummary> {
    sample_functional(config, functional).summary()
}
