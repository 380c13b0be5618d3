use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{default_workers, for_each_chunk};
use crate::student::{normal_cdf, StudentLaw};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub p_value: f64,
    pub sample_size: usize,
    pub reference: String,
}

/// Continuous reference distributions used by the verification runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceLaw {
    Student(StudentLaw),
    Normal {
        mean: f64,
        sd: f64,
    },
    /// `scale * chi^2_dof`.
    ScaledChiSquare {
        dof: f64,
        scale: f64,
    },
}

impl ReferenceLaw {
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            ReferenceLaw::Student(law) => law.cdf(x).unwrap_or(f64::NAN),
            ReferenceLaw::Normal { mean, sd } => normal_cdf(x, *mean, *sd),
            ReferenceLaw::ScaledChiSquare { dof, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    statrs::function::gamma::gamma_lr(0.5 * dof, 0.5 * x / scale)
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            ReferenceLaw::Student(law) => format!("student-t(dof={})", law.dof()),
            ReferenceLaw::Normal { mean, sd } => format!("normal(mean={mean}, sd={sd})"),
            ReferenceLaw::ScaledChiSquare { dof, scale } => {
                format!("{scale} * chi-square(dof={dof})")
            }
        }
    }
}

/// Kolmogorov limiting survival function `P(K > lambda)`.
///
/// Uses the alternating series `2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)` for
/// large `lambda` and the Jacobi-transformed series for small `lambda`;
/// summation stops once a term falls below 1e-12 of the running total.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda.is_nan() {
        return f64::NAN;
    }
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=100 {
            let m = (2 * k - 1) as f64;
            let term = (-m * m * c).exp();
            sum += term;
            if term <= 1e-12 * sum {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += sign * term;
            sign = -sign;
            if term <= 1e-12 * sum.abs() {
                break;
            }
        }
        2.0 * sum
    };
    p.clamp(0.0, 1.0)
}

/// One-sample two-sided Kolmogorov–Smirnov test with asymptotic p-value.
pub fn ks_test<F>(samples: &[f64], reference_cdf: F, reference: impl Into<String>) -> Result<KsReport>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();

    let mut cdf = sorted.clone();
    for_each_chunk(&mut cdf, 4096, default_workers(), |_, c| {
        for v in c.iter_mut() {
            *v = reference_cdf(*v);
        }
    });

    let mf = m as f64;
    let mut d = 0.0f64;
    for (i, &f) in cdf.iter().enumerate() {
        let above = (i + 1) as f64 / mf - f;
        let below = f - i as f64 / mf;
        d = d.max(above).max(below);
    }
    let statistic = d.clamp(0.0, 1.0);
    Ok(KsReport {
        statistic,
        p_value: kolmogorov_survival(mf.sqrt() * statistic),
        sample_size: m,
        reference: reference.into(),
    })
}

pub fn ks_test_against(samples: &[f64], law: &ReferenceLaw) -> Result<KsReport> {
    ks_test(samples, |x| law.cdf(x), law.label())
}
