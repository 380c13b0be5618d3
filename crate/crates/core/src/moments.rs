//! Closed-form moments of the t-statistic's numerator `sqrt(n)(Xbar - mu)` and
//! of the Bessel-corrected variance `s_n^2` under a stationary AR(1) law.
//!
//! Every function evaluates the closed-form expression directly; the
//! second-order ones do so in double-double arithmetic. For the
//! fourth-order quantities ([`second_moment_s2`], [`variance_s2`]) the stated
//! coefficient blocks do not survive comparison with the exact quadratic-form
//! oracle once `rho != 0`; [`MomentReport`] carries the comparison and a
//! discrepancy flag so callers can fall back on the oracle value.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::Result;
use crate::params::Ar1Params;
use crate::sum::CompensatedSum;

/// Relative gap above which a closed form is flagged against its oracle.
pub const DISCREPANCY_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MomentQuantity {
    NumeratorVariance,
    CovMeanTerm,
    SumCov,
    SumCovSquared,
    ExpectedS2,
    SecondMomentS2,
    VarianceS2,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub quantity: MomentQuantity,
    pub closed_form: f64,
    pub oracle: Option<f64>,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub discrepancy: bool,
    pub params: Ar1Params,
}

impl MomentReport {
    pub fn new(quantity: MomentQuantity, params: Ar1Params, closed_form: f64, oracle: Option<f64>) -> Self {
        let (abs_gap, rel_gap) = match oracle {
            Some(o) => {
                let abs = (closed_form - o).abs();
                (abs, abs / o.abs().max(1e-300))
            }
            None => (0.0, 0.0),
        };
        Self {
            quantity,
            closed_form,
            oracle,
            abs_gap,
            rel_gap,
            discrepancy: rel_gap.is_nan() || rel_gap > DISCREPANCY_REL_TOL,
            params,
        }
    }

    /// Value to use downstream: the oracle when the closed form is flagged.
    pub fn authoritative(&self) -> f64 {
        match (self.discrepancy, self.oracle) {
            (true, Some(o)) => o,
            _ => self.closed_form,
        }
    }
}

struct Terms {
    rho: f64,
    n: f64,
    rho_n: f64,
    var_scale: f64,
}

impl Terms {
    fn new(params: &Ar1Params) -> Self {
        let rho = params.rho();
        Self {
            rho,
            n: params.n() as f64,
            rho_n: rho.powi(params.n() as i32),
            var_scale: params.stationary_variance(),
        }
    }
}

/// The same ingredients in double-double precision. The low-order closed
/// forms below are evaluated with these so that their `1/(1-rho)^k` terms
/// cancel without losing digits near `|rho| = 1`.
struct DdTerms {
    rho: Dd,
    n: Dd,
    rho_n: Dd,
    sigma2: Dd,
    one_m: Dd,
    one_p: Dd,
}

impl DdTerms {
    fn new(params: &Ar1Params) -> Self {
        let rho = Dd::from(params.rho());
        let sigma = Dd::from(params.sigma());
        Self {
            rho,
            n: Dd::from(params.n() as f64),
            rho_n: rho.powi(params.n() as u32),
            sigma2: sigma * sigma,
            one_m: 1.0 - rho,
            one_p: 1.0 + rho,
        }
    }

    fn var_scale(&self) -> Dd {
        self.sigma2 / (self.one_m * self.one_p)
    }
}

/// `Var(sqrt(n)(Xbar - mu))` in the form
/// `sigma^2/(1-rho^2) [ (1+rho)/(1-rho) - 2 rho (1-rho^n) / (n (1-rho)^2) ]`.
pub fn var_scaled_sample_mean(params: &Ar1Params) -> f64 {
    let t = DdTerms::new(params);
    let bracket = t.one_p / t.one_m - 2.0 * t.rho * (1.0 - t.rho_n) / (t.n * t.one_m * t.one_m);
    (t.var_scale() * bracket).to_f64()
}

/// Equivalent form `sigma^2/(1-rho)^2 [ 1 - 2 rho (1-rho^n) / (n (1-rho)(1+rho)) ]`,
/// which exposes the large-`n` limit `sigma^2/(1-rho)^2`.
pub fn var_scaled_sample_mean_limit_form(params: &Ar1Params) -> f64 {
    let t = DdTerms::new(params);
    let bracket = 1.0 - 2.0 * t.rho * (1.0 - t.rho_n) / (t.n * t.one_m * t.one_p);
    (t.sigma2 / (t.one_m * t.one_m) * bracket).to_f64()
}

/// `sigma^2 / (1 - rho)^2`.
pub fn long_run_variance(params: &Ar1Params) -> f64 {
    let one_m = 1.0 - params.rho();
    params.sigma() * params.sigma() / (one_m * one_m)
}

/// `Cov(Ybar_n, Y_j)` for 1-based `j`.
pub fn cov_mean_term(params: &Ar1Params, j: usize) -> Result<f64> {
    params.check_index(j)?;
    let t = DdTerms::new(params);
    let nn = params.n() as u32;
    let j = j as u32;
    let numer = t.one_p - t.rho.powi(nn + 1 - j) - t.rho.powi(j);
    Ok((t.var_scale() / t.n * numer / t.one_m).to_f64())
}

fn cov_terms(params: &Ar1Params) -> impl Iterator<Item = f64> + '_ {
    (1..=params.n()).map(move |j| cov_mean_term(params, j).expect("index in range"))
}

/// `sum_j Cov(Ybar_n, Y_j)` by its identity with `n Var(Ybar_n)`.
pub fn sum_cov_identity(params: &Ar1Params) -> f64 {
    var_scaled_sample_mean(params)
}

/// `sum_j Cov(Ybar_n, Y_j)` by direct summation of [`cov_mean_term`].
pub fn sum_cov_direct(params: &Ar1Params) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(cov_terms(params));
    acc.value()
}

/// Closed form of `sum_j Cov(Ybar_n, Y_j)^2`.
pub fn sum_cov_squared(params: &Ar1Params) -> f64 {
    let t = DdTerms::new(params);
    let (rho, rho_n, n) = (t.rho, t.rho_n, t.n);
    let one_m2 = t.one_m * t.one_p;
    let first = (t.one_p * t.one_p + 2.0 * rho_n * rho) / (t.one_m * t.one_m) / n;
    let second = (4.0 * t.one_p * t.one_p * rho * (1.0 - rho_n) - 2.0 * rho * rho * (1.0 - rho_n * rho_n))
        / (t.one_m * t.one_m * one_m2)
        / (n * n);
    let vs = t.var_scale();
    (vs * vs * (first - second)).to_f64()
}

/// `sum_j Cov(Ybar_n, Y_j)^2` by direct summation.
pub fn sum_cov_squared_direct(params: &Ar1Params) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(cov_terms(params).map(|c| c * c));
    acc.value()
}

/// `E[s_n^2] = sigma^2/(1-rho^2) (1 - 2 rho/((1-rho)(n-1)) + 2 rho (1-rho^n)/(n(n-1)(1-rho)^2))`.
pub fn expected_s2(params: &Ar1Params) -> f64 {
    let t = DdTerms::new(params);
    let nm1 = t.n - 1.0;
    let bracket = 1.0 - 2.0 * t.rho / (t.one_m * nm1) + 2.0 * t.rho * (1.0 - t.rho_n) / (t.n * nm1 * t.one_m * t.one_m);
    (t.var_scale() * bracket).to_f64()
}

/// Coefficient blocks `(c1, c2, c3, c4)` multiplying `n, 1, 1/n, 1/n^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientBlocks {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

/// Coefficient blocks `A_1..A_4` of `E[s_n^4]`; the `(1-r)^3 (1+r)` denominator of `A_3` is read
/// with `r = rho`.
pub fn second_moment_blocks(params: &Ar1Params) -> CoefficientBlocks {
    let Terms { rho, rho_n, .. } = Terms::new(params);
    let r2 = rho * rho;
    let one_m = 1.0 - rho;
    let one_m2 = 1.0 - r2;
    let a1 = -4.0 / one_m2;
    let a2 = -2.0
        * (3.0 + 9.0 * rho + 11.0 * r2 + 3.0 * r2 * rho + 6.0 * rho_n + 12.0 * rho_n * rho + 6.0 * rho_n * r2
            - 2.0 * rho_n * rho_n * r2)
        / (one_m2 * one_m2);
    let a3 = 4.0 * (1.0 - rho_n) * (1.0 - 3.0 * rho + 4.0 * r2 - 8.0 * rho_n * rho) / (one_m.powi(3) * (1.0 + rho));
    let a4 = 12.0 * rho * (1.0 - rho_n).powi(2) / one_m.powi(4);
    CoefficientBlocks {
        c1: a1,
        c2: a2,
        c3: a3,
        c4: a4,
    }
}

/// Coefficient-block form of `E[s_n^4]`:
/// `sigma^4/(1-rho^2)^2 / (n-1)^2 [ n^2 - 1 + rho (n A_1 + A_2 + A_3/n + A_4/n^2) ]`.
pub fn second_moment_s2(params: &Ar1Params) -> f64 {
    let Terms { rho, n, var_scale, .. } = Terms::new(params);
    let a = second_moment_blocks(params);
    let nm1 = n - 1.0;
    var_scale * var_scale / (nm1 * nm1) * (n * n - 1.0 + rho * (n * a.c1 + a.c2 + a.c3 / n + a.c4 / (n * n)))
}

/// Coefficient blocks `B_1..B_4` of `Var[s_n^2]` (with `r = rho` in `B_3`).
pub fn variance_blocks(params: &Ar1Params) -> CoefficientBlocks {
    let Terms { rho, rho_n, .. } = Terms::new(params);
    let r2 = rho * rho;
    let one_m = 1.0 - rho;
    let one_m2 = 1.0 - r2;
    let b1 = -2.0 / (1.0 + rho);
    let b2 = -2.0 / one_m
        - 4.0 * r2 / (one_m * one_m)
        - 2.0 * (1.0 - rho_n) / (one_m * one_m)
        - 2.0
            * (12.0 * rho_n * rho + 6.0 * rho_n * r2 - 2.0 * rho_n * rho_n * r2
                + 6.0 * rho_n
                + 3.0 * r2 * rho
                + 11.0 * r2
                + 9.0 * rho
                + 3.0)
            / (one_m2 * one_m2);
    let b3 = (1.0 - rho_n) * (13.0 - 4.0 * rho + 15.0 * r2 - rho_n - 32.0 * rho_n * rho + rho_n * r2)
        / (one_m.powi(3) * (1.0 + rho));
    let b4 = -4.0 * (1.0 - 3.0 * rho) * (1.0 - rho_n).powi(2) / one_m.powi(4);
    CoefficientBlocks {
        c1: b1,
        c2: b2,
        c3: b3,
        c4: b4,
    }
}

/// Coefficient-block form of `Var[s_n^2]`:
/// `sigma^4/(1-rho^2)^2 / (n-1) [ 2 + rho/(n-1) (n B_1 + B_2 + B_3/n + B_4/n^2) ]`.
pub fn variance_s2(params: &Ar1Params) -> f64 {
    let Terms { rho, n, var_scale, .. } = Terms::new(params);
    let b = variance_blocks(params);
    let nm1 = n - 1.0;
    var_scale * var_scale / nm1 * (2.0 + rho / nm1 * (n * b.c1 + b.c2 + b.c3 / n + b.c4 / (n * n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(sigma: f64, rho: f64, n: usize) -> Ar1Params {
        Ar1Params::new(0.0, sigma, rho, n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn numerator_variance_examples() {
        for n in [2, 7, 100] {
            assert_eq!(var_scaled_sample_mean(&p(1.0, 0.0, n)), 1.0);
        }
        assert!((var_scaled_sample_mean(&p(1.0, 0.5, 2)) - 2.0).abs() < 1e-14);
        let big = var_scaled_sample_mean(&p(1.0, 0.5, 1_000_000));
        assert!((big - 4.0).abs() < 1e-5);
    }

    #[test]
    fn both_forms_agree() {
        for &rho in &[-0.99, -0.5, 0.0, 0.5, 0.9, 0.99] {
            for &n in &[2, 3, 5, 10, 50, 200] {
                let q = p(1.5, rho, n);
                let a = var_scaled_sample_mean(&q);
                let b = var_scaled_sample_mean_limit_form(&q);
                assert!(rel(a, b) < 1e-12, "rho={rho} n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn cov_mean_term_examples() {
        assert!((cov_mean_term(&p(1.0, 0.0, 5), 3).unwrap() - 0.2).abs() < 1e-15);
        assert!((cov_mean_term(&p(1.0, 0.5, 2), 1).unwrap() - 1.0).abs() < 1e-15);
        let q = p(1.0, 0.5, 4);
        assert_eq!(cov_mean_term(&q, 2).unwrap(), cov_mean_term(&q, 3).unwrap());
        assert!(cov_mean_term(&q, 0).is_err());
        assert!(cov_mean_term(&q, 5).is_err());
    }

    #[test]
    fn sum_cov_examples() {
        assert_eq!(sum_cov_identity(&p(1.0, 0.0, 6)), 1.0);
        assert!((sum_cov_direct(&p(1.0, 0.5, 2)) - 2.0).abs() < 1e-14);
        let q = p(2.0, -0.3, 17);
        assert!(rel(sum_cov_identity(&q), sum_cov_direct(&q)) < 1e-12);
    }

    #[test]
    fn sum_cov_squared_examples() {
        assert!((sum_cov_squared(&p(1.0, 0.0, 4)) - 0.25).abs() < 1e-15);
        assert!((sum_cov_squared(&p(1.0, 0.5, 2)) - 2.0).abs() < 1e-14);
        let q = p(2.0, -0.7, 20);
        assert!(rel(sum_cov_squared(&q), sum_cov_squared_direct(&q)) < 1e-12);
    }

    #[test]
    fn expected_s2_examples() {
        for n in [2, 5, 30] {
            assert_eq!(expected_s2(&p(1.0, 0.0, n)), 1.0);
        }
        assert!((expected_s2(&p(1.0, 0.5, 2)) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fourth_order_forms_reduce_at_zero_correlation() {
        let q = p(1.0, 0.0, 5);
        assert!((second_moment_s2(&q) - 1.5).abs() < 1e-15);
        assert!((variance_s2(&q) - 0.5).abs() < 1e-15);
        let q = p(2.0, 0.0, 11);
        assert!((second_moment_s2(&q) - 16.0 * 12.0 / 10.0).abs() < 1e-12);
        assert!((variance_s2(&q) - 16.0 * 2.0 / 10.0).abs() < 1e-12);
    }

    #[test]
    fn report_gaps_and_flag() {
        let q = p(1.0, 0.5, 2);
        let r = MomentReport::new(MomentQuantity::ExpectedS2, q, 0.5, Some(0.25));
        assert_eq!(r.abs_gap, 0.25);
        assert_eq!(r.rel_gap, 1.0);
        assert!(r.discrepancy);
        assert_eq!(r.authoritative(), 0.25);

        let ok = MomentReport::new(MomentQuantity::ExpectedS2, q, 1.0, Some(1.0 + 1e-12));
        assert!(!ok.discrepancy);
        assert_eq!(ok.authoritative(), 1.0);

        let zero = MomentReport::new(MomentQuantity::SumCov, q, 1e-310, Some(0.0));
        assert!(zero.rel_gap.is_finite());

        let bare = MomentReport::new(MomentQuantity::SumCov, q, 3.0, None);
        assert!(!bare.discrepancy);
    }
}
