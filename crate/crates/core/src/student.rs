//! Student t density by two independent routes, plus its CDF.
//!
//! * [`StudentLaw::density_closed`] uses the Gamma-function closed form
//!   `Gamma((k+1)/2) / Gamma(k/2) / sqrt(pi k) * (k / (t^2 + k))^((k+1)/2)`.
//! * [`StudentLaw::density_integral`] evaluates the mixture integral
//!   `C int_0^inf exp(-w (t^2/(2k) + 1/2)) w^((k-1)/2) dw`,
//!   `C = 1 / (Gamma(k/2) 2^((k+1)/2) sqrt(pi k))`,
//!   numerically after the substitution `w = 2 k u / (t^2 + k)`, which leaves
//!   a t-independent Gamma kernel `int_0^inf e^-u u^(a-1) du`, `a = (k+1)/2`.
//!
//! The two share only `ln Gamma(k/2)` (part of `C`); `Gamma((k+1)/2)` is
//! produced by quadrature on the integral route.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

const KERNEL_TOL: Tolerance = Tolerance {
    abs: 0.0,
    rel: 1e-10,
    max_intervals: 4000,
};

const CDF_TOL: Tolerance = Tolerance {
    abs: 1e-16,
    rel: 1e-12,
    max_intervals: 4000,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentLaw {
    dof: f64,
    ln_norm: f64,
}

impl StudentLaw {
    pub fn new(dof: f64) -> Result<Self> {
        if dof.is_finite() && dof > 0.0 {
            let ln_norm = ln_gamma(0.5 * (dof + 1.0)) - ln_gamma(0.5 * dof) - 0.5 * (PI * dof).ln();
            Ok(Self { dof, ln_norm })
        } else {
            Err(Error::InvalidDof(dof))
        }
    }

    pub fn dof(&self) -> f64 {
        self.dof
    }

    fn ln_density(&self, t: f64) -> f64 {
        let k = self.dof;
        self.ln_norm - 0.5 * (k + 1.0) * (t * t / k).ln_1p()
    }

    pub fn density_closed(&self, t: f64) -> f64 {
        self.ln_density(t).exp()
    }

    /// Density via quadrature of the mixture integral.
    pub fn density_integral(&self, t: f64) -> Result<f64> {
        let k = self.dof;
        let a = 0.5 * (k + 1.0);
        let ln_c = -ln_gamma(0.5 * k) - a * 2f64.ln() - 0.5 * (PI * k).ln();
        let ln_scale = (2.0 * k / (t * t + k)).ln();
        let ln_kernel = ln_gamma_kernel(a)?;
        Ok((ln_c + a * ln_scale + ln_kernel).exp())
    }

    /// `P(T <= t)` by adaptive quadrature of [`Self::density_closed`]; tails
    /// beyond |t| = 1 are integrated after the map `x = 1/s`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t.is_nan() {
            return Ok(f64::NAN);
        }
        if t == 0.0 {
            return Ok(0.5);
        }
        let x = t.abs();
        let upper = if x.is_infinite() {
            0.0
        } else if x <= 1.0 {
            0.5 - integrate(|u| self.density_closed(u), 0.0, x, CDF_TOL)?.value
        } else {
            self.tail_beyond(x)?
        };
        Ok(if t > 0.0 { 1.0 - upper } else { upper })
    }

    /// `P(T > x)` for `x >= 1`.
    fn tail_beyond(&self, x: f64) -> Result<f64> {
        let inner = |s: f64| (self.ln_density(1.0 / s) - 2.0 * s.ln()).exp();
        Ok(integrate(inner, 0.0, 1.0 / x, CDF_TOL)?.value)
    }

    /// Total mass of the closed-form density over the real line.
    pub fn total_mass(&self) -> Result<f64> {
        let core = integrate(|u| self.density_closed(u), 0.0, 1.0, CDF_TOL)?.value;
        Ok(2.0 * (core + self.tail_beyond(1.0)?))
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Ok(f64::NAN);
        }
        if p == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if p == 1.0 {
            return Ok(f64::INFINITY);
        }
        let mut hi = 1.0;
        while self.cdf(hi)? < p.max(1.0 - p) {
            hi *= 2.0;
        }
        let (mut lo, mut hi) = (-hi, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `ln int_0^inf e^-u u^(a-1) du` by quadrature, with the integrand scaled by
/// its peak value so large `a` does not overflow.
fn ln_gamma_kernel(a: f64) -> Result<f64> {
    let shape = a - 1.0;
    let span = 40.0 * (1.0 + a.sqrt());
    if a < 1.0 {
        // u = v^(1/a) on [0, 1] removes the u^(a-1) singularity.
        let head = integrate(|v: f64| (-v.powf(1.0 / a)).exp(), 0.0, 1.0, KERNEL_TOL)?.value / a;
        let tail = integrate(|u: f64| (-u + shape * u.ln()).exp(), 1.0, 1.0 + span, KERNEL_TOL)?.value;
        return Ok((head + tail).ln());
    }
    let peak = shape;
    let ln_peak = if peak > 0.0 { -peak + shape * peak.ln() } else { 0.0 };
    let g = |u: f64| {
        if u <= 0.0 {
            return if shape == 0.0 { (-ln_peak).exp() } else { 0.0 };
        }
        (-u + shape * u.ln() - ln_peak).exp()
    };
    let left = integrate(g, 0.0, peak, KERNEL_TOL)?.value;
    let right = integrate(g, peak, peak + span, KERNEL_TOL)?.value;
    Ok(ln_peak + (left + right).ln())
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Normal CDF with the given mean and standard deviation.
pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    0.5 * libm::erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
}
