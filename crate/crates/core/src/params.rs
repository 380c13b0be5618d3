use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, STATIONARITY_MARGIN};

/// Parameters of a stationary Gaussian AR(1) process
/// `X_t = mu + rho (X_{t-1} - mu) + sigma v_t` observed over `n` steps.
///
/// Construction validates every invariant, so any `Ar1Params` value in hand
/// is admissible for all builders and moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Ar1Params {
    mu: f64,
    sigma: f64,
    rho: f64,
    n: usize,
}

#[derive(Deserialize)]
struct RawParams {
    mu: f64,
    sigma: f64,
    rho: f64,
    n: usize,
}

impl TryFrom<RawParams> for Ar1Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Ar1Params::new(raw.mu, raw.sigma, raw.rho, raw.n)
    }
}

impl Ar1Params {
    pub fn new(mu: f64, sigma: f64, rho: f64, n: usize) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidMu(mu));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidSigma(sigma));
        }
        if !(rho.is_finite() && rho.abs() <= STATIONARITY_MARGIN) {
            return Err(Error::NonStationary { rho });
        }
        if n < 2 {
            return Err(Error::SampleTooShort(n));
        }
        Ok(Self { mu, sigma, rho, n })
    }

    /// Zero-mean, unit innovation scale.
    pub fn standard(rho: f64, n: usize) -> Result<Self> {
        Self::new(0.0, 1.0, rho, n)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_n(self, n: usize) -> Result<Self> {
        Self::new(self.mu, self.sigma, self.rho, n)
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Self::new(mu, self.sigma, self.rho, self.n)
    }

    /// Stationary marginal variance `sigma^2 / (1 - rho^2)`.
    pub fn stationary_variance(&self) -> f64 {
        self.sigma * self.sigma / (1.0 - self.rho * self.rho)
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.n {
            Err(Error::IndexOutOfRange { index, len: self.n })
        } else {
            Ok(())
        }
    }
}
