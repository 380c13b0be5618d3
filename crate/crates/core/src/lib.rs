//! Exact covariance algebra, closed-form moments, quadratic-form oracles and
//! a reproducible Monte Carlo engine for the t-statistic of a stationary
//! Gaussian AR(1) process.
//!
//! Module map:
//!
//! * [`params`], [`process`], [`path`]: the model, its covariance matrices
//!   and path simulation.
//! * [`moments`]: closed forms for the numerator variance, the
//!   mean/observation covariances and the first two moments of `s_n^2`.
//! * [`oracle`]: the same quantities from trace identities over the explicit
//!   covariance matrix.
//! * [`statistics`]: classical and whitened t-statistics.
//! * [`student`]: Student t density by closed form and by quadrature.
//! * [`montecarlo`]: parallel replication, summaries, KS test and KDE.
//!
//! Indices in public functions that take an observation index are 1-based.
//!
//! ```
//! use ar1_tstat::montecarlo::{estimate_moments, Functional, SimulationConfig};
//! use ar1_tstat::{moments, oracle, Ar1Params};
//!
//! # fn main() -> Result<(), ar1_tstat::Error> {
//! let p = Ar1Params::new(0.0, 1.0, 0.5, 10)?;
//! let closed = moments::expected_s2(&p);
//! let exact = oracle::s2_oracle(&p);
//! let mc = estimate_moments(&SimulationConfig::new(p, 100_000, 7, 4)?, Functional::S2)?;
//! assert!((closed - exact.mean).abs() < 1e-12);
//! assert!((mc.mean - exact.mean).abs() < 4.0 * mc.std_error_mean);
//! # Ok(())
//! # }
//! ```

mod dd;
pub mod error;
pub mod exec;
pub mod matrix;
pub mod moments;
pub mod montecarlo;
pub mod oracle;
pub mod params;
pub mod path;
pub mod process;
pub mod quadrature;
pub mod statistics;
pub mod student;
pub mod sum;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use params::Ar1Params;
pub use path::{simulate_path, SamplePath};
pub use process::NormalLaw;
pub use student::StudentLaw;
