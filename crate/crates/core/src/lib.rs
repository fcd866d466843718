//! Probabilities for the number of real eigenvalues of elliptic real
//! Ginibre matrices.
//!
//! [`exactprob`] computes `p_{n,m}` exactly (to quadrature tolerance) by
//! several independent routes, [`asymptotics`] holds the large-`n`
//! coefficients and truncated series in the strong and weak non-Hermiticity
//! regimes, [`prekernel`] the GOE skew-orthogonal kernel with the half-plane
//! Pfaffian route, [`potential`] the effective potential behind the leading
//! order, and [`ensemble`] a seeded Monte Carlo sampler. [`specfun`],
//! [`quadrature`] and [`combinatorics`] are the numeric building blocks.
//!
//! ```
//! use eginoe::exactprob::{distribution, EnsembleParams, Precision};
//!
//! let params = EnsembleParams::strong(4, 0.5)?;
//! let total: f64 = distribution(&params, Precision::Auto)?
//!     .iter()
//!     .map(|(_, lp)| lp.prob())
//!     .sum();
//! assert!((total - 1.0).abs() < 1e-12);
//! # Ok::<(), eginoe::Error>(())
//! ```

pub mod asymptotics;
pub mod combinatorics;
pub mod ensemble;
pub mod error;
pub mod exactprob;
pub mod potential;
pub mod prekernel;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
