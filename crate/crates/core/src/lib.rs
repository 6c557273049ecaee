//! Quantum state estimation from measurement records.
//!
//! The crate provides three estimators over the same record type —
//! linear-inversion tomography (`tomography`), constrained maximum likelihood
//! (`mle`), and Bayesian mean estimation by Metropolis-Hastings sampling
//! (`bayes`) — together with posterior error bars, operational divergences
//! for scoring estimators against each other (`divergence`), and a
//! prior-robustness classifier (`robustness`).

pub mod error;
pub mod qmath;
pub mod tolerances;

pub mod measurement;

pub mod mle;
pub mod tomography;

pub mod bayes;

pub mod divergence;
pub mod robustness;

pub mod report;

pub use error::{Error, ErrorCategory, Result};
