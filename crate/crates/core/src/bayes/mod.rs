//! Posterior-mean state estimation.
//!
//! The estimate is the mean of the likelihood-weighted prior over states.
//! For induced priors (trace a Haar-random pure state on a `d x k` space)
//! the mean is computed by Metropolis-Hastings sampling over the purifying
//! pure states; for finite-support priors it is computed exactly by
//! reweighting; two one-parameter catalog priors (diagonal coin states and
//! the Bloch equator) walk their single parameter. Alongside the mean the
//! sampler reports the posterior covariance over traceless-basis
//! coordinates, which converts into an error bar for any observable.
//!
//! Validation oracles live here too: an exact Beta-posterior coin estimate
//! and a deterministic quadrature rule over the Bloch ball.

mod bernoulli;
mod quadrature;
mod sampler;

pub use bernoulli::{bme_bernoulli, run_bernoulli_sampler, BernoulliChain, BernoulliEstimate};
pub use quadrature::bme_quadrature_oracle;
pub use sampler::mh_jump;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::measurement::MeasurementRecord;
use crate::qmath::{observable_components, DensityMatrix, HermitianMatrix};

/// A prior distribution over states, restricted to families the estimator
/// can integrate: induced measures, finite mixtures of fixed states, and
/// two one-parameter catalog families.
#[derive(Clone, Debug)]
pub struct PriorSpec {
    dim: usize,
    kind: PriorKind,
}

/// The supported prior families.
#[derive(Clone, Debug)]
pub enum PriorKind {
    /// Trace out a `k`-dimensional ancilla from a Haar-random pure state on
    /// `d x k` dimensions. `k = 1` is the Haar measure on pure states;
    /// `k = d` is the Hilbert-Schmidt (flat) measure on mixed states.
    Induced {
        /// Ancilla dimension `k`.
        ancilla_dim: usize,
    },
    /// A discrete mixture of fixed states.
    FiniteSupport {
        states: Vec<DensityMatrix>,
        weights: Vec<f64>,
    },
    /// Uniform distribution over diagonal qubit states `diag(b, 1-b)`,
    /// `b ~ U[0, 1]` — the classical coin embedded as a state family.
    BernoulliUniform,
    /// Uniform distribution over the Bloch-sphere equator, the pure states
    /// `(cos phi, sin phi, 0)`.
    BlochGreatCircle,
}

impl PriorSpec {
    /// Induced measure on `dim`-dimensional states with ancilla dimension
    /// `ancilla_dim`.
    pub fn induced(dim: usize, ancilla_dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidConfig {
                reason: format!("prior dimension must be at least 2, got {dim}"),
            });
        }
        if ancilla_dim < 1 {
            return Err(Error::InvalidConfig {
                reason: "ancilla dimension must be at least 1".into(),
            });
        }
        Ok(Self {
            dim,
            kind: PriorKind::Induced { ancilla_dim },
        })
    }

    /// The flat (Hilbert-Schmidt) measure: induced with `k = d`.
    pub fn hilbert_schmidt(dim: usize) -> Result<Self> {
        Self::induced(dim, dim)
    }

    /// The Haar measure on pure states: induced with `k = 1`. Posteriors
    /// over pure states can be multimodal, so sampling this prior demands
    /// at least two chains and refuses to report when they disagree.
    pub fn haar(dim: usize) -> Result<Self> {
        Self::induced(dim, 1)
    }

    /// A discrete mixture of fixed states with the given weights.
    pub fn finite_support(states: Vec<DensityMatrix>, weights: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::UnsupportedPrior {
                reason: "finite-support prior needs at least one state".into(),
            });
        }
        if states.len() != weights.len() {
            return Err(Error::UnsupportedPrior {
                reason: format!(
                    "{} states but {} weights",
                    states.len(),
                    weights.len()
                ),
            });
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::UnsupportedPrior {
                reason: "support states have mixed dimensions".into(),
            });
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::UnsupportedPrior {
                reason: "weights must be finite and nonnegative".into(),
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::UnsupportedPrior {
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        Ok(Self {
            dim,
            kind: PriorKind::FiniteSupport { states, weights },
        })
    }

    /// Uniform prior over diagonal qubit states (the classical coin).
    pub fn bernoulli_uniform() -> Self {
        Self {
            dim: 2,
            kind: PriorKind::BernoulliUniform,
        }
    }

    /// Uniform prior over the Bloch-sphere equator.
    pub fn bloch_great_circle() -> Self {
        Self {
            dim: 2,
            kind: PriorKind::BlochGreatCircle,
        }
    }

    /// State dimension the prior lives on.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The prior family.
    pub fn kind(&self) -> &PriorKind {
        &self.kind
    }
}

/// Tuning parameters for the Metropolis-Hastings samplers.
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    /// Steps discarded before tallying; the step size adapts only here.
    pub burn_in: usize,
    /// Tallied steps per chain.
    pub samples: usize,
    /// Independent chains (merged by fixed-order moment reduction).
    pub chains: usize,
    /// Initial proposal step (standard deviation of the jump angle).
    pub initial_step: f64,
    /// Acceptance rate the burn-in adaptation steers toward.
    pub target_acceptance: f64,
    /// Number of steps per adaptation window.
    pub acceptance_window: usize,
    /// Multiplier gain of the adaptation update
    /// `step <- step * exp(gain * (observed - target))`.
    pub adaptation_gain: f64,
    /// Base RNG seed; chain `i` uses `seed + i`.
    pub seed: u64,
    /// Record the tallied coordinate trajectory of every chain.
    pub collect_trace: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            burn_in: 10_000,
            samples: 100_000,
            chains: 4,
            initial_step: 0.5,
            target_acceptance: 0.60,
            acceptance_window: 1000,
            adaptation_gain: 1.0,
            seed: 0,
            collect_trace: false,
        }
    }
}

impl SamplerConfig {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig {
                reason: "samples must be at least 1".into(),
            });
        }
        if self.chains == 0 {
            return Err(Error::InvalidConfig {
                reason: "chains must be at least 1".into(),
            });
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "target_acceptance must lie in (0, 1), got {}",
                    self.target_acceptance
                ),
            });
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!("initial_step must be positive, got {}", self.initial_step),
            });
        }
        if self.acceptance_window == 0 {
            return Err(Error::InvalidConfig {
                reason: "acceptance_window must be at least 1".into(),
            });
        }
        if !(self.adaptation_gain.is_finite() && self.adaptation_gain >= 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "adaptation_gain must be nonnegative, got {}",
                    self.adaptation_gain
                ),
            });
        }
        Ok(())
    }
}

/// Posterior second moments over traceless-basis coordinates. The identity
/// direction is excluded: the trace constraint gives it zero variance.
#[derive(Clone, Debug)]
pub struct CovarianceSuperoperator {
    dim: usize,
    matrix: DMatrix<f64>,
}

impl CovarianceSuperoperator {
    pub(crate) fn new(dim: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let n = dim * dim - 1;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        // Symmetrize away accumulation roundoff, then insist the result is
        // positive semidefinite to tolerance.
        let sym = (&matrix + matrix.transpose()) * 0.5;
        let min_eig = sym
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -1e-10 {
            return Err(Error::NotPositive {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { dim, matrix: sym })
    }

    /// State dimension the covariance refers to.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The symmetric `(d^2-1) x (d^2-1)` coordinate covariance.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Quadratic form `x^T C x`, clamped against roundoff negatives.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        (x.transpose() * &self.matrix * x)[(0, 0)].max(0.0)
    }
}

/// Per-chain health indicators reported with every sampled posterior.
#[derive(Clone, Debug)]
pub struct ChainDiagnostics {
    /// Posterior mean of each chain on its own.
    pub per_chain_means: Vec<DensityMatrix>,
    /// Post-burn-in acceptance rate of each chain.
    pub per_chain_acceptance: Vec<f64>,
    /// Step size each chain froze at after burn-in.
    pub per_chain_final_step: Vec<f64>,
    /// Largest pairwise trace distance between chain means.
    pub disagreement: f64,
    /// Largest within-chain trace distance between first-half and
    /// second-half means.
    pub split_disagreement: f64,
}

/// Tallied coordinate trajectory: `stride` consecutive values per step,
/// chains concatenated in index order.
#[derive(Clone, Debug)]
pub struct PosteriorTrace {
    stride: usize,
    coords: Vec<f64>,
}

impl PosteriorTrace {
    pub(crate) fn new(stride: usize, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len() % stride, 0);
        Self { stride, coords }
    }

    /// Coordinates per tallied step.
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// One slice of traceless-basis coordinates per tallied step.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.stride)
    }

    /// Number of tallied steps.
    pub fn len(&self) -> usize {
        self.coords.len() / self.stride
    }

    /// Whether the trace holds no steps.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// The sampled (or exactly computed) posterior: mean state, coordinate
/// covariance, and sampler diagnostics.
#[derive(Clone, Debug)]
pub struct PosteriorSummary {
    /// Posterior mean state (positivity verified).
    pub mean: DensityMatrix,
    /// Posterior covariance over traceless-basis coordinates.
    pub covariance: CovarianceSuperoperator,
    /// Post-burn-in acceptance rate across all chains.
    pub acceptance_rate: f64,
    /// Mean frozen step size across chains.
    pub final_step: f64,
    /// Total tallied steps (all chains), or support size for exact
    /// posteriors.
    pub samples_used: usize,
    /// Per-chain indicators.
    pub chain_diagnostics: ChainDiagnostics,
    /// Tallied trajectory when requested (None for exact posteriors).
    pub trace: Option<PosteriorTrace>,
}

/// Expectation and posterior variance of one observable.
#[derive(Clone, Copy, Debug)]
pub struct ErrorBars {
    /// `Tr(X mean)`.
    pub expectation: f64,
    /// Posterior variance of `Tr(X rho)`.
    pub variance: f64,
}

/// Estimate the posterior mean state for a measurement record under a
/// prior.
///
/// Induced priors run `chains` Metropolis-Hastings walks over purifying
/// pure states; the acceptance ratio needs only the likelihood because the
/// unbiased walk already has the induced measure as its stationary
/// distribution. Finite-support priors are integrated exactly by
/// reweighting. The coin and equator catalog priors walk their single
/// parameter with the same adaptation rule.
///
/// The Haar prior (`k = 1`) is experimental: it requires at least two
/// chains, and the run is rejected with [`Error::ChainsDisagree`] when the
/// chain means drift more than 0.05 apart in trace distance, the signature
/// of a multimodal posterior that a single summary would misrepresent.
pub fn run_sampler(
    record: &MeasurementRecord,
    prior: &PriorSpec,
    config: &SamplerConfig,
) -> Result<PosteriorSummary> {
    config.validate()?;
    if record.dim() != prior.dim() {
        return Err(Error::DimensionMismatch {
            expected: prior.dim(),
            found: record.dim(),
        });
    }
    match prior.kind() {
        PriorKind::Induced { ancilla_dim } => {
            sampler::run_induced(record, prior.dim(), *ancilla_dim, config)
        }
        PriorKind::FiniteSupport { states, weights } => {
            sampler::finite_support_posterior(record, states, weights, config)
        }
        PriorKind::BernoulliUniform => sampler::run_bernoulli_prior(record, config),
        PriorKind::BlochGreatCircle => sampler::run_great_circle(record, config),
    }
}

/// Expectation and posterior variance of an observable under a sampled
/// posterior: `Var = x^T C x` where `x` holds the observable's traceless
/// components and `C` is the coordinate covariance.
pub fn error_bars(summary: &PosteriorSummary, observable: &HermitianMatrix) -> Result<ErrorBars> {
    if observable.dim() != summary.mean.dim() {
        return Err(Error::DimensionMismatch {
            expected: summary.mean.dim(),
            found: observable.dim(),
        });
    }
    let (_, x) = observable_components(observable);
    Ok(ErrorBars {
        expectation: summary.mean.expectation(observable),
        variance: summary.covariance.quadratic_form(&x),
    })
}

/// Rough scale of the smallest eigenvalue a mean-based estimate assigns
/// after `n_total` shots in dimension `d`: `1 / (N + d)`. Reported next to
/// minimum eigenvalues to contextualize them.
pub fn p_min_diagnostic(n_total: u64, d: usize) -> f64 {
    1.0 / (n_total as f64 + d as f64)
}
