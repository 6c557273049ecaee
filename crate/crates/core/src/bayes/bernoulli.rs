//! The coin oracle: a two-outcome experiment under the uniform prior on
//! the bias has a closed-form Beta posterior, giving an exact target the
//! Monte-Carlo machinery must reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

use super::SamplerConfig;

/// Exact posterior mean and variance of a coin's heads probability.
#[derive(Clone, Copy, Debug)]
pub struct BernoulliEstimate {
    /// Posterior mean `(n + 1) / (N + 2)`.
    pub estimate: f64,
    /// Posterior variance `(n + 1)(N - n + 1) / ((N + 2)^2 (N + 3))`.
    pub variance: f64,
}

/// Posterior mean and variance of the heads probability after observing
/// `n_heads` of `n_total` flips, under the uniform prior on the bias: the
/// mean and variance of a Beta(n + 1, N - n + 1) distribution.
pub fn bme_bernoulli(n_heads: u64, n_total: u64) -> Result<BernoulliEstimate> {
    if n_heads > n_total {
        return Err(Error::InvalidConfig {
            reason: format!("{n_heads} heads out of {n_total} flips"),
        });
    }
    let n = n_heads as f64;
    let total = n_total as f64;
    let estimate = (n + 1.0) / (total + 2.0);
    let variance =
        (n + 1.0) * (total - n + 1.0) / ((total + 2.0) * (total + 2.0) * (total + 3.0));
    Ok(BernoulliEstimate { estimate, variance })
}

/// A Monte-Carlo run of the coin posterior, with a batch-means standard
/// error for calibrated comparison against [`bme_bernoulli`].
#[derive(Clone, Copy, Debug)]
pub struct BernoulliChain {
    /// Monte-Carlo posterior-mean estimate of the bias.
    pub estimate: f64,
    /// Batch-means standard error of `estimate`.
    pub std_error: f64,
    /// Post-burn-in acceptance rate across chains.
    pub acceptance_rate: f64,
    /// Mean frozen step size across chains.
    pub final_step: f64,
    /// Total tallied steps.
    pub samples_used: usize,
}

const STEP_MIN: f64 = 1e-4;
const STEP_MAX: f64 = 3.0;

/// Log-likelihood of the flip counts at bias `b` (uniform prior, so the
/// acceptance ratio needs nothing else).
fn log_likelihood(b: f64, n_heads: f64, n_tails: f64) -> f64 {
    let mut ll = 0.0;
    if n_heads > 0.0 {
        if b <= 0.0 {
            return f64::NEG_INFINITY;
        }
        ll += n_heads * b.ln();
    }
    if n_tails > 0.0 {
        if b >= 1.0 {
            return f64::NEG_INFINITY;
        }
        ll += n_tails * (1.0 - b).ln();
    }
    ll
}

/// Sample the coin posterior by Metropolis-Hastings on the bias: wrapped
/// Gaussian proposals on [0, 1), burn-in step adaptation identical to the
/// state samplers, and per-step tallying. The standard error comes from
/// batch means (batches of `samples / 100` steps), which absorbs the
/// chain's autocorrelation.
pub fn run_bernoulli_sampler(
    n_heads: u64,
    n_total: u64,
    config: &SamplerConfig,
) -> Result<BernoulliChain> {
    if n_heads > n_total {
        return Err(Error::InvalidConfig {
            reason: format!("{n_heads} heads out of {n_total} flips"),
        });
    }
    if config.samples == 0 || config.chains == 0 {
        return Err(Error::InvalidConfig {
            reason: "samples and chains must be at least 1".into(),
        });
    }
    let heads = n_heads as f64;
    let tails = (n_total - n_heads) as f64;

    let batch_len = (config.samples / 100).max(1);
    let mut batch_means = Vec::new();
    let mut grand_sum = 0.0;
    let mut accepted_total = 0usize;
    let mut final_steps = 0.0;

    for chain in 0..config.chains {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(chain as u64));
        let mut b = rng.gen::<f64>();
        let mut ll = log_likelihood(b, heads, tails);
        let mut step = config.initial_step.clamp(STEP_MIN, STEP_MAX);

        let mut window_accepted = 0usize;
        for s in 0..config.burn_in {
            if bias_step(&mut b, &mut ll, heads, tails, step, &mut rng) {
                window_accepted += 1;
            }
            if (s + 1) % config.acceptance_window == 0 {
                let rate = window_accepted as f64 / config.acceptance_window as f64;
                let factor =
                    (config.adaptation_gain * (rate - config.target_acceptance)).exp();
                step = (step * factor).clamp(STEP_MIN, STEP_MAX);
                window_accepted = 0;
            }
        }

        let mut batch_sum = 0.0;
        let mut in_batch = 0usize;
        for _ in 0..config.samples {
            if bias_step(&mut b, &mut ll, heads, tails, step, &mut rng) {
                accepted_total += 1;
            }
            grand_sum += b;
            batch_sum += b;
            in_batch += 1;
            if in_batch == batch_len {
                batch_means.push(batch_sum / batch_len as f64);
                batch_sum = 0.0;
                in_batch = 0;
            }
        }
        if in_batch > 0 {
            batch_means.push(batch_sum / in_batch as f64);
        }
        final_steps += step;
    }

    let samples_used = config.chains * config.samples;
    let estimate = grand_sum / samples_used as f64;
    let std_error = if batch_means.len() > 1 {
        let m = batch_means.iter().sum::<f64>() / batch_means.len() as f64;
        let var = batch_means.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
            / (batch_means.len() - 1) as f64;
        (var / batch_means.len() as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(BernoulliChain {
        estimate,
        std_error,
        acceptance_rate: accepted_total as f64 / samples_used as f64,
        final_step: final_steps / config.chains as f64,
        samples_used,
    })
}

fn bias_step(
    b: &mut f64,
    ll: &mut f64,
    heads: f64,
    tails: f64,
    step: f64,
    rng: &mut ChaCha8Rng,
) -> bool {
    let delta = Normal::new(0.0, step)
        .expect("step is clamped positive")
        .sample(rng);
    let candidate = (*b + delta).rem_euclid(1.0);
    let candidate_ll = log_likelihood(candidate, heads, tails);
    let accept = if ll.is_finite() {
        candidate_ll.is_finite() && {
            let log_ratio = candidate_ll - *ll;
            log_ratio >= 0.0 || rng.gen::<f64>().ln() < log_ratio
        }
    } else {
        true
    };
    if accept {
        *b = candidate;
        *ll = candidate_ll;
    }
    accept
}
