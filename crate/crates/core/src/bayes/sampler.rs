//! Metropolis-Hastings chains over the supported prior families, plus the
//! exact reweighting path for finite-support priors.
//!
//! All kernels share one chain driver: burn-in with windowed step-size
//! adaptation, then a frozen-step sampling phase that tallies the current
//! state's traceless-basis coordinates at every step (rejections re-tally
//! the unmoved state). Chains are independent workers with private RNG
//! streams; the merge is a fixed-order moment reduction, so results are
//! identical for any thread count.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::{log_likelihood, MeasurementRecord};
use crate::mle::CountedOutcomes;
use crate::qmath::{partial_trace_ancilla, random_haar_pure, DensityMatrix, HsBasis, PureState};

use super::{
    ChainDiagnostics, CovarianceSuperoperator, PosteriorSummary, PosteriorTrace, SamplerConfig,
};

/// Adaptation clamp: the proposal step never leaves this range.
const STEP_MIN: f64 = 1e-4;
const STEP_MAX: f64 = 3.0;

/// Trace-distance threshold beyond which disagreeing chains abort a
/// pure-state-prior run.
const HAAR_DISAGREEMENT_LIMIT: f64 = 0.05;

/// One Metropolis-Hastings proposal on a pure state: pick two basis
/// indices `i`, `j` uniformly, draw a Gaussian angle `delta`, and apply
/// `exp(i H delta)` on the `{|i>, |j>}` subspace, where `H` is a phase for
/// `i = j`, a symmetric (sigma-x-like) coupling for `i < j`, and a real
/// (sigma-y-like) rotation for `i > j`. The Gaussian is symmetric in
/// `delta`, so the proposal is its own reverse and needs no correction
/// factor in the acceptance ratio.
///
/// # Panics
///
/// Panics when `step_sigma` is not a positive finite number.
pub fn mh_jump<R: Rng + ?Sized>(psi: &PureState, step_sigma: f64, rng: &mut R) -> PureState {
    assert!(
        step_sigma.is_finite() && step_sigma > 0.0,
        "step_sigma must be positive and finite, got {step_sigma}"
    );
    let n = psi.dim();
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    let delta = Normal::new(0.0, step_sigma)
        .expect("sigma validated above")
        .sample(rng);
    let mut amps = psi.amplitudes().clone();
    apply_two_level_rotation(&mut amps, i, j, delta);
    PureState::normalized(amps).expect("two-level rotations preserve the norm")
}

/// Apply `exp(i H delta)` restricted to amplitudes `i` and `j`.
pub(crate) fn apply_two_level_rotation(
    amps: &mut DVector<Complex64>,
    i: usize,
    j: usize,
    delta: f64,
) {
    let (sin, cos) = delta.sin_cos();
    if i == j {
        amps[i] *= Complex64::new(cos, sin);
    } else if i < j {
        let (ai, aj) = (amps[i], amps[j]);
        let i_sin = Complex64::new(0.0, sin);
        amps[i] = ai * cos + aj * i_sin;
        amps[j] = ai * i_sin + aj * cos;
    } else {
        let (ai, aj) = (amps[i], amps[j]);
        amps[i] = ai * cos + aj * sin;
        amps[j] = aj * cos - ai * sin;
    }
}

/// A prior-specific walk: how to start, how to propose, and how to read
/// the tallied coordinates and likelihood off a walk state. Implementors
/// cache coordinates and likelihood inside the state so each is computed
/// once per proposal.
trait Kernel: Sync {
    type State: Send;

    fn start(&self, rng: &mut ChaCha8Rng) -> Self::State;
    fn propose(&self, state: &Self::State, step: f64, rng: &mut ChaCha8Rng) -> Self::State;
    fn coords<'a>(&self, state: &'a Self::State) -> &'a DVector<f64>;
    fn log_likelihood(&self, state: &Self::State) -> f64;
}

/// Walk over purifying pure states on `system_dim * ancilla_dim`
/// dimensions; the tallied state is the ancilla partial trace.
struct InducedKernel {
    system_dim: usize,
    ancilla_dim: usize,
    basis: HsBasis,
    outcomes: CountedOutcomes,
}

struct InducedPoint {
    psi: PureState,
    coords: DVector<f64>,
    ll: f64,
}

impl InducedKernel {
    fn point(&self, psi: PureState) -> InducedPoint {
        let rho = partial_trace_ancilla(&psi, self.system_dim, self.ancilla_dim)
            .expect("walk dimension is fixed at construction");
        let coords = self.basis.coords_of(rho.matrix());
        let ll = self.outcomes.log_likelihood(&coords);
        InducedPoint { psi, coords, ll }
    }
}

impl Kernel for InducedKernel {
    type State = InducedPoint;

    fn start(&self, rng: &mut ChaCha8Rng) -> InducedPoint {
        self.point(random_haar_pure(self.system_dim * self.ancilla_dim, rng))
    }

    fn propose(&self, state: &InducedPoint, step: f64, rng: &mut ChaCha8Rng) -> InducedPoint {
        self.point(mh_jump(&state.psi, step, rng))
    }

    fn coords<'a>(&self, state: &'a InducedPoint) -> &'a DVector<f64> {
        &state.coords
    }

    fn log_likelihood(&self, state: &InducedPoint) -> f64 {
        state.ll
    }
}

/// One-parameter walk used by the two catalog priors: a scalar parameter
/// with a wrapped Gaussian proposal and a parameter-to-coordinates map.
struct ScalarPoint {
    value: f64,
    coords: DVector<f64>,
    ll: f64,
}

/// Walk over diagonal qubit states `diag(b, 1-b)`, `b` uniform on [0, 1).
/// The proposal wraps modulo 1, which keeps it symmetric.
struct BernoulliKernel {
    outcomes: CountedOutcomes,
}

impl BernoulliKernel {
    fn point(&self, b: f64) -> ScalarPoint {
        let coords = DVector::from_vec(vec![0.0, 0.0, 2.0 * b - 1.0]);
        let ll = self.outcomes.log_likelihood(&coords);
        ScalarPoint {
            value: b,
            coords,
            ll,
        }
    }
}

impl Kernel for BernoulliKernel {
    type State = ScalarPoint;

    fn start(&self, rng: &mut ChaCha8Rng) -> ScalarPoint {
        self.point(rng.gen::<f64>())
    }

    fn propose(&self, state: &ScalarPoint, step: f64, rng: &mut ChaCha8Rng) -> ScalarPoint {
        let delta = Normal::new(0.0, step)
            .expect("step is clamped positive")
            .sample(rng);
        self.point((state.value + delta).rem_euclid(1.0))
    }

    fn coords<'a>(&self, state: &'a ScalarPoint) -> &'a DVector<f64> {
        &state.coords
    }

    fn log_likelihood(&self, state: &ScalarPoint) -> f64 {
        state.ll
    }
}

/// Walk over the Bloch-equator pure states `(cos phi, sin phi, 0)`.
struct GreatCircleKernel {
    outcomes: CountedOutcomes,
}

impl GreatCircleKernel {
    fn point(&self, phi: f64) -> ScalarPoint {
        let (sin, cos) = phi.sin_cos();
        let coords = DVector::from_vec(vec![cos, sin, 0.0]);
        let ll = self.outcomes.log_likelihood(&coords);
        ScalarPoint {
            value: phi,
            coords,
            ll,
        }
    }
}

impl Kernel for GreatCircleKernel {
    type State = ScalarPoint;

    fn start(&self, rng: &mut ChaCha8Rng) -> ScalarPoint {
        self.point(rng.gen::<f64>() * std::f64::consts::TAU)
    }

    fn propose(&self, state: &ScalarPoint, step: f64, rng: &mut ChaCha8Rng) -> ScalarPoint {
        let delta = Normal::new(0.0, step)
            .expect("step is clamped positive")
            .sample(rng);
        self.point((state.value + delta).rem_euclid(std::f64::consts::TAU))
    }

    fn coords<'a>(&self, state: &'a ScalarPoint) -> &'a DVector<f64> {
        &state.coords
    }

    fn log_likelihood(&self, state: &ScalarPoint) -> f64 {
        state.ll
    }
}

/// Advance the chain one step; returns whether the proposal was accepted.
fn mh_step<K: Kernel>(
    kernel: &K,
    current: &mut K::State,
    current_ll: &mut f64,
    step: f64,
    rng: &mut ChaCha8Rng,
) -> bool {
    let candidate = kernel.propose(current, step, rng);
    let candidate_ll = kernel.log_likelihood(&candidate);
    let accept = if current_ll.is_finite() {
        candidate_ll.is_finite() && {
            let log_ratio = candidate_ll - *current_ll;
            log_ratio >= 0.0 || rng.gen::<f64>().ln() < log_ratio
        }
    } else {
        // The walk has not found the likelihood's support yet; move freely.
        true
    };
    if accept {
        *current = candidate;
        *current_ll = candidate_ll;
    }
    accept
}

/// Raw per-chain accumulators, merged deterministically by the caller.
struct ChainOutput {
    sum: DVector<f64>,
    first_half_sum: DVector<f64>,
    second_moment: DMatrix<f64>,
    accepted: usize,
    final_step: f64,
    saw_finite: bool,
    trace: Vec<f64>,
}

fn run_chain<K: Kernel>(
    kernel: &K,
    coord_count: usize,
    config: &SamplerConfig,
    chain_index: usize,
) -> ChainOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(chain_index as u64));
    let mut current = kernel.start(&mut rng);
    let mut current_ll = kernel.log_likelihood(&current);
    let mut saw_finite = current_ll.is_finite();
    let mut step = config.initial_step.clamp(STEP_MIN, STEP_MAX);

    // Burn-in: adapt the step once per window, multiplicatively steering
    // the observed acceptance rate toward the target.
    let mut window_accepted = 0usize;
    for s in 0..config.burn_in {
        if mh_step(kernel, &mut current, &mut current_ll, step, &mut rng) {
            window_accepted += 1;
        }
        saw_finite |= current_ll.is_finite();
        if (s + 1) % config.acceptance_window == 0 {
            let rate = window_accepted as f64 / config.acceptance_window as f64;
            let factor = (config.adaptation_gain * (rate - config.target_acceptance)).exp();
            step = (step * factor).clamp(STEP_MIN, STEP_MAX);
            window_accepted = 0;
        }
    }

    // Sampling: the step is frozen (adaptation during tallying would bias
    // the stationary distribution); every step tallies the current state.
    let mut sum = DVector::zeros(coord_count);
    let mut first_half_sum = DVector::zeros(coord_count);
    let mut second_moment = DMatrix::zeros(coord_count, coord_count);
    let mut accepted = 0usize;
    let half = config.samples / 2;
    let mut trace = Vec::new();
    if config.collect_trace {
        trace.reserve(config.samples * coord_count);
    }
    for s in 0..config.samples {
        if mh_step(kernel, &mut current, &mut current_ll, step, &mut rng) {
            accepted += 1;
        }
        saw_finite |= current_ll.is_finite();
        let t = kernel.coords(&current);
        for a in 0..coord_count {
            sum[a] += t[a];
            for b in a..coord_count {
                second_moment[(a, b)] += t[a] * t[b];
            }
        }
        if s < half {
            for a in 0..coord_count {
                first_half_sum[a] += t[a];
            }
        }
        if config.collect_trace {
            trace.extend_from_slice(t.as_slice());
        }
    }
    // Mirror the upper-triangle accumulation.
    for a in 0..coord_count {
        for b in (a + 1)..coord_count {
            second_moment[(b, a)] = second_moment[(a, b)];
        }
    }
    ChainOutput {
        sum,
        first_half_sum,
        second_moment,
        accepted,
        final_step: step,
        saw_finite,
        trace,
    }
}

/// Run all chains of a kernel and merge their moments into a summary.
fn run_with_kernel<K: Kernel>(
    kernel: &K,
    dim: usize,
    config: &SamplerConfig,
    pure_state_guard: bool,
) -> Result<PosteriorSummary> {
    if pure_state_guard && config.chains < 2 {
        return Err(Error::InvalidConfig {
            reason: "the pure-state (ancilla dimension 1) prior requires at least 2 chains \
                     so that multimodality shows up as chain disagreement"
                .into(),
        });
    }
    let coord_count = dim * dim - 1;
    let outputs: Vec<ChainOutput> = (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(kernel, coord_count, config, c))
        .collect();

    if let Some(idx) = outputs.iter().position(|o| !o.saw_finite) {
        return Err(Error::PriorAnnihilated {
            reason: format!(
                "chain {idx} found no state with nonzero likelihood in {} burn-in and {} \
                 sampling steps",
                config.burn_in, config.samples
            ),
        });
    }

    let basis = HsBasis::new(dim);
    let per_chain_means: Vec<DensityMatrix> = outputs
        .iter()
        .map(|o| {
            let m = basis.reconstruct_unit_trace(&(&o.sum / config.samples as f64));
            DensityMatrix::new(m).expect("chain mean has unit trace by construction")
        })
        .collect();

    let total = (config.chains * config.samples) as f64;
    let mut grand_sum = DVector::zeros(coord_count);
    let mut grand_second = DMatrix::zeros(coord_count, coord_count);
    for o in &outputs {
        grand_sum += &o.sum;
        grand_second += &o.second_moment;
    }
    let mean_coords = &grand_sum / total;
    let mean = DensityMatrix::verified(basis.reconstruct_unit_trace(&mean_coords))?;
    let covariance = CovarianceSuperoperator::new(
        dim,
        grand_second / total - &mean_coords * mean_coords.transpose(),
    )?;

    let mut disagreement = 0.0_f64;
    for a in 0..per_chain_means.len() {
        for b in (a + 1)..per_chain_means.len() {
            disagreement = disagreement.max(per_chain_means[a].trace_distance(&per_chain_means[b]));
        }
    }
    let half = config.samples / 2;
    let mut split_disagreement = 0.0_f64;
    if half > 0 {
        for o in &outputs {
            let first = basis.reconstruct_unit_trace(&(&o.first_half_sum / half as f64));
            let second = basis.reconstruct_unit_trace(
                &((&o.sum - &o.first_half_sum) / (config.samples - half) as f64),
            );
            let first = DensityMatrix::new(first).expect("half mean has unit trace");
            let second = DensityMatrix::new(second).expect("half mean has unit trace");
            split_disagreement = split_disagreement.max(first.trace_distance(&second));
        }
    }

    if pure_state_guard && disagreement > HAAR_DISAGREEMENT_LIMIT {
        return Err(Error::ChainsDisagree {
            statistic: disagreement,
            threshold: HAAR_DISAGREEMENT_LIMIT,
        });
    }

    let acceptance_rate =
        outputs.iter().map(|o| o.accepted).sum::<usize>() as f64 / total;
    let final_step =
        outputs.iter().map(|o| o.final_step).sum::<f64>() / config.chains as f64;
    let trace = if config.collect_trace {
        let mut coords = Vec::with_capacity(config.chains * config.samples * coord_count);
        for o in &outputs {
            coords.extend_from_slice(&o.trace);
        }
        Some(PosteriorTrace::new(coord_count, coords))
    } else {
        None
    };

    Ok(PosteriorSummary {
        mean,
        covariance,
        acceptance_rate,
        final_step,
        samples_used: config.chains * config.samples,
        chain_diagnostics: ChainDiagnostics {
            per_chain_means,
            per_chain_acceptance: outputs
                .iter()
                .map(|o| o.accepted as f64 / config.samples as f64)
                .collect(),
            per_chain_final_step: outputs.iter().map(|o| o.final_step).collect(),
            disagreement,
            split_disagreement,
        },
        trace,
    })
}

pub(super) fn run_induced(
    record: &MeasurementRecord,
    dim: usize,
    ancilla_dim: usize,
    config: &SamplerConfig,
) -> Result<PosteriorSummary> {
    let basis = HsBasis::new(dim);
    let outcomes = CountedOutcomes::from_record(record, &basis);
    let kernel = InducedKernel {
        system_dim: dim,
        ancilla_dim,
        basis,
        outcomes,
    };
    run_with_kernel(&kernel, dim, config, ancilla_dim == 1)
}

pub(super) fn run_bernoulli_prior(
    record: &MeasurementRecord,
    config: &SamplerConfig,
) -> Result<PosteriorSummary> {
    let basis = HsBasis::new(2);
    let kernel = BernoulliKernel {
        outcomes: CountedOutcomes::from_record(record, &basis),
    };
    run_with_kernel(&kernel, 2, config, false)
}

pub(super) fn run_great_circle(
    record: &MeasurementRecord,
    config: &SamplerConfig,
) -> Result<PosteriorSummary> {
    let basis = HsBasis::new(2);
    let kernel = GreatCircleKernel {
        outcomes: CountedOutcomes::from_record(record, &basis),
    };
    run_with_kernel(&kernel, 2, config, false)
}

/// Exact posterior over a finite support: reweight the prior by the
/// likelihood (log-shifted for stability) and take closed-form moments.
/// The returned summary has degenerate chain diagnostics — there is no
/// Monte-Carlo error to diagnose.
pub(super) fn finite_support_posterior(
    record: &MeasurementRecord,
    states: &[DensityMatrix],
    weights: &[f64],
    config: &SamplerConfig,
) -> Result<PosteriorSummary> {
    let dim = record.dim();
    let basis = HsBasis::new(dim);
    let lls = states
        .iter()
        .map(|s| log_likelihood(record, s))
        .collect::<Result<Vec<f64>>>()?;
    let max_ll = lls
        .iter()
        .cloned()
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if !max_ll.is_finite() {
        return Err(Error::PriorAnnihilated {
            reason: format!(
                "every one of the {} support states assigns probability zero to the record",
                states.len()
            ),
        });
    }
    let mut posterior: Vec<f64> = lls
        .iter()
        .zip(weights)
        .map(|(&ll, &pi)| {
            if ll.is_finite() {
                pi * (ll - max_ll).exp()
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = posterior.iter().sum();
    if total <= 0.0 {
        return Err(Error::PriorAnnihilated {
            reason: "all support states compatible with the record carry zero prior weight"
                .into(),
        });
    }
    for w in &mut posterior {
        *w /= total;
    }

    let coord_count = dim * dim - 1;
    let coords: Vec<DVector<f64>> = states
        .iter()
        .map(|s| basis.coords_of(s.matrix()))
        .collect();
    let mut mean_coords = DVector::zeros(coord_count);
    for (w, t) in posterior.iter().zip(&coords) {
        mean_coords += t * *w;
    }
    let mut cov = DMatrix::zeros(coord_count, coord_count);
    for (w, t) in posterior.iter().zip(&coords) {
        let centered = t - &mean_coords;
        cov += &centered * centered.transpose() * *w;
    }

    let mean = DensityMatrix::verified(basis.reconstruct_unit_trace(&mean_coords))?;
    let covariance = CovarianceSuperoperator::new(dim, cov)?;
    Ok(PosteriorSummary {
        mean: mean.clone(),
        covariance,
        acceptance_rate: 1.0,
        final_step: config.initial_step,
        samples_used: states.len(),
        chain_diagnostics: ChainDiagnostics {
            per_chain_means: vec![mean],
            per_chain_acceptance: vec![1.0],
            per_chain_final_step: vec![config.initial_step],
            disagreement: 0.0,
            split_disagreement: 0.0,
        },
        trace: None,
    })
}
