//! Operational divergences for scoring estimates against true states, and
//! the estimator-comparison game built on them.
//!
//! Every strictly convex generator `G` induces a divergence
//! `D(rho : est) = G(rho) - G(est) - Tr[(rho - est) grad G(est)]`, the
//! penalty a forecaster pays for predicting `est` when the truth is `rho`.
//! Two stock generators are built in: `Tr(rho^2)` gives the squared
//! Hilbert-Schmidt distance, and `Tr(rho ln rho)` gives the quantum
//! relative entropy, which blows up on rank-deficient estimates — the
//! failure mode the comparison game is designed to expose.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bayes::{run_sampler, PriorKind, PriorSpec, SamplerConfig};
use crate::error::{Error, Result};
use crate::measurement::{is_quorum, simulate_record, Povm};
use crate::mle::{mle_estimate, MleConfig};
use crate::qmath::{partial_trace_ancilla, random_haar_pure, to_hs_vector, DensityMatrix};
use crate::tomography::tomographic_estimate;

/// Which generator induces the divergence.
#[derive(Clone, Debug)]
pub enum DivergenceKind {
    /// `G = Tr(rho^2)`: the divergence is `Tr[(rho - est)^2]`.
    HilbertSchmidt,
    /// `G = Tr(rho ln rho)`: the divergence is
    /// `Tr[rho (ln rho - ln est)]`. Estimate eigenvalues are clamped at
    /// `log_floor` before the logarithm so rank-deficient estimates yield
    /// a very large finite value instead of infinity.
    KullbackLeibler {
        /// Eigenvalue clamp applied to the estimate.
        log_floor: f64,
    },
}

impl DivergenceKind {
    /// Relative entropy with the default eigenvalue clamp.
    pub fn kullback_leibler() -> Self {
        Self::KullbackLeibler {
            log_floor: crate::tolerances::LOG_FLOOR,
        }
    }

    /// Stable name used in reports and file headers.
    pub fn label(&self) -> &'static str {
        match self {
            Self::HilbertSchmidt => "hilbert-schmidt",
            Self::KullbackLeibler { .. } => "kullback-leibler",
        }
    }
}

/// A divergence score, with a flag marking values that the eigenvalue
/// clamp kept finite: the unclamped score would be effectively unbounded.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DivergenceValue {
    /// The (possibly clamped) divergence.
    pub value: f64,
    /// True when clamping moved the value by more than 1e-6 — the
    /// estimate assigns (near-)zero probability to part of the truth's
    /// support.
    pub unbounded: bool,
}

/// Divergence from the true state to an estimate.
///
/// The estimate may be rank-deficient or even non-positive (tomography
/// outputs): the Hilbert-Schmidt case is insensitive, and the relative
/// entropy clamps its eigenvalues, reporting the clamp through
/// [`DivergenceValue::unbounded`].
pub fn divergence(
    kind: &DivergenceKind,
    true_rho: &DensityMatrix,
    estimate: &DensityMatrix,
) -> Result<DivergenceValue> {
    if true_rho.dim() != estimate.dim() {
        return Err(Error::DimensionMismatch {
            expected: true_rho.dim(),
            found: estimate.dim(),
        });
    }
    match kind {
        DivergenceKind::HilbertSchmidt => {
            let delta = true_rho.matrix().minus(estimate.matrix());
            Ok(DivergenceValue {
                value: delta.frobenius_norm().powi(2),
                unbounded: false,
            })
        }
        DivergenceKind::KullbackLeibler { log_floor } => {
            if !(log_floor.is_finite() && *log_floor > 0.0) {
                return Err(Error::InvalidConfig {
                    reason: format!("log_floor must be positive, got {log_floor}"),
                });
            }
            Ok(relative_entropy(true_rho, estimate, *log_floor))
        }
    }
}

/// `Tr[rho (ln rho - ln est)]` with the estimate's spectrum clamped at
/// `floor`; the unbounded flag compares against the smallest representable
/// clamp.
fn relative_entropy(true_rho: &DensityMatrix, estimate: &DensityMatrix, floor: f64) -> DivergenceValue {
    let entropy_term: f64 = true_rho
        .eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum();
    let eig_est = estimate.matrix().eigendecomposition();
    let mut cross_floored = 0.0;
    let mut cross_tiny = 0.0;
    for (k, &lambda_hat) in eig_est.values.iter().enumerate() {
        let weight = eig_est.projector(k).trace_with(true_rho.matrix()).max(0.0);
        cross_floored += weight * lambda_hat.max(floor).ln();
        cross_tiny += weight * lambda_hat.max(f64::MIN_POSITIVE).ln();
    }
    let value = entropy_term - cross_floored;
    let unclamped = entropy_term - cross_tiny;
    DivergenceValue {
        value,
        unbounded: (value - unclamped).abs() > 1e-6,
    }
}

/// Divergence induced by a caller-supplied strictly convex generator:
/// `G(rho) - G(est) - Tr[(rho - est) grad]`. The built-in kinds are
/// specializations; this generic path exists so that claim is testable.
pub fn bregman_from_generator<G, Dg>(
    generator: G,
    gradient: Dg,
    true_rho: &DensityMatrix,
    estimate: &DensityMatrix,
) -> Result<f64>
where
    G: Fn(&DensityMatrix) -> f64,
    Dg: Fn(&DensityMatrix) -> crate::qmath::HermitianMatrix,
{
    if true_rho.dim() != estimate.dim() {
        return Err(Error::DimensionMismatch {
            expected: true_rho.dim(),
            found: estimate.dim(),
        });
    }
    let delta = true_rho.matrix().minus(estimate.matrix());
    Ok(generator(true_rho) - generator(estimate) - delta.trace_with(&gradient(estimate)))
}

/// Setup of one estimator-comparison game.
#[derive(Clone, Debug)]
pub struct GameConfig {
    /// Drawing ensemble for true states and matched sampling prior for the
    /// posterior-mean estimator. Must be an induced prior.
    pub prior: PriorSpec,
    /// Measurement performed on every copy batch; must form a quorum.
    pub povms: Vec<Povm>,
    /// Shots per POVM per trial.
    pub shots_per_povm: u64,
    /// Number of independent judge draws.
    pub trials: usize,
    /// Scoring divergence.
    pub kind: DivergenceKind,
    /// Posterior sampler settings (per-trial seeds are derived from
    /// `seed`, overriding the sampler's own).
    pub sampler: SamplerConfig,
    /// Likelihood maximizer settings.
    pub mle: MleConfig,
    /// Master seed; trial `i` derives its RNG stream from `seed` and `i`
    /// only, so reports are reproducible for any thread count.
    pub seed: u64,
}

/// Mean divergence and its standard error for one estimator.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EstimatorStats {
    pub mean_divergence: f64,
    pub std_error: f64,
    /// Trials whose score carried the unbounded flag.
    pub unbounded_count: usize,
}

/// Mean and standard error of a per-trial paired difference.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairedDifference {
    pub mean: f64,
    pub std_error: f64,
}

/// One judge draw: the true state's coordinates and each estimator's
/// score, or the error that invalidated the trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub true_coords: Vec<f64>,
    pub tomo: Option<DivergenceValue>,
    pub mle: Option<DivergenceValue>,
    pub bme: Option<DivergenceValue>,
    pub error: Option<String>,
}

/// Full outcome of a game run.
#[derive(Clone, Debug, Serialize)]
pub struct GameReport {
    pub trials: usize,
    pub shots_per_povm: u64,
    pub divergence: String,
    pub tomo: EstimatorStats,
    pub mle: EstimatorStats,
    pub bme: EstimatorStats,
    /// Per-trial `mle - bme` paired difference; positive means the
    /// posterior mean scored better.
    pub paired_mle_minus_bme: PairedDifference,
    pub failed_trials: usize,
    pub rows: Vec<TrialRow>,
}

/// SplitMix64 avalanche step, used to derive well-separated per-trial
/// seeds from consecutive integers.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_from_prior(prior: &PriorSpec, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    match prior.kind() {
        PriorKind::Induced { ancilla_dim } => {
            let psi = random_haar_pure(prior.dim() * ancilla_dim, rng);
            partial_trace_ancilla(&psi, prior.dim(), *ancilla_dim)
        }
        _ => Err(Error::UnsupportedPrior {
            reason: "the game draws true states from induced priors only".into(),
        }),
    }
}

fn run_trial(config: &GameConfig, trial: usize) -> TrialRow {
    let trial_seed = splitmix64(config.seed.wrapping_add(trial as u64));
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let mut row = TrialRow {
        trial,
        seed: trial_seed,
        true_coords: Vec::new(),
        tomo: None,
        mle: None,
        bme: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let truth = draw_from_prior(&config.prior, &mut rng)?;
        row.true_coords = to_hs_vector(&truth).as_slice().to_vec();
        let record = simulate_record(&truth, &config.povms, config.shots_per_povm, &mut rng)?;

        let tomo = tomographic_estimate(&record)?;
        row.tomo = Some(divergence(&config.kind, &truth, &tomo.state)?);

        let mle = mle_estimate(&record, &config.mle)?;
        row.mle = Some(divergence(&config.kind, &truth, &mle.state)?);

        let mut sampler_cfg = config.sampler.clone();
        sampler_cfg.seed = splitmix64(trial_seed);
        sampler_cfg.collect_trace = false;
        let bme = run_sampler(&record, &config.prior, &sampler_cfg)?;
        row.bme = Some(divergence(&config.kind, &truth, &bme.mean)?);
        Ok(())
    })();
    if let Err(e) = outcome {
        row.error = Some(e.to_string());
        row.tomo = None;
        row.mle = None;
        row.bme = None;
    }
    row
}

fn stats_over(values: &[f64], unbounded: usize) -> EstimatorStats {
    let n = values.len();
    if n == 0 {
        return EstimatorStats {
            mean_divergence: f64::NAN,
            std_error: f64::NAN,
            unbounded_count: unbounded,
        };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        f64::INFINITY
    };
    EstimatorStats {
        mean_divergence: mean,
        std_error,
        unbounded_count: unbounded,
    }
}

/// Play the game: per trial, draw a true state from the prior, simulate a
/// record, run all three estimators, and score each against the drawn
/// state. Trials run in parallel with per-trial derived seeds; statistics
/// reduce in trial order, so the report is identical for any thread count.
/// A trial in which any estimator fails is excluded from every statistic
/// and counted in `failed_trials`.
pub fn run_game(config: &GameConfig) -> Result<GameReport> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig {
            reason: "trials must be at least 1".into(),
        });
    }
    if !matches!(config.prior.kind(), PriorKind::Induced { .. }) {
        return Err(Error::UnsupportedPrior {
            reason: "the game draws true states from induced priors only".into(),
        });
    }
    if !is_quorum(&config.povms)? {
        return Err(Error::InvalidPovm {
            reason: "the game's POVMs must form a quorum — every estimator must be \
                     able to run"
                .into(),
        });
    }
    if config.povms[0].dim() != config.prior.dim() {
        return Err(Error::DimensionMismatch {
            expected: config.prior.dim(),
            found: config.povms[0].dim(),
        });
    }

    let rows: Vec<TrialRow> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();

    let complete: Vec<&TrialRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let failed_trials = rows.len() - complete.len();
    let collect = |pick: fn(&TrialRow) -> Option<DivergenceValue>| -> (Vec<f64>, usize) {
        let values: Vec<f64> = complete
            .iter()
            .filter_map(|r| pick(r).map(|d| d.value))
            .collect();
        let unbounded = complete
            .iter()
            .filter_map(|r| pick(r))
            .filter(|d| d.unbounded)
            .count();
        (values, unbounded)
    };
    let (tomo_vals, tomo_unb) = collect(|r| r.tomo);
    let (mle_vals, mle_unb) = collect(|r| r.mle);
    let (bme_vals, bme_unb) = collect(|r| r.bme);
    let diffs: Vec<f64> = complete
        .iter()
        .filter_map(|r| match (r.mle, r.bme) {
            (Some(m), Some(b)) => Some(m.value - b.value),
            _ => None,
        })
        .collect();
    let diff_stats = stats_over(&diffs, 0);

    Ok(GameReport {
        trials: config.trials,
        shots_per_povm: config.shots_per_povm,
        divergence: config.kind.label().to_string(),
        tomo: stats_over(&tomo_vals, tomo_unb),
        mle: stats_over(&mle_vals, mle_unb),
        bme: stats_over(&bme_vals, bme_unb),
        paired_mle_minus_bme: PairedDifference {
            mean: diff_stats.mean_divergence,
            std_error: diff_stats.std_error,
        },
        failed_trials,
        rows,
    })
}

/// Render the per-trial rows as CSV (one row per trial, including failed
/// ones, whose score columns are empty).
pub fn game_rows_csv(report: &GameReport) -> String {
    let coord_count = report
        .rows
        .iter()
        .map(|r| r.true_coords.len())
        .max()
        .unwrap_or(0);
    let mut out = String::from("trial,seed");
    for a in 0..coord_count {
        out.push_str(&format!(",t{a}"));
    }
    out.push_str(",tomo,tomo_unbounded,mle,mle_unbounded,bme,bme_unbounded,error\n");
    for row in &report.rows {
        out.push_str(&format!("{},{}", row.trial, row.seed));
        for a in 0..coord_count {
            match row.true_coords.get(a) {
                Some(v) => out.push_str(&format!(",{v}")),
                None => out.push(','),
            }
        }
        for score in [&row.tomo, &row.mle, &row.bme] {
            match score {
                Some(d) => out.push_str(&format!(",{},{}", d.value, d.unbounded)),
                None => out.push_str(",,"),
            }
        }
        match &row.error {
            Some(e) => out.push_str(&format!(",\"{}\"\n", e.replace('"', "'"))),
            None => out.push_str(",\n"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{HermitianMatrix, PureState};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn random_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let psi = random_haar_pure(4, rng);
        partial_trace_ancilla(&psi, 2, 2).unwrap()
    }

    /// `Tr(rho ln rho)` through the spectrum, for generator tests.
    fn neg_entropy(rho: &DensityMatrix) -> f64 {
        rho.eigenvalues()
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum()
    }

    /// `ln rho + 1l` through the spectrum, for generator tests.
    fn log_plus_identity(rho: &DensityMatrix) -> HermitianMatrix {
        let eig = rho.matrix().eigendecomposition();
        let dim = rho.dim();
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for k in 0..dim {
            m += eig.projector(k).matrix() * Complex64::new(eig.values[k].ln() + 1.0, 0.0);
        }
        HermitianMatrix::new(m).unwrap()
    }

    #[test]
    fn hilbert_schmidt_hand_value() {
        let truth = PureState::basis_state(2, 0).projector();
        let center = DensityMatrix::maximally_mixed(2);
        let d = divergence(&DivergenceKind::HilbertSchmidt, &truth, &center).unwrap();
        assert_relative_eq!(d.value, 0.5, epsilon = 1e-12);
        assert!(!d.unbounded);
    }

    #[test]
    fn relative_entropy_hand_value() {
        // Commuting pair: classical KL of (1/2, 1/2) against (3/4, 1/4).
        let truth = DensityMatrix::maximally_mixed(2);
        let estimate = DensityMatrix::from_bloch(0.0, 0.0, 0.5);
        let d = divergence(&DivergenceKind::kullback_leibler(), &truth, &estimate).unwrap();
        let expected = 0.5 * (0.5_f64 / 0.75).ln() + 0.5 * (0.5_f64 / 0.25).ln();
        assert_relative_eq!(d.value, expected, epsilon = 1e-12);
        assert!(!d.unbounded);
    }

    #[test]
    fn matching_states_score_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20 {
            let rho = random_state(&mut rng);
            let hs = divergence(&DivergenceKind::HilbertSchmidt, &rho, &rho).unwrap();
            assert!(hs.value.abs() < 1e-12);
            let kl = divergence(&DivergenceKind::kullback_leibler(), &rho, &rho).unwrap();
            assert!(kl.value.abs() < 1e-10, "kl {}", kl.value);
            assert!(!kl.unbounded);
        }
    }

    #[test]
    fn distinct_states_score_strictly_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            let est = random_state(&mut rng);
            if rho.trace_distance(&est) < 1e-6 {
                continue;
            }
            let hs = divergence(&DivergenceKind::HilbertSchmidt, &rho, &est).unwrap();
            assert!(hs.value > 0.0);
            let kl = divergence(&DivergenceKind::kullback_leibler(), &rho, &est).unwrap();
            assert!(kl.value > 0.0);
        }
    }

    #[test]
    fn hilbert_schmidt_is_squared_coordinate_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..100 {
            let rho = random_state(&mut rng);
            let est = random_state(&mut rng);
            let d = divergence(&DivergenceKind::HilbertSchmidt, &rho, &est).unwrap();
            let dt = to_hs_vector(&rho).coords() - to_hs_vector(&est).coords();
            assert_relative_eq!(d.value, 0.5 * dt.norm_squared(), epsilon = 1e-10);
        }
    }

    #[test]
    fn generic_bregman_matches_both_specializations() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..100 {
            let rho = random_state(&mut rng);
            let est = random_state(&mut rng);

            let hs_generic = bregman_from_generator(
                |s: &DensityMatrix| s.matrix().trace_with(s.matrix()),
                |s: &DensityMatrix| s.matrix().scaled(2.0),
                &rho,
                &est,
            )
            .unwrap();
            let hs = divergence(&DivergenceKind::HilbertSchmidt, &rho, &est).unwrap();
            assert_relative_eq!(hs_generic, hs.value, epsilon = 1e-10);

            let kl_generic =
                bregman_from_generator(neg_entropy, log_plus_identity, &rho, &est).unwrap();
            let kl = divergence(&DivergenceKind::kullback_leibler(), &rho, &est).unwrap();
            assert_relative_eq!(kl_generic, kl.value, epsilon = 1e-9);
        }
    }

    #[test]
    fn bregman_of_identical_states_vanishes() {
        let rho = DensityMatrix::from_bloch(0.3, -0.2, 0.4);
        let d = bregman_from_generator(
            |s: &DensityMatrix| s.matrix().trace_with(s.matrix()),
            |s: &DensityMatrix| s.matrix().scaled(2.0),
            &rho,
            &rho,
        )
        .unwrap();
        assert!(d.abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_estimates_raise_the_unbounded_flag() {
        let truth = DensityMatrix::maximally_mixed(2);
        let estimate = PureState::basis_state(2, 0).projector();
        let clamped = divergence(&DivergenceKind::kullback_leibler(), &truth, &estimate).unwrap();
        assert!(clamped.unbounded);
        assert!(clamped.value > 10.0, "clamped value {}", clamped.value);

        // A looser floor keeps the value smaller but still flagged.
        let looser = divergence(
            &DivergenceKind::KullbackLeibler { log_floor: 1e-6 },
            &truth,
            &estimate,
        )
        .unwrap();
        assert!(looser.unbounded);
        assert!(looser.value < clamped.value);

        // Support deficiency hidden from the truth stays bounded: a pure
        // truth scored against itself has weight zero on the dead
        // direction.
        let pure = PureState::basis_state(2, 0).projector();
        let same = divergence(&DivergenceKind::kullback_leibler(), &pure, &pure).unwrap();
        assert!(!same.unbounded);
        assert!(same.value.abs() < 1e-10);
    }

    fn mini_game_config(trials: usize, seed: u64) -> GameConfig {
        GameConfig {
            prior: PriorSpec::hilbert_schmidt(2).unwrap(),
            povms: vec![Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()],
            shots_per_povm: 3,
            trials,
            kind: DivergenceKind::HilbertSchmidt,
            sampler: SamplerConfig {
                burn_in: 500,
                samples: 2000,
                chains: 2,
                ..SamplerConfig::default()
            },
            mle: MleConfig::default(),
            seed,
        }
    }

    #[test]
    fn game_reports_are_reproducible() {
        let config = mini_game_config(3, 99);
        let a = run_game(&config).unwrap();
        let b = run_game(&config).unwrap();
        assert_eq!(a.rows.len(), 3);
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.seed, rb.seed);
            assert_eq!(ra.true_coords, rb.true_coords);
            assert_eq!(ra.tomo.unwrap().value, rb.tomo.unwrap().value);
            assert_eq!(ra.mle.unwrap().value, rb.mle.unwrap().value);
            assert_eq!(ra.bme.unwrap().value, rb.bme.unwrap().value);
        }
        assert_eq!(
            a.paired_mle_minus_bme.mean,
            b.paired_mle_minus_bme.mean
        );
    }

    #[test]
    fn game_results_do_not_depend_on_thread_count() {
        let config = mini_game_config(8, 101);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_game(&config).unwrap());
        let several = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_game(&config).unwrap());
        assert_eq!(single.mle.mean_divergence, several.mle.mean_divergence);
        assert_eq!(single.bme.mean_divergence, several.bme.mean_divergence);
        assert_eq!(single.tomo.std_error, several.tomo.std_error);
        assert_eq!(
            single.paired_mle_minus_bme.mean,
            several.paired_mle_minus_bme.mean
        );
    }

    #[test]
    fn game_smoke_run_produces_sane_statistics() {
        let report = run_game(&mini_game_config(30, 103)).unwrap();
        assert_eq!(report.failed_trials, 0);
        for stats in [&report.tomo, &report.mle, &report.bme] {
            assert!(stats.mean_divergence.is_finite());
            assert!(stats.mean_divergence >= -1e-9);
            assert!(stats.std_error > 0.0);
        }
        // Three shots per axis leave many non-positive linear inversions,
        // so the averaged tomography score should exceed the constrained
        // estimators'.
        assert!(report.tomo.mean_divergence > report.bme.mean_divergence);
        let csv = game_rows_csv(&report);
        assert_eq!(csv.lines().count(), 31);
        assert!(csv.starts_with("trial,seed,t0,t1,t2,tomo"));
    }

    #[test]
    fn game_validates_its_configuration() {
        let mut config = mini_game_config(0, 1);
        assert!(matches!(
            run_game(&config),
            Err(Error::InvalidConfig { .. })
        ));
        config.trials = 1;
        config.povms = vec![Povm::pauli_z()];
        assert!(matches!(run_game(&config), Err(Error::InvalidPovm { .. })));
        config.povms = vec![Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()];
        config.prior = PriorSpec::bernoulli_uniform();
        assert!(matches!(
            run_game(&config),
            Err(Error::UnsupportedPrior { .. })
        ));
    }

    #[test]
    fn divergence_requires_matching_dimensions() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            divergence(&DivergenceKind::HilbertSchmidt, &a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
