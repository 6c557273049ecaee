//! Prior fragility analysis: can any finite dataset drive a prior's
//! posterior weight to zero everywhere at once?
//!
//! A counted outcome with `Tr(E rho) = 0` zeroes the likelihood of `rho`.
//! A prior is *fragile* when a single record can do that to its entire
//! support — afterwards no posterior exists and mean estimation breaks
//! down. Priors whose support contains a full-rank state, fills a region,
//! or traces an uncountable smooth family cannot be emptied by finitely
//! many such cuts and are *robust*. This module classifies the built-in
//! prior families and, for fragile ones, constructs the killing record
//! explicitly so the verdict is checkable.

use serde::Serialize;

use crate::bayes::{PriorKind, PriorSpec};
use crate::error::{Error, Result};
use crate::measurement::{born_probability, MeasurementRecord, Povm};
use crate::qmath::{DensityMatrix, HermitianMatrix};
use crate::tolerances;

/// Classification outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// No finite record can zero the likelihood across the whole support.
    Robust,
    /// A finite record annihilates the prior; a witness accompanies it.
    Fragile,
    /// The classifier has no mechanical argument either way and does not
    /// guess.
    Undetermined,
}

/// Which argument produced the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rationale {
    /// A support state is full-rank: it assigns positive probability to
    /// every nonzero effect, so its posterior weight never vanishes.
    FullRankSupportState,
    /// Every support state is rank-deficient and one record was built
    /// that kills them all.
    AllSupportStatesKilled,
    /// The support contains a full-measure set of full-rank states.
    InteriorSupport,
    /// The support is an uncountable family, while each counted outcome
    /// removes only a measure-zero slice of it.
    UncountableSupport,
    /// The support is a smooth curve of states; outcome probabilities
    /// along it are analytic and vanish only at finitely many points.
    SmoothCurveSupport,
    /// A candidate witness was constructed but failed mechanical
    /// verification (e.g. a support state is only nearly rank-deficient).
    UnverifiedWitness,
}

/// Verdict plus supporting evidence.
#[derive(Clone, Debug)]
pub struct RobustnessVerdict {
    pub verdict: Verdict,
    pub rationale: Rationale,
    /// Present exactly when fragile: a record with
    /// `record_annihilates == true`.
    pub witness: Option<MeasurementRecord>,
}

/// Whether a counted outcome gives `rho` (numerically) zero probability.
fn state_annihilated(record: &MeasurementRecord, rho: &DensityMatrix) -> Result<bool> {
    for entry in record.entries() {
        if entry.count == 0 {
            continue;
        }
        if born_probability(rho, &entry.operator)? <= tolerances::ANNIHILATION_PROB {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff the record zeroes the likelihood of every support state of a
/// finite-support prior — that is, the posterior normalizer vanishes and
/// mean estimation is impossible. States carrying zero prior weight are
/// ignored.
pub fn record_annihilates(prior: &PriorSpec, record: &MeasurementRecord) -> Result<bool> {
    if prior.dim() != record.dim() {
        return Err(Error::DimensionMismatch {
            expected: prior.dim(),
            found: record.dim(),
        });
    }
    let PriorKind::FiniteSupport { states, weights } = prior.kind() else {
        return Err(Error::UnsupportedPrior {
            reason: "annihilation is decidable only for finite-support priors".into(),
        });
    };
    for (rho, &w) in states.iter().zip(weights) {
        if w == 0.0 {
            continue;
        }
        if !state_annihilated(record, rho)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projector onto the null space of `m`, or `None` when `m` is full-rank
/// (eigenvalues below `1e-10 * max(1, |largest|)` count as zero).
fn kernel_projector(m: &HermitianMatrix) -> Option<HermitianMatrix> {
    let eig = m.eigendecomposition();
    let scale = eig
        .values
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);
    let cut = tolerances::RANK_RELATIVE * scale;
    let mut kernel = HermitianMatrix::zeros(m.dim());
    let mut null_dim = 0;
    for (k, &value) in eig.values.iter().enumerate() {
        if value < cut {
            kernel = kernel.plus(&eig.projector(k));
            null_dim += 1;
        }
    }
    (null_dim > 0).then_some(kernel)
}

/// Dimension of the family of states an observed outcome rules out.
///
/// Observing an outcome `E` eliminates exactly the states supported on
/// its null space. With `r` the null-space dimension, those states form
/// an `(r^2 - 1)`-dimensional set (the state set of an `r`-dimensional
/// subsystem); a full-rank outcome eliminates nothing, reported as the
/// sentinel `-1`.
pub fn eliminated_set_dimension(outcome: &HermitianMatrix) -> i64 {
    let eig = outcome.eigendecomposition();
    let scale = eig
        .values
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);
    let cut = tolerances::RANK_RELATIVE * scale;
    let r = eig.values.iter().filter(|&&v| v < cut).count() as i64;
    r * r - 1
}

fn robust(rationale: Rationale) -> RobustnessVerdict {
    RobustnessVerdict {
        verdict: Verdict::Robust,
        rationale,
        witness: None,
    }
}

fn undetermined() -> RobustnessVerdict {
    RobustnessVerdict {
        verdict: Verdict::Undetermined,
        rationale: Rationale::UnverifiedWitness,
        witness: None,
    }
}

/// Classify a finite-support prior, constructing and verifying a witness
/// when every support state is rank-deficient.
fn classify_finite_support(
    dim: usize,
    states: &[DensityMatrix],
    weights: &[f64],
) -> RobustnessVerdict {
    let support: Vec<&DensityMatrix> = states
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(s, _)| s)
        .collect();
    let mut kernels: Vec<HermitianMatrix> = Vec::new();
    for rho in &support {
        match kernel_projector(rho.matrix()) {
            None => return robust(Rationale::FullRankSupportState),
            Some(kernel) => {
                if !kernels
                    .iter()
                    .any(|seen| seen.max_entry_distance(&kernel) < 1e-9)
                {
                    kernels.push(kernel);
                }
            }
        }
    }
    // Greedy witness: per distinct kernel, one observed projector onto it.
    // Each support state has zero probability on its own kernel outcome,
    // so the combined record kills all of them at once — if the states
    // really are rank-deficient, which the verification below confirms.
    let identity = HermitianMatrix::identity(dim);
    let mut povms = Vec::with_capacity(kernels.len());
    let mut counts = Vec::with_capacity(kernels.len());
    for kernel in kernels {
        let complement = identity.minus(&kernel);
        match Povm::new(vec![kernel, complement], vec!["kernel", "complement"]) {
            Ok(povm) => povms.push(povm),
            Err(_) => return undetermined(),
        }
        counts.push(vec![1, 0]);
    }
    let Ok(witness) = MeasurementRecord::from_povm_counts(&povms, &counts) else {
        return undetermined();
    };
    for rho in &support {
        match state_annihilated(&witness, rho) {
            Ok(true) => {}
            _ => return undetermined(),
        }
    }
    RobustnessVerdict {
        verdict: Verdict::Fragile,
        rationale: Rationale::AllSupportStatesKilled,
        witness: Some(witness),
    }
}

/// Decide whether a prior can be annihilated by some finite record.
///
/// Finite supports are decided constructively (a verified witness or a
/// full-rank escape state). The continuous built-in families are decided
/// by the structure of their support; nothing is ever guessed, so a
/// failed mechanical verification yields `Undetermined`.
pub fn classify_prior(prior: &PriorSpec) -> RobustnessVerdict {
    match prior.kind() {
        PriorKind::FiniteSupport { states, weights } => {
            classify_finite_support(prior.dim(), states, weights)
        }
        PriorKind::Induced { ancilla_dim } => {
            if *ancilla_dim >= 2 {
                robust(Rationale::InteriorSupport)
            } else {
                robust(Rationale::UncountableSupport)
            }
        }
        PriorKind::BernoulliUniform | PriorKind::BlochGreatCircle => {
            robust(Rationale::SmoothCurveSupport)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bayes::{run_sampler, SamplerConfig};
    use crate::measurement::{log_likelihood, simulate_record};
    use crate::qmath::{partial_trace_ancilla, random_haar_pure, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn endpoints_prior() -> PriorSpec {
        PriorSpec::finite_support(
            vec![
                PureState::basis_state(2, 0).projector(),
                PureState::basis_state(2, 1).projector(),
            ],
            vec![0.5, 0.5],
        )
        .unwrap()
    }

    fn both_endpoints_record() -> MeasurementRecord {
        MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![1, 1]]).unwrap()
    }

    #[test]
    fn record_with_both_outcomes_annihilates_the_endpoint_pair() {
        let prior = endpoints_prior();
        assert!(record_annihilates(&prior, &both_endpoints_record()).unwrap());
    }

    #[test]
    fn one_sided_record_leaves_a_survivor() {
        let prior = endpoints_prior();
        let heads_only =
            MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![0, 1]]).unwrap();
        assert!(!record_annihilates(&prior, &heads_only).unwrap());
    }

    #[test]
    fn full_rank_support_states_survive_any_record() {
        let prior =
            PriorSpec::finite_support(vec![DensityMatrix::from_bloch(0.2, 0.1, -0.3)], vec![1.0])
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let source = partial_trace_ancilla(&random_haar_pure(4, &mut rng), 2, 2).unwrap();
            let record = simulate_record(
                &source,
                &[Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()],
                5,
                &mut rng,
            )
            .unwrap();
            assert!(!record_annihilates(&prior, &record).unwrap());
        }
    }

    #[test]
    fn annihilation_requires_a_finite_support_prior() {
        let prior = PriorSpec::hilbert_schmidt(2).unwrap();
        assert!(matches!(
            record_annihilates(&prior, &both_endpoints_record()),
            Err(Error::UnsupportedPrior { .. })
        ));
    }

    #[test]
    fn endpoint_pair_prior_is_fragile_with_a_working_witness() {
        let prior = endpoints_prior();
        let verdict = classify_prior(&prior);
        assert_eq!(verdict.verdict, Verdict::Fragile);
        assert_eq!(verdict.rationale, Rationale::AllSupportStatesKilled);
        let witness = verdict.witness.expect("fragile verdicts carry a witness");
        assert!(record_annihilates(&prior, &witness).unwrap());
        // The witness drives every support state's log-likelihood to -inf
        // and the posterior-mean sampler correctly refuses the pair.
        let PriorKind::FiniteSupport { states, .. } = prior.kind() else {
            unreachable!()
        };
        for rho in states {
            assert_eq!(log_likelihood(&witness, rho).unwrap(), f64::NEG_INFINITY);
        }
        let err = run_sampler(&witness, &prior, &SamplerConfig::default()).unwrap_err();
        assert!(matches!(err, Error::PriorAnnihilated { .. }));
    }

    #[test]
    fn shared_kernels_collapse_into_one_witness_group() {
        let plus = DensityMatrix::from_bloch(1.0, 0.0, 0.0);
        let prior = PriorSpec::finite_support(vec![plus.clone(), plus], vec![0.3, 0.7]).unwrap();
        let verdict = classify_prior(&prior);
        assert_eq!(verdict.verdict, Verdict::Fragile);
        assert_eq!(verdict.witness.unwrap().groups().len(), 1);
    }

    #[test]
    fn a_full_rank_support_state_makes_the_prior_robust() {
        let prior = PriorSpec::finite_support(
            vec![
                DensityMatrix::maximally_mixed(2),
                PureState::basis_state(2, 0).projector(),
            ],
            vec![0.5, 0.5],
        )
        .unwrap();
        let verdict = classify_prior(&prior);
        assert_eq!(verdict.verdict, Verdict::Robust);
        assert_eq!(verdict.rationale, Rationale::FullRankSupportState);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn nearly_rank_deficient_support_yields_undetermined() {
        // The smallest eigenvalue (5e-13) sits below the rank cutoff but
        // above the annihilation probability, so the candidate witness
        // fails verification and the classifier declines to rule.
        let prior =
            PriorSpec::finite_support(vec![DensityMatrix::from_bloch(0.0, 0.0, 1.0 - 1e-12)], vec![
                1.0,
            ])
            .unwrap();
        let verdict = classify_prior(&prior);
        assert_eq!(verdict.verdict, Verdict::Undetermined);
        assert_eq!(verdict.rationale, Rationale::UnverifiedWitness);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn continuous_built_in_priors_are_robust() {
        let cases = [
            (
                PriorSpec::hilbert_schmidt(2).unwrap(),
                Rationale::InteriorSupport,
            ),
            (
                PriorSpec::induced(3, 7).unwrap(),
                Rationale::InteriorSupport,
            ),
            (PriorSpec::haar(2).unwrap(), Rationale::UncountableSupport),
            (
                PriorSpec::bernoulli_uniform(),
                Rationale::SmoothCurveSupport,
            ),
            (
                PriorSpec::bloch_great_circle(),
                Rationale::SmoothCurveSupport,
            ),
        ];
        for (prior, expected) in cases {
            let verdict = classify_prior(&prior);
            assert_eq!(verdict.verdict, Verdict::Robust);
            assert_eq!(verdict.rationale, expected);
            assert!(verdict.witness.is_none());
        }
    }

    #[test]
    fn eliminated_dimension_matches_the_subsystem_count() {
        // Rank-1 projector on a qubit: one orthogonal pure state dies — a
        // zero-dimensional set.
        let qubit_proj = PureState::basis_state(2, 0).projector();
        assert_eq!(eliminated_set_dimension(qubit_proj.matrix()), 0);

        // Full-rank outcome: nothing dies.
        let full = HermitianMatrix::identity(2).scaled(0.9);
        assert_eq!(eliminated_set_dimension(&full), -1);

        // Rank-1 projector in d = 3: the killed states fill the state set
        // of the 2-dimensional null space.
        let qutrit_proj = PureState::basis_state(3, 0).projector();
        assert_eq!(eliminated_set_dimension(qutrit_proj.matrix()), 3);

        // Rank-2 outcome in d = 3: a single killed pure state.
        let rank_two = HermitianMatrix::identity(3).minus(
            PureState::basis_state(3, 2).projector().matrix(),
        );
        assert_eq!(eliminated_set_dimension(&rank_two), 0);
    }

    #[test]
    fn appending_outcomes_never_resurrects_a_prior() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let axes = [Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()];
        for _ in 0..50 {
            let a = PureState::basis_state(2, 0).projector();
            let b = partial_trace_ancilla(&random_haar_pure(4, &mut rng), 2, 2).unwrap();
            let prior = PriorSpec::finite_support(vec![a, b], vec![0.5, 0.5]).unwrap();

            let base = both_endpoints_record();
            let extra = simulate_record(
                &DensityMatrix::maximally_mixed(2),
                &axes,
                3,
                &mut rng,
            )
            .unwrap();
            let mut entries = base.entries().to_vec();
            entries.extend(extra.entries().iter().cloned());
            let extended = MeasurementRecord::from_entries(2, entries).unwrap();

            if record_annihilates(&prior, &base).unwrap() {
                assert!(record_annihilates(&prior, &extended).unwrap());
            }
        }
    }

    #[test]
    fn robust_priors_keep_a_positive_posterior_mean_on_short_records() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let axes = [Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()];
        let config = SamplerConfig {
            burn_in: 500,
            samples: 3000,
            chains: 2,
            seed: 5,
            ..SamplerConfig::default()
        };
        let priors = [
            PriorSpec::hilbert_schmidt(2).unwrap(),
            PriorSpec::haar(2).unwrap(),
            PriorSpec::bernoulli_uniform(),
            PriorSpec::bloch_great_circle(),
            PriorSpec::finite_support(
                vec![
                    DensityMatrix::maximally_mixed(2),
                    PureState::basis_state(2, 0).projector(),
                ],
                vec![0.5, 0.5],
            )
            .unwrap(),
        ];
        for prior in &priors {
            assert_eq!(classify_prior(prior).verdict, Verdict::Robust);
            let truth = partial_trace_ancilla(&random_haar_pure(4, &mut rng), 2, 2).unwrap();
            let record = simulate_record(&truth, &axes, 6, &mut rng).unwrap();
            assert!(record.total_counts() <= 20);
            let summary = run_sampler(&record, prior, &config)
                .unwrap_or_else(|e| panic!("robust prior failed on a short record: {e}"));
            assert!(
                summary.mean.min_eigenvalue() > 0.0,
                "posterior mean lost full rank"
            );
        }
    }
}
