//! Constrained maximum-likelihood estimation: maximize the record's
//! log-likelihood over the positive semidefinite unit-trace matrices.
//!
//! The optimizer is projected gradient ascent in traceless-basis
//! coordinates. After each gradient step the iterate is pulled back into the
//! state set by projecting its spectrum onto the probability simplex
//! (eigenvalue clipping plus renormalization — the Euclidean projection in
//! the Frobenius metric). A backtracking line search keeps the
//! log-likelihood monotonically nondecreasing, and convergence is declared
//! on the norm of the projected-gradient mapping.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measurement::MeasurementRecord;
use crate::qmath::{DensityMatrix, HsBasis};
use crate::tolerances;

/// Tuning knobs for the likelihood maximizer.
#[derive(Clone, Debug)]
pub struct MleConfig {
    /// Hard cap on gradient iterations.
    pub max_iterations: usize,
    /// Convergence threshold on the projected-gradient mapping norm.
    pub grad_tolerance: f64,
    /// Relative eigenvalue threshold below which the maximizer counts as
    /// rank-deficient.
    pub rank_tolerance: f64,
    /// Re-run from a second deterministic starting point and flag the
    /// maximum as degenerate when the two converged iterates disagree by
    /// more than `1e-4` in trace distance (data that does not pin the state
    /// down leaves flat directions).
    pub detect_degenerate: bool,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            grad_tolerance: 1e-9,
            rank_tolerance: tolerances::MLE_RANK_RELATIVE,
            detect_degenerate: true,
        }
    }
}

/// Output of the likelihood maximizer.
#[derive(Clone, Debug)]
pub struct MleEstimate {
    /// The maximizer; positive semidefinite by construction (verified).
    pub state: DensityMatrix,
    /// Log-likelihood at the maximizer.
    pub log_likelihood: f64,
    /// Gradient iterations actually used (first run).
    pub iterations: usize,
    /// Whether the projected-gradient mapping dropped below tolerance.
    pub converged: bool,
    /// Whether the maximizer has (numerically) zero eigenvalues.
    pub rank_deficient: bool,
    /// Number of eigenvalues at or below `rank_tolerance * max_eigenvalue`.
    pub zero_eigenvalue_count: usize,
    /// Set when a second run from a different start converged to a
    /// materially different state (flat likelihood directions).
    pub degenerate_maximum: bool,
}

/// Additive decomposition of a single-POVM record's likelihood: observed
/// entropy and the relative entropy from frequencies to predictions, with
/// `log_likelihood = -N * (entropy + divergence)`.
#[derive(Clone, Debug)]
pub struct LikelihoodDecomposition {
    /// Shannon entropy of the observed frequencies (nats).
    pub entropy: f64,
    /// Relative entropy `sum_j f_j ln(f_j / p_j)` from frequencies to the
    /// state's predicted probabilities; infinite when an observed outcome
    /// has zero predicted probability.
    pub divergence: f64,
    /// `-N * (entropy + divergence)`, which equals the record's
    /// log-likelihood under the state.
    pub log_likelihood: f64,
}

/// Per-outcome linear forms of the likelihood: for counted entry `j`,
/// `p_j(t) = offset[j] + rows[j] . t` in traceless-basis coordinates.
/// Shared with the posterior samplers, which evaluate the same likelihood
/// at every chain step.
pub(crate) struct CountedOutcomes {
    pub(crate) rows: Vec<DVector<f64>>,
    pub(crate) offsets: Vec<f64>,
    pub(crate) counts: Vec<f64>,
}

impl CountedOutcomes {
    pub(crate) fn from_record(record: &MeasurementRecord, basis: &HsBasis) -> Self {
        let dim = record.dim() as f64;
        let mut rows = Vec::new();
        let mut offsets = Vec::new();
        let mut counts = Vec::new();
        for entry in record.entries() {
            if entry.count == 0 {
                continue;
            }
            rows.push(basis.coords_of(&entry.operator) / 2.0);
            offsets.push(entry.operator.trace() / dim);
            counts.push(entry.count as f64);
        }
        Self {
            rows,
            offsets,
            counts,
        }
    }

    /// Log-likelihood at coordinates `t` (assumed to describe a positive
    /// semidefinite state, so probabilities are clamped only against
    /// roundoff).
    pub(crate) fn log_likelihood(&self, t: &DVector<f64>) -> f64 {
        let mut total = 0.0;
        for j in 0..self.rows.len() {
            let p = (self.offsets[j] + self.rows[j].dot(t)).min(1.0);
            if p <= 0.0 {
                return f64::NEG_INFINITY;
            }
            total += self.counts[j] * p.ln();
        }
        total
    }

    /// Gradient of the log-likelihood at `t`.
    fn gradient(&self, t: &DVector<f64>) -> DVector<f64> {
        let mut grad = DVector::zeros(t.len());
        for j in 0..self.rows.len() {
            let p = (self.offsets[j] + self.rows[j].dot(t)).clamp(1e-300, 1.0);
            grad += &self.rows[j] * (self.counts[j] / p);
        }
        grad
    }
}

/// Euclidean projection of a real vector onto the probability simplex.
fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    values.iter().map(|&v| (v - threshold).max(0.0)).collect()
}

/// Project coordinates onto the state set: rebuild the matrix, project its
/// spectrum onto the simplex, and read the coordinates back.
fn project_coords(basis: &HsBasis, t: &DVector<f64>) -> DVector<f64> {
    let m = basis.reconstruct_unit_trace(t);
    let eig = m.eigendecomposition();
    let clipped = project_to_simplex(&eig.values);
    let dim = basis.dim();
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        clipped.iter().map(|&v| Complex64::new(v, 0.0)),
    ));
    let projected = &eig.vectors * diag * eig.vectors.adjoint();
    let projected = crate::qmath::HermitianMatrix::new(projected)
        .expect("projection preserves hermiticity");
    basis.coords_of(&projected)
}

struct AscentOutcome {
    coords: DVector<f64>,
    log_likelihood: f64,
    iterations: usize,
    converged: bool,
}

fn ascend(
    outcomes: &CountedOutcomes,
    basis: &HsBasis,
    start: DVector<f64>,
    config: &MleConfig,
) -> AscentOutcome {
    let total_counts: f64 = outcomes.counts.iter().sum();
    let reference_step = 1.0 / total_counts;
    let mut t = project_coords(basis, &start);
    let mut ll = outcomes.log_likelihood(&t);
    let mut alpha = reference_step;
    let mut converged = false;
    let mut iterations = 0;
    for iter in 0..config.max_iterations {
        iterations = iter + 1;
        let grad = outcomes.gradient(&t);
        // Convergence: norm of the projected-gradient mapping at a fixed
        // reference step (zero exactly at constrained stationary points).
        let mapped = project_coords(basis, &(&t + &grad * reference_step));
        let mapping_norm = (&mapped - &t).norm() / reference_step;
        if mapping_norm < config.grad_tolerance {
            converged = true;
            break;
        }
        // Backtracking line search, growing the step on success.
        let mut accepted = false;
        let mut a = alpha;
        for _ in 0..70 {
            let candidate = project_coords(basis, &(&t + &grad * a));
            let candidate_ll = outcomes.log_likelihood(&candidate);
            if candidate_ll > ll {
                t = candidate;
                ll = candidate_ll;
                alpha = (a * 1.5).min(1e6 * reference_step);
                accepted = true;
                break;
            }
            a *= 0.5;
            if a < 1e-18 {
                break;
            }
        }
        if !accepted {
            // No improving step exists at float precision: treat the
            // mapping norm as the final verdict.
            converged = mapping_norm < config.grad_tolerance.max(1e-7 * total_counts);
            break;
        }
    }
    AscentOutcome {
        coords: t,
        log_likelihood: ll,
        iterations,
        converged,
    }
}

/// Deterministic second starting point for degeneracy detection: a fixed
/// asymmetric interior vector.
fn alternate_start(coord_count: usize) -> DVector<f64> {
    let scale = 0.3 / (coord_count as f64).sqrt();
    DVector::from_iterator(
        coord_count,
        (0..coord_count).map(|a| scale * ((a + 1) as f64 * 1.7).cos()),
    )
}

/// Maximize the record's log-likelihood over positive semidefinite
/// unit-trace matrices, starting from the maximally mixed state.
pub fn mle_estimate(record: &MeasurementRecord, config: &MleConfig) -> Result<MleEstimate> {
    if record.total_counts() == 0 {
        return Err(Error::EmptyRecord);
    }
    if config.max_iterations == 0 {
        return Err(Error::InvalidConfig {
            reason: "max_iterations must be at least 1".into(),
        });
    }
    let dim = record.dim();
    let basis = HsBasis::new(dim);
    let outcomes = CountedOutcomes::from_record(record, &basis);

    let coord_count = dim * dim - 1;
    let main = ascend(&outcomes, &basis, DVector::zeros(coord_count), config);

    let mut degenerate_maximum = false;
    if config.detect_degenerate {
        let second = ascend(&outcomes, &basis, alternate_start(coord_count), config);
        if main.converged && second.converged {
            let a = basis.reconstruct_unit_trace(&main.coords);
            let b = basis.reconstruct_unit_trace(&second.coords);
            let da = DensityMatrix::new(a)?;
            let db = DensityMatrix::new(b)?;
            degenerate_maximum = da.trace_distance(&db) > 1e-4;
        }
    }

    let matrix = basis.reconstruct_unit_trace(&main.coords);
    let state = DensityMatrix::verified(matrix)?;
    let eigenvalues = state.eigenvalues();
    let max_eig = eigenvalues[eigenvalues.len() - 1];
    let zero_eigenvalue_count = eigenvalues
        .iter()
        .filter(|&&v| v <= config.rank_tolerance * max_eig)
        .count();
    Ok(MleEstimate {
        state,
        log_likelihood: main.log_likelihood,
        iterations: main.iterations,
        converged: main.converged,
        rank_deficient: zero_eigenvalue_count > 0,
        zero_eigenvalue_count,
        degenerate_maximum,
    })
}

/// Decompose a single-POVM record's likelihood at a state into observed
/// entropy plus the frequency-to-prediction relative entropy.
pub fn likelihood_decomposition(
    record: &MeasurementRecord,
    rho: &DensityMatrix,
) -> Result<LikelihoodDecomposition> {
    if record.groups().len() != 1 {
        return Err(Error::MultiGroupRecord {
            groups: record.groups().len(),
        });
    }
    if record.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: record.dim(),
            found: rho.dim(),
        });
    }
    let total = record.total_counts();
    if total == 0 {
        return Err(Error::EmptyRecord);
    }
    let n = total as f64;
    let mut entropy = 0.0;
    let mut divergence = 0.0;
    for entry in record.entries() {
        if entry.count == 0 {
            continue;
        }
        let f = entry.count as f64 / n;
        entropy -= f * f.ln();
        let p = rho.expectation(&entry.operator).clamp(0.0, 1.0);
        if p == 0.0 {
            divergence = f64::INFINITY;
        } else {
            divergence += f * (f / p).ln();
        }
    }
    let log_likelihood = if divergence.is_infinite() {
        f64::NEG_INFINITY
    } else {
        -n * (entropy + divergence)
    };
    Ok(LikelihoodDecomposition {
        entropy,
        divergence,
        log_likelihood,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{log_likelihood, MeasurementRecord, Povm};
    use crate::qmath::to_hs_vector;
    use crate::tomography::tomographic_estimate;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn xyz_record(counts: [(u64, u64); 3]) -> MeasurementRecord {
        MeasurementRecord::from_povm_counts(
            &[Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()],
            &[
                vec![counts[0].0, counts[0].1],
                vec![counts[1].0, counts[1].1],
                vec![counts[2].0, counts[2].1],
            ],
        )
        .unwrap()
    }

    #[test]
    fn simplex_projection_clips_and_renormalizes() {
        let p = project_to_simplex(&[1.2, -0.2]);
        assert_relative_eq!(p[0], 1.0, epsilon = 1e-12);
        assert_eq!(p[1], 0.0);
        let p = project_to_simplex(&[0.5, 0.3, 0.2]);
        assert_relative_eq!(p[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(p[1], 0.3, epsilon = 1e-12);
        assert_relative_eq!(p[2], 0.2, epsilon = 1e-12);
        let p = project_to_simplex(&[2.0, 1.0, -3.0]);
        assert_relative_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(p.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn symmetric_data_gives_maximally_mixed() {
        let record = xyz_record([(5, 5), (5, 5), (5, 5)]);
        let est = mle_estimate(&record, &MleConfig::default()).unwrap();
        assert!(est.converged);
        assert!(
            est.state
                .trace_distance(&DensityMatrix::maximally_mixed(2))
                < 1e-8
        );
        assert!(!est.rank_deficient);
        assert!(!est.degenerate_maximum);
    }

    #[test]
    fn positive_tomography_fixed_points_are_likelihood_maxima() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut positive_seen = 0;
        while positive_seen < 20 {
            let shots = 10;
            let record = xyz_record([
                {
                    let a = rng.gen_range(3..=7);
                    (a, shots - a)
                },
                {
                    let a = rng.gen_range(3..=7);
                    (a, shots - a)
                },
                {
                    let a = rng.gen_range(3..=7);
                    (a, shots - a)
                },
            ]);
            let tomo = tomographic_estimate(&record).unwrap();
            if !tomo.is_positive {
                continue;
            }
            positive_seen += 1;
            let est = mle_estimate(&record, &MleConfig::default()).unwrap();
            assert!(est.converged);
            assert!(
                est.state.trace_distance(&tomo.state) < 1e-6,
                "distance {}",
                est.state.trace_distance(&tomo.state)
            );
        }
    }

    #[test]
    fn non_positive_tomography_forces_rank_deficiency() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut non_positive_seen = 0;
        while non_positive_seen < 20 {
            let shots = 6;
            let record = xyz_record([
                {
                    let a = rng.gen_range(0..=shots);
                    (a, shots - a)
                },
                {
                    let a = rng.gen_range(0..=shots);
                    (a, shots - a)
                },
                {
                    let a = rng.gen_range(0..=shots);
                    (a, shots - a)
                },
            ]);
            let tomo = tomographic_estimate(&record).unwrap();
            if tomo.is_positive {
                continue;
            }
            non_positive_seen += 1;
            let est = mle_estimate(&record, &MleConfig::default()).unwrap();
            assert!(
                est.rank_deficient,
                "non-positive fit must push the maximizer to the boundary"
            );
            assert!(est.zero_eigenvalue_count >= 1);
            // The maximizer's likelihood cannot be beaten by the clipped
            // tomography point.
            let ll_est = log_likelihood(&record, &est.state).unwrap();
            assert!(ll_est >= est.log_likelihood - 1e-9);
        }
    }

    #[test]
    fn skewed_sixteen_shot_record_lands_on_the_tilted_pure_state() {
        let record = MeasurementRecord::from_povm_counts(
            &[Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()],
            &[vec![14, 2], vec![1, 1], vec![14, 2]],
        )
        .unwrap();
        let est = mle_estimate(&record, &MleConfig::default()).unwrap();
        assert!(est.converged);
        let v = to_hs_vector(&est.state);
        let inv = 1.0 / 2.0_f64.sqrt();
        assert!((v.as_slice()[0] - inv).abs() < 1e-6, "x {}", v.as_slice()[0]);
        assert!(v.as_slice()[1].abs() < 1e-6, "y {}", v.as_slice()[1]);
        assert!((v.as_slice()[2] - inv).abs() < 1e-6, "z {}", v.as_slice()[2]);
        assert!(est.rank_deficient);
        assert_eq!(est.zero_eigenvalue_count, 1);
    }

    #[test]
    fn likelihood_is_monotone_in_iteration_budget() {
        let record = xyz_record([(14, 2), (1, 1), (14, 2)]);
        let mut previous = f64::NEG_INFINITY;
        for cap in [1, 2, 3, 5, 8, 13, 21, 34, 55, 89] {
            let config = MleConfig {
                max_iterations: cap,
                detect_degenerate: false,
                ..MleConfig::default()
            };
            let est = mle_estimate(&record, &config).unwrap();
            assert!(
                est.log_likelihood >= previous - 1e-12,
                "cap {cap}: {} < {previous}",
                est.log_likelihood
            );
            previous = est.log_likelihood;
        }
    }

    #[test]
    fn underdetermined_data_flags_a_degenerate_maximum() {
        // sigma_z data alone leaves the x–y plane unconstrained.
        let record =
            MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![5, 5]]).unwrap();
        let est = mle_estimate(&record, &MleConfig::default()).unwrap();
        assert!(est.degenerate_maximum);

        // Adding balanced x and y data pins the state down.
        let record = xyz_record([(5, 5), (5, 5), (5, 5)]);
        let est = mle_estimate(&record, &MleConfig::default()).unwrap();
        assert!(!est.degenerate_maximum);
    }

    #[test]
    fn decomposition_matches_hand_computed_example() {
        let record =
            MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![1, 1]]).unwrap();
        let rho = DensityMatrix::from_bloch(0.0, 0.0, 0.75);
        // Predictions (0.875, 0.125) against frequencies (0.5, 0.5).
        let dec = likelihood_decomposition(&record, &rho).unwrap();
        assert_relative_eq!(dec.entropy, 2.0_f64.ln(), epsilon = 1e-12);
        let expected_div = 0.5 * (0.5_f64 / 0.875).ln() + 0.5 * (0.5_f64 / 0.125).ln();
        assert_relative_eq!(dec.divergence, expected_div, epsilon = 1e-12);
        assert_relative_eq!(
            dec.log_likelihood,
            log_likelihood(&record, &rho).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn decomposition_requires_a_single_group() {
        let record = xyz_record([(1, 0), (1, 0), (1, 0)]);
        assert!(matches!(
            likelihood_decomposition(&record, &DensityMatrix::maximally_mixed(2)),
            Err(Error::MultiGroupRecord { groups: 3 })
        ));
    }

    #[test]
    fn decomposition_identity_holds_across_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let record =
            MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![7, 3]]).unwrap();
        for _ in 0..50 {
            let z: f64 = rng.gen_range(-0.95..0.95);
            let rho = DensityMatrix::from_bloch(0.0, 0.0, z);
            let dec = likelihood_decomposition(&record, &rho).unwrap();
            assert_relative_eq!(
                dec.log_likelihood,
                log_likelihood(&record, &rho).unwrap(),
                epsilon = 1e-10
            );
            assert!(dec.divergence >= -1e-12, "relative entropy is nonnegative");
        }
    }

    #[test]
    fn infinite_divergence_when_prediction_excludes_observation() {
        let record =
            MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![1, 1]]).unwrap();
        let rho = crate::qmath::PureState::basis_state(2, 0).projector();
        let dec = likelihood_decomposition(&record, &rho).unwrap();
        assert!(dec.divergence.is_infinite());
        assert_eq!(dec.log_likelihood, f64::NEG_INFINITY);
    }
}
