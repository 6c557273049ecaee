//! POVMs, measurement records, outcome probabilities, likelihoods, quorum
//! checks, and data simulation.
//!
//! A `MeasurementRecord` is the single input type every estimator consumes:
//! a flat list of (label, outcome operator, count) entries. Entries are
//! organized into *groups*, one group per POVM the data came from, so
//! frequency-based estimators can normalize counts within each observation
//! distribution. The JSON interchange format is flat; on parse, groups are
//! inferred by scanning for consecutive entries whose operators sum to the
//! identity (entries that never complete an identity block fall into a
//! single trailing group).

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{
    matrix_from_rows, matrix_to_rows, DensityMatrix, HermitianMatrix, HsBasis, MatrixRows,
};
use crate::tolerances;

/// A positive-operator-valued measure: outcomes are positive semidefinite
/// and sum to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    outcomes: Vec<HermitianMatrix>,
    labels: Vec<String>,
}

impl Povm {
    /// Validate and build a POVM: every outcome PSD (to the workspace
    /// tolerance), outcomes summing to the identity, one label per outcome.
    pub fn new(
        outcomes: Vec<HermitianMatrix>,
        labels: Vec<impl Into<String>>,
    ) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidPovm {
                reason: "no outcomes".into(),
            });
        }
        if outcomes.len() != labels.len() {
            return Err(Error::InvalidPovm {
                reason: format!(
                    "{} outcomes but {} labels",
                    outcomes.len(),
                    labels.len()
                ),
            });
        }
        let dim = outcomes[0].dim();
        let mut sum = HermitianMatrix::zeros(dim);
        for (idx, outcome) in outcomes.iter().enumerate() {
            if outcome.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: outcome.dim(),
                });
            }
            let min = outcome.min_eigenvalue();
            if min < -tolerances::PSD_FLOOR {
                return Err(Error::InvalidPovm {
                    reason: format!("outcome {idx} has negative eigenvalue {min:.3e}"),
                });
            }
            sum = sum.plus(outcome);
        }
        let deviation = sum.max_entry_distance(&HermitianMatrix::identity(dim));
        if deviation > tolerances::UNIT_TRACE {
            return Err(Error::InvalidPovm {
                reason: format!("outcomes sum to identity only within {deviation:.3e}"),
            });
        }
        Ok(Self {
            dim,
            outcomes,
            labels: labels.into_iter().map(Into::into).collect(),
        })
    }

    /// Two-outcome projective measurement of a single-qubit Pauli-style
    /// observable: outcomes `(I ± A) / 2` labeled `<axis>+` / `<axis>-`.
    fn projective_qubit(observable: &HermitianMatrix, axis: &str) -> Self {
        let id = HermitianMatrix::identity(2);
        let plus = id.plus(observable).scaled(0.5);
        let minus = id.minus(observable).scaled(0.5);
        Self::new(vec![plus, minus], vec![format!("{axis}+"), format!("{axis}-")])
            .expect("projective qubit POVM is valid")
    }

    /// The sigma_x measurement `{|+><+|, |-><-|}`.
    pub fn pauli_x() -> Self {
        Self::projective_qubit(&crate::qmath::pauli_x(), "x")
    }

    /// The sigma_y measurement.
    pub fn pauli_y() -> Self {
        Self::projective_qubit(&crate::qmath::pauli_y(), "y")
    }

    /// The sigma_z measurement `{|0><0|, |1><1|}`.
    pub fn pauli_z() -> Self {
        Self::projective_qubit(&crate::qmath::pauli_z(), "z")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[HermitianMatrix] {
        &self.outcomes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// One outcome line of a measurement record.
#[derive(Clone, Debug, PartialEq)]
pub struct RecordEntry {
    pub label: String,
    pub operator: HermitianMatrix,
    pub count: u64,
}

/// A dataset: counted outcomes, organized into per-POVM groups.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    dim: usize,
    entries: Vec<RecordEntry>,
    /// Entry counts per outcome group; sums to `entries.len()`.
    groups: Vec<usize>,
}

impl MeasurementRecord {
    /// Build a record from explicit per-POVM counts. `counts[g][i]` is the
    /// tally for outcome `i` of `povms[g]`; zero counts are kept so the
    /// record preserves each POVM's full outcome list.
    pub fn from_povm_counts(povms: &[Povm], counts: &[Vec<u64>]) -> Result<Self> {
        if povms.is_empty() {
            return Err(Error::EmptyRecord);
        }
        if povms.len() != counts.len() {
            return Err(Error::InvalidRecord {
                reason: format!("{} POVMs but {} count groups", povms.len(), counts.len()),
            });
        }
        let dim = povms[0].dim();
        let mut entries = Vec::new();
        let mut groups = Vec::new();
        for (povm, group_counts) in povms.iter().zip(counts) {
            if povm.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: povm.dim(),
                });
            }
            if povm.len() != group_counts.len() {
                return Err(Error::InvalidRecord {
                    reason: format!(
                        "POVM has {} outcomes but {} counts were given",
                        povm.len(),
                        group_counts.len()
                    ),
                });
            }
            for (i, (&count, op)) in group_counts.iter().zip(povm.outcomes()).enumerate() {
                entries.push(RecordEntry {
                    label: povm.labels()[i].clone(),
                    operator: op.clone(),
                    count,
                });
            }
            groups.push(povm.len());
        }
        Self::validated(dim, entries, groups)
    }

    /// Build a record from flat entries, inferring outcome groups by
    /// scanning for consecutive operators that sum to the identity.
    pub fn from_entries(dim: usize, entries: Vec<RecordEntry>) -> Result<Self> {
        let groups = infer_groups(dim, &entries);
        Self::validated(dim, entries, groups)
    }

    fn validated(dim: usize, entries: Vec<RecordEntry>, groups: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyRecord);
        }
        for (idx, entry) in entries.iter().enumerate() {
            if entry.operator.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: entry.operator.dim(),
                });
            }
            let eigs = entry.operator.eigenvalues();
            let min = eigs[0];
            let max = eigs[eigs.len() - 1];
            if min < -tolerances::PSD_FLOOR || max > 1.0 + tolerances::PSD_FLOOR {
                return Err(Error::InvalidRecord {
                    reason: format!(
                        "entry {idx} ({}) is not a valid effect: eigenvalues in [{min:.3e}, {max:.3e}]",
                        entry.label
                    ),
                });
            }
        }
        debug_assert_eq!(groups.iter().sum::<usize>(), entries.len());
        Ok(Self {
            dim,
            entries,
            groups,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[RecordEntry] {
        &self.entries
    }

    /// Entry counts per outcome group.
    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    /// Index ranges of the entries in each group.
    pub fn group_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut ranges = Vec::with_capacity(self.groups.len());
        let mut start = 0;
        for &len in &self.groups {
            ranges.push(start..start + len);
            start += len;
        }
        ranges
    }

    /// Total number of counted shots across all groups.
    pub fn total_counts(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// Serialize to the interchange JSON format.
    pub fn to_json(&self) -> String {
        let wire = RecordWire {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|e| EntryWire {
                    label: e.label.clone(),
                    operator: matrix_to_rows(&e.operator),
                    count: e.count,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("record serialization cannot fail")
    }

    /// Parse the interchange JSON format, validating operators and inferring
    /// outcome groups.
    pub fn from_json(text: &str) -> Result<Self> {
        let wire: RecordWire = serde_json::from_str(text).map_err(|e| Error::Schema {
            reason: e.to_string(),
        })?;
        let mut entries = Vec::with_capacity(wire.entries.len());
        for entry in &wire.entries {
            let operator = matrix_from_rows(&entry.operator)?;
            entries.push(RecordEntry {
                label: entry.label.clone(),
                operator,
                count: entry.count,
            });
        }
        Self::from_entries(wire.dim, entries)
    }
}

#[derive(Serialize, Deserialize)]
struct RecordWire {
    dim: usize,
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
struct EntryWire {
    label: String,
    operator: MatrixRows,
    count: u64,
}

/// Scan entries in order, closing a group whenever the running operator sum
/// reaches the identity. Leftover entries form one trailing group.
fn infer_groups(dim: usize, entries: &[RecordEntry]) -> Vec<usize> {
    let identity = HermitianMatrix::identity(dim);
    let mut groups = Vec::new();
    let mut sum = HermitianMatrix::zeros(dim);
    let mut in_group = 0;
    for entry in entries {
        sum = sum.plus(&entry.operator);
        in_group += 1;
        if sum.max_entry_distance(&identity) < tolerances::GROUP_IDENTITY {
            groups.push(in_group);
            sum = HermitianMatrix::zeros(dim);
            in_group = 0;
        }
    }
    if in_group > 0 {
        groups.push(in_group);
    }
    groups
}

/// `Tr(effect * rho)`, clamped into `[0, 1]` so eigensolver noise never
/// produces a probability epsilon outside the physical range.
///
/// The effect must be a valid POVM element (PSD and bounded by the
/// identity).
pub fn born_probability(rho: &DensityMatrix, effect: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != effect.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: effect.dim(),
        });
    }
    let eigs = effect.eigenvalues();
    if eigs[0] < -tolerances::PSD_FLOOR || eigs[eigs.len() - 1] > 1.0 + tolerances::PSD_FLOOR {
        return Err(Error::InvalidPovm {
            reason: format!(
                "effect eigenvalues in [{:.3e}, {:.3e}] are outside [0, 1]",
                eigs[0],
                eigs[eigs.len() - 1]
            ),
        });
    }
    Ok(rho.expectation(effect).clamp(0.0, 1.0))
}

/// Log-likelihood `sum_j count_j * ln Tr(E_j rho)` of a record under a
/// state.
///
/// Probabilities are clamped to `[0, 1]`; an observed outcome (positive
/// count) with zero or negative probability sends the value to negative
/// infinity. The state is *not* required to be positive semidefinite; a
/// non-positive unit-trace matrix simply gets the likelihood its clamped
/// outcome probabilities imply.
pub fn log_likelihood(record: &MeasurementRecord, rho: &DensityMatrix) -> Result<f64> {
    if record.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: record.dim(),
            found: rho.dim(),
        });
    }
    let mut total = 0.0;
    for entry in record.entries() {
        if entry.count == 0 {
            continue;
        }
        let p = rho.expectation(&entry.operator).clamp(0.0, 1.0);
        if p == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        total += entry.count as f64 * p.ln();
    }
    Ok(total)
}

/// Whether a POVM collection is informationally complete: together with the
/// trace constraint, do the outcomes determine a unit-trace Hermitian matrix
/// uniquely? Checked as a rank condition on the stacked operator
/// coordinates.
pub fn is_quorum(povms: &[Povm]) -> Result<bool> {
    if povms.is_empty() {
        return Err(Error::InvalidPovm {
            reason: "no POVMs given".into(),
        });
    }
    let dim = povms[0].dim();
    for povm in povms {
        if povm.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: povm.dim(),
            });
        }
    }
    let outcomes: Vec<&HermitianMatrix> = povms.iter().flat_map(|p| p.outcomes().iter()).collect();
    Ok(operators_span_with_identity(dim, &outcomes))
}

/// Rank test: do the given operators, together with the identity, span the
/// full `dim^2`-dimensional real space of Hermitian matrices?
pub(crate) fn operators_span_with_identity(dim: usize, operators: &[&HermitianMatrix]) -> bool {
    let basis = HsBasis::new(dim);
    let cols = dim * dim;
    let mut rows = DMatrix::zeros(operators.len() + 1, cols);
    // Identity row: trace component only.
    rows[(0, 0)] = dim as f64;
    for (r, op) in operators.iter().enumerate() {
        rows[(r + 1, 0)] = op.trace();
        let coords = basis.coords_of(op);
        for a in 0..coords.len() {
            rows[(r + 1, a + 1)] = coords[a];
        }
    }
    let svd = rows.svd(false, false);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    if max_sv == 0.0 {
        return false;
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tolerances::QUORUM_RANK_RELATIVE * max_sv)
        .count();
    rank == cols
}

/// Simulate `shots_per_povm` independent shots of each POVM on a state and
/// tally the outcomes (zero-count outcomes included).
///
/// The state must have verified positivity: outcome probabilities of a
/// non-positive matrix do not form a distribution.
pub fn simulate_record<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    povms: &[Povm],
    shots_per_povm: u64,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if povms.is_empty() {
        return Err(Error::InvalidPovm {
            reason: "no POVMs given".into(),
        });
    }
    if shots_per_povm == 0 {
        return Err(Error::InvalidConfig {
            reason: "shots_per_povm must be at least 1".into(),
        });
    }
    if !rho.psd_checked() {
        let min = rho.min_eigenvalue();
        if min < -tolerances::PSD_FLOOR {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
    }
    let mut counts = Vec::with_capacity(povms.len());
    for povm in povms {
        if povm.dim() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: povm.dim(),
            });
        }
        let mut probs: Vec<f64> = povm
            .outcomes()
            .iter()
            .map(|e| rho.expectation(e).clamp(0.0, 1.0))
            .collect();
        let total: f64 = probs.iter().sum();
        debug_assert!((total - 1.0).abs() < 1e-8, "POVM probabilities sum to 1");
        for p in &mut probs {
            *p /= total;
        }
        counts.push(multinomial_draw(shots_per_povm, &probs, rng));
    }
    MeasurementRecord::from_povm_counts(povms, &counts)
}

/// Draw multinomial counts by the conditional-binomial method.
fn multinomial_draw<R: Rng + ?Sized>(shots: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut remaining_shots = shots;
    let mut remaining_prob = 1.0_f64;
    for (i, &p) in probs.iter().enumerate() {
        if remaining_shots == 0 {
            break;
        }
        if i + 1 == probs.len() {
            counts[i] = remaining_shots;
            break;
        }
        let conditional = if remaining_prob <= 0.0 {
            0.0
        } else {
            (p / remaining_prob).clamp(0.0, 1.0)
        };
        let draw = Binomial::new(remaining_shots, conditional)
            .expect("conditional probability is in [0, 1]")
            .sample(rng);
        counts[i] = draw;
        remaining_shots -= draw;
        remaining_prob -= p;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{pauli_x, pauli_z, PureState};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus_projector() -> HermitianMatrix {
        HermitianMatrix::identity(2).plus(&pauli_x()).scaled(0.5)
    }

    #[test]
    fn povm_construction_validates() {
        // Outcome with a negative eigenvalue.
        let bad = HermitianMatrix::from_real(2, &[1.2, 0.0, 0.0, -0.2]).unwrap();
        let complement = HermitianMatrix::identity(2).minus(&bad);
        assert!(matches!(
            Povm::new(vec![bad, complement], vec!["a", "b"]),
            Err(Error::InvalidPovm { .. })
        ));

        // Outcomes that do not sum to the identity.
        let half = HermitianMatrix::identity(2).scaled(0.5);
        assert!(matches!(
            Povm::new(vec![half.clone(), half.scaled(0.5)], vec!["a", "b"]),
            Err(Error::InvalidPovm { .. })
        ));

        let ok = Povm::pauli_z();
        assert_eq!(ok.len(), 2);
        assert_eq!(ok.labels(), &["z+".to_string(), "z-".to_string()]);
    }

    #[test]
    fn born_probability_matches_hand_value() {
        // rho = (1/2)(I + 0.75 sx + 0.75 sz), effect |+><+| -> 0.875.
        let rho = DensityMatrix::from_bloch(0.75, 0.0, 0.75);
        let p = born_probability(&rho, &plus_projector()).unwrap();
        assert_relative_eq!(p, 0.875, epsilon = 1e-12);
    }

    #[test]
    fn born_probability_clamps_roundoff() {
        let rho = PureState::basis_state(2, 0).projector();
        let ket0 = HermitianMatrix::identity(2).plus(&pauli_z()).scaled(0.5);
        let p = born_probability(&rho, &ket0).unwrap();
        assert!(p <= 1.0 && p >= 0.0);
        assert_relative_eq!(p, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn born_probability_rejects_bad_effect() {
        let rho = DensityMatrix::maximally_mixed(2);
        let too_big = HermitianMatrix::identity(2).scaled(1.5);
        assert!(matches!(
            born_probability(&rho, &too_big),
            Err(Error::InvalidPovm { .. })
        ));
        let mismatched = HermitianMatrix::identity(3).scaled(0.5);
        assert!(matches!(
            born_probability(&rho, &mismatched),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn z_record(n_plus: u64, n_minus: u64) -> MeasurementRecord {
        MeasurementRecord::from_povm_counts(&[Povm::pauli_z()], &[vec![n_plus, n_minus]]).unwrap()
    }

    #[test]
    fn log_likelihood_of_mixed_state() {
        let record = z_record(3, 1);
        let ll = log_likelihood(&record, &DensityMatrix::maximally_mixed(2)).unwrap();
        assert_relative_eq!(ll, 4.0 * 0.5_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn log_likelihood_hits_negative_infinity_on_impossible_outcome() {
        let record = z_record(3, 1);
        let rho = PureState::basis_state(2, 0).projector();
        assert_eq!(
            log_likelihood(&record, &rho).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_likelihood_of_certain_outcomes_is_zero() {
        // One +1 count on each axis, evaluated at the unit-trace matrix with
        // coordinates (1, 1, 1): every counted outcome has clamped
        // probability exactly 1.
        let record = MeasurementRecord::from_povm_counts(
            &[Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()],
            &[vec![1, 0], vec![1, 0], vec![1, 0]],
        )
        .unwrap();
        let rho = DensityMatrix::from_bloch(1.0, 1.0, 1.0);
        assert!(!rho.psd_checked());
        assert_relative_eq!(
            log_likelihood(&record, &rho).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn quorum_detection() {
        assert!(is_quorum(&[Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()]).unwrap());
        assert!(!is_quorum(&[Povm::pauli_x(), Povm::pauli_z()]).unwrap());
        assert!(!is_quorum(&[Povm::pauli_z()]).unwrap());
    }

    #[test]
    fn simulation_is_seeded_and_complete() {
        let rho = DensityMatrix::from_bloch(0.3, -0.2, 0.4);
        let povms = [Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()];
        let mut rng_a = ChaCha8Rng::seed_from_u64(42);
        let mut rng_b = ChaCha8Rng::seed_from_u64(42);
        let a = simulate_record(&rho, &povms, 100, &mut rng_a).unwrap();
        let b = simulate_record(&rho, &povms, 100, &mut rng_b).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.groups(), &[2, 2, 2]);
        assert_eq!(a.entries().len(), 6);
        for range in a.group_ranges() {
            let group_total: u64 = a.entries()[range].iter().map(|e| e.count).sum();
            assert_eq!(group_total, 100);
        }
    }

    #[test]
    fn simulated_frequencies_track_probabilities() {
        let rho = DensityMatrix::from_bloch(0.6, 0.0, -0.3);
        let povms = [Povm::pauli_x(), Povm::pauli_z()];
        let shots = 100_000_u64;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let record = simulate_record(&rho, &povms, shots, &mut rng).unwrap();
        for entry in record.entries() {
            let p = born_probability(&rho, &entry.operator).unwrap();
            let f = entry.count as f64 / shots as f64;
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            assert!(
                (f - p).abs() < 5.0 * sigma + 1e-9,
                "frequency {f} too far from probability {p}"
            );
        }
    }

    #[test]
    fn simulation_rejects_unverified_nonpositive_states() {
        let rho = DensityMatrix::from_bloch(1.0, 1.0, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            simulate_record(&rho, &[Povm::pauli_z()], 10, &mut rng),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let rho = DensityMatrix::from_bloch(0.2, 0.1, -0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let record = simulate_record(
            &rho,
            &[Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()],
            50,
            &mut rng,
        )
        .unwrap();
        let json = record.to_json();
        let parsed = MeasurementRecord::from_json(&json).unwrap();
        assert_eq!(parsed, record);
        assert_eq!(parsed.to_json(), json);
    }

    #[test]
    fn group_inference_splits_on_identity_blocks() {
        let z = Povm::pauli_z();
        let x = Povm::pauli_x();
        let mut entries = Vec::new();
        for (povm, counts) in [(&z, [7u64, 3u64]), (&x, [5, 5])] {
            for (i, op) in povm.outcomes().iter().enumerate() {
                entries.push(RecordEntry {
                    label: povm.labels()[i].clone(),
                    operator: op.clone(),
                    count: counts[i],
                });
            }
        }
        let record = MeasurementRecord::from_entries(2, entries).unwrap();
        assert_eq!(record.groups(), &[2, 2]);

        // A lone projector never completes a block: one trailing group.
        let lone = MeasurementRecord::from_entries(
            2,
            vec![RecordEntry {
                label: "z+".into(),
                operator: HermitianMatrix::identity(2).plus(&pauli_z()).scaled(0.5),
                count: 3,
            }],
        )
        .unwrap();
        assert_eq!(lone.groups(), &[1]);
    }

    #[test]
    fn record_rejects_invalid_effects() {
        let entries = vec![RecordEntry {
            label: "bad".into(),
            operator: HermitianMatrix::identity(2).scaled(1.2),
            count: 1,
        }];
        assert!(matches!(
            MeasurementRecord::from_entries(2, entries),
            Err(Error::InvalidRecord { .. })
        ));
        assert!(matches!(
            MeasurementRecord::from_entries(2, Vec::new()),
            Err(Error::EmptyRecord)
        ));
    }

    #[test]
    fn malformed_json_is_a_schema_error() {
        assert!(matches!(
            MeasurementRecord::from_json("{\"dim\": 2"),
            Err(Error::Schema { .. })
        ));
        // Valid JSON, non-Hermitian operator.
        let text = r#"{
            "dim": 2,
            "entries": [
                {"label": "a", "operator": [[[1.0, 0.0], [0.5, 0.0]], [[0.4, 0.0], [0.0, 0.0]]], "count": 1}
            ]
        }"#;
        assert!(MeasurementRecord::from_json(text).is_err());
    }
}
