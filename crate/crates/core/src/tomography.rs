//! Linear-inversion tomography: fit a unit-trace Hermitian matrix to the
//! observed outcome frequencies by least squares.
//!
//! The fit runs over coordinates in the traceless operator basis, so the
//! unit-trace constraint is built in. Nothing constrains the eigenvalues:
//! the estimate faithfully reports whatever matrix the frequencies point at,
//! including non-positive ones, and flags positivity explicitly.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::measurement::MeasurementRecord;
use crate::qmath::{DensityMatrix, HsBasis};
use crate::tolerances;

/// Result of a linear-inversion fit.
#[derive(Clone, Debug)]
pub struct TomoEstimate {
    /// The fitted unit-trace Hermitian matrix. `psd_checked` is set exactly
    /// when `is_positive` below is true.
    pub state: DensityMatrix,
    /// Euclidean norm of the frequency-fit residual
    /// `sqrt(sum_j (Tr(E_j rho) - f_j)^2)`; below `1e-10` means an exact
    /// fit.
    pub residual: f64,
    /// Eigenvalues of the estimate, ascending.
    pub eigenvalues: Vec<f64>,
    /// Whether the estimate is positive semidefinite (min eigenvalue above
    /// the workspace PSD floor).
    pub is_positive: bool,
    /// Number of eigenvalues strictly below the PSD floor.
    pub negative_eigenvalue_count: usize,
}

/// Linear constraint system extracted from a record: one row per counted
/// outcome group entry, `p_j(t) = offset_j + row_j . t` with `t` the
/// coordinate vector of the state.
pub(crate) struct FrequencySystem {
    /// Design matrix rows `row_j[a] = Tr(E_j B_a) / 2`.
    pub design: DMatrix<f64>,
    /// Constant offsets `Tr(E_j) / dim`.
    pub offsets: DVector<f64>,
    /// Observed frequencies `count_j / group_total`.
    pub frequencies: DVector<f64>,
}

/// Build the frequency-constraint system over all groups with at least one
/// count. Groups with zero total counts contribute no constraints (their
/// frequencies are undefined).
pub(crate) fn frequency_system(record: &MeasurementRecord) -> Result<FrequencySystem> {
    let dim = record.dim();
    let basis = HsBasis::new(dim);
    let mut rows: Vec<DVector<f64>> = Vec::new();
    let mut offsets = Vec::new();
    let mut frequencies = Vec::new();
    for range in record.group_ranges() {
        let group = &record.entries()[range];
        let total: u64 = group.iter().map(|e| e.count).sum();
        if total == 0 {
            continue;
        }
        for entry in group {
            rows.push(basis.coords_of(&entry.operator) / 2.0);
            offsets.push(entry.operator.trace() / dim as f64);
            frequencies.push(entry.count as f64 / total as f64);
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyRecord);
    }
    let coord_count = dim * dim - 1;
    let mut design = DMatrix::zeros(rows.len(), coord_count);
    for (r, row) in rows.iter().enumerate() {
        design.set_row(r, &row.transpose());
    }
    Ok(FrequencySystem {
        design,
        offsets: DVector::from_vec(offsets),
        frequencies: DVector::from_vec(frequencies),
    })
}

/// Fit a unit-trace Hermitian matrix to the record's observed frequencies by
/// least squares.
///
/// Fails with `Underdetermined` when the counted outcomes (plus the trace
/// constraint) do not pin the state down uniquely.
pub fn tomographic_estimate(record: &MeasurementRecord) -> Result<TomoEstimate> {
    if record.total_counts() == 0 {
        return Err(Error::EmptyRecord);
    }
    let dim = record.dim();
    let coord_count = dim * dim - 1;
    let system = frequency_system(record)?;
    let targets = &system.frequencies - &system.offsets;

    let svd = system.design.clone().svd(true, true);
    let max_sv = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = tolerances::QUORUM_RANK_RELATIVE * max_sv.max(1.0);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > cutoff)
        .count();
    if rank < coord_count {
        return Err(Error::Underdetermined {
            rank: rank + 1,
            needed: dim * dim,
        });
    }
    let coords = svd
        .solve(&targets, cutoff)
        .expect("SVD solve with computed factors");
    let residual = (&system.design * &coords - &targets).norm();

    let basis = HsBasis::new(dim);
    let matrix = basis.reconstruct_unit_trace(&coords);
    let eigenvalues = matrix.eigenvalues();
    let negative_eigenvalue_count = eigenvalues
        .iter()
        .filter(|&&v| v < -tolerances::PSD_FLOOR)
        .count();
    let is_positive = negative_eigenvalue_count == 0;
    let state = if is_positive {
        DensityMatrix::verified(matrix)?
    } else {
        DensityMatrix::new(matrix)?
    };
    Ok(TomoEstimate {
        state,
        residual,
        eigenvalues,
        is_positive,
        negative_eigenvalue_count,
    })
}

/// Census of the single-qubit estimates reachable from `shots` measurements
/// each of sigma_x and sigma_z: the `(shots+1) x (shots+1)` grid of
/// coordinate pairs `(2 n_x / shots - 1, 2 n_z / shots - 1)`.
///
/// Returns `(total_grid_points, non_positive_count)` where a point is
/// non-positive exactly when `x^2 + z^2 > 1` (computed in exact integer
/// arithmetic).
pub fn bloch_cube_census(shots_per_axis: u64) -> Result<(u64, u64)> {
    if shots_per_axis == 0 {
        return Err(Error::InvalidConfig {
            reason: "census needs at least one shot per axis".into(),
        });
    }
    let s = shots_per_axis as i128;
    let mut non_positive = 0u64;
    for nx in 0..=s {
        for nz in 0..=s {
            let u = 2 * nx - s;
            let v = 2 * nz - s;
            if u * u + v * v > s * s {
                non_positive += 1;
            }
        }
    }
    let side = shots_per_axis + 1;
    Ok((side * side, non_positive))
}
