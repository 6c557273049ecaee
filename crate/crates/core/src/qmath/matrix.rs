//! Hermitian matrices, density matrices, and pure states with validated
//! constructors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

/// A Hermitian matrix over complex doubles.
///
/// Construction validates hermiticity to the workspace tolerance and then
/// stores the exactly symmetrized matrix `(M + M^dagger) / 2`, so downstream
/// eigendecompositions never see the residual asymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian
/// matrix.
#[derive(Clone, Debug)]
pub struct Eigendecomposition {
    /// Real eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose k-th column is the eigenvector of `values[k]`.
    pub vectors: DMatrix<Complex64>,
}

impl Eigendecomposition {
    /// Eigenvector for the k-th (ascending) eigenvalue.
    pub fn eigenvector(&self, k: usize) -> DVector<Complex64> {
        DVector::from_column_slice(self.vectors.column(k).as_slice())
    }

    /// Rank-1 projector onto the k-th eigenvector.
    pub fn projector(&self, k: usize) -> HermitianMatrix {
        let v = self.vectors.column(k);
        let dim = v.len();
        let mut data = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                data[(i, j)] = v[i] * v[j].conj();
            }
        }
        HermitianMatrix { data }
    }
}

impl HermitianMatrix {
    /// Validate and wrap a square complex matrix.
    pub fn new(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let mut deviation = 0.0_f64;
        for i in 0..data.nrows() {
            for j in 0..data.ncols() {
                let d = (data[(i, j)] - data[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > tolerances::HERMITICITY {
            return Err(Error::NotHermitian { deviation });
        }
        let half = Complex64::new(0.5, 0.0);
        let symmetrized = (&data + data.adjoint()) * half;
        Ok(Self { data: symmetrized })
    }

    /// Build from a row-major slice of complex entries.
    pub fn from_entries(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Schema {
                reason: format!(
                    "expected {} entries for a {dim}x{dim} matrix, found {}",
                    dim * dim,
                    entries.len()
                ),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Build from a row-major slice of real entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_entries(dim, &complex)
    }

    /// The zero matrix.
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    /// The identity matrix.
    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    /// Real trace (the imaginary part of a Hermitian trace is zero).
    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// `self * s` for real `s` (Hermitian matrices are closed under real
    /// scaling).
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            data: &self.data * Complex64::new(s, 0.0),
        }
    }

    /// Elementwise sum; panics on dimension mismatch (programmer error).
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "matrix dimension mismatch");
        Self {
            data: &self.data + &other.data,
        }
    }

    /// Elementwise difference; panics on dimension mismatch.
    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "matrix dimension mismatch");
        Self {
            data: &self.data - &other.data,
        }
    }

    /// `Tr(self * other)`, real for a pair of Hermitian matrices.
    pub fn trace_with(&self, other: &Self) -> f64 {
        trace_product(&self.data, &other.data).re
    }

    /// Frobenius norm `sqrt(Tr(M^2))`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Largest entrywise absolute difference against another matrix.
    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "matrix dimension mismatch");
        let mut worst = 0.0_f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                worst = worst.max((self.data[(i, j)] - other.data[(i, j)]).norm());
            }
        }
        worst
    }

    /// Full eigendecomposition with ascending eigenvalues.
    pub fn eigendecomposition(&self) -> Eigendecomposition {
        let eig = self.data.clone().symmetric_eigen();
        let dim = self.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .expect("eigenvalues are finite")
        });
        let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = DMatrix::zeros(dim, dim);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Eigendecomposition { values, vectors }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.data.clone().symmetric_eigen();
        let mut values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        values.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        values
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

/// `Tr(a * b)` without forming the product matrix.
pub(crate) fn trace_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// A unit-trace Hermitian matrix.
///
/// Positivity is deliberately *not* part of the constructor contract: linear
/// state fits legitimately produce unit-trace Hermitian matrices with
/// negative eigenvalues, and downstream code needs to carry them. The
/// `psd_checked` flag records whether positivity has been verified (or holds
/// by construction).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    psd_checked: bool,
}

impl DensityMatrix {
    /// Wrap a unit-trace Hermitian matrix without checking positivity.
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let trace = matrix.trace();
        if (trace - 1.0).abs() > tolerances::UNIT_TRACE {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(Self {
            matrix,
            psd_checked: false,
        })
    }

    /// Wrap a unit-trace Hermitian matrix and verify positive
    /// semidefiniteness (eigenvalues above `-PSD_FLOOR`).
    pub fn verified(matrix: HermitianMatrix) -> Result<Self> {
        let mut dm = Self::new(matrix)?;
        let min = dm.matrix.min_eigenvalue();
        if min < -tolerances::PSD_FLOOR {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        dm.psd_checked = true;
        Ok(dm)
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: HermitianMatrix::identity(dim).scaled(1.0 / dim as f64),
            psd_checked: true,
        }
    }

    /// Single-qubit state from Bloch coordinates; the PSD flag is set from an
    /// actual eigenvalue check, so coordinates outside the unit ball yield a
    /// valid (but non-positive) unit-trace matrix.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Self {
        let m = HermitianMatrix::from_entries(
            2,
            &[
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        )
        .expect("Bloch matrix is Hermitian by construction");
        let psd_checked = m.min_eigenvalue() >= -tolerances::PSD_FLOOR;
        Self {
            matrix: m,
            psd_checked,
        }
    }

    pub(crate) fn from_parts_verified(matrix: HermitianMatrix) -> Self {
        Self {
            matrix,
            psd_checked: true,
        }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Whether positivity has been verified (or holds by construction).
    pub fn psd_checked(&self) -> bool {
        self.psd_checked
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.min_eigenvalue()
    }

    /// `Tr(rho * observable)`.
    pub fn expectation(&self, observable: &HermitianMatrix) -> f64 {
        self.matrix.trace_with(observable)
    }

    /// Trace distance `(1/2) * sum |eigenvalues of (self - other)|`.
    pub fn trace_distance(&self, other: &Self) -> f64 {
        trace_distance_hermitian(&self.matrix, &other.matrix)
    }
}

/// Trace distance between two Hermitian matrices of equal trace.
pub(crate) fn trace_distance_hermitian(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    let diff = a.minus(b);
    0.5 * diff.eigenvalues().iter().map(|v| v.abs()).sum::<f64>()
}

/// A normalized pure state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Validate the norm (within tolerance) and renormalize exactly.
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tolerances::STATE_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    pub fn from_amplitudes(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    /// Computational basis state `|index>` in `dim` dimensions.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "state dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim() {
            acc += self.amplitudes[i].conj() * other.amplitudes[i];
        }
        acc
    }

    /// `|<self|other>|^2`.
    pub fn fidelity_with(&self, other: &Self) -> f64 {
        self.overlap(other).norm_sqr()
    }

    /// Rank-1 projector `|psi><psi|`; positive semidefinite by construction.
    pub fn projector(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut data = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                data[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix::from_parts_verified(HermitianMatrix { data })
    }
}

/// Trace out a `ancilla_dim`-dimensional ancilla from a pure state on
/// `system_dim * ancilla_dim` dimensions (composite index
/// `system * ancilla_dim + ancilla`).
///
/// The result is a Gram matrix, hence positive semidefinite by construction.
pub fn partial_trace_ancilla(
    state: &PureState,
    system_dim: usize,
    ancilla_dim: usize,
) -> Result<DensityMatrix> {
    if system_dim * ancilla_dim != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: system_dim * ancilla_dim,
            found: state.dim(),
        });
    }
    let amps = state.amplitudes();
    let mut data = DMatrix::zeros(system_dim, system_dim);
    for i in 0..system_dim {
        for j in 0..system_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..ancilla_dim {
                acc += amps[i * ancilla_dim + a] * amps[j * ancilla_dim + a].conj();
            }
            data[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_parts_verified(HermitianMatrix {
        data,
    }))
}
