//! The orthogonal traceless operator basis and coordinate vectors in it.
//!
//! Basis order: symmetric off-diagonal pairs `(j, k)` with `j < k` in
//! lexicographic order, then antisymmetric pairs in the same order, then the
//! diagonal generators `l = 1 .. dim-1`. At dimension 2 this is exactly
//! `[sigma_x, sigma_y, sigma_z]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::matrix::{DensityMatrix, HermitianMatrix};

/// Coordinates of a unit-trace Hermitian matrix in the traceless operator
/// basis: `coords[a] = Tr(B_a * m)`.
///
/// Reconstruction: `m = I/dim + (1/2) * sum_a coords[a] * B_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct HsVector {
    dim: usize,
    coords: DVector<f64>,
}

impl HsVector {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        let expected = dim * dim - 1;
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coords.len(),
            });
        }
        Ok(Self {
            dim,
            coords: DVector::from_vec(coords),
        })
    }

    /// Matrix dimension this vector describes (coordinate count is
    /// `dim^2 - 1`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }
}

/// The traceless basis matrices for one dimension, built once and reused.
#[derive(Clone, Debug)]
pub struct HsBasis {
    dim: usize,
    matrices: Vec<HermitianMatrix>,
}

impl HsBasis {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 2, "operator basis needs dimension >= 2");
        let mut matrices = Vec::with_capacity(dim * dim - 1);
        // Symmetric off-diagonal generators.
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut m = DMatrix::zeros(dim, dim);
                m[(j, k)] = Complex64::new(1.0, 0.0);
                m[(k, j)] = Complex64::new(1.0, 0.0);
                matrices.push(HermitianMatrix::new(m).expect("symmetric generator"));
            }
        }
        // Antisymmetric off-diagonal generators.
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut m = DMatrix::zeros(dim, dim);
                m[(j, k)] = Complex64::new(0.0, -1.0);
                m[(k, j)] = Complex64::new(0.0, 1.0);
                matrices.push(HermitianMatrix::new(m).expect("antisymmetric generator"));
            }
        }
        // Diagonal generators, normalized so Tr(B^2) = 2.
        for l in 1..dim {
            let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
            let mut m = DMatrix::zeros(dim, dim);
            for j in 0..l {
                m[(j, j)] = Complex64::new(scale, 0.0);
            }
            m[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
            matrices.push(HermitianMatrix::new(m).expect("diagonal generator"));
        }
        Self { dim, matrices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis matrices, `dim^2 - 1`.
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    /// Coordinates `Tr(B_a * m)` of an arbitrary Hermitian matrix.
    pub fn coords_of(&self, m: &HermitianMatrix) -> DVector<f64> {
        assert_eq!(self.dim, m.dim(), "basis/matrix dimension mismatch");
        DVector::from_iterator(self.len(), self.matrices.iter().map(|b| b.trace_with(m)))
    }

    /// Rebuild the matrix with the given trace and coordinates:
    /// `trace * I/dim + (1/2) * sum_a coords[a] * B_a`.
    pub fn reconstruct(&self, trace: f64, coords: &DVector<f64>) -> HermitianMatrix {
        assert_eq!(self.len(), coords.len(), "coordinate count mismatch");
        let mut m = HermitianMatrix::identity(self.dim).scaled(trace / self.dim as f64);
        for (a, basis) in self.matrices.iter().enumerate() {
            if coords[a] != 0.0 {
                m = m.plus(&basis.scaled(coords[a] / 2.0));
            }
        }
        m
    }

    /// Rebuild a unit-trace matrix from coordinates.
    pub fn reconstruct_unit_trace(&self, coords: &DVector<f64>) -> HermitianMatrix {
        self.reconstruct(1.0, coords)
    }
}

/// Coordinates of a density matrix in the traceless basis (a Bloch vector at
/// dimension 2).
pub fn to_hs_vector(rho: &DensityMatrix) -> HsVector {
    let basis = HsBasis::new(rho.dim());
    let coords = basis.coords_of(rho.matrix());
    HsVector {
        dim: rho.dim(),
        coords,
    }
}

/// Rebuild the unit-trace Hermitian matrix a coordinate vector describes.
/// The result need not be positive semidefinite.
pub fn from_hs_vector(v: &HsVector) -> HermitianMatrix {
    let basis = HsBasis::new(v.dim);
    basis.reconstruct_unit_trace(&v.coords)
}

/// Split an observable into its trace and traceless expansion coefficients:
/// `X = (trace/dim) * I + sum_a x[a] * B_a` with `x[a] = Tr(B_a X) / 2`.
///
/// With states carrying coordinates `t_a = Tr(B_a rho)`, expectations
/// decompose as `Tr(X rho) = trace/dim + sum_a x[a] * t_a`.
pub fn observable_components(observable: &HermitianMatrix) -> (f64, DVector<f64>) {
    let basis = HsBasis::new(observable.dim());
    let coords = basis.coords_of(observable) / 2.0;
    (observable.trace(), coords)
}
