//! Finite-dimensional quantum math: Hermitian matrices, density matrices,
//! pure states, the orthogonal operator basis, partial traces, and Haar
//! sampling.
//!
//! Conventions (fixed across the workspace):
//! - the operator basis `B_a` is the generalized Gell-Mann set normalized so
//!   `Tr(B_a B_b) = 2 delta_ab`; at dimension 2 it is exactly
//!   `[sigma_x, sigma_y, sigma_z]`, so coordinate vectors are Bloch vectors;
//! - `sigma_z = diag(1, -1)`, so the basis state `|0>` has coordinates
//!   `(0, 0, 1)`;
//! - composite systems order indices as `system * ancilla_dim + ancilla`.

mod hs;
mod matrix;
mod random;
mod wire;

pub use hs::{from_hs_vector, observable_components, to_hs_vector, HsBasis, HsVector};
pub use matrix::{
    partial_trace_ancilla, DensityMatrix, Eigendecomposition, HermitianMatrix, PureState,
};
pub use random::random_haar_pure;
pub use wire::{matrix_from_rows, matrix_to_rows, MatrixRows};

use num_complex::Complex64;

/// Pauli X at dimension 2.
pub fn pauli_x() -> HermitianMatrix {
    HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static matrix")
}

/// Pauli Y at dimension 2.
pub fn pauli_y() -> HermitianMatrix {
    HermitianMatrix::from_entries(
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .expect("static matrix")
}

/// Pauli Z at dimension 2.
pub fn pauli_z() -> HermitianMatrix {
    HermitianMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("static matrix")
}
