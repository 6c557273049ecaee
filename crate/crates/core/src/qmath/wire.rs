//! Interchange representation for complex matrices: row-major nested arrays
//! of `[re, im]` pairs, as used by every JSON format in the workspace.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::matrix::HermitianMatrix;

/// Row-major complex matrix for serialization: `rows[i][j] = [re, im]`.
pub type MatrixRows = Vec<Vec<[f64; 2]>>;

/// Serialize a Hermitian matrix to nested `[re, im]` rows.
pub fn matrix_to_rows(m: &HermitianMatrix) -> MatrixRows {
    let dim = m.dim();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let e = m.entry(i, j);
                    [e.re, e.im]
                })
                .collect()
        })
        .collect()
}

/// Parse nested `[re, im]` rows into a validated Hermitian matrix.
pub fn matrix_from_rows(rows: &MatrixRows) -> Result<HermitianMatrix> {
    let dim = rows.len();
    if dim == 0 {
        return Err(Error::Schema {
            reason: "empty operator matrix".into(),
        });
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        if row.len() != dim {
            return Err(Error::Schema {
                reason: format!(
                    "ragged operator matrix: row of length {} in a {dim}-row matrix",
                    row.len()
                ),
            });
        }
        for &[re, im] in row {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::Schema {
                    reason: "non-finite operator entry".into(),
                });
            }
            entries.push(Complex64::new(re, im));
        }
    }
    HermitianMatrix::from_entries(dim, &entries)
}
