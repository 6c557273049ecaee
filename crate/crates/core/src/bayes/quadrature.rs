//! Deterministic quadrature oracle for the qubit posterior mean under the
//! flat (Hilbert-Schmidt) prior, which is Lebesgue measure on the Bloch
//! ball. The sampler is validated against this independent computation.
//!
//! The integral runs over spherical coordinates with midpoint boxes:
//! `resolution` radial cells and `2 * resolution` cells in each angle, so
//! the cell count exceeds `resolution^3` eightfold. Midpoint quadrature on
//! this smooth integrand (the boundary lies exactly at the last radial
//! cell edge) converges at second order: doubling the resolution cuts the
//! self-difference about fourfold.

use crate::error::{Error, Result};
use crate::measurement::MeasurementRecord;
use crate::mle::CountedOutcomes;
use crate::qmath::{DensityMatrix, HsBasis};

use super::{PriorKind, PriorSpec};

/// Posterior-mean state of a single-qubit record under the flat prior,
/// computed by fixed-grid quadrature over the Bloch ball. Deterministic:
/// same record and resolution, same result, bit for bit.
///
/// Only `dim = 2` with the `Induced(k = 2)` prior is supported — this is
/// an oracle, not an estimator; higher dimensions would need `d^2 - 1`
/// nested integrals.
pub fn bme_quadrature_oracle(
    record: &MeasurementRecord,
    prior: &PriorSpec,
    grid_resolution: usize,
) -> Result<DensityMatrix> {
    match prior.kind() {
        PriorKind::Induced { ancilla_dim: 2 } if prior.dim() == 2 => {}
        PriorKind::Induced { .. } => {
            return Err(Error::UnsupportedPrior {
                reason: "the quadrature oracle integrates the flat measure only \
                         (induced prior with ancilla dimension 2)"
                    .into(),
            });
        }
        _ => {
            return Err(Error::UnsupportedPrior {
                reason: "the quadrature oracle supports only the induced flat prior".into(),
            });
        }
    }
    if record.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: record.dim(),
        });
    }
    if grid_resolution == 0 {
        return Err(Error::InvalidConfig {
            reason: "grid_resolution must be at least 1".into(),
        });
    }

    // Flatten the likelihood into per-outcome linear forms
    // p = offset + gx*x + gy*y + gz*z over Bloch coordinates.
    let basis = HsBasis::new(2);
    let outcomes = CountedOutcomes::from_record(record, &basis);
    let coeffs: Vec<[f64; 5]> = outcomes
        .rows
        .iter()
        .zip(&outcomes.offsets)
        .zip(&outcomes.counts)
        .map(|((row, &off), &count)| [off, row[0], row[1], row[2], count])
        .collect();

    let radial = grid_resolution;
    let polar = 2 * grid_resolution;
    let azimuth = 2 * grid_resolution;
    let azimuth_angles: Vec<(f64, f64)> = (0..azimuth)
        .map(|l| {
            let phi = (l as f64 + 0.5) * std::f64::consts::TAU / azimuth as f64;
            phi.sin_cos()
        })
        .collect();

    // Streaming log-sum-exp: accumulators hold sums of
    // exp(ll - max_ll) * jacobian, rescaled whenever a larger ll appears.
    let mut max_ll = f64::NEG_INFINITY;
    let mut w_total = 0.0;
    let mut wx = 0.0;
    let mut wy = 0.0;
    let mut wz = 0.0;

    for ir in 0..radial {
        let r = (ir as f64 + 0.5) / radial as f64;
        let r_squared = r * r;
        for ip in 0..polar {
            let theta = (ip as f64 + 0.5) * std::f64::consts::PI / polar as f64;
            let (sin_theta, cos_theta) = theta.sin_cos();
            let z = r * cos_theta;
            let r_xy = r * sin_theta;
            let jacobian = r_squared * sin_theta;
            for &(sin_phi, cos_phi) in &azimuth_angles {
                let x = r_xy * cos_phi;
                let y = r_xy * sin_phi;
                let mut ll = 0.0;
                let mut dead = false;
                for &[off, gx, gy, gz, count] in &coeffs {
                    let p = off + gx * x + gy * y + gz * z;
                    if p <= 0.0 {
                        dead = true;
                        break;
                    }
                    ll += count * p.ln();
                }
                if dead {
                    continue;
                }
                if ll > max_ll {
                    let scale = (max_ll - ll).exp();
                    w_total *= scale;
                    wx *= scale;
                    wy *= scale;
                    wz *= scale;
                    max_ll = ll;
                }
                let w = (ll - max_ll).exp() * jacobian;
                w_total += w;
                wx += w * x;
                wy += w * y;
                wz += w * z;
            }
        }
    }

    if w_total <= 0.0 {
        return Err(Error::PriorAnnihilated {
            reason: "the record has zero likelihood everywhere on the Bloch ball".into(),
        });
    }
    Ok(DensityMatrix::from_bloch(
        wx / w_total,
        wy / w_total,
        wz / w_total,
    ))
}
