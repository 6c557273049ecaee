//! Serializable single-run reports: the JSON artifact one estimator run
//! produces, shared by the command-line tools and their tests.
//!
//! Every report carries the estimate itself, its spectrum, and the
//! smallest-credible-probability diagnostic `1/(N+d)`: eigenvalues below
//! that scale claim more certainty than `N` samples can support. The
//! method-specific sections expose each estimator's own health indicators.

use serde::Serialize;

use crate::bayes::{error_bars, p_min_diagnostic, PosteriorSummary};
use crate::error::Result;
use crate::mle::MleEstimate;
use crate::qmath::{DensityMatrix, HermitianMatrix};
use crate::tomography::TomoEstimate;

/// Complex matrix in JSON form: row-major `[re, im]` entry pairs.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &HermitianMatrix) -> Self {
        let dim = m.dim();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let e = m.entry(i, j);
                        [e.re, e.im]
                    })
                    .collect()
            })
            .collect();
        Self { dim, rows }
    }
}

/// Linear-inversion extras.
#[derive(Clone, Debug, Serialize)]
pub struct TomoSection {
    /// Norm of the frequency-fit residual (0 for exact-fit records).
    pub residual: f64,
    pub is_positive: bool,
    pub negative_eigenvalue_count: usize,
}

/// Likelihood-maximizer extras.
#[derive(Clone, Debug, Serialize)]
pub struct MleSection {
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    pub rank_deficient: bool,
    pub zero_eigenvalue_count: usize,
    pub degenerate_maximum: bool,
}

/// One eigenvalue of the posterior mean with its posterior variance and
/// the spread bound `lambda (1 - lambda)` that variance must respect.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenvalueBar {
    pub eigenvalue: f64,
    pub variance: f64,
    pub bound: f64,
}

/// Posterior-mean extras.
#[derive(Clone, Debug, Serialize)]
pub struct BmeSection {
    pub acceptance_rate: f64,
    pub final_step: f64,
    pub samples_used: usize,
    /// Coordinate covariance, row-major real entries.
    pub covariance: Vec<Vec<f64>>,
    pub chain_disagreement: f64,
    pub split_disagreement: f64,
    pub per_chain_acceptance: Vec<f64>,
    /// Ascending eigenvalues of the mean with marginal variances.
    pub eigenvalue_bars: Vec<EigenvalueBar>,
}

/// Everything one estimation run reports.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub method: String,
    pub dim: usize,
    pub total_counts: u64,
    pub estimate: MatrixJson,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// `1/(N+d)`: the smallest outcome probability the record can
    /// credibly resolve.
    pub p_min: f64,
    /// Whether the spectrum stays at or above that scale; linear
    /// inversion and boundary-seeking maximizers routinely fail this.
    pub min_eigenvalue_above_p_min: bool,
    pub tomo: Option<TomoSection>,
    pub mle: Option<MleSection>,
    pub bme: Option<BmeSection>,
}

fn base_report(method: &str, state: &DensityMatrix, total_counts: u64) -> EstimateReport {
    let eigenvalues = state.eigenvalues();
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(f64::NAN);
    let p_min = p_min_diagnostic(total_counts, state.dim());
    EstimateReport {
        method: method.to_string(),
        dim: state.dim(),
        total_counts,
        estimate: MatrixJson::from_matrix(state.matrix()),
        min_eigenvalue,
        p_min,
        min_eigenvalue_above_p_min: min_eigenvalue >= p_min,
        eigenvalues,
        tomo: None,
        mle: None,
        bme: None,
    }
}

pub fn tomo_report(estimate: &TomoEstimate, total_counts: u64) -> EstimateReport {
    let mut report = base_report("tomo", &estimate.state, total_counts);
    report.tomo = Some(TomoSection {
        residual: estimate.residual,
        is_positive: estimate.is_positive,
        negative_eigenvalue_count: estimate.negative_eigenvalue_count,
    });
    report
}

pub fn mle_report(estimate: &MleEstimate, total_counts: u64) -> EstimateReport {
    let mut report = base_report("mle", &estimate.state, total_counts);
    report.mle = Some(MleSection {
        log_likelihood: estimate.log_likelihood,
        iterations: estimate.iterations,
        converged: estimate.converged,
        rank_deficient: estimate.rank_deficient,
        zero_eigenvalue_count: estimate.zero_eigenvalue_count,
        degenerate_maximum: estimate.degenerate_maximum,
    });
    report
}

pub fn bme_report(summary: &PosteriorSummary, total_counts: u64) -> Result<EstimateReport> {
    let mut report = base_report("bme", &summary.mean, total_counts);
    let eig = summary.mean.matrix().eigendecomposition();
    let mut eigenvalue_bars = Vec::with_capacity(eig.values.len());
    for (k, &eigenvalue) in eig.values.iter().enumerate() {
        let bars = error_bars(summary, &eig.projector(k))?;
        eigenvalue_bars.push(EigenvalueBar {
            eigenvalue,
            variance: bars.variance,
            bound: eigenvalue * (1.0 - eigenvalue),
        });
    }
    let cov = summary.covariance.matrix();
    let covariance = (0..cov.nrows())
        .map(|i| (0..cov.ncols()).map(|j| cov[(i, j)]).collect())
        .collect();
    report.bme = Some(BmeSection {
        acceptance_rate: summary.acceptance_rate,
        final_step: summary.final_step,
        samples_used: summary.samples_used,
        covariance,
        chain_disagreement: summary.chain_diagnostics.disagreement,
        split_disagreement: summary.chain_diagnostics.split_disagreement,
        per_chain_acceptance: summary.chain_diagnostics.per_chain_acceptance.clone(),
        eigenvalue_bars,
    });
    Ok(report)
}

/// Pretty JSON with a trailing newline, ready to write to a file.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}
