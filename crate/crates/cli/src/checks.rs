//! Built-in reference checks: recompute the analytic values the library
//! is known to satisfy and report pass/fail per row. No randomness is
//! involved — every input is a fixture or a closed-form call — so a
//! failing row always means a real regression (or a documented known
//! discrepancy), never noise.

use qest_core::bayes::{bme_bernoulli, p_min_diagnostic};
use qest_core::mle::{mle_estimate, MleConfig};
use qest_core::qmath::DensityMatrix;
use qest_core::tomography::{bloch_cube_census, tomographic_estimate};

use crate::parse;

pub struct CheckRow {
    pub name: &'static str,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

/// Recompute all reference rows.
pub fn reference_rows() -> anyhow::Result<Vec<CheckRow>> {
    let mut rows = Vec::new();

    // Eleven shots each of x and z reach a 12x12 grid of inversion
    // points; the quoted reference says 54 of the 144 are non-positive.
    let census = bloch_cube_census(11)?;
    rows.push(CheckRow {
        name: "bloch-cube-11",
        expected: "54 of 144 non-positive".to_string(),
        computed: format!("{} of {} non-positive", census.1, census.0),
        pass: census == (144, 54),
    });

    // One x shot and one z shot (both +) with a balanced y pair invert to
    // the Bloch corner (1, 0, 1): eigenvalues (1 +- sqrt(2))/2.
    let corner = parse::record("fixture:corner-xyz")?;
    let corner_tomo = tomographic_estimate(&corner)?;
    let expected_min = (1.0 - 2.0_f64.sqrt()) / 2.0;
    rows.push(CheckRow {
        name: "corner-min-eigenvalue",
        expected: format!("{expected_min:.12}"),
        computed: format!("{:.12}", corner_tomo.state.min_eigenvalue()),
        pass: (corner_tomo.state.min_eigenvalue() - expected_min).abs() < 1e-12,
    });

    // 14-vs-2 counts on x and z invert to Bloch point (3/4, 0, 3/4).
    let tilted = parse::record("fixture:xz-14-2")?;
    let tilted_tomo = tomographic_estimate(&tilted)?;
    let x = tilted_tomo.state.expectation(&qest_core::qmath::pauli_x());
    let y = tilted_tomo.state.expectation(&qest_core::qmath::pauli_y());
    let z = tilted_tomo.state.expectation(&qest_core::qmath::pauli_z());
    rows.push(CheckRow {
        name: "tilted-inversion",
        expected: "bloch (0.75, 0, 0.75)".to_string(),
        computed: format!("bloch ({x:.10}, {y:.10}, {z:.10})"),
        pass: (x - 0.75).abs() < 1e-10 && y.abs() < 1e-10 && (z - 0.75).abs() < 1e-10,
    });

    // The constrained maximizer for the same record is the boundary state
    // at Bloch point (1/sqrt2, 0, 1/sqrt2).
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let target = DensityMatrix::from_bloch(c, 0.0, c);
    let mle = mle_estimate(&tilted, &MleConfig::default())?;
    let distance = mle.state.trace_distance(&target);
    rows.push(CheckRow {
        name: "tilted-max-likelihood",
        expected: "boundary state at bloch (0.7071, 0, 0.7071), rank-deficient".to_string(),
        computed: format!(
            "trace distance {distance:.2e}, rank-deficient = {}",
            mle.rank_deficient
        ),
        pass: distance < 1e-6 && mle.rank_deficient,
    });

    // Coin posterior means: no data -> 1/2; one flip, one head -> 2/3.
    let no_flips = bme_bernoulli(0, 0)?;
    rows.push(CheckRow {
        name: "coin-no-flips",
        expected: "0.5".to_string(),
        computed: format!("{}", no_flips.estimate),
        pass: no_flips.estimate == 0.5,
    });
    let one_flip = bme_bernoulli(1, 1)?;
    rows.push(CheckRow {
        name: "coin-one-flip",
        expected: format!("{}", 2.0 / 3.0),
        computed: format!("{}", one_flip.estimate),
        pass: (one_flip.estimate - 2.0 / 3.0).abs() < 1e-15,
    });

    // Smallest credible probability after two rolls of a 100-sided die.
    let p_min = p_min_diagnostic(2, 100);
    rows.push(CheckRow {
        name: "die-p-min",
        expected: format!("{}", 1.0 / 102.0),
        computed: format!("{p_min}"),
        pass: p_min == 1.0 / 102.0,
    });

    Ok(rows)
}

/// Print the table; true when every row passed.
pub fn print_rows(rows: &[CheckRow]) -> bool {
    let mut all_pass = true;
    for row in rows {
        let status = if row.pass { "PASS" } else { "FAIL" };
        println!(
            "{}: expected {}, computed {}, {status}",
            row.name, row.expected, row.computed
        );
        all_pass &= row.pass;
    }
    all_pass
}
