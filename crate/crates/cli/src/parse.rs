//! Parsers for the little command-line spec languages: states, POVM sets,
//! priors, divergences, and record sources.

use std::fs;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use qest_core::bayes::PriorSpec;
use qest_core::divergence::DivergenceKind;
use qest_core::measurement::{MeasurementRecord, Povm};
use qest_core::qmath::{matrix_from_rows, DensityMatrix, MatrixRows, PureState};

/// Records that ship with the binary, loadable as `fixture:<name>`.
///
/// - `corner-xyz`: one shot each on the x and z axes (both `+`) with a
///   balanced two-shot y group; its linear inversion lands outside the
///   state set at Bloch point (1, 0, 1).
/// - `xz-14-2`: 14-vs-2 counts on the x and z axes with a balanced y
///   group; inversion gives Bloch point (3/4, 0, 3/4), again non-positive.
pub const FIXTURES: &[(&str, &str)] = &[
    (
        "corner-xyz",
        include_str!("../fixtures/corner-xyz.record.json"),
    ),
    ("xz-14-2", include_str!("../fixtures/xz-14-2.record.json")),
];

/// Load a record from `fixture:<name>` or a JSON file path.
pub fn record(source: &str) -> Result<MeasurementRecord> {
    let text = if let Some(name) = source.strip_prefix("fixture:") {
        FIXTURES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| text.to_string())
            .with_context(|| {
                let names: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
                format!("unknown fixture {name:?}; available: {}", names.join(", "))
            })?
    } else {
        fs::read_to_string(source).with_context(|| format!("reading record file {source}"))?
    };
    Ok(MeasurementRecord::from_json(&text)?)
}

/// Parse a state spec:
/// `pure:<i>` | `mixed[:<dim>]` | `bloch:<x>,<y>,<z>` | `tilted-xz` |
/// `file:<path>` (nested `[re, im]` rows).
pub fn state(spec: &str) -> Result<DensityMatrix> {
    if let Some(index) = spec.strip_prefix("pure:") {
        let index: usize = index.parse().context("pure:<i> needs an integer index")?;
        return Ok(PureState::basis_state((index + 1).max(2), index).projector());
    }
    if spec == "mixed" {
        return Ok(DensityMatrix::maximally_mixed(2));
    }
    if let Some(dim) = spec.strip_prefix("mixed:") {
        let dim: usize = dim.parse().context("mixed:<dim> needs an integer")?;
        if dim < 2 {
            bail!("mixed:<dim> needs dim >= 2");
        }
        return Ok(DensityMatrix::maximally_mixed(dim));
    }
    if let Some(coords) = spec.strip_prefix("bloch:") {
        let parts: Vec<&str> = coords.split(',').collect();
        if parts.len() != 3 {
            bail!("bloch:<x>,<y>,<z> needs exactly three coordinates");
        }
        let mut v = [0.0; 3];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse()
                .with_context(|| format!("bad Bloch coordinate {part:?}"))?;
        }
        let rho = DensityMatrix::from_bloch(v[0], v[1], v[2]);
        if !rho.psd_checked() {
            bail!("bloch coordinates ({},{},{}) lie outside the state set", v[0], v[1], v[2]);
        }
        return Ok(rho);
    }
    if spec == "tilted-xz" {
        // The pure state halfway between the z and x axes: Bloch point
        // (1/sqrt2, 0, 1/sqrt2).
        let c = std::f64::consts::FRAC_1_SQRT_2;
        return Ok(DensityMatrix::from_bloch(c, 0.0, c));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading state file {path}"))?;
        let rows: MatrixRows = serde_json::from_str(&text)
            .with_context(|| format!("state file {path} must hold nested [re, im] rows"))?;
        let matrix = matrix_from_rows(&rows)?;
        return Ok(DensityMatrix::verified(matrix)?);
    }
    bail!(
        "unknown state spec {spec:?}; use pure:<i>, mixed[:<dim>], bloch:<x>,<y>,<z>, \
         tilted-xz, or file:<path>"
    );
}

#[derive(Deserialize)]
struct PovmFileWire {
    povms: Vec<PovmWire>,
}

#[derive(Deserialize)]
struct PovmWire {
    outcomes: Vec<MatrixRows>,
    labels: Vec<String>,
}

/// Parse a POVM-set spec:
/// `pauli-x` | `pauli-y` | `pauli-z` | `pauli-xz` | `pauli-xyz` |
/// `file:<path>`.
pub fn povms(spec: &str) -> Result<Vec<Povm>> {
    match spec {
        "pauli-x" => return Ok(vec![Povm::pauli_x()]),
        "pauli-y" => return Ok(vec![Povm::pauli_y()]),
        "pauli-z" => return Ok(vec![Povm::pauli_z()]),
        "pauli-xz" => return Ok(vec![Povm::pauli_x(), Povm::pauli_z()]),
        "pauli-xyz" => return Ok(vec![Povm::pauli_x(), Povm::pauli_y(), Povm::pauli_z()]),
        _ => {}
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading POVM file {path}"))?;
        let wire: PovmFileWire = serde_json::from_str(&text)
            .with_context(|| format!("POVM file {path} must hold {{\"povms\": [...]}}"))?;
        let mut out = Vec::with_capacity(wire.povms.len());
        for povm in wire.povms {
            let mut outcomes = Vec::with_capacity(povm.outcomes.len());
            for rows in &povm.outcomes {
                outcomes.push(matrix_from_rows(rows)?);
            }
            out.push(Povm::new(outcomes, povm.labels)?);
        }
        if out.is_empty() {
            bail!("POVM file {path} lists no POVMs");
        }
        return Ok(out);
    }
    bail!(
        "unknown POVM spec {spec:?}; use pauli-x, pauli-y, pauli-z, pauli-xz, pauli-xyz, \
         or file:<path>"
    );
}

/// Parse a prior spec for states of dimension `dim`:
/// `hs` | `haar` | `induced:<k>` | `bernoulli` | `equator` |
/// `coin-endpoints`.
pub fn prior(spec: &str, dim: usize) -> Result<PriorSpec> {
    let qubit_only = |name: &str| -> Result<()> {
        if dim != 2 {
            bail!("prior {name} is defined for dimension 2, not {dim}");
        }
        Ok(())
    };
    match spec {
        "hs" => Ok(PriorSpec::hilbert_schmidt(dim)?),
        "haar" => Ok(PriorSpec::haar(dim)?),
        "bernoulli" => {
            qubit_only("bernoulli")?;
            Ok(PriorSpec::bernoulli_uniform())
        }
        "equator" => {
            qubit_only("equator")?;
            Ok(PriorSpec::bloch_great_circle())
        }
        "coin-endpoints" => {
            qubit_only("coin-endpoints")?;
            Ok(PriorSpec::finite_support(
                vec![
                    PureState::basis_state(2, 0).projector(),
                    PureState::basis_state(2, 1).projector(),
                ],
                vec![0.5, 0.5],
            )?)
        }
        _ => {
            if let Some(k) = spec.strip_prefix("induced:") {
                let k: usize = k.parse().context("induced:<k> needs an integer")?;
                return Ok(PriorSpec::induced(dim, k)?);
            }
            bail!(
                "unknown prior spec {spec:?}; use hs, haar, induced:<k>, bernoulli, \
                 equator, or coin-endpoints"
            );
        }
    }
}

/// Parse a divergence spec: `hs` | `kl` | `kl:<floor>`.
pub fn divergence_kind(spec: &str) -> Result<DivergenceKind> {
    match spec {
        "hs" => return Ok(DivergenceKind::HilbertSchmidt),
        "kl" => return Ok(DivergenceKind::kullback_leibler()),
        _ => {}
    }
    if let Some(floor) = spec.strip_prefix("kl:") {
        let log_floor: f64 = floor.parse().context("kl:<floor> needs a number")?;
        return Ok(DivergenceKind::KullbackLeibler { log_floor });
    }
    bail!("unknown divergence spec {spec:?}; use hs, kl, or kl:<floor>");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_into_the_described_records() {
        let corner = record("fixture:corner-xyz").unwrap();
        assert_eq!(corner.dim(), 2);
        assert_eq!(corner.total_counts(), 4);
        assert_eq!(corner.groups().len(), 3);

        let tilted = record("fixture:xz-14-2").unwrap();
        assert_eq!(tilted.total_counts(), 34);
        assert_eq!(tilted.groups().len(), 3);
    }

    #[test]
    fn state_specs_cover_the_catalog() {
        assert_eq!(state("pure:0").unwrap().dim(), 2);
        assert_eq!(state("pure:2").unwrap().dim(), 3);
        assert_eq!(state("mixed:4").unwrap().dim(), 4);
        let tilted = state("tilted-xz").unwrap();
        let c = std::f64::consts::FRAC_1_SQRT_2;
        assert!((tilted.expectation(&qest_core::qmath::pauli_x()) - c).abs() < 1e-12);
        assert!(state("bloch:0.1,0.2,0.3").unwrap().min_eigenvalue() > 0.0);
        assert!(state("bloch:2,0,0").is_err());
        assert!(state("nonsense").is_err());
    }

    #[test]
    fn povm_specs_cover_the_catalog() {
        assert_eq!(povms("pauli-z").unwrap().len(), 1);
        assert_eq!(povms("pauli-xz").unwrap().len(), 2);
        assert_eq!(povms("pauli-xyz").unwrap().len(), 3);
        assert!(povms("pauli-w").is_err());
    }

    #[test]
    fn prior_specs_cover_the_catalog() {
        assert!(prior("hs", 2).is_ok());
        assert!(prior("haar", 3).is_ok());
        assert!(prior("induced:2", 3).is_ok());
        assert!(prior("coin-endpoints", 2).is_ok());
        assert!(prior("bernoulli", 3).is_err());
        assert!(prior("equator", 2).is_ok());
        assert!(prior("wat", 2).is_err());
    }

    #[test]
    fn divergence_specs_cover_the_catalog() {
        assert!(matches!(
            divergence_kind("hs").unwrap(),
            DivergenceKind::HilbertSchmidt
        ));
        assert!(matches!(
            divergence_kind("kl").unwrap(),
            DivergenceKind::KullbackLeibler { .. }
        ));
        match divergence_kind("kl:1e-9").unwrap() {
            DivergenceKind::KullbackLeibler { log_floor } => assert_eq!(log_floor, 1e-9),
            _ => unreachable!(),
        }
        assert!(divergence_kind("l2").is_err());
    }
}
