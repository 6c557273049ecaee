//! Run manifests: a sidecar JSON written next to every output file that
//! records the command, its full configuration, the seed, the tool
//! version, and a SHA-256 digest of each payload.
//!
//! The digests cover payload bytes only — the manifest's own timestamp
//! stays outside the hashed material — so re-running the recorded command
//! reproduces every payload bit-for-bit and the digests prove it.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct OutputDigest {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    config: &'a serde_json::Value,
    seed: Option<u64>,
    version: &'a str,
    /// Wall-clock seconds when the manifest was written; informational
    /// only, excluded from all digests.
    created_unix: u64,
    outputs: Vec<OutputDigest>,
}

fn sha256_hex(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

/// Path of the manifest that describes `primary`.
pub fn manifest_path(primary: &Path) -> PathBuf {
    let mut name = primary
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    name.push_str(".manifest.json");
    primary.with_file_name(name)
}

/// Write every `(path, payload)` pair plus one manifest next to the first
/// path. Payloads are written exactly as given.
pub fn write_outputs(
    command: &str,
    config: &serde_json::Value,
    seed: Option<u64>,
    files: &[(PathBuf, String)],
) -> Result<()> {
    let mut outputs = Vec::with_capacity(files.len());
    for (path, payload) in files {
        fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?;
        outputs.push(OutputDigest {
            file: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            sha256: sha256_hex(payload),
        });
    }
    let (first, _) = files.first().context("no output files to write")?;
    let manifest = RunManifest {
        command,
        config,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        created_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        outputs,
    };
    let path = manifest_path(first);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
