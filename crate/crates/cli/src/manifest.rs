//! Run manifests: every command that writes files also records what it ran
//! with and which outputs it produced, next to the primary output.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::formats::{write_output, FormatError};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub artifact_version: &'static str,
    pub command: String,
    /// FNV-1a hash of the full command configuration.
    pub config_hash: String,
    pub master_seed: u64,
    pub outputs: Vec<String>,
}

/// FNV-1a over the canonical textual form of the inputs.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

pub fn manifest_path(primary_output: &Path) -> PathBuf {
    let name = primary_output.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    primary_output.with_file_name(format!("{name}.manifest.json"))
}

/// Write a manifest describing `outputs` next to the first output.
pub fn write_manifest(
    command: &str,
    config_text: &str,
    master_seed: u64,
    outputs: &[&Path],
    force: bool,
) -> Result<(), FormatError> {
    let primary = match outputs.first() {
        Some(p) => *p,
        None => return Ok(()),
    };
    let manifest = RunManifest {
        schema_version: crate::config::SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        config_hash: format!("{:016x}", fnv1a(config_text.as_bytes())),
        master_seed,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| FormatError::Domain(e.to_string()))?;
    write_output(&manifest_path(primary), &format!("{json}\n"), force)
}
