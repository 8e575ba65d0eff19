//! Run manifests: what was run, with which seed, and what it produced.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::formats::json_pretty;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Running,
    Complete,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDigest {
    /// Relative to the output directory for artifacts; as given for inputs.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub core_version: String,
    pub command: String,
    /// Canonical TOML text of the config; replay parses this.
    pub config: String,
    pub config_sha256: String,
    pub seed: u64,
    /// Stream labels combined with `seed` by this command.
    pub stream_labels: BTreeMap<String, u64>,
    pub threads: Option<usize>,
    pub status: RunStatus,
    pub error: Option<RunError>,
    pub inputs: Vec<FileDigest>,
    pub artifacts: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digest(path: impl Into<String>, bytes: &[u8]) -> FileDigest {
    FileDigest { path: path.into(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 }
}

impl Manifest {
    pub fn path_in(dir: &Path) -> PathBuf {
        dir.join(MANIFEST_FILE)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = Manifest::path_in(dir);
        fs::write(&path, json_pretty(self)?).map_err(|e| CliError::io(&path, e))
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let m: Manifest = serde_json::from_str(&text)?;
        if m.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(CliError::config(format!("manifest schema_version {} is not supported", m.schema_version)));
        }
        if sha256_hex(m.config.as_bytes()) != m.config_sha256 {
            return Err(CliError::config("manifest config does not match its recorded hash"));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
