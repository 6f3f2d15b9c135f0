use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Provenance record written next to every output.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Option<String>,
    pub config_sha256: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            tool: "bgkmix",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: None,
            config_sha256: None,
            seed: None,
            tolerances: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn with_config(mut self, path: &Path, text: &str) -> Self {
        self.config = Some(path.display().to_string());
        self.config_sha256 = Some(sha256_hex(text.as_bytes()));
        self
    }

    pub fn tolerance(mut self, name: &'static str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialises");
        text.push('\n');
        fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
