//! Sidecar describing how an output directory was produced.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::Failure;

pub const FILE_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Canonical arguments; `ggbayes <args> --out DIR` reproduces the run.
    pub args: Vec<String>,
    /// Dataset path or builtin id, when the command reads data.
    pub input: Option<String>,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub started_unix: u64,
    pub finished_unix: u64,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let m: RunManifest = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("{} is not a run manifest: {e}", path.display())))?;
        if m.tool != "ggbayes" {
            return Err(Failure::Usage(format!("{} was written by '{}'", path.display(), m.tool)));
        }
        Ok(m)
    }
}
