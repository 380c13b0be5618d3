use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use ar1_tstat::Ar1Params;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Record of one invocation, written next to its primary output as
/// `<output>.manifest.json`. `args` replays the run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Option<Ar1Params>,
    pub seed: Option<u64>,
    pub replications: Option<usize>,
    pub workers: usize,
    pub tool_version: String,
    pub timestamp: String,
    pub outputs: Vec<PathBuf>,
    pub args: Vec<String>,
}

/// Facts a command reports back for its manifest.
#[derive(Debug, Default)]
pub struct RunRecord {
    pub params: Option<Ar1Params>,
    pub seed: Option<u64>,
    pub replications: Option<usize>,
    pub outputs: Vec<PathBuf>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

impl RunManifest {
    pub fn new(command: &str, args: &[OsString], workers: usize, record: RunRecord) -> Self {
        Self {
            command: command.to_string(),
            params: record.params,
            seed: record.seed,
            replications: record.replications,
            workers,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            outputs: record.outputs,
            args: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        }
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let bytes = crate::output::json_bytes(self)?;
        fs::write(path, bytes).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Manifest {
            path: path.to_path_buf(),
            source,
        })
    }
}
