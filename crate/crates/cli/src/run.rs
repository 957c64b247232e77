//! Run directories: `imfs.csv` plus `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};

use modefir::{Decomposition, DecompositionConfig, IterationReport, Method, Signal, Termination};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::io;

pub const IMFS_FILE: &str = "imfs.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce a decomposition run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub input: PathBuf,
    pub column: Option<usize>,
    pub method: Method,
    /// Configuration after defaulting.
    pub config: DecompositionConfig,
    pub samples: usize,
    pub imf_count: usize,
    pub termination: Termination,
    pub reports: Vec<IterationReport>,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn new(
        input: &Path,
        column: Option<usize>,
        d: &Decomposition,
        wall_time_seconds: f64,
    ) -> Self {
        Self {
            tool: env!("CARGO_BIN_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            input: fs::canonicalize(input).unwrap_or_else(|_| input.to_path_buf()),
            column,
            method: d.method(),
            config: d.config.clone(),
            samples: d.remainder.len(),
            imf_count: d.imfs.len(),
            termination: d.termination,
            reports: d.reports.clone(),
            wall_time_seconds,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::io(path, e))
    }
}

/// Writes `imfs.csv`: columns `imf_1..imf_M,remainder`, one row per sample.
pub fn write_imfs(dir: &Path, d: &Decomposition) -> Result<(), CliError> {
    let mut names: Vec<String> = (1..=d.imfs.len()).map(|i| format!("imf_{i}")).collect();
    names.push("remainder".into());
    let mut columns: Vec<&[f64]> = d.imfs.iter().map(|s| s.samples()).collect();
    columns.push(d.remainder.samples());
    io::write_columns(&dir.join(IMFS_FILE), &names, &columns)
}

/// Loads a run directory back into a decomposition.
///
/// The input is rebuilt as the sum of the stored columns, so it matches the
/// original only to rounding.
pub fn load(dir: &Path) -> Result<(RunManifest, Decomposition), CliError> {
    let manifest = RunManifest::load(&dir.join(MANIFEST_FILE))?;
    let path = dir.join(IMFS_FILE);
    let (names, mut columns) = io::read_columns(&path)?;
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    if names.last().map(String::as_str) != Some("remainder") {
        return Err(bad("last column must be the remainder".into()));
    }
    if columns.len() != manifest.imf_count + 1 || manifest.reports.len() != manifest.imf_count {
        return Err(bad(format!(
            "{} IMF columns but the manifest records {}",
            columns.len() - 1,
            manifest.imf_count
        )));
    }
    let remainder = columns.pop().unwrap_or_default();
    let mut input = remainder.clone();
    for col in &columns {
        for (acc, v) in input.iter_mut().zip(col) {
            *acc += v;
        }
    }
    let signal = |v: Vec<f64>| Signal::new(v).map_err(|e| bad(e.to_string()));
    let imfs = columns
        .into_iter()
        .map(signal)
        .collect::<Result<Vec<_>, _>>()?;
    let d = Decomposition::from_parts(
        signal(input)?,
        imfs,
        signal(remainder)?,
        manifest.reports.clone(),
        manifest.termination,
        manifest.config.clone(),
    )
    .map_err(|e| bad(e.to_string()))?;
    Ok((manifest, d))
}
