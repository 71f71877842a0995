//! Subcommand implementations.

pub mod prepare;
pub mod qkd;
pub mod replay;
pub mod scan_tilt;
pub mod stokes;
pub mod tomography;

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::manifest::RunManifest;

/// Command failure, split by exit code: usage errors exit 2, domain errors 1.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Domain(String),
}

impl From<qqs_core::Error> for CmdError {
    fn from(e: qqs_core::Error) -> Self {
        CmdError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Domain(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CmdError {
    fn from(e: serde_json::Error) -> Self {
        CmdError::Domain(format!("json error: {e}"))
    }
}

pub type CmdResult = std::result::Result<(), CmdError>;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, clap::Args, Serialize, Deserialize)]
pub struct Common {
    /// Master seed for all stochastic components.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Write the primary output to this path instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Manifest path; defaults to `<out>.manifest.json` when --out is given.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Writes the primary artifact to --out or stdout; returns the paths written.
pub fn emit_primary(common: &Common, content: &str) -> std::result::Result<Vec<PathBuf>, CmdError> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, content)?;
            Ok(vec![path.clone()])
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
            Ok(vec![])
        }
    }
}

/// Serializes the run manifest next to the outputs. A manifest is written
/// whenever --manifest is given or a primary output path exists.
pub fn write_manifest<A: Serialize>(
    common: &Common,
    command: &str,
    args: &A,
    outputs: &[PathBuf],
) -> CmdResult {
    let path = match (&common.manifest, &common.out) {
        (Some(m), _) => m.clone(),
        (None, Some(out)) => {
            let mut os = out.clone().into_os_string();
            os.push(".manifest.json");
            PathBuf::from(os)
        }
        (None, None) => return Ok(()),
    };
    let manifest = RunManifest::new(command, common.seed, serde_json::to_value(args)?, outputs);
    std::fs::write(&path, manifest.to_json()?)?;
    Ok(())
}

/// Parses a material spec: `quartz` (or any name resolvable through
/// `QQS_DATA_DIR`) or `const:<n_o>,<n_e>`.
pub fn parse_material(
    spec: &str,
) -> std::result::Result<qqs_core::dispersion::Dispersion<f64>, CmdError> {
    if let Some(rest) = spec.strip_prefix("const:") {
        let (no, ne) = rest.split_once(',').ok_or_else(|| {
            CmdError::Usage(format!(
                "bad constant material '{spec}', expected const:<n_o>,<n_e>"
            ))
        })?;
        let n_o: f64 = no
            .trim()
            .parse()
            .map_err(|_| CmdError::Usage(format!("bad n_o in '{spec}'")))?;
        let n_e: f64 = ne
            .trim()
            .parse()
            .map_err(|_| CmdError::Usage(format!("bad n_e in '{spec}'")))?;
        if !(n_o > 1.0) || !(n_e > 1.0) {
            return Err(CmdError::Usage("refractive indices must exceed 1".into()));
        }
        return Ok(qqs_core::dispersion::Dispersion::Constant { n_o, n_e });
    }
    let data_dir = std::env::var_os("QQS_DATA_DIR").map(PathBuf::from);
    let data = qqs_core::dispersion::DispersionData::load(spec, data_dir.as_deref())?;
    Ok(qqs_core::dispersion::Dispersion::Sellmeier(data))
}

/// Parses a comma-separated basis list such as `I,II,III`.
pub fn parse_bases(spec: &str) -> std::result::Result<Vec<qqs_core::states::BasisId>, CmdError> {
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<qqs_core::states::BasisId>()
                .map_err(|e| CmdError::Usage(e.to_string()))
        })
        .collect()
}
