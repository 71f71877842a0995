//! `qqs replay` — re-run a stored manifest; outputs reproduce byte-for-byte.

use std::path::PathBuf;

use clap::Parser;

use super::{prepare, qkd, scan_tilt, stokes, tomography, CmdError, CmdResult};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Parser)]
pub struct Args {
    /// Path of a manifest written by a previous run.
    pub manifest: PathBuf,
}

pub fn run(args: &Args) -> CmdResult {
    let manifest = RunManifest::load(&args.manifest)
        .map_err(|e| CmdError::Domain(format!("cannot load manifest: {e}")))?;
    let params = manifest.params.clone();
    match manifest.command.as_str() {
        scan_tilt::COMMAND => scan_tilt::run(&from_params(params)?),
        tomography::COMMAND => tomography::run(&from_params(params)?),
        qkd::COMMAND => qkd::run(&from_params(params)?),
        stokes::COMMAND => stokes::run(&from_params(params)?),
        prepare::COMMAND => prepare::run(&from_params(params)?),
        other => Err(CmdError::Usage(format!(
            "manifest names unknown command '{other}'"
        ))),
    }
}

fn from_params<T: serde::de::DeserializeOwned>(params: serde_json::Value) -> Result<T, CmdError> {
    serde_json::from_value(params)
        .map_err(|e| CmdError::Usage(format!("manifest parameters do not match command: {e}")))
}
