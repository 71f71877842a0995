//! Parsing of state selectors given on the command line.
//!
//! Accepted forms:
//! - `I:3` .. `V:0` — basis and state index
//! - `bell:phi+`, `bell:psi-` — Bell states
//! - `@path.json` — a state JSON file as written by `prepare`
//! - `-` — state JSON on stdin

use std::io::Read;

use qqs_core::serial::StateJson;
use qqs_core::states::{basis_state, bell_state, BasisId, StateId};
use qqs_core::{Modes, Ququart};

use crate::commands::CmdError;

pub fn parse_state(spec: &str) -> Result<Ququart, CmdError> {
    let spec = spec.trim();
    if spec == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CmdError::Domain(format!("cannot read stdin: {e}")))?;
        return from_json(&text);
    }
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CmdError::Domain(format!("cannot read {path}: {e}")))?;
        return from_json(&text);
    }
    if let Some(kind) = spec.strip_prefix("bell:") {
        let kind = kind
            .parse()
            .map_err(|e: qqs_core::Error| CmdError::Usage(e.to_string()))?;
        return Ok(bell_state(kind, Modes::default()));
    }
    if let Some((basis, index)) = spec.split_once(':') {
        let b: BasisId = basis
            .parse()
            .map_err(|e: qqs_core::Error| CmdError::Usage(e.to_string()))?;
        let idx: u8 = index
            .trim()
            .parse()
            .map_err(|_| CmdError::Usage(format!("bad state index '{index}'")))?;
        let s = StateId::new(idx).map_err(|e| CmdError::Usage(e.to_string()))?;
        return Ok(basis_state(b, s, Modes::default()));
    }
    Err(CmdError::Usage(format!(
        "unrecognized state selector '{spec}' (expected BASIS:INDEX, bell:KIND, @file.json, or -)"
    )))
}

fn from_json(text: &str) -> Result<Ququart, CmdError> {
    let parsed: StateJson =
        serde_json::from_str(text).map_err(|e| CmdError::Usage(format!("bad state JSON: {e}")))?;
    parsed.to_state().map_err(CmdError::from)
}

/// Tomography target: a pure state selector or the maximally mixed state.
pub enum Target {
    Pure(Ququart),
    Mixed,
}

pub fn parse_target(spec: &str) -> Result<Target, CmdError> {
    if spec.trim() == "mixed" {
        Ok(Target::Mixed)
    } else {
        parse_state(spec).map(Target::Pure)
    }
}
