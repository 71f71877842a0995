//! `qqs stokes` — averaged Stokes parameters and polarization degree.

use clap::Parser;
use serde::{Deserialize, Serialize};

use qqs_core::polarimetry::{polarization_degree_p4, stokes};

use super::{emit_primary, write_manifest, CmdResult, Common};
use crate::numfmt::g9;
use crate::selector::parse_state;

pub const COMMAND: &str = "stokes";

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,

    /// Input state: `BASIS:INDEX`, `bell:KIND`, `@state.json`, or `-`.
    #[arg(long)]
    pub input_state: String,
}

pub fn run(args: &Args) -> CmdResult {
    let state = parse_state(&args.input_state)?;
    let s = stokes(&state)?;
    let p4 = polarization_degree_p4(&state)?;
    let csv = format!(
        "s0,s1,s2,s3,p4\n{},{},{},{},{}\n",
        g9(s.s0),
        g9(s.s1),
        g9(s.s2),
        g9(s.s3),
        g9(p4)
    );
    let outputs = emit_primary(&args.common, &csv)?;
    write_manifest(&args.common, COMMAND, args, &outputs)
}
