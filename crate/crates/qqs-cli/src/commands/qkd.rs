//! `qqs qkd` — run a simulated QKD session, optionally with an eavesdropper.

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serde::{Deserialize, Serialize};

use qqs_core::detection::NoiseModel;
use qqs_core::qkd::{intercept_resend, run_session, SessionConfig};

use super::{emit_primary, parse_bases, write_manifest, CmdError, CmdResult, Common};

pub const COMMAND: &str = "qkd";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EveMode {
    None,
    Intercept,
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,

    /// Number of protocol rounds.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,

    /// Bases both parties use, e.g. `I,II,III`.
    #[arg(long, default_value = "I,II,III")]
    pub bases: String,

    /// Isotropic channel depolarization in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub depolarization: f64,

    /// Eavesdropper model.
    #[arg(long, value_enum, default_value_t = EveMode::None)]
    pub eve: EveMode,

    /// Bases Eve measures in (intercept mode), e.g. `I` or `I,II,III`.
    #[arg(long, default_value = "I,II,III")]
    pub eve_bases: String,

    /// Write one SessionRecord JSON object per line to this path.
    #[arg(long)]
    pub records_out: Option<PathBuf>,
}

pub fn run(args: &Args) -> CmdResult {
    if !(0.0..=1.0).contains(&args.depolarization) {
        return Err(CmdError::Usage("depolarization must lie in [0, 1]".into()));
    }
    let bases = parse_bases(&args.bases)?;
    let mut noise = NoiseModel::ideal(1.0);
    noise.depolarization = args.depolarization;
    let cfg = SessionConfig::new(args.rounds, bases, noise, args.common.seed)?;

    let (records, summary) = match args.eve {
        EveMode::None => run_session(&cfg)?,
        EveMode::Intercept => {
            let eve_bases = parse_bases(&args.eve_bases)?;
            intercept_resend(&cfg, &eve_bases)?
        }
    };

    let mut outputs = Vec::new();
    if let Some(path) = &args.records_out {
        let mut buf = Vec::new();
        for r in &records {
            serde_json::to_writer(&mut buf, r)?;
            buf.push(b'\n');
        }
        std::fs::File::create(path)?.write_all(&buf)?;
        outputs.push(path.clone());
    }

    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    outputs.extend(emit_primary(&args.common, &json)?);
    write_manifest(&args.common, COMMAND, args, &outputs)
}
