//! `qqs tomography` — simulate a 16-setting acquisition and reconstruct.

use clap::Parser;
use serde::{Deserialize, Serialize};

use qqs_core::detection::{
    reconstruct, simulate_tomography, tomography_settings, CountChannel, NoiseModel,
};
use qqs_core::serial::DensityJson;
use qqs_core::states::fidelity;
use qqs_core::Density;

use super::{emit_primary, write_manifest, CmdError, CmdResult, Common};
use crate::selector::{parse_target, Target};

pub const COMMAND: &str = "tomography";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    /// Deterministic expected counts.
    Expected,
    /// Poisson-sampled counts.
    Poisson,
}

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,

    /// Target state: `BASIS:INDEX`, `bell:KIND`, `@state.json`, or `mixed`.
    #[arg(long)]
    pub target: String,

    /// Isotropic depolarization applied before measurement, in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub depolarization: f64,

    /// Expected pair count per setting.
    #[arg(long, default_value_t = 1.0e6)]
    pub pairs: f64,

    /// Accidental counts per setting.
    #[arg(long, default_value_t = 0.0)]
    pub accidentals: f64,

    /// Count generation mode.
    #[arg(long, value_enum, default_value_t = Channel::Expected)]
    pub channel: Channel,
}

#[derive(Debug, Serialize)]
struct RecordReport {
    setting: usize,
    label: String,
    expected_rate: f64,
    counts: u64,
}

#[derive(Debug, Serialize)]
struct Report {
    target: String,
    channel: Channel,
    pairs: f64,
    depolarization: f64,
    records: Vec<RecordReport>,
    rho: DensityJson,
    diagonals: [f64; 4],
    fidelity: f64,
}

pub fn run(args: &Args) -> CmdResult {
    if !(0.0..=1.0).contains(&args.depolarization) {
        return Err(CmdError::Usage("depolarization must lie in [0, 1]".into()));
    }
    if !(args.pairs > 0.0) {
        return Err(CmdError::Usage("pairs must be positive".into()));
    }
    let target_rho: Density = match parse_target(&args.target)? {
        Target::Pure(state) => state.pure_density(),
        Target::Mixed => Density::maximally_mixed(),
    };
    let time = qqs_core::detection::DEFAULT_ACQUISITION_S;
    let mut noise = NoiseModel::ideal(args.pairs / time);
    noise.accidental_rate = args.accidentals / time;
    noise.depolarization = args.depolarization;
    let channel = match args.channel {
        Channel::Expected => CountChannel::Expected,
        Channel::Poisson => CountChannel::Poisson,
    };
    let records = simulate_tomography(&target_rho, &noise, time, args.common.seed, channel)?;
    let rho = reconstruct(&records)?;
    let f = fidelity(&target_rho, &rho)?;

    let settings = tomography_settings::<f64>();
    let report = Report {
        target: args.target.clone(),
        channel: args.channel,
        pairs: args.pairs,
        depolarization: args.depolarization,
        records: records
            .iter()
            .map(|r| RecordReport {
                setting: r.setting_index,
                label: format!(
                    "{:?}{:?}",
                    settings[r.setting_index].label.0, settings[r.setting_index].label.1
                ),
                expected_rate: r.expected_rate,
                counts: r.counts,
            })
            .collect(),
        rho: DensityJson::from(&rho),
        diagonals: rho.diagonals(),
        fidelity: f,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    let outputs = emit_primary(&args.common, &json)?;
    write_manifest(&args.common, COMMAND, args, &outputs)
}
