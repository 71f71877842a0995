//! `qqs prepare` — apply a retardation plate to a state and print the result.
//!
//! Two routes select the plate: the physical route (`--thickness-mm`,
//! `--material`, optional `--tilt-deg`) computes per-mode retardances from
//! dispersion data; the direct route (`--delta1-rad`, `--delta2-rad`) pins
//! the optical thicknesses exactly and bypasses dispersion.

use clap::Parser;
use serde::{Deserialize, Serialize};

use qqs_core::optics::{apply_plate, dichroic_from_deltas, PlateSpec, TiltConfig};
use qqs_core::serial::StateJson;

use super::{emit_primary, parse_material, write_manifest, CmdError, CmdResult, Common};
use crate::selector::parse_state;

pub const COMMAND: &str = "prepare";

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,

    /// Input state: `BASIS:INDEX`, `bell:KIND`, `@state.json`, or `-`.
    #[arg(long)]
    pub input_state: String,

    /// Plate orientation from vertical, degrees.
    #[arg(long, default_value_t = 45.0)]
    pub alpha_deg: f64,

    /// Plate thickness, mm (physical route).
    #[arg(long)]
    pub thickness_mm: Option<f64>,

    /// Plate material for the physical route: `quartz` or `const:<n_o>,<n_e>`.
    #[arg(long, default_value = "quartz")]
    pub material: String,

    /// Tilt angle, degrees (physical route).
    #[arg(long, default_value_t = 0.0)]
    pub tilt_deg: f64,

    /// Refraction index for the tilt model; defaults to the material mean.
    #[arg(long)]
    pub n_eff: Option<f64>,

    /// Optical thickness at λ₁ in radians (direct route).
    #[arg(long, requires = "delta2_rad", conflicts_with = "thickness_mm")]
    pub delta1_rad: Option<f64>,

    /// Optical thickness at λ₂ in radians (direct route).
    #[arg(long, requires = "delta1_rad", conflicts_with = "thickness_mm")]
    pub delta2_rad: Option<f64>,
}

pub fn run(args: &Args) -> CmdResult {
    let state = parse_state(&args.input_state)?;
    let out_state = match (args.delta1_rad, args.delta2_rad, args.thickness_mm) {
        (Some(d1), Some(d2), None) => {
            if args.tilt_deg != 0.0 {
                return Err(CmdError::Usage(
                    "tilt applies to the physical route; drop --tilt-deg or use --thickness-mm"
                        .into(),
                ));
            }
            state.transformed(&dichroic_from_deltas(d1, d2, args.alpha_deg))
        }
        (None, None, Some(h)) => {
            let dispersion = parse_material(&args.material)?;
            let modes = state.modes();
            let tilt = if args.tilt_deg != 0.0 {
                let n_eff = match args.n_eff {
                    Some(n) => n,
                    None => dispersion.mean_index(modes.lambda1_nm(), modes.lambda2_nm())?,
                };
                Some(TiltConfig::new(args.tilt_deg, n_eff)?)
            } else {
                None
            };
            let spec = PlateSpec::new(h, args.alpha_deg, dispersion)?;
            apply_plate(&spec, tilt.as_ref(), &state)?
        }
        _ => {
            return Err(CmdError::Usage(
                "select a plate: either --thickness-mm (physical) or --delta1-rad with --delta2-rad (direct)"
                    .into(),
            ))
        }
    };
    let mut json = serde_json::to_string_pretty(&StateJson::from(&out_state))?;
    json.push('\n');
    let outputs = emit_primary(&args.common, &json)?;
    write_manifest(&args.common, COMMAND, args, &outputs)
}
