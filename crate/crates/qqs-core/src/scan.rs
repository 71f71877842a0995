//! Tilt-angle scan of a plate pair feeding the coincidence station.
//!
//! The source emits |V₁V₂⟩ into the plate under test; the measurement filters
//! select |H₁V₂⟩. Tilting changes the effective optical thicknesses, tracing
//! out sin²δ₁ in the λ₁ singles and sin²δ₁ cos²δ₂ in the coincidences.

use crate::detection::{
    coincidence_probability, simulate_counts, singles_probability, Arm, NoiseModel,
    ProjectorSetting,
};
use crate::error::{Error, Result};
use crate::optics::{
    dichroic_unitary, effective_spec_under_tilt, optical_thickness, PlateSpec, TiltConfig,
};
use crate::scalar::Scalar;
use crate::seeding::derive_seed;
use crate::states::{basis_state, BasisId, FrequencyModePair, Polarization, StateId};

/// One scan point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltScanPoint<T> {
    pub theta_deg: T,
    pub delta1_rad: T,
    pub delta2_rad: T,
    /// Normalized λ₁ singles rate (expected-rate channel).
    pub singles_702: T,
    /// Normalized coincidence rate (expected-rate channel).
    pub coincidences: T,
    /// Poisson-sampled coincidence counts (Monte-Carlo channel).
    pub counts: u64,
}

/// Scan parameters.
#[derive(Debug, Clone)]
pub struct TiltScanParams<T> {
    pub plate: PlateSpec<T>,
    pub modes: FrequencyModePair<T>,
    pub n_eff: T,
    pub theta_start_deg: T,
    pub theta_end_deg: T,
    pub steps: usize,
    pub noise: NoiseModel<T>,
    pub time_per_point_s: T,
    pub seed: u64,
}

/// Runs the scan; the counts column is reproducible per seed.
pub fn run_tilt_scan<T: Scalar>(params: &TiltScanParams<T>) -> Result<Vec<TiltScanPoint<T>>> {
    if params.steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    params.noise.validate()?;
    let source = basis_state(BasisId::I, StateId::new(3).expect("in range"), params.modes);
    let setting = ProjectorSetting::analyzing(Polarization::H, Polarization::V);
    let span = params.theta_end_deg - params.theta_start_deg;
    let denom = if params.steps > 1 {
        T::of((params.steps - 1) as f64)
    } else {
        T::one()
    };
    let mut out = Vec::with_capacity(params.steps);
    for i in 0..params.steps {
        let theta = params.theta_start_deg + span * T::of(i as f64) / denom;
        let tilt = TiltConfig::new(theta, params.n_eff)?;
        let eff = effective_spec_under_tilt(&params.plate, &tilt);
        let delta1 = optical_thickness(&eff, params.modes.lambda1_nm())?;
        let delta2 = optical_thickness(&eff, params.modes.lambda2_nm())?;
        let g = dichroic_unitary(&eff, &params.modes)?;
        let state = source.transformed(&g);
        let coincidences = coincidence_probability(&state, &setting);
        let singles = singles_probability(&state, Arm::One, Polarization::H);
        let counts = simulate_counts(
            coincidences,
            &params.noise,
            params.time_per_point_s,
            derive_seed(params.seed, i as u64),
        )?;
        out.push(TiltScanPoint {
            theta_deg: theta,
            delta1_rad: delta1,
            delta2_rad: delta2,
            singles_702: singles,
            coincidences,
            counts,
        });
    }
    Ok(out)
}
