//! Coincidence detection: the Brown-Twiss tomography station and the
//! four-detector QKD receiver.
//!
//! The tomography station routes the 702 nm photon to arm 1 (interference
//! filter in the transmitted arm) and the 605 nm photon to arm 2. Each arm
//! holds a quarter- and a half-wave plate followed by a fixed analyzer that
//! transmits horizontal polarization, so the analyzed projector is
//! U_q† U_h† |H⟩.
//!
//! The QKD receiver first undoes Bob's basis rotation, then splits each
//! wavelength on a polarizing beam splitter onto dedicated detectors; a
//! coincidence between one λ₁ detector and one λ₂ detector identifies the
//! arriving basis state.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigh4, kron, kron_vec, ComplexMatrix2, ComplexMatrix4, ComplexVector2, ComplexVector4,
};
use crate::optics::jones_from_delta;
use crate::scalar::Scalar;
use crate::seeding::derive_seed;
use crate::states::{BasisId, DensityMatrix, Polarization, QuquartState};

/// Default acquisition time per setting, seconds (the count tables are
/// normalized per 30 s).
pub const DEFAULT_ACQUISITION_S: f64 = 30.0;

/// The four receiver detectors. D4/D3 sit behind the H/V ports at λ₁,
/// D2/D1 behind the H/V ports at λ₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetectorId {
    D1,
    D2,
    D3,
    D4,
}

impl DetectorId {
    /// Index into per-detector arrays (D1 → 0, ..., D4 → 3).
    pub fn index(self) -> usize {
        match self {
            DetectorId::D1 => 0,
            DetectorId::D2 => 1,
            DetectorId::D3 => 2,
            DetectorId::D4 => 3,
        }
    }
}

/// Detector pair fired for joint (photon 1, photon 2) outcome index
/// 0 → (H₁,H₂), 1 → (H₁,V₂), 2 → (V₁,H₂), 3 → (V₁,V₂).
pub const DETECTOR_PAIRS: [(DetectorId, DetectorId); 4] = [
    (DetectorId::D4, DetectorId::D2),
    (DetectorId::D4, DetectorId::D1),
    (DetectorId::D3, DetectorId::D2),
    (DetectorId::D3, DetectorId::D1),
];

/// Outcome index for a fired pair, if it is one of the four valid pairs.
pub fn outcome_for_pair(pair: (DetectorId, DetectorId)) -> Option<usize> {
    DETECTOR_PAIRS.iter().position(|p| *p == pair)
}

/// Plate angles of one polarization-analysis arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmSetting<T> {
    pub qwp_deg: T,
    pub hwp_deg: T,
}

impl<T: Scalar> ArmSetting<T> {
    /// Plate angles that analyze the given polarization (fixed H analyzer).
    pub fn analyzing(p: Polarization) -> Self {
        let (q, h) = match p {
            Polarization::H => (0.0, 0.0),
            Polarization::V => (0.0, 45.0),
            Polarization::D => (45.0, 22.5),
            Polarization::A => (135.0, 157.5),
            Polarization::R => (135.0, 0.0),
            Polarization::L => (45.0, 0.0),
        };
        Self {
            qwp_deg: T::of(q),
            hwp_deg: T::of(h),
        }
    }

    /// The single-photon state this arm projects onto: U_q† U_h† |H⟩.
    pub fn projector(&self) -> ComplexVector2<T> {
        let uq = jones_from_delta(T::FRAC_PI_4(), self.qwp_deg);
        let uh = jones_from_delta(T::FRAC_PI_2(), self.hwp_deg);
        let h = Polarization::H.amplitudes();
        uq.adjoint().apply(&uh.adjoint().apply(&h))
    }
}

/// One joint projection setting of the two-arm coincidence scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorSetting<T> {
    pub arm1: ArmSetting<T>,
    pub arm2: ArmSetting<T>,
    /// Analyzed polarizations (photon 1, photon 2), kept for reporting.
    pub label: (Polarization, Polarization),
}

impl<T: Scalar> ProjectorSetting<T> {
    pub fn analyzing(p1: Polarization, p2: Polarization) -> Self {
        Self {
            arm1: ArmSetting::analyzing(p1),
            arm2: ArmSetting::analyzing(p2),
            label: (p1, p2),
        }
    }

    /// The joint product projector |π₁⟩ ⊗ |π₂⟩.
    pub fn joint_projector(&self) -> ComplexVector4<T> {
        kron_vec(&self.arm1.projector(), &self.arm2.projector())
    }
}

/// The canonical 16 tomography settings {H,V,D,R} ⊗ {H,V,D,R}, photon-1
/// label varying slowest.
pub fn tomography_settings<T: Scalar>() -> Vec<ProjectorSetting<T>> {
    use Polarization::*;
    let labels = [H, V, D, R];
    let mut out = Vec::with_capacity(16);
    for p1 in labels {
        for p2 in labels {
            out.push(ProjectorSetting::analyzing(p1, p2));
        }
    }
    out
}

/// Indices of the four basis-aligned settings (H,H), (H,V), (V,H), (V,V) in
/// the canonical ordering; their counts sum to the total pair number.
pub const BASIS_ALIGNED_SETTINGS: [usize; 4] = [0, 1, 4, 5];

/// Coincidence probability |⟨π₁ ⊗ π₂ | ψ⟩|².
pub fn coincidence_probability<T: Scalar>(
    state: &QuquartState<T>,
    setting: &ProjectorSetting<T>,
) -> T {
    setting.joint_projector().dot(state.amplitudes()).norm_sqr()
}

/// Coincidence probability ⟨π|ρ|π⟩ for a mixed input.
pub fn coincidence_probability_rho<T: Scalar>(
    rho: &DensityMatrix<T>,
    setting: &ProjectorSetting<T>,
) -> T {
    let pi = setting.joint_projector();
    let rho_pi = rho.matrix().apply(&pi);
    pi.dot(&rho_pi).re
}

/// Which arm of the Brown-Twiss scheme a singles rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// Transmitted arm, λ₁ (702 nm by default).
    One,
    /// Reflected arm, λ₂.
    Two,
}

/// Marginal probability that the photon in `arm` passes an analyzer set to
/// `pol`, the other photon being traced out.
pub fn singles_probability<T: Scalar>(state: &QuquartState<T>, arm: Arm, pol: Polarization) -> T {
    let rho = state.pure_density();
    let reduced: ComplexMatrix2<T> = match arm {
        Arm::One => rho.partial_trace_photon2(),
        Arm::Two => rho.partial_trace_photon1(),
    };
    let p = pol.amplitudes();
    let rp = reduced.apply(&p);
    p.dot(&rp).re
}

/// Detection noise parameters. Efficiencies are per detector, indexed by
/// [`DetectorId::index`]; the Brown-Twiss coincidence path uses the D4 (H at
/// λ₁) and D2 (H at λ₂) slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel<T> {
    /// Detected pair rate at unit probability, 1/s.
    pub mean_pair_rate: T,
    /// Accidental coincidence rate, 1/s.
    pub accidental_rate: T,
    /// Detection efficiency per detector, each in [0, 1].
    pub detector_efficiency: [T; 4],
    /// Isotropic depolarization applied to the state before measurement.
    pub depolarization: T,
}

impl<T: Scalar> NoiseModel<T> {
    /// Ideal detection at the given pair rate.
    pub fn ideal(mean_pair_rate: T) -> Self {
        Self {
            mean_pair_rate,
            accidental_rate: T::zero(),
            detector_efficiency: [T::one(); 4],
            depolarization: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: T| x >= T::zero() && x <= T::one();
        if !(self.mean_pair_rate >= T::zero()) || !(self.accidental_rate >= T::zero()) {
            return Err(Error::InvalidArgument("rates must be nonnegative".into()));
        }
        if !self.detector_efficiency.iter().all(|e| unit(*e)) {
            return Err(Error::InvalidArgument(
                "detector efficiencies must lie in [0, 1]".into(),
            ));
        }
        if !unit(self.depolarization) {
            return Err(Error::InvalidArgument(
                "depolarization must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    fn pair_efficiency(&self, a: DetectorId, b: DetectorId) -> T {
        self.detector_efficiency[a.index()] * self.detector_efficiency[b.index()]
    }

    /// Expected coincidence counts for a given detection probability.
    pub fn expected_counts(&self, prob: T, time_s: T) -> T {
        let eff = self.pair_efficiency(DetectorId::D4, DetectorId::D2);
        prob * self.mean_pair_rate * eff * time_s + self.accidental_rate * time_s
    }
}

/// Poisson-distributed coincidence counts with mean
/// `prob · rate · ε₄ ε₂ · time + accidentals · time`, reproducible per seed.
pub fn simulate_counts<T: Scalar>(
    prob: T,
    noise: &NoiseModel<T>,
    time_s: T,
    seed: u64,
) -> Result<u64> {
    if prob < -T::of(1e-12) || prob > T::one() + T::of(1e-12) {
        return Err(Error::InvalidArgument(format!(
            "probability {} outside [0, 1]",
            prob.as_f64()
        )));
    }
    noise.validate()?;
    let mean = noise
        .expected_counts(prob.max(T::zero()).min(T::one()), time_s)
        .as_f64();
    if mean <= 0.0 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw: f64 = Poisson::new(mean)
        .map_err(|e| Error::InvalidArgument(format!("invalid Poisson mean: {e}")))?
        .sample(&mut rng);
    Ok(draw as u64)
}

/// Bob's basis-rotation unitary: nothing for basis I, a half-wave plate at
/// 22.5° on both modes for basis II, a quarter-wave plate at −45° on both
/// modes for basis III (the orientation that sends R→H, L→V under the
/// R = (H+iV)/√2 convention, so state index maps to detector-pair index).
pub fn receiver_rotation<T: Scalar>(basis: BasisId) -> Result<ComplexMatrix4<T>> {
    match basis {
        BasisId::I => Ok(ComplexMatrix4::identity()),
        BasisId::II => {
            let u = jones_from_delta(T::FRAC_PI_2(), T::of(22.5));
            Ok(kron(&u, &u))
        }
        BasisId::III => {
            let u = jones_from_delta(T::FRAC_PI_4(), T::of(-45.0));
            Ok(kron(&u, &u))
        }
        other => Err(Error::InvalidArgument(format!(
            "receiver cannot resolve entangled basis {other} with product projections"
        ))),
    }
}

/// Joint Born probabilities of the four detector pairs for a pure input.
pub fn detector_pair_probabilities<T: Scalar>(
    state: &QuquartState<T>,
    basis: BasisId,
) -> Result<[T; 4]> {
    let u = receiver_rotation(basis)?;
    let rotated = u.apply(state.amplitudes());
    Ok([
        rotated.0[0].norm_sqr(),
        rotated.0[1].norm_sqr(),
        rotated.0[2].norm_sqr(),
        rotated.0[3].norm_sqr(),
    ])
}

/// Joint Born probabilities of the four detector pairs for a mixed input.
pub fn detector_pair_probabilities_rho<T: Scalar>(
    rho: &DensityMatrix<T>,
    basis: BasisId,
) -> Result<[T; 4]> {
    let u = receiver_rotation(basis)?;
    let d = rho.evolved(&u).diagonals();
    Ok(d)
}

fn sample_outcome<T: Scalar>(probs: &[T; 4], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p.as_f64();
        if u < acc {
            return i;
        }
    }
    3
}

/// Samples the detector pair fired when `state` meets the receiver set to
/// `bob_basis` (bases I-III only). Deterministic per seed.
pub fn qkd_detector_outcome<T: Scalar>(
    state: &QuquartState<T>,
    bob_basis: BasisId,
    seed: u64,
) -> Result<(DetectorId, DetectorId)> {
    let probs = detector_pair_probabilities(state, bob_basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(DETECTOR_PAIRS[sample_outcome(&probs, &mut rng)])
}

/// Mixed-state variant of [`qkd_detector_outcome`].
pub fn qkd_detector_outcome_rho<T: Scalar>(
    rho: &DensityMatrix<T>,
    bob_basis: BasisId,
    seed: u64,
) -> Result<(DetectorId, DetectorId)> {
    let probs = detector_pair_probabilities_rho(rho, bob_basis)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(DETECTOR_PAIRS[sample_outcome(&probs, &mut rng)])
}

/// One acquisition at one tomography setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceRecord<T> {
    /// Index into the canonical setting list.
    pub setting_index: usize,
    /// Normalized detection probability at this setting.
    pub expected_rate: T,
    /// Registered coincidence counts.
    pub counts: u64,
    /// Acquisition time, s.
    pub acquisition_time_s: T,
}

/// Count generation mode for simulated acquisitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountChannel {
    /// Deterministic expected counts (rounded to integers).
    Expected,
    /// Poisson-sampled counts.
    Poisson,
}

/// Simulates a full 16-setting acquisition on `rho` (depolarization from the
/// noise model is applied first). Per-setting seeds derive from `seed`.
pub fn simulate_tomography<T: Scalar>(
    rho: &DensityMatrix<T>,
    noise: &NoiseModel<T>,
    time_s: T,
    seed: u64,
    channel: CountChannel,
) -> Result<Vec<CoincidenceRecord<T>>> {
    noise.validate()?;
    let rho = rho.depolarized(noise.depolarization);
    let settings = tomography_settings::<T>();
    let mut records = Vec::with_capacity(settings.len());
    for (k, setting) in settings.iter().enumerate() {
        let p = coincidence_probability_rho(&rho, setting);
        let counts = match channel {
            CountChannel::Expected => noise.expected_counts(p, time_s).round().as_f64() as u64,
            CountChannel::Poisson => {
                simulate_counts(p, noise, time_s, derive_seed(seed, k as u64))?
            }
        };
        records.push(CoincidenceRecord {
            setting_index: k,
            expected_rate: p,
            counts,
            acquisition_time_s: time_s,
        });
    }
    Ok(records)
}

/// Normalized diagonal estimates from the four detector-pair counts of a
/// single matched-basis acquisition.
pub fn diagonal_estimate<T: Scalar>(counts: [u64; 4]) -> Result<[T; 4]> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument(
            "zero total counts in diagonal estimate".into(),
        ));
    }
    let t = T::of(total as f64);
    Ok(counts.map(|c| T::of(c as f64) / t))
}

/// Single-qubit Pauli matrices (I, X, Y, Z).
fn pauli<T: Scalar>() -> [ComplexMatrix2<T>; 4] {
    let z = T::zero();
    let o = T::one();
    [
        ComplexMatrix2::identity(),
        ComplexMatrix2::from_rows([
            [Complex::new(z, z), Complex::new(o, z)],
            [Complex::new(o, z), Complex::new(z, z)],
        ]),
        ComplexMatrix2::from_rows([
            [Complex::new(z, z), Complex::new(z, -o)],
            [Complex::new(z, o), Complex::new(z, z)],
        ]),
        ComplexMatrix2::from_rows([
            [Complex::new(o, z), Complex::new(z, z)],
            [Complex::new(z, z), Complex::new(-o, z)],
        ]),
    ]
}

/// The 16 two-qubit Pauli products σ_i ⊗ σ_j, i major.
fn pauli_basis<T: Scalar>() -> Vec<ComplexMatrix4<T>> {
    let p = pauli::<T>();
    let mut out = Vec::with_capacity(16);
    for a in &p {
        for b in &p {
            out.push(kron(a, b));
        }
    }
    out
}

/// Transfer matrix A[k][m] = Tr(P_k B_m)/4 mapping Pauli coordinates to
/// setting probabilities.
pub(crate) fn transfer_matrix<T: Scalar>() -> [[T; 16]; 16] {
    let settings = tomography_settings::<T>();
    let basis = pauli_basis::<T>();
    let quarter = T::of(0.25);
    let mut a = [[T::zero(); 16]; 16];
    for (k, setting) in settings.iter().enumerate() {
        let pi = setting.joint_projector();
        let proj = ComplexMatrix4::outer(&pi, &pi);
        for (m, b) in basis.iter().enumerate() {
            a[k][m] = proj.mul(b).trace().re * quarter;
        }
    }
    a
}

/// Gaussian elimination with partial pivoting on a 16×16 real system.
fn solve16<T: Scalar>(mut a: [[T; 16]; 16], mut b: [T; 16]) -> Result<[T; 16]> {
    const N: usize = 16;
    for col in 0..N {
        let mut pivot = col;
        for row in (col + 1)..N {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < T::of(1e-14) {
            return Err(Error::Singular(format!("pivot {col} vanishes")));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = T::one() / a[col][col];
        for row in (col + 1)..N {
            let f = a[row][col] * inv;
            if f == T::zero() {
                continue;
            }
            for k in col..N {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [T::zero(); 16];
    for col in (0..N).rev() {
        let mut acc = b[col];
        for k in (col + 1)..N {
            acc = acc - a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

/// Reconstructs a density matrix from the 16 canonical-setting counts:
/// linear inversion through the transfer matrix, then eigenvalue clipping to
/// ≥ 0 and renormalization to unit trace.
pub fn reconstruct<T: Scalar>(records: &[CoincidenceRecord<T>]) -> Result<DensityMatrix<T>> {
    if records.len() != 16 {
        return Err(Error::InvalidArgument(format!(
            "expected 16 records, got {}",
            records.len()
        )));
    }
    let mut counts = [0u64; 16];
    let mut seen = [false; 16];
    for r in records {
        if r.setting_index >= 16 || seen[r.setting_index] {
            return Err(Error::InvalidArgument(
                "records must cover each canonical setting exactly once".into(),
            ));
        }
        seen[r.setting_index] = true;
        counts[r.setting_index] = r.counts;
    }
    let total_aligned: u64 = BASIS_ALIGNED_SETTINGS.iter().map(|&k| counts[k]).sum();
    if total_aligned == 0 {
        return Err(Error::InvalidArgument(
            "zero total counts on the basis-aligned settings".into(),
        ));
    }
    let norm = T::of(total_aligned as f64);
    let mut probs = [T::zero(); 16];
    for k in 0..16 {
        probs[k] = T::of(counts[k] as f64) / norm;
    }

    let x = solve16(transfer_matrix::<T>(), probs)?;
    let basis = pauli_basis::<T>();
    let quarter = Complex::new(T::of(0.25), T::zero());
    let mut m = ComplexMatrix4::zero();
    for (coef, b) in x.iter().zip(basis.iter()) {
        m = m.add(&b.scaled(Complex::new(*coef, T::zero())));
    }
    m = m.scaled(quarter);
    // Hermitize against roundoff before clipping.
    m = m
        .add(&m.adjoint())
        .scaled(Complex::new(T::of(0.5), T::zero()));

    let eig = eigh4(&m);
    let mut clipped = [T::zero(); 4];
    let mut trace = T::zero();
    for (i, lam) in eig.values.iter().enumerate() {
        clipped[i] = lam.max(T::zero());
        trace = trace + clipped[i];
    }
    if !(trace > T::zero()) {
        return Err(Error::InvalidDensity(
            "all reconstructed eigenvalues nonpositive".into(),
        ));
    }
    let mut out = ComplexMatrix4::zero();
    for i in 0..4 {
        let w = Complex::new(clipped[i] / trace, T::zero());
        out = out.add(&ComplexMatrix4::outer(&eig.vectors[i], &eig.vectors[i]).scaled(w));
    }
    DensityMatrix::new(out)
}
