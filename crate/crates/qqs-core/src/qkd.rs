//! End-to-end simulated QKD session over the product bases I-III.
//!
//! Alice draws a uniform (basis, state) symbol each round and prepares it
//! from |V₁V₂⟩ with a plate recipe; Bob measures in a uniformly drawn basis
//! with the four-detector receiver. Matching-basis rounds are sifted, and the
//! receiver then identifies the state deterministically, so all errors come
//! from channel noise (or an eavesdropper). The isotropic depolarization of
//! the noise model is applied to whatever state reaches Bob; an intercepting
//! Eve measures the clean state upstream of it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detection::{
    detector_pair_probabilities, detector_pair_probabilities_rho, DetectorId, NoiseModel,
    DETECTOR_PAIRS,
};
use crate::error::{Error, Result};
use crate::linalg::kron;
use crate::linalg::ComplexMatrix4;
use crate::optics::{dichroic_from_deltas, jones_from_delta};
use crate::scalar::Scalar;
use crate::seeding::derive_seed;
use crate::states::{basis_state, BasisId, FrequencyModePair, QuquartState, StateId};

/// Bits carried per sifted round (four states per basis).
pub const SYMBOL_BITS: u32 = 2;

/// Configuration of one simulated session.
#[derive(Debug, Clone)]
pub struct SessionConfig<T> {
    pub rounds: u64,
    /// Bases both parties draw from; must be a nonempty subset of {I, II, III}.
    pub bases_in_use: Vec<BasisId>,
    pub noise: NoiseModel<T>,
    pub seed: u64,
    pub modes: FrequencyModePair<T>,
}

impl<T: Scalar> SessionConfig<T> {
    pub fn new(
        rounds: u64,
        bases_in_use: Vec<BasisId>,
        noise: NoiseModel<T>,
        seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            rounds,
            bases_in_use,
            noise,
            seed,
            modes: FrequencyModePair::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidArgument("rounds must be positive".into()));
        }
        if self.bases_in_use.is_empty() {
            return Err(Error::InvalidArgument("no bases configured".into()));
        }
        for b in &self.bases_in_use {
            if !b.is_product() {
                return Err(Error::InvalidArgument(format!(
                    "basis {b} cannot be used with the deterministic receiver"
                )));
            }
        }
        let mut sorted = self.bases_in_use.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != self.bases_in_use.len() {
            return Err(Error::InvalidArgument("duplicate basis in set".into()));
        }
        self.noise.validate()
    }
}

/// One element of a preparation plate sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PlateElement<T> {
    /// Dichroic plate parametrized by per-mode optical thicknesses.
    Dichroic { delta1: T, delta2: T, alpha_deg: T },
    /// Zero-order half-wave plate acting identically on both modes.
    HalfWave { alpha_deg: T },
    /// Zero-order quarter-wave plate acting identically on both modes.
    QuarterWave { alpha_deg: T },
}

impl<T: Scalar> PlateElement<T> {
    pub fn unitary(&self) -> ComplexMatrix4<T> {
        match *self {
            PlateElement::Dichroic {
                delta1,
                delta2,
                alpha_deg,
            } => dichroic_from_deltas(delta1, delta2, alpha_deg),
            PlateElement::HalfWave { alpha_deg } => {
                let u = jones_from_delta(T::FRAC_PI_2(), alpha_deg);
                kron(&u, &u)
            }
            PlateElement::QuarterWave { alpha_deg } => {
                let u = jones_from_delta(T::FRAC_PI_4(), alpha_deg);
                kron(&u, &u)
            }
        }
    }
}

/// Ordered plate sequence applied to the source state |V₁V₂⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateRecipe<T> {
    pub elements: Vec<PlateElement<T>>,
}

impl<T: Scalar> PlateRecipe<T> {
    pub fn unitary(&self) -> ComplexMatrix4<T> {
        let mut g = ComplexMatrix4::identity();
        for e in &self.elements {
            g = e.unitary().mul(&g);
        }
        g
    }

    pub fn apply(&self, state: &QuquartState<T>) -> QuquartState<T> {
        state.transformed(&self.unitary())
    }
}

/// The target state of (basis, state) and the plate sequence that produces it
/// from the source state |V₁V₂⟩.
///
/// Within basis I the preparation is a single dichroic plate at 45° whose
/// per-mode retardances select which photons get swapped; basis II appends a
/// half-wave plate at 22.5°, basis III a quarter-wave plate at 45°.
pub fn alice_prepare<T: Scalar>(
    b: BasisId,
    s: StateId,
    modes: FrequencyModePair<T>,
    allowed: &[BasisId],
) -> Result<(QuquartState<T>, PlateRecipe<T>)> {
    if !allowed.contains(&b) {
        return Err(Error::InvalidArgument(format!(
            "basis {b} outside the configured set"
        )));
    }
    let half = T::FRAC_PI_2();
    let full = T::PI();
    let alpha = T::of(45.0);
    let mut elements: Vec<PlateElement<T>> = Vec::new();
    // Basis-I selection from |V₁V₂⟩: swap photon 1 and/or photon 2 into H.
    match s.index() {
        0 => elements.push(PlateElement::Dichroic {
            delta1: half,
            delta2: half,
            alpha_deg: alpha,
        }),
        1 => elements.push(PlateElement::Dichroic {
            delta1: half,
            delta2: full,
            alpha_deg: alpha,
        }),
        2 => elements.push(PlateElement::Dichroic {
            delta1: full,
            delta2: half,
            alpha_deg: alpha,
        }),
        _ => {}
    }
    match b {
        BasisId::I => {}
        BasisId::II => elements.push(PlateElement::HalfWave {
            alpha_deg: T::of(22.5),
        }),
        BasisId::III => elements.push(PlateElement::QuarterWave { alpha_deg: alpha }),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no plate recipe for entangled basis {other}"
            )))
        }
    }
    let target = basis_state(b, s, modes);
    Ok((target, PlateRecipe { elements }))
}

/// One protocol round as recorded by both parties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub round: u64,
    pub alice_basis: BasisId,
    pub alice_state: u8,
    pub bob_basis: BasisId,
    pub detector_pair: (DetectorId, DetectorId),
    pub sifted: bool,
    /// 2-bit symbol values, present only on sifted rounds.
    pub alice_symbol: Option<u8>,
    pub bob_symbol: Option<u8>,
}

/// Per-basis sift/error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisQber {
    pub basis: BasisId,
    pub sifted: u64,
    pub errors: u64,
    pub qber: Option<f64>,
}

/// Aggregated session statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub rounds: u64,
    pub sifted_rounds: u64,
    pub sift_ratio: f64,
    /// Error fraction over sifted rounds; `None` when nothing was sifted.
    pub qber: Option<f64>,
    /// Raw key length before error correction: 2 bits per sifted round.
    pub raw_key_bits: u64,
    pub per_basis: Vec<BasisQber>,
}

fn sample_index<T: Scalar>(probs: &[T; 4], rng: &mut impl Rng) -> usize {
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

fn summarize(cfg_bases: &[BasisId], records: &[SessionRecord], rounds: u64) -> SessionSummary {
    let mut per: Vec<BasisQber> = cfg_bases
        .iter()
        .map(|b| BasisQber {
            basis: *b,
            sifted: 0,
            errors: 0,
            qber: None,
        })
        .collect();
    let mut sifted = 0u64;
    let mut errors = 0u64;
    for r in records.iter().filter(|r| r.sifted) {
        sifted += 1;
        let err = r.alice_symbol != r.bob_symbol;
        if err {
            errors += 1;
        }
        if let Some(pb) = per.iter_mut().find(|p| p.basis == r.alice_basis) {
            pb.sifted += 1;
            if err {
                pb.errors += 1;
            }
        }
    }
    for pb in &mut per {
        if pb.sifted > 0 {
            pb.qber = Some(pb.errors as f64 / pb.sifted as f64);
        }
    }
    SessionSummary {
        rounds,
        sifted_rounds: sifted,
        sift_ratio: sifted as f64 / rounds as f64,
        qber: (sifted > 0).then(|| errors as f64 / sifted as f64),
        raw_key_bits: u64::from(SYMBOL_BITS) * sifted,
        per_basis: per,
    }
}

fn run_rounds<T: Scalar>(
    cfg: &SessionConfig<T>,
    eve_bases: Option<&[BasisId]>,
) -> Result<(Vec<SessionRecord>, SessionSummary)> {
    cfg.validate()?;
    if let Some(eb) = eve_bases {
        if eb.is_empty() {
            return Err(Error::InvalidArgument(
                "empty eavesdropper basis set".into(),
            ));
        }
        for b in eb {
            if !b.is_product() {
                return Err(Error::InvalidArgument(format!(
                    "eavesdropper basis {b} is not measurable with product projections"
                )));
            }
        }
    }
    let nb = cfg.bases_in_use.len();
    let depol = cfg.noise.depolarization;
    let mut records = Vec::with_capacity(cfg.rounds as usize);
    for round in 0..cfg.rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, round));
        let alice_basis = cfg.bases_in_use[rng.random_range(0..nb)];
        let alice_state = StateId::new(rng.random_range(0..4u8)).expect("in range");
        let bob_basis = cfg.bases_in_use[rng.random_range(0..nb)];

        let (_, recipe) = alice_prepare(alice_basis, alice_state, cfg.modes, &cfg.bases_in_use)?;
        let source = basis_state(BasisId::I, StateId::new(3).expect("in range"), cfg.modes);
        let mut flying = recipe.apply(&source);

        if let Some(eb) = eve_bases {
            let eve_basis = eb[rng.random_range(0..eb.len())];
            let probs = detector_pair_probabilities(&flying, eve_basis)?;
            let eve_outcome = sample_index(&probs, &mut rng);
            flying = basis_state(
                eve_basis,
                StateId::new(eve_outcome as u8).expect("in range"),
                cfg.modes,
            );
        }

        let outcome = if depol == T::zero() {
            let probs = detector_pair_probabilities(&flying, bob_basis)?;
            sample_index(&probs, &mut rng)
        } else {
            let rho = flying.pure_density().depolarized(depol);
            let probs = detector_pair_probabilities_rho(&rho, bob_basis)?;
            sample_index(&probs, &mut rng)
        };

        let sifted = alice_basis == bob_basis;
        records.push(SessionRecord {
            round,
            alice_basis,
            alice_state: alice_state.value(),
            bob_basis,
            detector_pair: DETECTOR_PAIRS[outcome],
            sifted,
            alice_symbol: sifted.then_some(alice_state.value()),
            bob_symbol: sifted.then_some(outcome as u8),
        });
    }
    let summary = summarize(&cfg.bases_in_use, &records, cfg.rounds);
    Ok((records, summary))
}

/// Runs a noiseless-or-noisy session without an eavesdropper.
pub fn run_session<T: Scalar>(
    cfg: &SessionConfig<T>,
) -> Result<(Vec<SessionRecord>, SessionSummary)> {
    run_rounds(cfg, None)
}

/// Runs a session with an intercept-resend eavesdropper who measures every
/// round in a random basis from `eve_bases` and resends the identified state.
pub fn intercept_resend<T: Scalar>(
    cfg: &SessionConfig<T>,
    eve_bases: &[BasisId],
) -> Result<(Vec<SessionRecord>, SessionSummary)> {
    run_rounds(cfg, Some(eve_bases))
}
