//! Biphoton polarization ququart states, the five protocol bases, Bell
//! states, and density matrices.
//!
//! Amplitude ordering is fixed as (H₁H₂, H₁V₂, V₁H₂, V₁V₂) with the photon-1
//! slot belonging to the first wavelength of the mode pair. Single-photon
//! conventions: D = (H+V)/√2, A = (H−V)/√2, R = (H+iV)/√2, L = (H−iV)/√2.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cone, czero, eigh4, kron_vec, ComplexMatrix2, ComplexMatrix4, ComplexVector2, ComplexVector4,
};
use crate::scalar::Scalar;

/// Normalization tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance for phase-invariant state comparison.
pub const COMPARE_TOL: f64 = 1e-9;

/// The two central wavelengths labelling the frequency modes, in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyModePair<T> {
    lambda1_nm: T,
    lambda2_nm: T,
}

impl<T: Scalar> FrequencyModePair<T> {
    pub fn new(lambda1_nm: T, lambda2_nm: T) -> Result<Self> {
        if !(lambda1_nm > T::zero()) || !(lambda2_nm > T::zero()) {
            return Err(Error::InvalidArgument(
                "wavelengths must be positive".into(),
            ));
        }
        if lambda1_nm == lambda2_nm {
            return Err(Error::InvalidArgument(
                "frequency modes must be non-degenerate (lambda1 != lambda2)".into(),
            ));
        }
        Ok(Self {
            lambda1_nm,
            lambda2_nm,
        })
    }

    pub fn lambda1_nm(&self) -> T {
        self.lambda1_nm
    }

    pub fn lambda2_nm(&self) -> T {
        self.lambda2_nm
    }
}

impl<T: Scalar> Default for FrequencyModePair<T> {
    /// The down-conversion pair used throughout: 702 nm and 605 nm.
    fn default() -> Self {
        Self {
            lambda1_nm: T::of(702.0),
            lambda2_nm: T::of(605.0),
        }
    }
}

/// Single-photon polarization labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl Polarization {
    /// Amplitudes of the labelled state in the (H, V) basis.
    pub fn amplitudes<T: Scalar>(self) -> ComplexVector2<T> {
        let s = T::of(std::f64::consts::FRAC_1_SQRT_2);
        let z = T::zero();
        match self {
            Polarization::H => ComplexVector2::new(cone(), czero()),
            Polarization::V => ComplexVector2::new(czero(), cone()),
            Polarization::D => ComplexVector2::new(Complex::new(s, z), Complex::new(s, z)),
            Polarization::A => ComplexVector2::new(Complex::new(s, z), Complex::new(-s, z)),
            Polarization::R => ComplexVector2::new(Complex::new(s, z), Complex::new(z, s)),
            Polarization::L => ComplexVector2::new(Complex::new(s, z), Complex::new(z, -s)),
        }
    }
}

/// One of the five mutually unbiased ququart bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisId {
    I,
    II,
    III,
    IV,
    V,
}

impl BasisId {
    pub const ALL: [BasisId; 5] = [
        BasisId::I,
        BasisId::II,
        BasisId::III,
        BasisId::IV,
        BasisId::V,
    ];

    /// The product-state bases measurable with the four-detector receiver.
    pub const PRODUCT: [BasisId; 3] = [BasisId::I, BasisId::II, BasisId::III];

    pub fn index(self) -> usize {
        match self {
            BasisId::I => 0,
            BasisId::II => 1,
            BasisId::III => 2,
            BasisId::IV => 3,
            BasisId::V => 4,
        }
    }

    pub fn is_product(self) -> bool {
        matches!(self, BasisId::I | BasisId::II | BasisId::III)
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisId::I => "I",
            BasisId::II => "II",
            BasisId::III => "III",
            BasisId::IV => "IV",
            BasisId::V => "V",
        };
        f.write_str(s)
    }
}

impl FromStr for BasisId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "1" => Ok(BasisId::I),
            "II" | "2" => Ok(BasisId::II),
            "III" | "3" => Ok(BasisId::III),
            "IV" | "4" => Ok(BasisId::IV),
            "V" | "5" => Ok(BasisId::V),
            other => Err(Error::InvalidArgument(format!("unknown basis '{other}'"))),
        }
    }
}

/// Index of a state within a basis (0..=3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateId(u8);

impl StateId {
    pub const ALL: [StateId; 4] = [StateId(0), StateId(1), StateId(2), StateId(3)];

    pub fn new(index: u8) -> Result<Self> {
        if index < 4 {
            Ok(Self(index))
        } else {
            Err(Error::InvalidArgument(format!(
                "state index {index} out of range 0..=3"
            )))
        }
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

/// The four polarization Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn is_phi(self) -> bool {
        matches!(self, BellKind::PhiPlus | BellKind::PhiMinus)
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        };
        f.write_str(s)
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phiplus" => Ok(BellKind::PhiPlus),
            "phi-" | "phiminus" => Ok(BellKind::PhiMinus),
            "psi+" | "psiplus" => Ok(BellKind::PsiPlus),
            "psi-" | "psiminus" => Ok(BellKind::PsiMinus),
            other => Err(Error::InvalidArgument(format!(
                "unknown Bell state '{other}'"
            ))),
        }
    }
}

/// Pure polarization state of one frequency non-degenerate biphoton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuquartState<T> {
    amplitudes: ComplexVector4<T>,
    modes: FrequencyModePair<T>,
}

impl<T: Scalar> QuquartState<T> {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(amplitudes: ComplexVector4<T>, modes: FrequencyModePair<T>) -> Result<Self> {
        let defect = (amplitudes.norm() - T::one()).abs();
        if defect > T::of(NORM_TOL) {
            return Err(Error::NotNormalized(defect.as_f64()));
        }
        Ok(Self { amplitudes, modes })
    }

    /// Builds a state from arbitrary non-zero amplitudes, normalizing them.
    pub fn from_unnormalized(
        amplitudes: ComplexVector4<T>,
        modes: FrequencyModePair<T>,
    ) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n > T::of(1e-15)) || !n.is_finite() {
            return Err(Error::InvalidArgument(
                "cannot normalize a (near-)zero amplitude vector".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.scaled(Complex::new(T::one() / n, T::zero())),
            modes,
        })
    }

    pub fn amplitudes(&self) -> &ComplexVector4<T> {
        &self.amplitudes
    }

    pub fn amplitude(&self, i: usize) -> Complex<T> {
        self.amplitudes.0[i]
    }

    pub fn modes(&self) -> FrequencyModePair<T> {
        self.modes
    }

    fn check_same_modes(&self, other: &Self) -> Result<()> {
        if self.modes == other.modes {
            Ok(())
        } else {
            Err(Error::ModeMismatch(
                self.modes.lambda1_nm.as_f64(),
                self.modes.lambda2_nm.as_f64(),
                other.modes.lambda1_nm.as_f64(),
                other.modes.lambda2_nm.as_f64(),
            ))
        }
    }

    /// Inner product ⟨self|other⟩. Errors if the mode pairs differ.
    pub fn overlap(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_modes(other)?;
        Ok(self.amplitudes.dot(&other.amplitudes))
    }

    /// Applies a 4×4 transformation and renormalizes (guards roundoff; the
    /// matrices used here are unitary).
    pub fn transformed(&self, g: &ComplexMatrix4<T>) -> Self {
        let out = g.apply(&self.amplitudes);
        let n = out.norm();
        Self {
            amplitudes: out.scaled(Complex::new(T::one() / n, T::zero())),
            modes: self.modes,
        }
    }

    /// Fixes the global phase: the first amplitude with modulus above the
    /// comparison tolerance is made real and positive.
    pub fn canonicalized(&self) -> Self {
        let tol = T::of(COMPARE_TOL);
        for c in &self.amplitudes.0 {
            let m = c.norm();
            if m > tol {
                let phase = Complex::new(c.re / m, -c.im / m);
                return Self {
                    amplitudes: self.amplitudes.scaled(phase),
                    modes: self.modes,
                };
            }
        }
        *self
    }

    /// Equality up to a global phase, at tolerance `tol` per amplitude.
    pub fn phase_invariant_eq(&self, other: &Self, tol: T) -> bool {
        if self.modes != other.modes {
            return false;
        }
        self.canonicalized()
            .amplitudes
            .max_abs_diff(&other.canonicalized().amplitudes)
            <= tol
    }

    /// The projector |ψ⟩⟨ψ| as a density matrix.
    pub fn pure_density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            m: ComplexMatrix4::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

/// Product state |p₁⟩⊗|p₂⟩ of two labelled polarizations.
pub fn product_state<T: Scalar>(
    p1: Polarization,
    p2: Polarization,
    modes: FrequencyModePair<T>,
) -> QuquartState<T> {
    QuquartState {
        amplitudes: kron_vec(&p1.amplitudes(), &p2.amplitudes()),
        modes,
    }
}

/// The `s`-th state of protocol basis `b`.
///
/// Bases I-III are product states; IV and V are the maximally entangled
/// superpositions with 1/√2 normalization.
pub fn basis_state<T: Scalar>(
    b: BasisId,
    s: StateId,
    modes: FrequencyModePair<T>,
) -> QuquartState<T> {
    use Polarization::*;
    let product_table: [[(Polarization, Polarization); 4]; 3] = [
        [(H, H), (H, V), (V, H), (V, V)],
        [(D, D), (D, A), (A, D), (A, A)],
        [(R, R), (R, L), (L, R), (L, L)],
    ];
    match b {
        BasisId::I | BasisId::II | BasisId::III => {
            let (p1, p2) = product_table[b.index()][s.index()];
            product_state(p1, p2, modes)
        }
        BasisId::IV => {
            // (|R₁H₂⟩ ± |L₁V₂⟩)/√2 and (|L₁H₂⟩ ± |R₁V₂⟩)/√2.
            let (first, second, sign) = match s.index() {
                0 => ((R, H), (L, V), T::one()),
                1 => ((R, H), (L, V), -T::one()),
                2 => ((L, H), (R, V), T::one()),
                _ => ((L, H), (R, V), -T::one()),
            };
            superpose(first, second, sign, modes)
        }
        BasisId::V => {
            // (|H₁R₂⟩ ± |V₁L₂⟩)/√2 and (|H₁L₂⟩ ± |V₁R₂⟩)/√2.
            let (first, second, sign) = match s.index() {
                0 => ((H, R), (V, L), T::one()),
                1 => ((H, R), (V, L), -T::one()),
                2 => ((H, L), (V, R), T::one()),
                _ => ((H, L), (V, R), -T::one()),
            };
            superpose(first, second, sign, modes)
        }
    }
}

fn superpose<T: Scalar>(
    first: (Polarization, Polarization),
    second: (Polarization, Polarization),
    sign: T,
    modes: FrequencyModePair<T>,
) -> QuquartState<T> {
    let a: ComplexVector4<T> = kron_vec(&first.0.amplitudes(), &first.1.amplitudes());
    let b: ComplexVector4<T> = kron_vec(&second.0.amplitudes(), &second.1.amplitudes());
    let s = Complex::new(sign * T::of(std::f64::consts::FRAC_1_SQRT_2), T::zero());
    let half = Complex::new(T::of(std::f64::consts::FRAC_1_SQRT_2), T::zero());
    let mut amps = [czero(); 4];
    for i in 0..4 {
        amps[i] = a.0[i] * half + b.0[i] * s;
    }
    QuquartState {
        amplitudes: ComplexVector4(amps),
        modes,
    }
}

/// All four states of a basis, in index order.
pub fn basis_states<T: Scalar>(b: BasisId, modes: FrequencyModePair<T>) -> [QuquartState<T>; 4] {
    [
        basis_state(b, StateId(0), modes),
        basis_state(b, StateId(1), modes),
        basis_state(b, StateId(2), modes),
        basis_state(b, StateId(3), modes),
    ]
}

/// One of the four polarization Bell states: Φ± = (|H₁H₂⟩ ± |V₁V₂⟩)/√2,
/// Ψ± = (|H₁V₂⟩ ± |V₁H₂⟩)/√2.
pub fn bell_state<T: Scalar>(kind: BellKind, modes: FrequencyModePair<T>) -> QuquartState<T> {
    let s = T::of(std::f64::consts::FRAC_1_SQRT_2);
    let z = T::zero();
    let amps = match kind {
        BellKind::PhiPlus => [(s, z), (z, z), (z, z), (s, z)],
        BellKind::PhiMinus => [(s, z), (z, z), (z, z), (-s, z)],
        BellKind::PsiPlus => [(z, z), (s, z), (s, z), (z, z)],
        BellKind::PsiMinus => [(z, z), (s, z), (-s, z), (z, z)],
    };
    QuquartState {
        amplitudes: ComplexVector4(amps.map(|(re, im)| Complex::new(re, im))),
        modes,
    }
}

/// Tolerances for the density-matrix invariants.
pub const DENSITY_TRACE_TOL: f64 = 1e-9;
pub const DENSITY_EIGEN_TOL: f64 = 1e-9;
pub const DENSITY_HERMITICITY_TOL: f64 = 1e-12;

/// A 4×4 Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T> {
    m: ComplexMatrix4<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates the invariants: hermiticity within 1e-12, trace within 1e-9
    /// of one, smallest eigenvalue no lower than -1e-9.
    pub fn new(m: ComplexMatrix4<T>) -> Result<Self> {
        let herm = m.hermiticity_defect();
        if herm > T::of(DENSITY_HERMITICITY_TOL) {
            return Err(Error::InvalidDensity(format!(
                "hermiticity defect {:e}",
                herm.as_f64()
            )));
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > T::of(DENSITY_TRACE_TOL)
            || tr.im.abs() > T::of(DENSITY_TRACE_TOL)
        {
            return Err(Error::InvalidDensity(format!(
                "trace {} + {}i != 1",
                tr.re.as_f64(),
                tr.im.as_f64()
            )));
        }
        let min = eigh4(&m).values[0];
        if min < -T::of(DENSITY_EIGEN_TOL) {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:e}",
                min.as_f64()
            )));
        }
        Ok(Self { m })
    }

    /// Builds |ψ⟩⟨ψ| from a normalized state.
    pub fn from_pure(state: &QuquartState<T>) -> Self {
        state.pure_density()
    }

    /// The maximally mixed state I/4.
    pub fn maximally_mixed() -> Self {
        let quarter = Complex::new(T::of(0.25), T::zero());
        Self {
            m: ComplexMatrix4::identity().scaled(quarter),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix4<T> {
        &self.m
    }

    pub fn trace(&self) -> T {
        self.m.trace().re
    }

    pub fn diagonals(&self) -> [T; 4] {
        [
            self.m.get(0, 0).re,
            self.m.get(1, 1).re,
            self.m.get(2, 2).re,
            self.m.get(3, 3).re,
        ]
    }

    pub fn min_eigenvalue(&self) -> T {
        eigh4(&self.m).values[0]
    }

    /// Tr(ρ²), a purity witness in [1/4, 1].
    pub fn purity(&self) -> T {
        self.m.mul(&self.m).trace().re
    }

    /// Conjugation U ρ U†.
    pub fn evolved(&self, u: &ComplexMatrix4<T>) -> Self {
        Self {
            m: u.mul(&self.m).mul(&u.adjoint()),
        }
    }

    /// Isotropic depolarization (1-p) ρ + p I/4.
    pub fn depolarized(&self, p: T) -> Self {
        let keep = Complex::new(T::one() - p, T::zero());
        let mix = Complex::new(p * T::of(0.25), T::zero());
        Self {
            m: self
                .m
                .scaled(keep)
                .add(&ComplexMatrix4::identity().scaled(mix)),
        }
    }

    /// Reduced 2×2 state of photon 2 (photon 1 traced out).
    pub fn partial_trace_photon1(&self) -> ComplexMatrix2<T> {
        let mut rows = [[czero(); 2]; 2];
        for k in 0..2 {
            for l in 0..2 {
                rows[k][l] = self.m.get(k, l) + self.m.get(2 + k, 2 + l);
            }
        }
        ComplexMatrix2::from_rows(rows)
    }

    /// Reduced 2×2 state of photon 1 (photon 2 traced out).
    pub fn partial_trace_photon2(&self) -> ComplexMatrix2<T> {
        let mut rows = [[czero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                rows[i][j] = self.m.get(2 * i, 2 * j) + self.m.get(2 * i + 1, 2 * j + 1);
            }
        }
        ComplexMatrix2::from_rows(rows)
    }
}

/// Overlap fidelity F = Tr(ρ_th ρ_exp).
///
/// This is the trace-overlap form (for pure ρ_th it equals ⟨ψ|ρ_exp|ψ⟩), not
/// the Uhlmann fidelity. Both inputs are re-validated.
pub fn fidelity<T: Scalar>(rho_th: &DensityMatrix<T>, rho_exp: &DensityMatrix<T>) -> Result<T> {
    let th = DensityMatrix::new(rho_th.m)?;
    let ex = DensityMatrix::new(rho_exp.m)?;
    Ok(th.m.mul(&ex.m).trace().re)
}
