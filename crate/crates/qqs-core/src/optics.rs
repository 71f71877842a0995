//! Retardation plates as 4×4 unitaries on ququarts.
//!
//! A birefringent plate of geometric thickness `h` acts on each frequency
//! mode with the Jones matrix U(δ, α) = [[t, r], [−r*, t*]] where
//! t = cos δ + i sin δ cos 2α, r = i sin δ sin 2α and δ = π (n_o − n_e) h / λ.
//! The ququart transformation is the Kronecker product of the two
//! single-mode matrices; it is dichroic whenever δ differs between the modes.

use num_complex::Complex;

use crate::dispersion::Dispersion;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix2, ComplexMatrix4};
use crate::scalar::Scalar;
use crate::states::{bell_state, BellKind, FrequencyModePair, QuquartState};

/// A physical retardation plate: thickness, optical-axis orientation
/// (measured from the vertical direction), and dispersion model.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateSpec<T> {
    pub thickness_mm: T,
    pub alpha_deg: T,
    pub dispersion: Dispersion<T>,
}

impl<T: Scalar> PlateSpec<T> {
    pub fn new(thickness_mm: T, alpha_deg: T, dispersion: Dispersion<T>) -> Result<Self> {
        if !(thickness_mm >= T::zero()) || !thickness_mm.is_finite() {
            return Err(Error::InvalidArgument(
                "plate thickness must be nonnegative and finite".into(),
            ));
        }
        Ok(Self {
            thickness_mm,
            alpha_deg,
            dispersion,
        })
    }
}

/// Transmission/reflection coefficients of a plate at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesCoefficients<T> {
    pub t: Complex<T>,
    pub r: Complex<T>,
}

impl<T: Scalar> JonesCoefficients<T> {
    /// t = cos δ + i sin δ cos 2α, r = i sin δ sin 2α.
    pub fn from_delta(delta: T, alpha_deg: T) -> Self {
        let two_alpha = T::of(2.0) * alpha_deg.to_radians();
        let (sd, cd) = delta.sin_cos();
        let (s2a, c2a) = two_alpha.sin_cos();
        Self {
            t: Complex::new(cd, sd * c2a),
            r: Complex::new(T::zero(), sd * s2a),
        }
    }

    /// |t|² + |r|² (equals 1 exactly up to roundoff).
    pub fn norm_sqr(&self) -> T {
        self.t.norm_sqr() + self.r.norm_sqr()
    }

    /// The single-mode Jones matrix [[t, r], [−r*, t*]].
    pub fn matrix(&self) -> ComplexMatrix2<T> {
        ComplexMatrix2::from_rows([[self.t, self.r], [-self.r.conj(), self.t.conj()]])
    }
}

/// Optical thickness δ = π (n_o − n_e) h / λ, in radians, signed by the
/// dispersion model's birefringence. Callers interpret δ modulo π for the
/// retardance class.
pub fn optical_thickness<T: Scalar>(spec: &PlateSpec<T>, lambda_nm: T) -> Result<T> {
    let dn = spec.dispersion.birefringence(lambda_nm)?;
    let h_nm = spec.thickness_mm * T::of(1.0e6);
    Ok(T::PI() * dn * h_nm / lambda_nm)
}

/// Single-mode Jones matrix of a plate at one wavelength.
pub fn jones<T: Scalar>(spec: &PlateSpec<T>, lambda_nm: T) -> Result<ComplexMatrix2<T>> {
    let delta = optical_thickness(spec, lambda_nm)?;
    Ok(JonesCoefficients::from_delta(delta, spec.alpha_deg).matrix())
}

/// Single-mode Jones matrix directly from (δ, α), bypassing dispersion.
pub fn jones_from_delta<T: Scalar>(delta: T, alpha_deg: T) -> ComplexMatrix2<T> {
    JonesCoefficients::from_delta(delta, alpha_deg).matrix()
}

/// The 4×4 plate unitary G = U(λ₁) ⊗ U(λ₂).
pub fn dichroic_unitary<T: Scalar>(
    spec: &PlateSpec<T>,
    modes: &FrequencyModePair<T>,
) -> Result<ComplexMatrix4<T>> {
    let u1 = jones(spec, modes.lambda1_nm())?;
    let u2 = jones(spec, modes.lambda2_nm())?;
    Ok(kron(&u1, &u2))
}

/// The 4×4 plate unitary from explicit per-mode optical thicknesses and a
/// common orientation.
pub fn dichroic_from_deltas<T: Scalar>(delta1: T, delta2: T, alpha_deg: T) -> ComplexMatrix4<T> {
    kron(
        &jones_from_delta(delta1, alpha_deg),
        &jones_from_delta(delta2, alpha_deg),
    )
}

/// The ideal swap plate (half-wave at λ₁, full-wave at λ₂, axis at 45°),
/// equal to the H₁↔V₁ exchange permutation up to a global phase.
pub fn swap_plate_unitary<T: Scalar>() -> ComplexMatrix4<T> {
    dichroic_from_deltas(T::FRAC_PI_2(), T::PI(), T::of(45.0))
}

/// Tilt of the plate about an axis perpendicular to the beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltConfig<T> {
    pub theta_deg: T,
    pub n_eff: T,
}

impl<T: Scalar> TiltConfig<T> {
    pub fn new(theta_deg: T, n_eff: T) -> Result<Self> {
        if theta_deg.abs() >= T::of(60.0) {
            return Err(Error::InvalidArgument(format!(
                "tilt angle {} out of range (-60, 60) deg",
                theta_deg.as_f64()
            )));
        }
        if !(n_eff > T::one()) {
            return Err(Error::InvalidArgument(
                "effective refraction index must exceed 1".into(),
            ));
        }
        Ok(Self { theta_deg, n_eff })
    }
}

/// Path-length tilt model: the beam refracts at angle θ_r = asin(sin θ / n_eff)
/// and traverses an effective thickness h / cos θ_r.
pub fn effective_spec_under_tilt<T: Scalar>(
    spec: &PlateSpec<T>,
    tilt: &TiltConfig<T>,
) -> PlateSpec<T> {
    let sin_r = tilt.theta_deg.to_radians().sin() / tilt.n_eff;
    let cos_r = (T::one() - sin_r * sin_r).sqrt();
    PlateSpec {
        thickness_mm: spec.thickness_mm / cos_r,
        alpha_deg: spec.alpha_deg,
        dispersion: spec.dispersion.clone(),
    }
}

/// Result of probing a plate for the Bell Φ↔Ψ exchange.
#[derive(Debug, Clone)]
pub struct BellSwapReport {
    /// True iff every Φ maps to some Ψ and every Ψ to some Φ (up to phase).
    pub is_bell_swap: bool,
    /// Image of each Bell state, `None` where the output is not a Bell state.
    pub mapping: [(BellKind, Option<BellKind>); 4],
}

/// Checks whether a plate exchanges the Φ and Ψ Bell families, recording the
/// exact sign pairing. Comparisons are modulo global phase.
pub fn bell_swap_check<T: Scalar>(
    g: &ComplexMatrix4<T>,
    modes: FrequencyModePair<T>,
) -> BellSwapReport {
    let tol = T::of(1e-9);
    let mut mapping = [(BellKind::PhiPlus, None); 4];
    let mut ok = true;
    for (slot, kind) in BellKind::ALL.iter().enumerate() {
        let out = bell_state(*kind, modes).transformed(g);
        let mut image = None;
        for target in BellKind::ALL {
            let t = bell_state(target, modes);
            let m = out.overlap(&t).expect("same modes").norm();
            if (m - T::one()).abs() <= tol {
                image = Some(target);
                break;
            }
        }
        mapping[slot] = (*kind, image);
        match image {
            Some(img) if img.is_phi() != kind.is_phi() => {}
            _ => ok = false,
        }
    }
    BellSwapReport {
        is_bell_swap: ok,
        mapping,
    }
}

/// Plate-spec front end for [`bell_swap_check`].
pub fn bell_swap_check_spec<T: Scalar>(
    spec: &PlateSpec<T>,
    modes: FrequencyModePair<T>,
) -> Result<BellSwapReport> {
    let g = dichroic_unitary(spec, &modes)?;
    Ok(bell_swap_check(&g, modes))
}

/// Applies a plate (optionally tilted) to a state.
pub fn apply_plate<T: Scalar>(
    spec: &PlateSpec<T>,
    tilt: Option<&TiltConfig<T>>,
    state: &QuquartState<T>,
) -> Result<QuquartState<T>> {
    let eff = match tilt {
        Some(t) => effective_spec_under_tilt(spec, t),
        None => spec.clone(),
    };
    let g = dichroic_unitary(&eff, &state.modes())?;
    Ok(state.transformed(&g))
}

/// Solution of the simultaneous half-wave/full-wave thickness search.
#[derive(Debug, Clone, Copy)]
pub struct ThicknessSolution<T> {
    /// Solved geometric thickness in mm.
    pub thickness_mm: T,
    /// |δ(λ₁)|/π at the solution (target: half-integer).
    pub retardance_l1: T,
    /// |δ(λ₂)|/π at the solution (target: integer).
    pub retardance_l2: T,
    /// Distance of retardance_l1 from the nearest half-integer, in waves.
    pub half_wave_error_l1: T,
    /// Distance of retardance_l2 from the nearest integer, in waves.
    pub full_wave_error_l2: T,
}

fn dist_to_nearest_integer<T: Scalar>(x: T) -> T {
    (x - x.round()).abs()
}

fn dist_to_nearest_half_integer<T: Scalar>(x: T) -> T {
    dist_to_nearest_integer(x - T::of(0.5))
}

/// Finds the thickness in `[h_min, h_max]` mm that best realizes a half-wave
/// plate at λ₁ and simultaneously a full-wave plate at λ₂.
///
/// The joint residual √(e₁² + e₂²) (distances in waves from the nearest
/// half-integer and integer retardance) is minimized over a dense grid and
/// refined by golden-section search. Exact simultaneity is generically
/// impossible for fixed dispersion, so the residuals are reported.
pub fn solve_half_full_wave_thickness<T: Scalar>(
    dispersion: &Dispersion<T>,
    modes: &FrequencyModePair<T>,
    h_min_mm: T,
    h_max_mm: T,
) -> Result<ThicknessSolution<T>> {
    if !(h_max_mm > h_min_mm) || !(h_min_mm > T::zero()) {
        return Err(Error::InvalidArgument(
            "invalid thickness search range".into(),
        ));
    }
    let dn1 = dispersion.birefringence(modes.lambda1_nm())?.abs();
    let dn2 = dispersion.birefringence(modes.lambda2_nm())?.abs();
    if dn1 <= T::zero() || dn2 <= T::zero() {
        return Err(Error::InvalidArgument(
            "material is not birefringent at the mode wavelengths".into(),
        ));
    }
    let waves = |h: T| -> (T, T) {
        let nm = h * T::of(1.0e6);
        (dn1 * nm / modes.lambda1_nm(), dn2 * nm / modes.lambda2_nm())
    };
    let residual = |h: T| -> T {
        let (r1, r2) = waves(h);
        let e1 = dist_to_nearest_half_integer(r1);
        let e2 = dist_to_nearest_integer(r2);
        (e1 * e1 + e2 * e2).sqrt()
    };

    // Dense grid: the residual oscillates on the scale of one extra wave of
    // retardance, so sample far below that scale.
    let steps = 200_000usize;
    let dh = (h_max_mm - h_min_mm) / T::of(steps as f64);
    let mut best_h = h_min_mm;
    let mut best_r = residual(h_min_mm);
    for i in 1..=steps {
        let h = h_min_mm + dh * T::of(i as f64);
        let r = residual(h);
        if r < best_r {
            best_r = r;
            best_h = h;
        }
    }

    // Golden-section refinement around the grid minimum.
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let mut a = (best_h - dh).max(h_min_mm);
    let mut b = (best_h + dh).min(h_max_mm);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    for _ in 0..120 {
        if residual(c) < residual(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - (b - a) * inv_phi;
        d = a + (b - a) * inv_phi;
        if (b - a) < T::of(1e-12) {
            break;
        }
    }
    let h = (a + b) * T::of(0.5);
    let (r1, r2) = waves(h);
    Ok(ThicknessSolution {
        thickness_mm: h,
        retardance_l1: r1,
        retardance_l2: r2,
        half_wave_error_l1: dist_to_nearest_half_integer(r1),
        full_wave_error_l2: dist_to_nearest_integer(r2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{basis_state, BasisId, StateId};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constant_dn(dn: f64) -> Dispersion<f64> {
        Dispersion::Constant {
            n_o: 1.5 + dn,
            n_e: 1.5,
        }
    }

    #[test]
    fn optical_thickness_direct_arithmetic() {
        let spec = PlateSpec::new(3.406, 45.0, constant_dn(0.009)).unwrap();
        let delta = optical_thickness(&spec, 702.0).unwrap();
        // Independent arithmetic: pi * 0.009 * 3.406e6 / 702.
        let expect = std::f64::consts::PI * 0.009 * 3.406e6 / 702.0;
        assert!((delta - expect).abs() <= 1e-9);
        assert!((delta / std::f64::consts::PI - 43.6666).abs() < 1e-3);
    }

    #[test]
    fn zero_thickness_gives_zero_retardance() {
        let spec = PlateSpec::new(0.0, 45.0, constant_dn(0.009)).unwrap();
        assert_eq!(optical_thickness(&spec, 702.0).unwrap(), 0.0);
    }

    #[test]
    fn jones_coefficients_stay_on_unit_sphere() {
        for i in 0..50 {
            let delta = 0.37 * i as f64;
            let alpha = 7.3 * i as f64;
            let jc = JonesCoefficients::from_delta(delta, alpha);
            assert!((jc.norm_sqr() - 1.0).abs() <= 1e-12);
            assert!(jc.matrix().is_unitary(1e-12));
        }
    }

    #[test]
    fn jones_special_cases() {
        // δ = 0: identity.
        let u = jones_from_delta(0.0, 33.0);
        assert!(u.max_abs_diff(&ComplexMatrix2::identity()) <= 1e-15);
        // δ = π/2, α = 45°: [[0, i], [i, 0]].
        let u = jones_from_delta(std::f64::consts::FRAC_PI_2, 45.0);
        let want =
            ComplexMatrix2::from_rows([[c(0.0, 0.0), c(0.0, 1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
        assert!(u.max_abs_diff(&want) <= 1e-15);
        // δ = π: -I for any orientation.
        let u = jones_from_delta(std::f64::consts::PI, 17.0);
        let want =
            ComplexMatrix2::from_rows([[c(-1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
        assert!(u.max_abs_diff(&want) <= 1e-12);
    }

    #[test]
    fn swap_plate_matches_permutation_up_to_phase() {
        let g = swap_plate_unitary::<f64>();
        // |G| has the H₁↔V₁ exchange pattern.
        for (r, col) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
            assert!((g.get(r, col).norm() - 1.0).abs() <= 1e-12);
        }
        // G |V₁V₂⟩ ∝ |H₁V₂⟩.
        let modes = FrequencyModePair::default();
        let vv = basis_state(BasisId::I, StateId::new(3).unwrap(), modes);
        let hv = basis_state(BasisId::I, StateId::new(1).unwrap(), modes);
        let out = vv.transformed(&g);
        assert!((out.overlap(&hv).unwrap().norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn dichroic_unitary_factorizes_and_is_unitary() {
        let modes = FrequencyModePair::default();
        let spec = PlateSpec::new(2.371, 23.0, Dispersion::quartz()).unwrap();
        let g = dichroic_unitary(&spec, &modes).unwrap();
        assert!(g.is_unitary(1e-12));
        let u1 = jones(&spec, modes.lambda1_nm()).unwrap();
        let u2 = jones(&spec, modes.lambda2_nm()).unwrap();
        assert!(g.max_abs_diff(&kron(&u1, &u2)) == 0.0);
        // Zero thickness: identity.
        let id_spec = PlateSpec::new(0.0, 45.0, Dispersion::quartz()).unwrap();
        let g0 = dichroic_unitary(&id_spec, &modes).unwrap();
        assert!(g0.max_abs_diff(&ComplexMatrix4::identity()) <= 1e-15);
    }

    #[test]
    fn tilt_model_examples() {
        let spec = PlateSpec::new(3.401, 45.0, constant_dn(0.009)).unwrap();
        let zero = TiltConfig::new(0.0, 1.55).unwrap();
        let same = effective_spec_under_tilt(&spec, &zero);
        assert_eq!(same.thickness_mm, spec.thickness_mm);

        // θ = 30°, n_eff = 1.55: h_eff = h / √(1 − (sin 30° / 1.55)²).
        let tilt = TiltConfig::new(30.0, 1.55).unwrap();
        let eff = effective_spec_under_tilt(&spec, &tilt);
        let expect = 3.401 / (1.0 - (0.5 / 1.55f64).powi(2)).sqrt();
        assert!((eff.thickness_mm - expect).abs() <= 1e-12);
        assert!((eff.thickness_mm / 3.401 - 1.056_477_174).abs() <= 1e-8);
    }

    #[test]
    fn tilt_thickness_is_strictly_increasing_in_angle() {
        let spec = PlateSpec::new(3.401, 45.0, constant_dn(0.009)).unwrap();
        let mut last = spec.thickness_mm;
        for i in 1..60 {
            let theta = i as f64;
            let tilt = TiltConfig::new(theta, 1.546).unwrap();
            let h = effective_spec_under_tilt(&spec, &tilt).thickness_mm;
            assert!(h > last, "not increasing at {theta} deg");
            last = h;
        }
    }

    #[test]
    fn tilt_config_rejects_out_of_range() {
        assert!(TiltConfig::new(60.0, 1.5).is_err());
        assert!(TiltConfig::new(-61.0, 1.5).is_err());
        assert!(TiltConfig::new(10.0, 0.9).is_err());
    }

    #[test]
    fn bell_swap_detected_for_swap_plate_only() {
        let modes = FrequencyModePair::default();
        let report = bell_swap_check(&swap_plate_unitary::<f64>(), modes);
        assert!(report.is_bell_swap);
        for (from, to) in report.mapping {
            let to = to.expect("image is a Bell state");
            assert_ne!(from.is_phi(), to.is_phi());
        }
        let id = ComplexMatrix4::<f64>::identity();
        assert!(!bell_swap_check(&id, modes).is_bell_swap);
    }

    #[test]
    fn swap_plate_applied_twice_restores_bell_states() {
        let modes = FrequencyModePair::default();
        let g = swap_plate_unitary::<f64>();
        let gg = g.mul(&g);
        for kind in BellKind::ALL {
            let s = bell_state(kind, modes);
            let out = s.transformed(&gg);
            assert!((out.overlap(&s).unwrap().norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn thickness_solver_finds_quartz_plate_near_3_4_mm() {
        let modes = FrequencyModePair::default();
        let sol: ThicknessSolution<f64> =
            solve_half_full_wave_thickness(&Dispersion::quartz(), &modes, 3.2, 3.6).unwrap();
        assert!(sol.thickness_mm > 3.2 && sol.thickness_mm < 3.6);
        // Fixed dispersion cannot satisfy both conditions exactly; both
        // residuals stay below 0.06 waves for this data set.
        assert!(sol.half_wave_error_l1 < 0.06, "{:?}", sol);
        assert!(sol.full_wave_error_l2 < 0.06, "{:?}", sol);
        // Ghosh-coefficient solution sits at 3.4004 mm.
        assert!((sol.thickness_mm - 3.4004).abs() < 2e-3, "{:?}", sol);
    }

    #[test]
    fn apply_plate_with_tilt_runs_end_to_end() {
        let modes = FrequencyModePair::<f64>::default();
        let spec = PlateSpec::new(3.401, 45.0, Dispersion::quartz()).unwrap();
        let tilt = TiltConfig::new(11.9, 1.546).unwrap();
        let vv = basis_state(BasisId::I, StateId::new(3).unwrap(), modes);
        let out = apply_plate(&spec, Some(&tilt), &vv).unwrap();
        assert!((out.amplitudes().norm() - 1.0).abs() <= 1e-12);
    }
}
