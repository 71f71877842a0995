//! Tomography pipeline checks: simulate → reconstruct round trips and the
//! count-table fidelity route through the circular-basis rotation.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qqs_core::detection::{
    diagonal_estimate, receiver_rotation, reconstruct, simulate_tomography, CountChannel,
    NoiseModel,
};
use qqs_core::linalg::ComplexMatrix4;
use qqs_core::states::{
    basis_state, fidelity, BasisId, DensityMatrix, FrequencyModePair, QuquartState, StateId,
};
use qqs_core::{Modes, Vector4};

fn modes() -> Modes {
    FrequencyModePair::default()
}

fn random_state(rng: &mut impl Rng) -> QuquartState<f64> {
    loop {
        let amps = Vector4::new([
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
        ]);
        if let Ok(s) = QuquartState::from_unnormalized(amps, modes()) {
            return s;
        }
    }
}

#[test]
fn expected_channel_roundtrip_is_nearly_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = NoiseModel::ideal(1.0e6);
    for _ in 0..20 {
        let state = random_state(&mut rng);
        let records = simulate_tomography(
            &state.pure_density(),
            &noise,
            1.0,
            1,
            CountChannel::Expected,
        )
        .unwrap();
        let rho = reconstruct(&records).unwrap();
        let f = fidelity(&state.pure_density(), &rho).unwrap();
        assert!(f >= 0.9999, "F = {f}");
    }
}

#[test]
fn poisson_channel_roundtrip_stays_accurate() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let noise = NoiseModel::ideal(1.0e6);
    for trial in 0..10 {
        let state = random_state(&mut rng);
        let records = simulate_tomography(
            &state.pure_density(),
            &noise,
            1.0,
            trial,
            CountChannel::Poisson,
        )
        .unwrap();
        let rho = reconstruct(&records).unwrap();
        let f = fidelity(&state.pure_density(), &rho).unwrap();
        assert!(f >= 0.995, "F = {f}");
    }
}

#[test]
fn count_table_fidelity_through_circular_rotation() {
    // Counts (0, 220, 6, 0) registered with the basis-III receiver: the
    // diagonal estimate lives in the rotated frame; rotating back gives the
    // lab-frame density matrix whose overlap with |R₁L₂⟩ is 220/226.
    let d = diagonal_estimate::<f64>([0, 220, 6, 0]).unwrap();
    let mut diag = ComplexMatrix4::zero();
    for (i, x) in d.iter().enumerate() {
        diag.set(i, i, Complex64::new(*x, 0.0));
    }
    let u = receiver_rotation::<f64>(BasisId::III).unwrap();
    // ρ_meas = U ρ_lab U†  ⇒  ρ_lab = U† ρ_meas U.
    let rho_lab = DensityMatrix::new(u.adjoint().mul(&diag).mul(&u)).unwrap();
    let rl = basis_state(BasisId::III, StateId::new(1).unwrap(), modes());
    let f = fidelity(&rl.pure_density(), &rho_lab).unwrap();
    assert!((f - 0.973).abs() <= 0.002, "F = {f}");

    // Same number straight from the rotated frame: diag vs |H₁V₂⟩⟨H₁V₂|.
    let hv = basis_state(BasisId::I, StateId::new(1).unwrap(), modes());
    let f2 = fidelity(&hv.pure_density(), &DensityMatrix::new(diag).unwrap()).unwrap();
    assert!((f - f2).abs() <= 1e-12);
}

#[test]
fn depolarization_regime_of_the_count_table() {
    // Isotropic depolarization p = 0.036 puts the dominant diagonal at
    // 1 − 3p/4 = 0.973, the regime of the example count table.
    let rl = basis_state(BasisId::III, StateId::new(1).unwrap(), modes());
    let mut noise = NoiseModel::ideal(1.0e6);
    noise.depolarization = 0.036;
    let records =
        simulate_tomography(&rl.pure_density(), &noise, 1.0, 5, CountChannel::Expected).unwrap();
    let rho = reconstruct(&records).unwrap();
    let f = fidelity(&rl.pure_density(), &rho).unwrap();
    assert!((f - 0.973).abs() <= 0.01, "F = {f}");
}

#[test]
fn tomography_of_maximally_mixed_state() {
    let noise = NoiseModel::ideal(1.0e6);
    let mixed = DensityMatrix::<f64>::maximally_mixed();
    let records = simulate_tomography(&mixed, &noise, 1.0, 9, CountChannel::Expected).unwrap();
    let rho = reconstruct(&records).unwrap();
    assert!(rho.matrix().max_abs_diff(mixed.matrix()) <= 0.01);
    // The trace overlap of the maximally mixed state with itself is 1/4.
    let f = fidelity(&mixed, &rho).unwrap();
    assert!((f - 0.25).abs() <= 0.01);
}

#[test]
fn bell_state_tomography_roundtrip() {
    use qqs_core::states::{bell_state, BellKind};
    let noise = NoiseModel::ideal(1.0e6);
    for kind in BellKind::ALL {
        let s = bell_state(kind, modes());
        let records =
            simulate_tomography(&s.pure_density(), &noise, 1.0, 2, CountChannel::Expected).unwrap();
        let rho = reconstruct(&records).unwrap();
        let f = fidelity(&s.pure_density(), &rho).unwrap();
        assert!(f >= 0.9999, "{kind}: F = {f}");
    }
}
