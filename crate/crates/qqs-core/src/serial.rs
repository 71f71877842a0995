//! JSON interchange forms for states and density matrices (f64 only).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{ComplexMatrix4, ComplexVector4};
use crate::states::{DensityMatrix, FrequencyModePair, QuquartState};
use crate::C64;

/// Wire form of a frequency mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModesJson {
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Wire form of a ququart state: `{modes, re: [4], im: [4]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub modes: ModesJson,
    pub re: [f64; 4],
    pub im: [f64; 4],
}

impl From<&QuquartState<f64>> for StateJson {
    fn from(s: &QuquartState<f64>) -> Self {
        let a = s.amplitudes().0;
        Self {
            modes: ModesJson {
                lambda1: s.modes().lambda1_nm(),
                lambda2: s.modes().lambda2_nm(),
            },
            re: [a[0].re, a[1].re, a[2].re, a[3].re],
            im: [a[0].im, a[1].im, a[2].im, a[3].im],
        }
    }
}

impl StateJson {
    pub fn to_state(&self) -> Result<QuquartState<f64>> {
        let modes = FrequencyModePair::new(self.modes.lambda1, self.modes.lambda2)?;
        let mut amps = [C64::new(0.0, 0.0); 4];
        for i in 0..4 {
            amps[i] = C64::new(self.re[i], self.im[i]);
        }
        QuquartState::new(ComplexVector4(amps), modes)
    }
}

/// Wire form of a density matrix: 4×4 real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
}

impl From<&DensityMatrix<f64>> for DensityJson {
    fn from(rho: &DensityMatrix<f64>) -> Self {
        let mut re = [[0.0; 4]; 4];
        let mut im = [[0.0; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let e = rho.matrix().get(r, c);
                re[r][c] = e.re;
                im[r][c] = e.im;
            }
        }
        Self { re, im }
    }
}

impl DensityJson {
    pub fn to_density(&self) -> Result<DensityMatrix<f64>> {
        let mut m = ComplexMatrix4::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.set(r, c, C64::new(self.re[r][c], self.im[r][c]));
            }
        }
        DensityMatrix::new(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{basis_state, BasisId, StateId};

    #[test]
    fn state_json_roundtrip_preserves_amplitudes() {
        let s = basis_state(
            BasisId::IV,
            StateId::new(2).unwrap(),
            FrequencyModePair::default(),
        );
        let json = serde_json::to_string(&StateJson::from(&s)).unwrap();
        let parsed: StateJson = serde_json::from_str(&json).unwrap();
        let back = parsed.to_state().unwrap();
        assert!(s.amplitudes().max_abs_diff(back.amplitudes()) <= 1e-12);
    }

    #[test]
    fn state_json_rejects_unnormalized_input() {
        let bad = StateJson {
            modes: ModesJson {
                lambda1: 702.0,
                lambda2: 605.0,
            },
            re: [1.0, 1.0, 0.0, 0.0],
            im: [0.0; 4],
        };
        assert!(bad.to_state().is_err());
    }

    #[test]
    fn density_json_roundtrip() {
        let rho = basis_state(
            BasisId::III,
            StateId::new(1).unwrap(),
            FrequencyModePair::default(),
        )
        .pure_density();
        let json = serde_json::to_string(&DensityJson::from(&rho)).unwrap();
        let parsed: DensityJson = serde_json::from_str(&json).unwrap();
        let back = parsed.to_density().unwrap();
        assert!(rho.matrix().max_abs_diff(back.matrix()) <= 1e-12);
    }
}
