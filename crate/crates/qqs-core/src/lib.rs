//! Simulation library for four-level polarization quantum systems encoded in
//! frequency non-degenerate photon pairs.
//!
//! The crate covers state preparation through dichroic wave plates, two-mode
//! Stokes polarimetry, coincidence detection and state tomography, and a
//! deterministic-receiver QKD session over mutually unbiased bases. All core
//! math is generic over the real scalar type (`f32` or `f64`); the aliases
//! below fix `f64` for simulation and CLI use.

// Negated comparisons are used to reject NaN along with out-of-range values;
// indexed loops mirror the matrix math in the fixed-size kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod detection;
pub mod dispersion;
pub mod error;
pub mod linalg;
pub mod optics;
pub mod polarimetry;
pub mod qkd;
pub mod scalar;
pub mod scan;
pub mod seeding;
pub mod serial;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex scalar over `f64`.
pub type C64 = num_complex::Complex<f64>;

/// f64 specializations of the core math types.
pub type Vector2 = linalg::ComplexVector2<f64>;
pub type Vector4 = linalg::ComplexVector4<f64>;
pub type Matrix2 = linalg::ComplexMatrix2<f64>;
pub type Matrix4 = linalg::ComplexMatrix4<f64>;
pub type Modes = states::FrequencyModePair<f64>;
pub type Ququart = states::QuquartState<f64>;
pub type Density = states::DensityMatrix<f64>;
pub type Stokes = polarimetry::StokesVector<f64>;
pub type Plate = optics::PlateSpec<f64>;
pub type Tilt = optics::TiltConfig<f64>;
pub type Noise = detection::NoiseModel<f64>;
