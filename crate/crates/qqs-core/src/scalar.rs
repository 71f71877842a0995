//! Scalar abstraction: all core math is generic over the real floating-point
//! type; `f32` and `f64` are the supported instantiations.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar underlying all complex amplitudes and angles.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal (panics only on NaN-free
    /// overflow, which cannot happen for the in-range constants used here).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal convertible to scalar")
    }

    /// Lossy conversion to `f64`, used at the sampling boundary where
    /// probabilities feed a random-number generator.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
