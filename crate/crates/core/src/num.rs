//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar the engine is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float converts to f64")
    }

    /// Sine/cosine of an angle in degrees.
    #[inline]
    fn sin_deg(self) -> Self {
        self.to_radians().sin()
    }

    #[inline]
    fn cos_deg(self) -> Self {
        self.to_radians().cos()
    }

    #[inline]
    fn tan_deg(self) -> Self {
        self.to_radians().tan()
    }

    /// Euclidean remainder, always in `[0, m)` for positive `m`.
    #[inline]
    fn rem_pos(self, m: Self) -> Self {
        let r = self % m;
        if r < Self::zero() {
            r + m
        } else {
            r
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
