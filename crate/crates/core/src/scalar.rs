//! Scalar abstraction: every solver in this crate is generic over a
//! floating-point type implementing [`Real`].

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the crate (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for converting an `f64` literal into the working scalar type.
#[inline]
pub fn real<R: Real>(value: f64) -> R {
    R::from_f64(value).expect("f64 constant must be representable in the scalar type")
}

/// Converts a `usize` count into the working scalar type.
#[inline]
pub fn real_usize<R: Real>(value: usize) -> R {
    R::from_usize(value).expect("usize count must be representable in the scalar type")
}
