//! Scalar abstraction: every numerical routine in this crate is generic over a
//! floating-point scalar so the same code instantiates at `f32` and `f64`.
//!
//! Stated error bounds (1e-12 on the gamma function, 1e-7 kernel targets, ...)
//! are contract values for the `f64` instantiation; `f32` runs the same
//! algorithms at its own precision.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
///
/// Panics only if the target type cannot represent any `f64`, which does not
/// happen for the supported scalars.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must convert to the scalar type")
}

/// Round-trips a scalar through `f64` for reporting and serialization.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("scalar must convert to f64")
}
