//! Scalar abstraction for the numeric kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating-point scalar the library is generic over.
///
/// Implemented for `f32` and `f64`. All stated tolerances assume `f64`;
/// `f32` works, but verdict margins close to zero should not be trusted
/// past single precision.
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

/// Embeds an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from(x).expect("finite literal must be representable")
}

/// Sum of a slice in the working scalar type.
#[inline]
pub(crate) fn sum<T: Real>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &v| acc + v)
}
