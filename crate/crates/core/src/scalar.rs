use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Field-like scalar: enough for the rational-arithmetic models (C-RAN rate and
/// compute relations, clone capacity). Implemented by `f32`, `f64` and
/// `num_rational::Ratio<i64 | i128>`.
pub trait Scalar: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug {}

impl<T> Scalar for T where T: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug {}

/// Floating-point scalar for everything that needs transcendental functions.
pub trait Real: Scalar + Float {}

impl<T> Real for T where T: Scalar + Float {}

/// Small integer constant in `T`.
#[inline]
pub(crate) fn int<T: Scalar>(n: u32) -> T {
    T::from_u32(n).expect("small integer constants are representable")
}

/// `f64` constant in a floating-point `T`.
#[inline]
pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constants are representable")
}

#[inline]
pub(crate) fn lossy<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
