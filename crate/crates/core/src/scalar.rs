//! Scalar abstractions shared by the exact algebra layer and the floating-point
//! geometry layer.
//!
//! [`Field`] is the minimal interface the Lie-algebra code needs: exact
//! rationals and IEEE floats both satisfy it. [`Real`] adds the transcendental
//! functions required once profiles, square roots and finite differences enter.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_rational::{BigRational, Rational64};
use num_traits::{Float, FloatConst, Num, ToPrimitive};

/// A field of scalars usable for structure constants, bilinear forms and
/// small dense linear algebra.
pub trait Field:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// The value `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossy conversion used for pivot selection and reporting.
    fn approx_f64(&self) -> f64;

    /// Absolute size used to rank pivots.
    fn magnitude(&self) -> f64 {
        self.approx_f64().abs()
    }

    /// Whether a pivot of this size should be treated as zero relative to
    /// `scale`. Exact fields only reject true zeros.
    fn negligible(&self, scale: f64) -> bool;
}

impl Field for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE)
    }
}

impl Field for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
    fn approx_f64(&self) -> f64 {
        *self as f64
    }
    fn negligible(&self, scale: f64) -> bool {
        (self.abs() as f64) <= 64.0 * f32::EPSILON as f64 * scale.max(f64::MIN_POSITIVE)
    }
}

impl Field for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn negligible(&self, _scale: f64) -> bool {
        *self.numer() == 0
    }
}

impl Field for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn negligible(&self, _scale: f64) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Floating-point scalars for the geometric layers (`f32`, `f64`).
pub trait Real: Field + Float + FloatConst + Copy + Default {
    /// Converts an `f64` literal. Panics only for types that cannot represent
    /// finite doubles at all, which excludes every implementor.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.approx_f64()
    }
}

impl Real for f64 {}
impl Real for f32 {}

/// Converts any exact or floating scalar into a [`Real`].
pub fn to_real<S: Field, T: Real>(x: &S) -> T {
    T::lit(x.approx_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_negligible_only_for_zero() {
        let tiny = Rational64::new(1, i64::MAX);
        assert!(!tiny.negligible(1.0));
        assert!(Rational64::from_ratio(0, 5).negligible(1.0));
    }

    #[test]
    fn float_negligible_scales() {
        assert!(1e-15_f64.negligible(1.0));
        assert!(!1e-15_f64.negligible(1e-10));
    }
}
