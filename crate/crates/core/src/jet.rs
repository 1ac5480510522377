//! Second-order forward-mode dual numbers.
//!
//! Profiles are written once as functions of a [`Jet`] and yield their value,
//! first and second derivatives together, so no finite differences ever touch
//! the connection computations.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::Real;

/// A truncated Taylor jet `(value, d/dt, d²/dt²)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> Jet<T> {
    pub fn new(value: T, d1: T, d2: T) -> Self {
        Self { value, d1, d2 }
    }

    pub fn constant(value: T) -> Self {
        Self::new(value, T::zero(), T::zero())
    }

    /// The independent variable evaluated at `t`.
    pub fn variable(t: T) -> Self {
        Self::new(t, T::one(), T::zero())
    }

    /// Applies a scalar function given its value and first two derivatives at
    /// `self.value`.
    fn chain(self, g0: T, g1: T, g2: T) -> Self {
        Self::new(g0, g1 * self.d1, g2 * self.d1 * self.d1 + g1 * self.d2)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        let half = T::lit(0.5);
        self.chain(r, half / r, -half * half / (r * r * r))
    }

    pub fn recip(self) -> Self {
        let inv = self.value.recip();
        self.chain(inv, -inv * inv, T::lit(2.0) * inv * inv * inv)
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.value * s, self.d1 * s, self.d2 * s)
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + T::lit(2.0) * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl<T: Real> Div for Jet<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2)
    }
}

impl<T: Real> Add<T> for Jet<T> {
    type Output = Self;
    fn add(self, c: T) -> Self {
        Self::new(self.value + c, self.d1, self.d2)
    }
}

impl<T: Real> Mul<T> for Jet<T> {
    type Output = Self;
    fn mul(self, c: T) -> Self {
        self.scale(c)
    }
}
