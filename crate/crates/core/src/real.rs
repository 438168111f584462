//! Minimal real-number abstraction shared by `f64` and [`DoubleDouble`].
//!
//! Everything that has to survive cancellation against the rest energy (the
//! variational cross-check, the literal table formulas) is written against
//! this trait and instantiated in double-double precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use crate::ddouble::DoubleDouble;

pub trait Real:
    Copy
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Send
    + Sync
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon() -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_i64(n: i64) -> Self {
        Self::from_f64(n as f64)
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn signum(self) -> Self {
        if self < Self::zero() {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer<T: Real>(a: T, n: u32) -> T {
    (0..n).fold(T::one(), |acc, i| acc * (a + T::from_i64(i as i64)))
}

/// `n!` as a real number.
pub fn factorial<T: Real>(n: u32) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::from_i64(i as i64))
}

/// Relative deviation `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff<T: Real>(a: T, b: T) -> T {
    let scale = a.abs().max(b.abs());
    if scale == T::zero() {
        T::zero()
    } else {
        (a - b).abs() / scale
    }
}
