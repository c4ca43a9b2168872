//! Coefficient traits shared by the polynomial containers.
//!
//! Polynomial code is written once against [`Scalar`] (a commutative ring with
//! identity) and instantiated at the crate root for exact rationals and
//! integers. Nothing here assumes an ordered or exact type, so `f64` also
//! satisfies the bound, but the certification pipeline only ever uses exact
//! coefficients.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

/// Commutative ring with identity, by-value arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// A [`Scalar`] in which every nonzero element is invertible and `/` is exact.
pub trait FieldScalar: Scalar + Div<Output = Self> {}

impl FieldScalar for BigRational {}
impl FieldScalar for Ratio<i64> {}
impl FieldScalar for f64 {}
impl FieldScalar for f32 {}

/// Integer-like scalars that embed into the rationals.
pub trait IntoRational {
    fn into_rational(self) -> BigRational;
}

impl IntoRational for BigInt {
    fn into_rational(self) -> BigRational {
        BigRational::from_integer(self)
    }
}

impl IntoRational for BigRational {
    fn into_rational(self) -> BigRational {
        self
    }
}

impl IntoRational for i64 {
    fn into_rational(self) -> BigRational {
        BigRational::from_integer(BigInt::from(self))
    }
}
