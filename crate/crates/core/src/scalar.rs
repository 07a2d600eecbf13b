//! Scalar abstraction shared by the generic linear algebra, univariate
//! polynomial and partial-fraction layers.
//!
//! Everything in this crate is exact. The two concrete fields are
//! [`Q`](crate::Q) (arbitrary precision rationals) and
//! [`FieldElem`](crate::FieldElem) (rational functions in the declared
//! parameters). Generic code is written against [`Field`] so that the
//! heavy machinery can be exercised cheaply over `Q` in tests.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact commutative field of characteristic zero.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_rational(q: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Rough size of the element, used for pivot selection. Rational
    /// constants must report 0 or 1 so they are preferred as pivots.
    fn weight(&self) -> usize;

    /// Returns the value as a rational constant when it is one.
    fn as_rational(&self) -> Option<BigRational>;
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn weight(&self) -> usize {
        if self.is_zero() {
            0
        } else if self.denom().is_one() && self.numer().abs() < BigInt::from(1u64 << 20) {
            1
        } else {
            2 + (self.numer().bits() + self.denom().bits()) as usize / 64
        }
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

/// Shorthand for a rational integer.
pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for a rational `n/d`.
pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u64, k: u64) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// `x^n` for a field element, `n >= 0`.
pub fn pow<F: Field>(x: &F, n: u32) -> F {
    let mut acc = F::one();
    let mut base = x.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}
