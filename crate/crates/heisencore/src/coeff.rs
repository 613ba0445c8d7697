//! Coefficient rings for group-ring elements.
//!
//! Exact integers and rationals carry the combinatorial content; complex
//! doubles appear only on the numeric certificate paths. Embeddings go one
//! way: `BigInt → BigRational → Complex64`.

use core::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};


/// Absolute-value norms used for ℓ¹ sums. Exact rings sum into rationals,
/// the complex ring into doubles.
pub trait NormValue: Clone + PartialOrd + Debug {
    fn norm_zero() -> Self;
    fn norm_add(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
}

impl NormValue for BigRational {
    fn norm_zero() -> Self {
        Zero::zero()
    }
    fn norm_add(&self, other: &Self) -> Self {
        self + other
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl NormValue for f64 {
    fn norm_zero() -> Self {
        0.0
    }
    fn norm_add(&self, other: &Self) -> Self {
        self + other
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// A coefficient ring for sparse group-ring arithmetic.
pub trait Coeff: Clone + PartialEq + Debug + Zero + One {
    type Norm: NormValue;

    fn add_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Complex conjugation; the identity on real rings.
    fn conj(&self) -> Self;
    fn abs_norm(&self) -> Self::Norm;
    fn to_c64(&self) -> Complex64;
}

impl Coeff for BigInt {
    type Norm = BigRational;

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs_norm(&self) -> BigRational {
        BigRational::from_integer(self.abs())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Coeff for BigRational {
    type Norm = BigRational;

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs_norm(&self) -> BigRational {
        self.abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

impl Coeff for Complex64 {
    type Norm = f64;

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn abs_norm(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Lossless-as-possible rational to double conversion; falls back to the
/// quotient of the float images when the exact parts overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        return v;
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
