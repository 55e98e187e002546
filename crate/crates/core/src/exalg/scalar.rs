//! Scalar rings the exterior algebra is generic over.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring with unit, with the handful of conversions the
/// algebra needs to embed rational constants such as `1/6`.
///
/// Arithmetic goes through borrowing methods so that heavyweight backends
/// (polynomials) are not cloned on every product.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn is_zero(&self) -> bool;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;

    fn plus_assign(&mut self, rhs: &Self) {
        *self = self.plus(rhs);
    }

    fn minus_assign(&mut self, rhs: &Self) {
        *self = self.minus(rhs);
    }

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Multiply by an integer, the common case for signs and small constants.
    fn scaled(&self, k: i64) -> Self {
        match k {
            0 => Self::zero(),
            1 => self.clone(),
            -1 => self.negated(),
            _ => self.times(&Self::from_i64(k)),
        }
    }
}

/// A scalar ring in which nonzero elements can be inverted.
pub trait Field: Scalar {
    fn recip(&self) -> Option<Self>;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64;
    /// Whether a pivot of this size should be treated as zero.
    fn negligible(&self, scale: f64) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn plus_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn scaled(&self, k: i64) -> Self {
        self * k as f64
    }
}

impl Field for f64 {
    fn recip(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn plus_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
}

impl Field for BigRational {
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| num_traits::Inv::inv(self.clone()))
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
}

/// Shorthand for building exact rationals in tests and tables.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
