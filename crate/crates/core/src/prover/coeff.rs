//! Exact rational coefficients with an inline machine-integer fast path.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// A reduced rational. Values whose numerator and denominator fit in `i64`
/// are always stored inline, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Coeff {
    pub const ZERO: Coeff = Coeff::Small(0, 1);
    pub const ONE: Coeff = Coeff::Small(1, 1);

    fn from_i128(n: i128, d: i128) -> Coeff {
        let (mut n, mut d) = (n, d);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if d != 1 {
            let g = gcd(n, d);
            if g > 1 {
                n /= g;
                d /= g;
            }
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn from_rational(r: &BigRational) -> Coeff {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Coeff::Small(n, d),
            _ => Coeff::Big(Box::new(r.clone())),
        }
    }

    fn from_big(r: BigRational) -> Coeff {
        Coeff::from_rational(&r)
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Coeff::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Coeff::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Small(0, _))
    }

    pub fn add(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Small(a, 1), Coeff::Small(b, 1)) => match a.checked_add(*b) {
                Some(s) => Coeff::Small(s, 1),
                None => Coeff::from_i128(*a as i128 + *b as i128, 1),
            },
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match a.checked_mul(d).zip(c.checked_mul(b)).and_then(|(x, y)| x.checked_add(y)) {
                    Some(n) => Coeff::from_i128(n, b * d),
                    None => Coeff::from_big(self.to_rational() + rhs.to_rational()),
                }
            }
            _ => Coeff::from_big(self.to_rational() + rhs.to_rational()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Small(n, d) if *n != i64::MIN => Coeff::Small(-n, *d),
            _ => Coeff::from_big(-self.to_rational()),
        }
    }

    pub fn sub(&self, rhs: &Coeff) -> Coeff {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Small(a, 1), Coeff::Small(b, 1)) => match a.checked_mul(*b) {
                Some(p) => Coeff::Small(p, 1),
                None => Coeff::from_i128(*a as i128 * *b as i128, 1),
            },
            (Coeff::Small(a, b), Coeff::Small(c, d)) => {
                Coeff::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Coeff::from_big(self.to_rational() * rhs.to_rational()),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Small(n, 1) => write!(f, "{n}"),
            Coeff::Small(n, d) => write!(f, "{n}/{d}"),
            Coeff::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Coeff::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
