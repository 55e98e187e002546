//! Sparse multivariate polynomials with exact rational coefficients.

use std::fmt;

use std::collections::hash_map::Entry;

use num_rational::BigRational;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::coeff::Coeff;


/// Most factors a monomial may carry (7 bits per slot in a `u128`).
pub const MAX_DEGREE: usize = 18;
const SLOT_BITS: u32 = 7;
const SLOT_MASK: u128 = (1 << SLOT_BITS) - 1;

/// Number of indeterminates; indices are assigned by [`Var`].
pub const VAR_COUNT: usize = 78;

/// Named indeterminate families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    /// Coefficient of e^{ij}, by lexicographic blade position 0..21.
    F(usize),
    U(usize),
    A(usize),
    V(usize),
    S,
    /// Coefficient on the m-th Λ²₁₄ basis element, 0..14.
    C(usize),
    /// A second 2-form, by blade position 0..21.
    G(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::F(i) => i,
            Var::U(i) => 21 + i,
            Var::A(i) => 28 + i,
            Var::V(i) => 35 + i,
            Var::S => 42,
            Var::C(i) => 43 + i,
            Var::G(i) => 57 + i,
        }
    }

    pub fn from_index(i: usize) -> Var {
        match i {
            0..=20 => Var::F(i),
            21..=27 => Var::U(i - 21),
            28..=34 => Var::A(i - 28),
            35..=41 => Var::V(i - 35),
            42 => Var::S,
            43..=56 => Var::C(i - 43),
            _ => Var::G(i - 57),
        }
    }

    pub fn name(self) -> String {
        let pair = |p: usize| {
            let mut n = 0;
            for i in 1..=7 {
                for j in i + 1..=7 {
                    if n == p {
                        return format!("{i}{j}");
                    }
                    n += 1;
                }
            }
            unreachable!("blade position out of range")
        };
        match self {
            Var::F(p) => format!("F{}", pair(p)),
            Var::G(p) => format!("G{}", pair(p)),
            Var::U(i) => format!("u{}", i + 1),
            Var::A(i) => format!("a{}", i + 1),
            Var::V(i) => format!("v{}", i + 1),
            Var::S => "s".into(),
            Var::C(i) => format!("c{}", i + 1),
        }
    }
}

/// A monomial: up to [`MAX_DEGREE`] variable indices (offset by one) packed in
/// ascending order, lowest slot first; empty slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn var(v: usize) -> Self {
        assert!(v < VAR_COUNT);
        Monomial(v as u128 + 1)
    }

    fn unpack(self, out: &mut [u8; MAX_DEGREE]) -> usize {
        let mut m = self.0;
        let mut n = 0;
        while m != 0 {
            out[n] = (m & SLOT_MASK) as u8;
            m >>= SLOT_BITS;
            n += 1;
        }
        n
    }

    pub fn degree(self) -> usize {
        let mut buf = [0u8; MAX_DEGREE];
        self.unpack(&mut buf)
    }

    /// Variable indices with multiplicity, ascending.
    pub fn vars(self) -> Vec<usize> {
        let mut buf = [0u8; MAX_DEGREE];
        let n = self.unpack(&mut buf);
        buf[..n].iter().map(|&v| v as usize - 1).collect()
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        if self.0 == 0 {
            return other;
        }
        if other.0 == 0 {
            return self;
        }
        let (mut a, mut b) = ([0u8; MAX_DEGREE], [0u8; MAX_DEGREE]);
        let (na, nb) = (self.unpack(&mut a), other.unpack(&mut b));
        assert!(na + nb <= MAX_DEGREE, "monomial degree exceeds {MAX_DEGREE}");
        let (mut i, mut j, mut shift, mut out) = (0, 0, 0u32, 0u128);
        while i < na || j < nb {
            let take_a = j == nb || (i < na && a[i] <= b[j]);
            let v = if take_a {
                i += 1;
                a[i - 1]
            } else {
                j += 1;
                b[j - 1]
            };
            out |= (v as u128) << shift;
            shift += SLOT_BITS;
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < vars.len() {
            let mut j = i;
            while j < vars.len() && vars[j] == vars[i] {
                j += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", Var::from_index(vars[i]).name())?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Sparse polynomial: terms sorted by monomial, no zero coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Coeff)>,
}

impl MultiPoly {
    pub fn var(v: Var) -> Self {
        MultiPoly { terms: vec![(Monomial::var(v.index()), Coeff::ONE)] }
    }

    pub fn constant(c: &BigRational) -> Self {
        Self::from_coeff(Coeff::from_rational(c))
    }

    fn from_coeff(c: Coeff) -> Self {
        if c.is_zero() {
            MultiPoly::default()
        } else {
            MultiPoly { terms: vec![(Monomial::ONE, c)] }
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::ZERO),
            [(m, c)] if *m == Monomial::ONE => Some(c.clone()),
            _ => None,
        }
    }

    fn scale_by(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return MultiPoly::default();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    fn merge(&self, rhs: &Self, negate_rhs: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &Coeff| if negate_rhs { c.neg() } else { c.clone() };
        while i < self.terms.len() && j < rhs.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &rhs.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*mb, sgn(cb)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_rhs { ca.sub(cb) } else { ca.add(cb) };
                    if !c.is_zero() {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(rhs.terms[j..].iter().map(|(m, c)| (*m, sgn(c))));
        MultiPoly { terms: out }
    }

    /// Evaluate at a point given per variable index.
    pub fn eval(&self, point: &dyn Fn(usize) -> BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.to_rational();
            for v in m.vars() {
                t *= point(v);
            }
            acc += t;
        }
        acc
    }

    /// The term with the smallest monomial, used as a nonzero witness.
    pub fn leading(&self) -> Option<(Monomial, BigRational)> {
        self.terms.first().map(|(m, c)| (*m, c.to_rational()))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{m}")?;
        }
        Ok(())
    }
}

impl crate::exalg::Scalar for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn one() -> Self {
        MultiPoly::from_coeff(Coeff::ONE)
    }
    fn from_rational(r: &BigRational) -> Self {
        MultiPoly::constant(r)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.merge(rhs, false)
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.merge(rhs, true)
    }
    fn times(&self, rhs: &Self) -> Self {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return MultiPoly::default();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale_by(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale_by(&c);
        }
        let mut acc: FxHashMap<Monomial, Coeff> = FxHashMap::default();
        acc.reserve(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca.mul(cb);
                match acc.entry(ma.mul(*mb)) {
                    Entry::Occupied(mut e) => {
                        let s = e.get().add(&prod);
                        *e.get_mut() = s;
                    }
                    Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        MultiPoly { terms }
    }
    fn negated(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }
    fn scaled(&self, k: i64) -> Self {
        self.scale_by(&Coeff::Small(k, 1))
    }
}

/// Render a rational as `p/q` or `p`.
pub fn fmt_rational(c: &BigRational) -> String {
    Coeff::from_rational(c).to_string()
}
