use std::fmt;

use super::basis::{basis, rank_below, shuffle_sign, Basis, MultiIndex};
use super::scalar::Scalar;
use crate::{Error, Result};

/// A degree-k alternating form on Rⁿ (n ∈ {7, 8}) with dense coefficients
/// in lexicographic blade order.
#[derive(Clone, PartialEq)]
pub struct KForm<S> {
    dim: usize,
    degree: usize,
    coeffs: Vec<S>,
}

/// A vector in Rⁿ with components in the scalar ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S> {
    pub comps: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(comps: Vec<S>) -> Result<Self> {
        if comps.len() != 7 && comps.len() != 8 {
            return Err(Error::UnsupportedDimension(comps.len()));
        }
        Ok(Vector { comps })
    }

    pub fn zeros(dim: usize) -> Self {
        Vector { comps: vec![S::zero(); dim] }
    }

    /// Standard basis vector e_i (1-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.comps[i - 1] = S::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn dot(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (a, b) in self.comps.iter().zip(&other.comps) {
            acc.plus_assign(&a.times(b));
        }
        acc
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn plus(&self, other: &Self) -> Self {
        Vector { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Vector { comps: self.comps.iter().map(|a| a.times(c)).collect() }
    }
}

impl<S: Scalar> KForm<S> {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        let b = basis(dim)?;
        if degree > dim {
            return Err(Error::InvalidDegree { op: "zero", degree });
        }
        Ok(KForm { dim, degree, coeffs: vec![S::zero(); b.count(degree)] })
    }

    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<S>) -> Result<Self> {
        let b = basis(dim)?;
        if degree > dim {
            return Err(Error::InvalidDegree { op: "from_coeffs", degree });
        }
        if coeffs.len() != b.count(degree) {
            return Err(Error::InvalidInput(format!(
                "a {degree}-form on R^{dim} has {} coefficients, got {}",
                b.count(degree),
                coeffs.len()
            )));
        }
        Ok(KForm { dim, degree, coeffs })
    }

    pub fn scalar(dim: usize, value: S) -> Result<Self> {
        Self::from_coeffs(dim, 0, vec![value])
    }

    /// The blade `e^{axes}` (1-based axes, strictly increasing).
    pub fn blade(dim: usize, axes: &[usize]) -> Result<Self> {
        let idx = MultiIndex::new(axes)?;
        if axes.iter().any(|&a| a > dim) {
            return Err(Error::InvalidInput(format!("axis out of range for R^{dim}: {axes:?}")));
        }
        let mut f = Self::zero(dim, axes.len())?;
        let pos = basis(dim)?.index_of(idx.mask());
        f.coeffs[pos] = S::one();
        Ok(f)
    }

    /// Volume form e^{1..n}.
    pub fn volume(dim: usize) -> Result<Self> {
        Self::from_coeffs(dim, dim, vec![S::one()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    fn basis(&self) -> &'static Basis {
        basis(self.dim).expect("dimension validated at construction")
    }

    /// Coefficient of the blade with the given (1-based, increasing) axes.
    pub fn get(&self, axes: &[usize]) -> Result<S> {
        let idx = MultiIndex::new(axes)?;
        if idx.degree() != self.degree {
            return Err(Error::DegreeMismatch(idx.degree(), self.degree));
        }
        Ok(self.coeffs[self.basis().index_of(idx.mask())].clone())
    }

    pub fn get_mask(&self, mask: u16) -> &S {
        &self.coeffs[self.basis().index_of(mask)]
    }

    /// Iterate `(mask, coefficient)` over nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (u16, &S)> {
        self.basis()
            .blades(self.degree)
            .iter()
            .copied()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.plus(b)).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.minus(b)).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn neg(&self) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|a| a.negated()).collect())
    }

    fn with_coeffs(&self, coeffs: Vec<S>) -> Self {
        KForm { dim: self.dim, degree: self.degree, coeffs }
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.dim, degree)
            .map_err(|_| Error::InvalidDegree { op: "wedge", degree })?;
        let b = self.basis();
        for (ma, a) in self.terms() {
            for (mb, c) in other.terms() {
                if ma & mb != 0 {
                    continue;
                }
                let prod = a.times(c);
                let slot = &mut out.coeffs[b.index_of(ma | mb)];
                if shuffle_sign(ma, mb) > 0 {
                    slot.plus_assign(&prod);
                } else {
                    slot.minus_assign(&prod);
                }
            }
        }
        Ok(out)
    }

    /// `self ∧ self ∧ ... ` (`k` factors, `k ≥ 1`).
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Self::scalar(self.dim, S::one());
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Interior product i(v)α.
    pub fn contract(&self, v: &Vector<S>) -> Result<Self> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch(v.dim(), self.dim));
        }
        if self.degree == 0 {
            return Err(Error::InvalidDegree { op: "contract", degree: 0 });
        }
        let mut out = Self::zero(self.dim, self.degree - 1)?;
        let b = self.basis();
        for (m, a) in self.terms() {
            for (j, vj) in v.comps.iter().enumerate() {
                if m & (1 << j) == 0 || vj.is_zero() {
                    continue;
                }
                let term = a.times(vj);
                let slot = &mut out.coeffs[b.index_of(m & !(1 << j))];
                if rank_below(m, j) % 2 == 0 {
                    slot.plus_assign(&term);
                } else {
                    slot.minus_assign(&term);
                }
            }
        }
        Ok(out)
    }

    /// Euclidean Hodge star with orientation e^{1..n}: *(e^I) = sign(I, Iᶜ) e^{Iᶜ}.
    pub fn hodge(&self) -> Self {
        let b = self.basis();
        let full = b.full_mask();
        let mut coeffs = vec![S::zero(); b.count(self.dim - self.degree)];
        for (m, a) in self.terms() {
            let c = full & !m;
            coeffs[b.index_of(c)] = if shuffle_sign(m, c) > 0 { a.clone() } else { a.negated() };
        }
        KForm { dim: self.dim, degree: self.dim - self.degree, coeffs }
    }

    /// Pointwise metric pairing; orthonormal blades have norm one.
    pub fn inner(&self, other: &Self) -> Result<S> {
        self.check_same(other)?;
        let mut acc = S::zero();
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if !a.is_zero() && !b.is_zero() {
                acc.plus_assign(&a.times(b));
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> S {
        self.inner(self).expect("same shape")
    }

    /// The single coefficient of a top-degree or degree-0 form.
    pub fn top(&self) -> Result<S> {
        if self.coeffs.len() != 1 {
            return Err(Error::InvalidDegree { op: "top", degree: self.degree });
        }
        Ok(self.coeffs[0].clone())
    }

    /// Map every coefficient into another scalar ring.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KForm<T> {
        KForm { dim: self.dim, degree: self.degree, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Embed a form on R⁷ into R⁸ = R_t × R⁷ (axis 1 of R⁸ is the t-direction).
    pub fn lift_to_cylinder(&self) -> Result<Self> {
        if self.dim != 7 {
            return Err(Error::DimensionMismatch(self.dim, 7));
        }
        let b8 = basis(8)?;
        let mut out = Self::zero(8, self.degree)?;
        for (m, a) in self.terms() {
            out.coeffs[b8.index_of(m << 1)] = a.clone();
        }
        Ok(out)
    }
}

/// e^i as a 1-form.
pub fn flat<S: Scalar>(v: &Vector<S>) -> KForm<S> {
    KForm { dim: v.dim(), degree: 1, coeffs: v.comps.clone() }
}

/// The metric dual vector of a 1-form.
pub fn sharp1<S: Scalar>(b: &KForm<S>) -> Result<Vector<S>> {
    if b.degree != 1 {
        return Err(Error::InvalidDegree { op: "sharp1", degree: b.degree });
    }
    Ok(Vector { comps: b.coeffs.clone() })
}

impl<S: Scalar> fmt::Debug for KForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<R{}, deg {}>[", self.dim, self.degree)?;
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let axes: String = MultiIndex::from_mask(m).axes().iter().map(|a| a.to_string()).collect();
            write!(f, "{c:?}·e{axes}")?;
        }
        write!(f, "]")
    }
}
