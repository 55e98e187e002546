use super::basis::basis;
use super::form::{KForm, Vector};
use super::scalar::{Field, Scalar};
use crate::{Error, Result};

/// An n×n matrix acting on vectors of Rⁿ, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Endo<S> {
    n: usize,
    m: Vec<S>,
}

impl<S: Scalar> Endo<S> {
    pub fn zeros(n: usize) -> Self {
        Endo { n, m: vec![S::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = Self::zeros(n);
        for i in 0..n {
            e.m[i * n + i] = S::one();
        }
        e
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("endomorphism must be square".into()));
        }
        Ok(Endo { n, m: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.m[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: S) {
        self.m[row * self.n + col] = v;
    }

    pub fn apply(&self, v: &Vector<S>) -> Result<Vector<S>> {
        if v.dim() != self.n {
            return Err(Error::DimensionMismatch(v.dim(), self.n));
        }
        let comps = (0..self.n)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.n {
                    acc.plus_assign(&self.get(i, j).times(&v.comps[j]));
                }
                acc
            })
            .collect();
        Ok(Vector { comps })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a.times(other.get(k, j));
                    out.m[i * n + j].plus_assign(&t);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(Endo { n: self.n, m: self.m.iter().zip(&other.m).map(|(a, b)| a.plus(b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(Endo { n: self.n, m: self.m.iter().zip(&other.m).map(|(a, b)| a.minus(b)).collect() })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.m[j * n + i] = self.m[i * n + j].clone();
            }
        }
        out
    }

    /// Determinant by Laplace expansion with minors memoised over column
    /// subsets; valid over any commutative ring.
    pub fn det(&self) -> S {
        let n = self.n;
        if n == 0 {
            return S::one();
        }
        // minors[c] = determinant of rows (n - |c|)..n restricted to columns c.
        let mut minors: Vec<Option<S>> = vec![None; 1 << n];
        minors[0] = Some(S::one());
        for size in 1..=n {
            let row = n - size;
            for cols in 0u32..(1 << n) {
                if cols.count_ones() as usize != size {
                    continue;
                }
                let mut acc = S::zero();
                let mut pos = 0;
                for j in 0..n {
                    if cols & (1 << j) == 0 {
                        continue;
                    }
                    let entry = self.get(row, j);
                    if !entry.is_zero() {
                        let sub = minors[(cols & !(1 << j)) as usize].as_ref().expect("smaller minor");
                        let t = entry.times(sub);
                        if pos % 2 == 0 {
                            acc.plus_assign(&t);
                        } else {
                            acc.minus_assign(&t);
                        }
                    }
                    pos += 1;
                }
                minors[cols as usize] = Some(acc);
            }
        }
        minors[(1 << n) - 1].take().expect("full minor")
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| *self.get(i, j) == self.get(j, i).negated()))
    }
}

/// The endomorphism F♯ defined by g(F♯u, v) = F(u, v).
pub fn sharp2<S: Scalar>(f: &KForm<S>) -> Result<Endo<S>> {
    if f.degree() != 2 {
        return Err(Error::InvalidDegree { op: "sharp2", degree: f.degree() });
    }
    let n = f.dim();
    let mut out = Endo::zeros(n);
    for (mask, c) in f.terms() {
        let i = mask.trailing_zeros() as usize;
        let k = 15 - mask.leading_zeros() as usize;
        // F(e_i, e_k) = c for i < k; column i of F♯ is F♯(e_i).
        out.set(k, i, c.clone());
        out.set(i, k, c.negated());
    }
    Ok(out)
}

/// Pullback (A*α)(v₁, …, v_k) = α(Av₁, …, Av_k).
pub fn pullback<S: Scalar>(a: &Endo<S>, alpha: &KForm<S>) -> Result<KForm<S>> {
    let n = alpha.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch(a.dim(), n));
    }
    // A*e^j = Σ_i A_{ji} e^i.
    let covectors: Vec<KForm<S>> = (0..n)
        .map(|j| KForm::from_coeffs(n, 1, (0..n).map(|i| a.get(j, i).clone()).collect()))
        .collect::<Result<_>>()?;
    let mut out = KForm::zero(n, alpha.degree())?;
    if alpha.degree() == 0 {
        return Ok(alpha.clone());
    }
    for (mask, c) in alpha.terms() {
        let mut axes = (0..n).filter(|b| mask & (1 << b) != 0);
        let first = axes.next().expect("degree ≥ 1");
        let mut prod = covectors[first].clone();
        for j in axes {
            prod = prod.wedge(&covectors[j])?;
        }
        out = out.add(&prod.scale(c))?;
    }
    Ok(out)
}

/// ((A)⁻¹)*b for a 1-form b, i.e. b ∘ A⁻¹.
pub fn solve_endo<S: Field>(a: &Endo<S>, b: &KForm<S>) -> Result<KForm<S>> {
    if b.degree() != 1 {
        return Err(Error::InvalidDegree { op: "solve_endo", degree: b.degree() });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    // (A⁻¹)*b = A⁻ᵀ b: solve Aᵀ x = b.
    let x = lu_solve(&a.transpose(), b.coeffs())?;
    KForm::from_coeffs(b.dim(), 1, x)
}

/// Gaussian elimination with partial pivoting.
pub fn lu_solve<S: Field>(a: &Endo<S>, rhs: &[S]) -> Result<Vec<S>> {
    let n = a.dim();
    let mut m: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j).clone()).collect()).collect();
    let mut x: Vec<S> = rhs.to_vec();
    let scale = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).magnitude()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut min_pivot = f64::INFINITY;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| m[p][col].magnitude().total_cmp(&m[q][col].magnitude()))
            .expect("nonempty");
        if m[piv][col].negligible(scale) {
            return Err(Error::Singular { condition: f64::INFINITY });
        }
        min_pivot = min_pivot.min(m[piv][col].magnitude());
        m.swap(col, piv);
        x.swap(col, piv);
        let inv = m[col][col].recip().ok_or(Error::Singular { condition: f64::INFINITY })?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].times(&inv);
            for c in col..n {
                let t = factor.times(&m[col][c]);
                m[r][c] = m[r][c].minus(&t);
            }
            let t = factor.times(&x[col]);
            x[r] = x[r].minus(&t);
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col].clone();
        for c in col + 1..n {
            acc = acc.minus(&m[col][c].times(&x[c]));
        }
        x[col] = acc.times(&m[col][col].recip().expect("checked pivot"));
    }
    let condition = scale / min_pivot;
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::Singular { condition });
    }
    Ok(x)
}

/// Basis of the right nullspace of a matrix given by rows, one vector per free
/// column of the reduced row echelon form, ordered by free column.
pub fn nullspace<S: Field>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let scale = rows.iter().flatten().map(Field::magnitude).fold(0.0, f64::max);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len())
            .filter(|&i| !m[i][c].negligible(scale))
            .max_by(|&i, &j| m[i][c].magnitude().total_cmp(&m[j][c].magnitude()))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("nonzero pivot");
        m[r] = m[r].iter().map(|x| x.times(&inv)).collect();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = f.times(&m[r][j]);
                    m[i][j] = m[i][j].minus(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); ncols];
            v[free] = S::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][free].negated();
            }
            v
        })
        .collect()
}

/// Evaluate a k-form on k vectors directly: α(v₁, …, v_k) = Σ_I α_I det[v_j^{i}].
pub fn evaluate<S: Scalar>(alpha: &KForm<S>, vectors: &[Vector<S>]) -> Result<S> {
    if vectors.len() != alpha.degree() {
        return Err(Error::DegreeMismatch(vectors.len(), alpha.degree()));
    }
    let k = vectors.len();
    let b = basis(alpha.dim())?;
    let mut acc = S::zero();
    for (mask, c) in alpha.terms() {
        let axes: Vec<usize> = (0..alpha.dim()).filter(|x| mask & (1 << x) != 0).collect();
        let rows = (0..k).map(|r| (0..k).map(|j| vectors[j].comps[axes[r]].clone()).collect()).collect();
        let minor = Endo::from_rows(rows)?.det();
        acc.plus_assign(&c.times(&minor));
    }
    let _ = b;
    Ok(acc)
}
