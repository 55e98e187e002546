//! Real form fields on a torus grid with spectral differentiation.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use super::grid::{fft_nd, quadrature_resolution, wavenumber, TorusGrid};
use crate::exalg::basis::{basis, shuffle_sign};
use crate::exalg::{binomial, KForm};
use crate::{Error, Result};

/// A degree-k form field stored coefficient-major: `data[c * points + p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    grid: TorusGrid,
    degree: usize,
    data: Vec<f64>,
}

impl FormField {
    pub fn zeros(grid: &TorusGrid, degree: usize) -> Result<Self> {
        if degree > 7 {
            return Err(Error::InvalidDegree { op: "form field", degree });
        }
        Ok(FormField { grid: grid.clone(), degree, data: vec![0.0; binomial(7, degree) * grid.points()] })
    }

    pub fn from_data(grid: &TorusGrid, degree: usize, data: Vec<f64>) -> Result<Self> {
        let expected = binomial(7, degree) * grid.points();
        if data.len() != expected {
            return Err(Error::DimensionMismatch(data.len(), expected));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("form field values must be finite".into()));
        }
        Ok(FormField { grid: grid.clone(), degree, data })
    }

    /// The same form at every grid point.
    pub fn constant(grid: &TorusGrid, form: &KForm<f64>) -> Result<Self> {
        Self::from_fn(grid, form.degree(), |_| form.clone())
    }

    /// Evaluate a pointwise constructor at each grid point (in parallel).
    pub fn from_fn(grid: &TorusGrid, degree: usize, f: impl Fn(usize) -> KForm<f64> + Sync) -> Result<Self> {
        let forms: Vec<KForm<f64>> = (0..grid.points()).into_par_iter().map(&f).collect();
        Self::from_forms(grid, degree, &forms)
    }

    /// Fallible pointwise constructor; the first error in point order wins.
    pub fn try_from_fn(
        grid: &TorusGrid,
        degree: usize,
        f: impl Fn(usize) -> Result<KForm<f64>> + Sync,
    ) -> Result<Self> {
        let forms: Vec<KForm<f64>> = (0..grid.points()).into_par_iter().map(&f).collect::<Result<_>>()?;
        Self::from_forms(grid, degree, &forms)
    }

    fn from_forms(grid: &TorusGrid, degree: usize, forms: &[KForm<f64>]) -> Result<Self> {
        let mut out = Self::zeros(grid, degree)?;
        let np = grid.points();
        for (p, form) in forms.iter().enumerate() {
            if form.degree() != degree || form.dim() != 7 {
                return Err(Error::DegreeMismatch(form.degree(), degree));
            }
            for (c, v) in form.coeffs().iter().enumerate() {
                out.data[c * np + p] = *v;
            }
        }
        Ok(out)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn components(&self) -> usize {
        binomial(7, self.degree)
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let np = self.grid.points();
        &self.data[c * np..(c + 1) * np]
    }

    /// The form at one grid point.
    pub fn at(&self, p: usize) -> KForm<f64> {
        let np = self.grid.points();
        let coeffs = (0..self.components()).map(|c| self.data[c * np + p]).collect();
        KForm::from_coeffs(7, self.degree, coeffs).expect("layout matches degree")
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidInput("fields live on different grids".into()));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_map(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_map(other, |a, b| a - b))
    }

    /// self + c·other.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_map(other, |a, b| a + c * b))
    }

    fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        FormField { grid: self.grid.clone(), degree: self.degree, data }
    }

    pub fn scale(&self, c: f64) -> Self {
        FormField { grid: self.grid.clone(), degree: self.degree, data: self.data.iter().map(|v| v * c).collect() }
    }

    /// Grid-mean of the pointwise form.
    pub fn mean(&self) -> KForm<f64> {
        let np = self.grid.points() as f64;
        let coeffs = (0..self.components()).map(|c| self.component(c).iter().sum::<f64>() / np).collect();
        KForm::from_coeffs(7, self.degree, coeffs).expect("layout matches degree")
    }

    /// Mean over grid points of the pointwise inner product. Exact L² pairing
    /// for band-limited fields.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        let s: f64 = self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum();
        Ok(s / self.grid.points() as f64)
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).expect("same field").sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn spectra(&self) -> Vec<Vec<Complex64>> {
        let (n, m) = (self.grid.n(), self.grid.rank());
        (0..self.components())
            .into_par_iter()
            .map(|c| {
                let mut buf: Vec<Complex64> = self.component(c).iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft_nd(&mut buf, n, m, false);
                buf
            })
            .collect()
    }

    pub(crate) fn from_spectra(grid: &TorusGrid, degree: usize, spectra: Vec<Vec<Complex64>>) -> Self {
        let (n, m) = (grid.n(), grid.rank());
        let np = grid.points() as f64;
        let data = spectra
            .into_par_iter()
            .map(|mut buf| {
                fft_nd(&mut buf, n, m, true);
                buf.into_iter().map(|z| z.re / np).collect::<Vec<f64>>()
            })
            .flatten()
            .collect();
        FormField { grid: grid.clone(), degree, data }
    }

    /// Wavevector of a flat spectral index as integers per active axis; `None`
    /// when any component sits at the Nyquist slot.
    pub(crate) fn mode(&self, p: usize) -> Option<Vec<i64>> {
        self.grid.multi_index(p).into_iter().map(|i| wavenumber(i, self.grid.n())).collect()
    }

    /// Remove the Nyquist modes, making the field band-limited.
    pub fn project(&self) -> Self {
        let mut spectra = self.spectra();
        for p in 0..self.grid.points() {
            if self.mode(p).is_none() {
                for s in spectra.iter_mut() {
                    s[p] = Complex64::default();
                }
            }
        }
        Self::from_spectra(&self.grid, self.degree, spectra)
    }

    /// Exterior derivative, exact on band-limited fields.
    pub fn d(&self) -> Result<Self> {
        if self.degree >= 7 {
            return Err(Error::InvalidDegree { op: "d", degree: self.degree });
        }
        let spectra = self.spectra();
        let b = basis(7)?;
        let src = b.blades(self.degree);
        let np = self.grid.points();
        let modes: Vec<Option<Vec<i64>>> = (0..np).map(|p| self.mode(p)).collect();
        let mut out = vec![vec![Complex64::default(); np]; binomial(7, self.degree + 1)];
        for (slot, &axis) in self.grid.axes().iter().enumerate() {
            let bit = 1u16 << (axis - 1);
            for (c, &mask) in src.iter().enumerate() {
                if mask & bit != 0 {
                    continue;
                }
                let target = b.index_of(mask | bit);
                let sign = shuffle_sign(bit, mask) as f64;
                for p in 0..np {
                    if let Some(k) = &modes[p] {
                        let factor = Complex64::new(0.0, 2.0 * PI * k[slot] as f64 * sign);
                        out[target][p] += factor * spectra[c][p];
                    }
                }
            }
        }
        Ok(Self::from_spectra(&self.grid, self.degree + 1, out))
    }

    /// Pointwise Hodge star.
    pub fn hodge(&self) -> Self {
        let np = self.grid.points();
        let b = basis(7).expect("dimension 7");
        let full = b.full_mask();
        let mut data = vec![0.0; binomial(7, 7 - self.degree) * np];
        for (c, &mask) in b.blades(self.degree).iter().enumerate() {
            let comp = full & !mask;
            let target = b.index_of(comp);
            let sign = shuffle_sign(mask, comp) as f64;
            for p in 0..np {
                data[target * np + p] = sign * self.data[c * np + p];
            }
        }
        FormField { grid: self.grid.clone(), degree: 7 - self.degree, data }
    }

    /// d* = (−1)^k *d* on k-forms; the L² adjoint of [`FormField::d`].
    pub fn codiff(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InvalidDegree { op: "codiff", degree: 0 });
        }
        let out = self.hodge().d()?.hodge();
        Ok(if self.degree % 2 == 0 { out } else { out.scale(-1.0) })
    }

    /// The band-limited interpolant sampled on a finer grid with `m` points per axis.
    pub fn resample(&self, m: usize) -> Self {
        let rank = self.grid.rank();
        let fine = self.grid.with_resolution(m);
        let fine_points = fine.points();
        let spectra = self.spectra();
        let np = self.grid.points() as f64;
        let data = spectra
            .into_par_iter()
            .map(|s| {
                let mut buf = vec![Complex64::default(); fine_points];
                for (p, z) in s.iter().enumerate() {
                    let Some(k) = self.mode(p) else { continue };
                    let mut q = 0;
                    for &kk in &k {
                        q = q * m + kk.rem_euclid(m as i64) as usize;
                    }
                    buf[q] = z / np;
                }
                fft_nd(&mut buf, m, rank, true);
                buf.into_iter().map(|z| z.re).collect::<Vec<f64>>()
            })
            .flatten()
            .collect();
        FormField { grid: fine, degree: self.degree, data }
    }

    /// Uniform noise in [−amplitude, amplitude] with the Nyquist modes removed.
    pub fn random(grid: &TorusGrid, degree: usize, amplitude: f64, rng: &mut impl Rng) -> Result<Self> {
        let len = binomial(7, degree) * grid.points();
        let data = (0..len).map(|_| rng.gen_range(-amplitude..=amplitude)).collect();
        Ok(Self::from_data(grid, degree, data)?.project())
    }
}

/// ∫ of a pointwise top-degree expression in several fields, evaluated on the
/// quadrature grid where products of up to five band-limited fields are exact.
pub fn integrate_exact(
    fields: &[&FormField],
    f: impl Fn(&[KForm<f64>]) -> Result<f64> + Sync,
) -> Result<f64> {
    let Some(first) = fields.first() else {
        return Err(Error::InvalidInput("nothing to integrate".into()));
    };
    if fields.iter().any(|g| g.grid() != first.grid()) {
        return Err(Error::InvalidInput("fields live on different grids".into()));
    }
    let m = quadrature_resolution(first.grid().n());
    let fine: Vec<FormField> = fields.iter().map(|g| g.resample(m)).collect();
    let np = fine[0].grid().points();
    let values: Vec<f64> = (0..np)
        .into_par_iter()
        .map(|p| {
            let forms: Vec<KForm<f64>> = fine.iter().map(|g| g.at(p)).collect();
            f(&forms)
        })
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / np as f64)
}

/// Mean of the single coefficient of a 7-form field.
pub fn integrate(f: &FormField) -> Result<f64> {
    if f.degree() != 7 {
        return Err(Error::InvalidDegree { op: "integrate", degree: f.degree() });
    }
    Ok(f.mean().top()?)
}
