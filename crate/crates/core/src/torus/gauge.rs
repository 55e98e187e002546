//! Line bundles over the torus: quantized flux, gauge potentials and the
//! gauge-theoretic observables built from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::field::{integrate_exact, FormField};
use super::grid::TorusGrid;
use crate::ddt;
use crate::exalg::{KForm, Scalar};
use crate::g2::g2_f64;
use crate::{Error, Result};

/// Antisymmetric integer matrix fixing the first Chern class; stored as the
/// 21 upper-triangle entries in row-major order (the lexicographic 2-form order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Flux {
    upper: [i64; 21],
}

impl TryFrom<Vec<i64>> for Flux {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Flux::from_upper(&v)
    }
}

impl From<Flux> for Vec<i64> {
    fn from(f: Flux) -> Self {
        f.upper.to_vec()
    }
}

fn pair_index(i: usize, j: usize) -> usize {
    // Position of e^{ij} (1 ≤ i < j ≤ 7) in lexicographic order.
    (1..i).map(|r| 7 - r).sum::<usize>() + (j - i - 1)
}

impl Flux {
    pub fn zero() -> Self {
        Flux { upper: [0; 21] }
    }

    pub fn from_upper(values: &[i64]) -> Result<Self> {
        let upper: [i64; 21] = values
            .try_into()
            .map_err(|_| Error::InvalidInput(format!("flux needs 21 integers, got {}", values.len())))?;
        Ok(Flux { upper })
    }

    /// Build from (i, j, n_ij) triples with 1 ≤ i, j ≤ 7, i ≠ j.
    pub fn from_entries(entries: &[(usize, usize, i64)]) -> Result<Self> {
        let mut f = Flux::zero();
        for &(i, j, n) in entries {
            if i == j || !(1..=7).contains(&i) || !(1..=7).contains(&j) {
                return Err(Error::InvalidInput(format!("bad flux index ({i}, {j})")));
            }
            let (lo, hi, v) = if i < j { (i, j, n) } else { (j, i, -n) };
            f.upper[pair_index(lo, hi)] = v;
        }
        Ok(f)
    }

    pub fn upper(&self) -> &[i64; 21] {
        &self.upper
    }

    /// n_ij with n_ji = −n_ij.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_index(i, j)],
            std::cmp::Ordering::Greater => -self.upper[pair_index(j, i)],
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|&v| v == 0)
    }

    /// The background curvature E₀ = 2π Σ n_ij dx^{ij}.
    pub fn form(&self) -> KForm<f64> {
        let coeffs = self.upper.iter().map(|&n| 2.0 * PI * n as f64).collect();
        KForm::from_coeffs(7, 2, coeffs).expect("21 coefficients")
    }

    /// Parse whitespace-separated integers.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad flux entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_upper(&values)
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.upper.iter().map(i64::to_string).collect();
        parts.join(" ") + "\n"
    }
}

/// The connection ∇₀ + √−1·a on the line bundle with the given flux.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePotential {
    pub a: FormField,
    pub flux: Flux,
}

impl GaugePotential {
    pub fn new(a: FormField, flux: Flux) -> Result<Self> {
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch(a.degree(), 1));
        }
        Ok(GaugePotential { a, flux })
    }

    pub fn zero(grid: &TorusGrid, flux: Flux) -> Result<Self> {
        Self::new(FormField::zeros(grid, 1)?, flux)
    }

    pub fn grid(&self) -> &TorusGrid {
        self.a.grid()
    }

    pub fn with_a(&self, a: FormField) -> Result<Self> {
        Self::new(a, self.flux.clone())
    }

    /// E = E₀ + da.
    pub fn curvature(&self) -> Result<FormField> {
        FormField::constant(self.grid(), &self.flux.form())?.add(&self.a.d()?)
    }
}

fn check_degree(f: &FormField, degree: usize) -> Result<()> {
    if f.degree() != degree {
        return Err(Error::DegreeMismatch(f.degree(), degree));
    }
    Ok(())
}

/// ∫ b ∧ R(E): the Karigiannis–Leung 1-form at `pot` in direction `b`.
pub fn kl_oneform(pot: &GaugePotential, b: &FormField) -> Result<f64> {
    check_degree(b, 1)?;
    let g = g2_f64();
    let e = pot.curvature()?;
    integrate_exact(&[b, &e], |v| v[0].wedge(&ddt::ddt_residual(g, &v[1])?)?.top())
}

/// The potential of the Karigiannis–Leung 1-form, normalized to vanish at a = 0.
/// The integrand along t ↦ t·a is cubic in t, so it is integrated in closed form.
pub fn kl_functional(pot: &GaugePotential) -> Result<f64> {
    let g = g2_f64();
    let e0 = pot.flux.form();
    let x = pot.a.d()?;
    let e0_2 = e0.wedge(&e0)?;
    let e0_3 = e0_2.wedge(&e0)?;
    let constant = e0_3.scale(&(1.0 / 6.0)).sub(&e0.wedge(&g.star_phi)?)?;
    integrate_exact(&[&pot.a, &x], |v| {
        let (a, x) = (&v[0], &v[1]);
        let x2 = x.wedge(x)?;
        let six = constant
            .add(&e0_2.wedge(x)?.scale(&0.25))?
            .add(&e0.wedge(&x2)?.scale(&(1.0 / 6.0)))?
            .add(&x2.wedge(x)?.scale(&(1.0 / 24.0)))?
            .sub(&x.wedge(&g.star_phi)?.scale(&0.5))?;
        a.wedge(&six)?.top()
    })
}

/// ∫ of the Karigiannis–Leung 1-form along the segment from `from` to `to`
/// (two-point Gauss–Legendre, exact for the cubic integrand).
pub fn kl_path_integral(flux: &Flux, from: &FormField, to: &FormField) -> Result<f64> {
    let dir = to.sub(from)?;
    let h = 0.5 / 3f64.sqrt();
    let mut total = 0.0;
    for t in [0.5 - h, 0.5 + h] {
        let pot = GaugePotential::new(from.axpy(t, &dir)?, flux.clone())?;
        total += 0.5 * kl_oneform(&pot, &dir)?;
    }
    Ok(total)
}

/// Θ(b₁, b₂, b₃) = ∫ b₁∧b₂∧b₃∧(*φ − ½E²).
pub fn theta3(pot: &GaugePotential, b1: &FormField, b2: &FormField, b3: &FormField) -> Result<f64> {
    for b in [b1, b2, b3] {
        check_degree(b, 1)?;
    }
    let g = g2_f64();
    let e = pot.curvature()?;
    integrate_exact(&[b1, b2, b3, &e], |v| {
        let w = g.star_phi.sub(&v[3].wedge(&v[3])?.scale(&0.5))?;
        v[0].wedge(&v[1])?.wedge(&v[2])?.wedge(&w)?.top()
    })
}

/// The alternating four-term sum for dΘ(b₁, …, b₄) and its largest term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dtheta4 {
    pub value: f64,
    pub term_scale: f64,
}

/// dΘ on four constant directions, each directional derivative taken analytically:
/// ∂_{b_i}Θ(b_j, b_k, b_l) = −∫ b_j∧b_k∧b_l∧db_i∧E.
pub fn dtheta4(pot: &GaugePotential, b: [&FormField; 4]) -> Result<Dtheta4> {
    for f in b {
        check_degree(f, 1)?;
    }
    let e = pot.curvature()?;
    let mut value = 0.0;
    let mut term_scale: f64 = 0.0;
    for i in 0..4 {
        let rest: Vec<&FormField> = (0..4).filter(|&j| j != i).map(|j| b[j]).collect();
        let db = b[i].d()?;
        let term = -integrate_exact(&[rest[0], rest[1], rest[2], &db, &e], |v| {
            v[0].wedge(&v[1])?.wedge(&v[2])?.wedge(&v[3])?.wedge(&v[4])?.top()
        })?;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        value += sign * term;
        term_scale = term_scale.max(term.abs());
    }
    Ok(Dtheta4 { value, term_scale })
}

fn moment_weight(g1: &FormField, g2: &FormField) -> Result<(FormField, FormField)> {
    check_degree(g1, 0)?;
    check_degree(g2, 0)?;
    Ok((g1.d()?, g2.d()?))
}

/// ⟨ν, g₁∧g₂⟩ = −∫ R(E) ∧ ½(g₁dg₂ − g₂dg₁).
pub fn nu(pot: &GaugePotential, g1: &FormField, g2: &FormField) -> Result<f64> {
    let (dg1, dg2) = moment_weight(g1, g2)?;
    let g = g2_f64();
    let e = pot.curvature()?;
    integrate_exact(&[&e, g1, g2, &dg1, &dg2], |v| {
        let w = v[4].scale(&v[1].top()?).sub(&v[3].scale(&v[2].top()?))?.scale(&0.5);
        Ok(-ddt::ddt_residual(g, &v[0])?.wedge(&w)?.top()?)
    })
}

/// (derivative of ⟨ν, g₁∧g₂⟩ along b, Θ(dg₁, dg₂, b)); equal when ν is a
/// multi-moment map for Θ.
pub fn nu_derivative_check(
    pot: &GaugePotential,
    g1: &FormField,
    g2: &FormField,
    b: &FormField,
) -> Result<(f64, f64)> {
    check_degree(b, 1)?;
    let (dg1, dg2) = moment_weight(g1, g2)?;
    let g = g2_f64();
    let e = pot.curvature()?;
    let db = b.d()?;
    // The linearization of R along b is db∧(E²/2 − *φ).
    let derivative = integrate_exact(&[&db, &e, g1, g2, &dg1, &dg2], |v| {
        let w = v[5].scale(&v[2].top()?).sub(&v[4].scale(&v[3].top()?))?.scale(&0.5);
        let lin = v[0].wedge(&v[1].wedge(&v[1])?.scale(&0.5).sub(&g.star_phi)?)?;
        Ok(-lin.wedge(&w)?.top()?)
    })?;
    Ok((derivative, theta3(pot, &dg1, &dg2, b)?))
}

/// a ↦ a + dχ + 2π Σ mᵢ dxⁱ.
pub fn gauge_shift(pot: &GaugePotential, chi: &FormField, winding: [i64; 7]) -> Result<GaugePotential> {
    check_degree(chi, 0)?;
    let coeffs = winding.iter().map(|&m| 2.0 * PI * m as f64).collect();
    let large = FormField::constant(pot.grid(), &KForm::from_coeffs(7, 1, coeffs)?)?;
    pot.with_a(pot.a.add(&chi.d()?)?.add(&large)?)
}

/// Pointwise s⁴E³/6 − E∧*φ over the grid and its L² norm.
pub fn residual_field(pot: &GaugePotential, s: f64) -> Result<(FormField, f64)> {
    let g = g2_f64();
    let e = pot.curvature()?;
    let r = FormField::try_from_fn(pot.grid(), 6, |p| ddt::scaled_residual(g, &e.at(p), &s))?;
    let norm = r.l2_norm();
    Ok((r, norm))
}

/// The Λ²₇ part of the flux form, as the vector u with π₇(E₀) = i(u)φ.
pub fn flux_seven_part(flux: &Flux) -> Result<Vec<f64>> {
    Ok(g2_f64().decompose2(&flux.form())?.u.comps)
}

/// Whether the flux form has no Λ²₇ component (decided exactly in integers).
pub fn flux_is_seven_free(flux: &Flux) -> Result<bool> {
    use num_rational::BigRational;
    let g = crate::g2::G2Data::<BigRational>::standard();
    let f = KForm::from_coeffs(7, 2, flux.upper.iter().map(|&n| BigRational::from_i64(n)).collect())?;
    Ok(g.decompose2(&f)?.f7.is_zero())
}
