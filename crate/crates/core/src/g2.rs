//! The standard G2 structure on R⁷ and the splitting Λ² = Λ²₇ ⊕ Λ²₁₄.

use std::sync::OnceLock;

use num_rational::BigRational;
use serde::Serialize;

use crate::exalg::{flat, nullspace, sharp1, KForm, Scalar, Vector};
use crate::{Error, Result};

/// Signed blades of φ.
pub const PHI_TERMS: [([usize; 3], i64); 7] = [
    ([1, 2, 3], 1),
    ([1, 4, 5], 1),
    ([1, 6, 7], 1),
    ([2, 4, 6], 1),
    ([2, 5, 7], -1),
    ([3, 4, 7], -1),
    ([3, 5, 6], -1),
];

/// φ, *φ, the volume form and an echelon basis of Λ²₁₄, in a chosen scalar ring.
#[derive(Debug, Clone)]
pub struct G2Data<S: Scalar> {
    pub phi: KForm<S>,
    pub star_phi: KForm<S>,
    pub vol: KForm<S>,
    pub basis14: Vec<KForm<S>>,
    /// +1 when the standard orientation passes the self-check, −1 if it had to be flipped.
    orientation: i64,
}

/// A 2-form split as F = i(u)φ + F₁₄.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFormDecomp<S: Scalar> {
    pub u: Vector<S>,
    pub f7: KForm<S>,
    pub f14: KForm<S>,
}

/// Float summary of a decomposition, used for reports.
#[derive(Debug, Clone, Serialize)]
pub struct DecompSummary {
    pub u: Vec<f64>,
    pub f7: Vec<f64>,
    pub f14: Vec<f64>,
    pub f7_norm_sq: f64,
    pub f14_norm_sq: f64,
}

fn rational_data() -> &'static G2Data<BigRational> {
    static DATA: OnceLock<G2Data<BigRational>> = OnceLock::new();
    DATA.get_or_init(|| G2Data::build().expect("standard G2 structure is well formed"))
}

/// Shared float copy for hot loops.
pub fn g2_f64() -> &'static G2Data<f64> {
    static DATA: OnceLock<G2Data<f64>> = OnceLock::new();
    DATA.get_or_init(|| G2Data::standard())
}

impl G2Data<BigRational> {
    fn build() -> Result<Self> {
        let mut phi = KForm::zero(7, 3)?;
        for (axes, sign) in PHI_TERMS {
            phi = phi.add(&KForm::blade(7, &axes)?.scale(&BigRational::from_i64(sign)))?;
        }
        let mut orientation = 1;
        let mut star_phi = phi.hodge();
        // (i(e₁)φ) ∧ *φ must equal 3·*(e¹).
        let e1 = Vector::unit(7, 1);
        let lhs = phi.contract(&e1)?.wedge(&star_phi)?;
        let rhs = flat(&e1).hodge().scale(&BigRational::from_i64(3));
        if lhs != rhs {
            if lhs == rhs.neg() {
                orientation = -1;
                star_phi = star_phi.neg();
            } else {
                return Err(Error::InvalidInput("φ fails the orientation self-check".into()));
            }
        }
        let vol = KForm::volume(7)?.scale(&BigRational::from_i64(orientation));

        // Λ²₁₄ = ker(F ↦ F ∧ *φ).
        let rows: Vec<Vec<BigRational>> = {
            let images: Vec<KForm<BigRational>> = (0..21)
                .map(|i| {
                    let mut c = vec![BigRational::zero(); 21];
                    c[i] = BigRational::one();
                    KForm::from_coeffs(7, 2, c)?.wedge(&star_phi)
                })
                .collect::<Result<_>>()?;
            (0..7).map(|r| images.iter().map(|f| f.coeffs()[r].clone()).collect()).collect()
        };
        let basis14 = nullspace(&rows, 21)
            .into_iter()
            .map(|c| KForm::from_coeffs(7, 2, c))
            .collect::<Result<Vec<_>>>()?;
        debug_assert_eq!(basis14.len(), 14);
        Ok(G2Data { phi, star_phi, vol, basis14, orientation })
    }
}

impl<S: Scalar> G2Data<S> {
    /// The standard structure embedded into the scalar ring `S`.
    pub fn standard() -> Self {
        let q = rational_data();
        let conv = |f: &KForm<BigRational>| f.map(S::from_rational);
        G2Data {
            phi: conv(&q.phi),
            star_phi: conv(&q.star_phi),
            vol: conv(&q.vol),
            basis14: q.basis14.iter().map(conv).collect(),
            orientation: q.orientation,
        }
    }

    pub fn orientation(&self) -> i64 {
        self.orientation
    }

    /// Hodge star of the G2 metric and orientation.
    pub fn star(&self, f: &KForm<S>) -> KForm<S> {
        let h = f.hodge();
        if self.orientation == 1 {
            h
        } else {
            h.neg()
        }
    }

    /// F = i(u)φ + F₁₄ with u♭ = ⅓*(F ∧ *φ).
    pub fn decompose2(&self, f: &KForm<S>) -> Result<TwoFormDecomp<S>> {
        check_two_form(f)?;
        let u_flat = self.star(&f.wedge(&self.star_phi)?).scale(&S::from_ratio(1, 3));
        let u = sharp1(&u_flat)?;
        let f7 = self.phi.contract(&u)?;
        let f14 = f.sub(&f7)?;
        Ok(TwoFormDecomp { u, f7, f14 })
    }

    /// *(φ ∧ F): eigenvalue 2 on Λ²₇ and −1 on Λ²₁₄.
    pub fn star_wedge_phi(&self, f: &KForm<S>) -> Result<KForm<S>> {
        check_two_form(f)?;
        Ok(self.star(&self.phi.wedge(f)?))
    }

    /// ⟨ȧ − ⅙*E³, b⟩ + ⟨E − ½*(ȧ∧E²), i(b♯)φ⟩.
    pub fn spin7_pair1(&self, e: &KForm<S>, adot: &KForm<S>, b: &KForm<S>) -> Result<S> {
        check_two_form(e)?;
        let e2 = e.wedge(e)?;
        let e3 = e2.wedge(e)?;
        let first = adot.sub(&self.star(&e3).scale(&S::from_ratio(1, 6)))?.inner(b)?;
        let second_left = e.sub(&self.star(&adot.wedge(&e2)?).scale(&S::from_ratio(1, 2)))?;
        let second = second_left.inner(&self.phi.contract(&sharp1(b)?)?)?;
        Ok(first.plus(&second))
    }

    /// ⟨2ȧ∧E, i(b♯)*φ⟩ − ⟨E², b∧φ⟩.
    pub fn spin7_pair2(&self, e: &KForm<S>, adot: &KForm<S>, b: &KForm<S>) -> Result<S> {
        check_two_form(e)?;
        let first = adot.wedge(e)?.scale(&S::from_i64(2)).inner(&self.star_phi.contract(&sharp1(b)?)?)?;
        let second = e.wedge(e)?.inner(&b.wedge(&self.phi)?)?;
        Ok(first.minus(&second))
    }
}

impl TwoFormDecomp<f64> {
    pub fn summary(&self) -> DecompSummary {
        DecompSummary {
            u: self.u.comps.clone(),
            f7: self.f7.coeffs().to_vec(),
            f14: self.f14.coeffs().to_vec(),
            f7_norm_sq: self.f7.norm_sq(),
            f14_norm_sq: self.f14.norm_sq(),
        }
    }
}

fn check_two_form<S: Scalar>(f: &KForm<S>) -> Result<()> {
    if f.dim() != 7 {
        return Err(Error::DimensionMismatch(f.dim(), 7));
    }
    if f.degree() != 2 {
        return Err(Error::InvalidDegree { op: "g2 two-form operator", degree: f.degree() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exalg::rat;

    type Q = BigRational;

    fn e(axes: &[usize]) -> KForm<Q> {
        KForm::blade(7, axes).unwrap()
    }

    #[test]
    fn orientation_is_standard() {
        let g = G2Data::<Q>::standard();
        assert_eq!(g.orientation(), 1);
        assert_eq!(g.basis14.len(), 14);
        assert_eq!(g.phi.wedge(&g.star_phi).unwrap(), g.vol.scale(&rat(7, 1)));
    }

    #[test]
    fn decompose_single_blade() {
        let g = G2Data::<Q>::standard();
        let d = g.decompose2(&e(&[1, 2])).unwrap();
        assert_eq!(d.u, Vector::unit(7, 3).scale(&rat(1, 3)));
        let f7 = e(&[1, 2]).sub(&e(&[4, 7])).unwrap().sub(&e(&[5, 6])).unwrap().scale(&rat(1, 3));
        assert_eq!(d.f7, f7);
        let f14 = e(&[1, 2])
            .scale(&rat(2, 3))
            .add(&e(&[4, 7]).scale(&rat(1, 3)))
            .unwrap()
            .add(&e(&[5, 6]).scale(&rat(1, 3)))
            .unwrap();
        assert_eq!(d.f14, f14);
    }

    #[test]
    fn decompose_cancelling_pair() {
        let g = G2Data::<Q>::standard();
        let f = e(&[1, 2]).add(&e(&[4, 7])).unwrap();
        let d = g.decompose2(&f).unwrap();
        assert!(d.f7.is_zero());
        assert_eq!(d.f14, f);
    }

    #[test]
    fn decompose_pure_seven() {
        let g = G2Data::<Q>::standard();
        let f = g.phi.contract(&Vector::unit(7, 1)).unwrap();
        let d = g.decompose2(&f).unwrap();
        assert_eq!(d.u, Vector::unit(7, 1));
        assert!(d.f14.is_zero());
    }

    #[test]
    fn eigenvalues_of_star_wedge_phi() {
        let g = G2Data::<Q>::standard();
        for i in 1..=7 {
            let f = g.phi.contract(&Vector::unit(7, i)).unwrap();
            assert_eq!(g.star_wedge_phi(&f).unwrap(), f.scale(&rat(2, 1)));
        }
        for b in &g.basis14 {
            assert_eq!(g.star_wedge_phi(b).unwrap(), b.neg());
        }
        assert!(g.star_wedge_phi(&KForm::zero(7, 2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn pair_examples() {
        let g = G2Data::<Q>::standard();
        let zero2 = KForm::<Q>::zero(7, 2).unwrap();
        let zero1 = KForm::<Q>::zero(7, 1).unwrap();
        let adot = KForm::from_coeffs(7, 1, (1..=7).map(|i| rat(i, 5)).collect()).unwrap();
        let b = KForm::from_coeffs(7, 1, (1..=7).map(|i| rat(3 - i, 2)).collect()).unwrap();
        assert_eq!(g.spin7_pair1(&zero2, &adot, &b).unwrap(), adot.inner(&b).unwrap());
        assert_eq!(g.spin7_pair1(&zero2, &zero1, &zero1).unwrap(), rat(0, 1));
        assert_eq!(g.spin7_pair2(&zero2, &adot, &b).unwrap(), rat(0, 1));

        // adot = 0, E = i(u)φ, b = u♭: 3|u|² − |u|⁴.
        let u = Vector::new(vec![rat(1, 2), rat(0, 1), rat(1, 3), rat(0, 1), rat(0, 1), rat(-1, 1), rat(0, 1)]).unwrap();
        let n2 = u.norm_sq();
        let e_u = g.phi.contract(&u).unwrap();
        let expected = n2.times(&rat(3, 1)).minus(&n2.times(&n2));
        assert_eq!(g.spin7_pair1(&e_u, &zero1, &flat(&u)).unwrap(), expected);
    }

    #[test]
    fn rejects_wrong_degree() {
        let g = G2Data::<Q>::standard();
        assert!(g.decompose2(&e(&[1])).is_err());
    }
}
