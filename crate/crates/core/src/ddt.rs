//! Pointwise dDT and Spin(7)-dDT operators.
//!
//! Every operator takes the real curvature 2-form `E`, where the curvature of
//! the Hermitian connection is `F = √−1·E`. Under this substitution:
//!
//! * the dDT equation ⅙F³ + F∧*φ = 0 becomes R(E) = E³/6 − E∧*φ = 0;
//! * the almost-calibrated weight 1 + ½*(φ∧F²) becomes θ(E) = 1 − ½*(φ∧E²);
//! * the gradient of the Karigiannis–Leung functional for the metric G is
//!   η(E)/θ(E) with η = *(R + ½*(φ∧*E²)∧*E).

use crate::exalg::{sharp2, solve_endo, Endo, Field, KForm, Scalar};
use crate::g2::G2Data;
use crate::{Error, Result};

/// Default |θ| below which the deformed metric counts as degenerate.
pub const THETA_TOLERANCE: f64 = 1e-9;

/// Residual, η and θ computed together from one curvature value.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResidual<S: Scalar> {
    pub r6: KForm<S>,
    pub eta: KForm<S>,
    pub theta: S,
}

fn check(e: &KForm<impl Scalar>) -> Result<()> {
    if e.dim() != 7 {
        return Err(Error::DimensionMismatch(e.dim(), 7));
    }
    if e.degree() != 2 {
        return Err(Error::InvalidDegree { op: "curvature operator", degree: e.degree() });
    }
    Ok(())
}

/// R(E) = E³/6 − E∧*φ.
pub fn ddt_residual<S: Scalar>(g: &G2Data<S>, e: &KForm<S>) -> Result<KForm<S>> {
    scaled_residual(g, e, &S::one())
}

/// s⁴E³/6 − E∧*φ, the residual after rescaling φ by r³ with s = 1/r.
pub fn scaled_residual<S: Scalar>(g: &G2Data<S>, e: &KForm<S>, s: &S) -> Result<KForm<S>> {
    check(e)?;
    let s2 = s.times(s);
    let cubic = e.power(3)?.scale(&s2.times(&s2).times(&S::from_ratio(1, 6)));
    cubic.sub(&e.wedge(&g.star_phi)?)
}

/// ½*(φ∧*E²)∧*E, the correction turning *R into η.
fn correction<S: Scalar>(g: &G2Data<S>, e: &KForm<S>) -> Result<KForm<S>> {
    let e2 = e.wedge(e)?;
    let v = g.star(&g.phi.wedge(&g.star(&e2))?);
    Ok(v.wedge(&g.star(e))?.scale(&S::from_ratio(1, 2)))
}

/// η = *(R(E) + ½*(φ∧*E²)∧*E).
pub fn eta<S: Scalar>(g: &G2Data<S>, e: &KForm<S>) -> Result<KForm<S>> {
    let r = ddt_residual(g, e)?;
    Ok(g.star(&r.add(&correction(g, e)?)?))
}

/// θ(E) = 1 − ½*(φ∧E²).
pub fn theta_weight<S: Scalar>(g: &G2Data<S>, e: &KForm<S>) -> Result<S> {
    check(e)?;
    let top = g.star(&g.phi.wedge(&e.wedge(e)?)?).top()?;
    Ok(S::one().minus(&top.times(&S::from_ratio(1, 2))))
}

pub fn point_residual<S: Scalar>(g: &G2Data<S>, e: &KForm<S>) -> Result<PointResidual<S>> {
    let r6 = ddt_residual(g, e)?;
    let eta = g.star(&r6.add(&correction(g, e)?)?);
    Ok(PointResidual { r6, eta, theta: theta_weight(g, e)? })
}

/// ⟨a, b⟩ for the metric pulled back by I + E♯.
pub fn deformed_inner<S: Field>(e: &KForm<S>, a: &KForm<S>, b: &KForm<S>) -> Result<S> {
    check(e)?;
    let m = Endo::identity(7).add(&sharp2(e)?)?;
    solve_endo(&m, a)?.inner(&solve_endo(&m, b)?)
}

/// η(E)/θ(E); errors when |θ| ≤ `theta_tol`.
pub fn grad_density<S: Field>(g: &G2Data<S>, e: &KForm<S>, theta_tol: f64) -> Result<KForm<S>> {
    let theta = theta_weight(g, e)?;
    if theta.magnitude() <= theta_tol || theta.is_zero() {
        return Err(Error::DegenerateMetric { theta: theta.magnitude() });
    }
    let inv = theta.recip().expect("nonzero θ");
    Ok(eta(g, e)?.scale(&inv))
}

/// −*φ∧E + E³/6 − θ(E)*ȧ + *(ȧ∧E∧φ)∧*E.
pub fn spin7_res1<S: Scalar>(g: &G2Data<S>, e: &KForm<S>, adot: &KForm<S>) -> Result<KForm<S>> {
    let r = ddt_residual(g, e)?;
    let theta = theta_weight(g, e)?;
    let mixed = g.star(&adot.wedge(e)?.wedge(&g.phi)?).wedge(&g.star(e))?;
    r.sub(&g.star(adot).scale(&theta))?.add(&mixed)
}

/// ½φ∧*E² − ȧ∧E∧φ.
pub fn spin7_res2<S: Scalar>(g: &G2Data<S>, e: &KForm<S>, adot: &KForm<S>) -> Result<KForm<S>> {
    check(e)?;
    let first = g.phi.wedge(&g.star(&e.wedge(e)?))?.scale(&S::from_ratio(1, 2));
    first.sub(&adot.wedge(e)?.wedge(&g.phi)?)
}

/// R(E) + ½*(φ∧*E²)∧*E − θ(E)*ȧ: the single equation both Spin(7) residuals reduce to.
pub fn spin7_combined<S: Scalar>(g: &G2Data<S>, e: &KForm<S>, adot: &KForm<S>) -> Result<KForm<S>> {
    let lhs = ddt_residual(g, e)?.add(&correction(g, e)?)?;
    lhs.sub(&g.star(adot).scale(&theta_weight(g, e)?))
}
