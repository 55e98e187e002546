//! The identity catalog. Each identity is a list of (lhs, rhs) form pairs
//! built generically over the scalar ring, so the same builder drives exact
//! polynomial expansion and evaluation at rational points.

use num_rational::BigRational;

use super::poly::Var;
use crate::exalg::{pullback, rat, sharp2, Endo, KForm, Scalar, Vector};
use crate::g2::G2Data;
use crate::{Error, Result};

/// Catalog identifiers in reporting order.
pub const IDENTITY_IDS: [&str; 12] = ["A1", "A2a", "A2b", "A4", "A5", "A3F", "DET", "EIG7", "EIG14", "W3", "SF", "CYL"];

/// A named rational constant inside an identity.
#[derive(Debug, Clone)]
pub struct Site {
    pub name: &'static str,
    pub value: BigRational,
    /// Replacement used by the default mutation run.
    pub mutation: BigRational,
}

fn site(name: &'static str, value: BigRational, mutation: BigRational) -> Site {
    Site { name, value, mutation }
}

/// Named constants of an identity; the first one is the canonical mutation site.
pub fn sites(id: &str) -> Result<Vec<Site>> {
    Ok(match id {
        "A1" => vec![site("half", rat(1, 2), rat(1, 1)), site("rhs-scale", rat(1, 1), rat(2, 1))],
        "A2a" => vec![site("polar-scale", rat(3, 1), rat(2, 1))],
        "A2b" => vec![site("rhs-scale", rat(-6, 1), rat(-5, 1))],
        "A4" => vec![site("rhs-scale", rat(1, 2), rat(1, 1)), site("theta-half", rat(1, 2), rat(1, 1))],
        "A5" => vec![site("rhs-scale", rat(6, 1), rat(5, 1))],
        "A3F" => vec![site("elim-scale", rat(1, 1), rat(2, 1)), site("theta-half", rat(1, 2), rat(1, 1))],
        "DET" => vec![site("rhs-scale", rat(1, 1), rat(2, 1))],
        "EIG7" => vec![site("eigenvalue", rat(2, 1), rat(3, 1))],
        "EIG14" => vec![site("eigenvalue", rat(-1, 1), rat(1, 1))],
        "W3" => vec![site("rhs-scale", rat(3, 1), rat(2, 1))],
        "SF" => vec![site("seven-scale", rat(1, 2), rat(1, 1)), site("fourteen-scale", rat(-1, 1), rat(1, 1))],
        "CYL" => vec![site("half", rat(1, 2), rat(1, 1)), site("sixth", rat(1, 6), rat(1, 3))],
        other => return Err(Error::UnknownIdentity(other.to_string())),
    })
}

/// An identity with optional constant overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySpec {
    pub id: &'static str,
    pub overrides: Vec<(&'static str, BigRational)>,
}

impl IdentitySpec {
    pub fn new(id: &str) -> Result<Self> {
        let id = IDENTITY_IDS
            .iter()
            .copied()
            .find(|c| *c == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))?;
        Ok(IdentitySpec { id, overrides: Vec::new() })
    }

    pub fn is_mutated(&self) -> bool {
        !self.overrides.is_empty()
    }

    fn constant<S: Scalar>(&self, name: &str) -> S {
        let value = self
            .overrides
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| v.clone())
            .or_else(|| sites(self.id).ok()?.into_iter().find(|s| s.name == name).map(|s| s.value))
            .expect("site names are fixed per identity");
        S::from_rational(&value)
    }
}

/// Replace one named constant; the result is expected to fail verification.
pub fn mutate(id: &str, site_name: &str, value: BigRational) -> Result<IdentitySpec> {
    let mut spec = IdentitySpec::new(id)?;
    let known = sites(spec.id)?;
    let site = known.iter().find(|s| s.name == site_name).ok_or_else(|| Error::UnknownSite {
        id: spec.id.to_string(),
        site: site_name.to_string(),
    })?;
    spec.overrides.push((site.name, value));
    Ok(spec)
}

/// The default single-site mutation of an identity.
pub fn canonical_mutation(id: &str) -> Result<IdentitySpec> {
    let s = sites(id)?.into_iter().next().expect("every identity has a site");
    mutate(id, s.name, s.mutation)
}

/// Source of indeterminate values: symbolic variables or a numeric point.
pub type VarSource<'a, S> = &'a dyn Fn(Var) -> S;

struct Ctx<'a, S: Scalar> {
    g: G2Data<S>,
    var: VarSource<'a, S>,
}

impl<S: Scalar> Ctx<'_, S> {
    fn two_form(&self, v: fn(usize) -> Var) -> KForm<S> {
        KForm::from_coeffs(7, 2, (0..21).map(|i| (self.var)(v(i))).collect()).expect("21 coefficients")
    }

    fn f(&self) -> KForm<S> {
        self.two_form(Var::F)
    }

    fn u(&self) -> Vector<S> {
        Vector { comps: (0..7).map(|i| (self.var)(Var::U(i))).collect() }
    }

    fn a(&self) -> KForm<S> {
        KForm::from_coeffs(7, 1, (0..7).map(|i| (self.var)(Var::A(i))).collect()).expect("7 coefficients")
    }

    /// Σ c_m B_m over the Λ²₁₄ basis.
    fn f14(&self) -> Result<KForm<S>> {
        let mut acc = KForm::zero(7, 2)?;
        for (m, b) in self.g.basis14.iter().enumerate() {
            acc = acc.add(&b.scale(&(self.var)(Var::C(m))))?;
        }
        Ok(acc)
    }

    fn f7(&self) -> Result<KForm<S>> {
        self.g.phi.contract(&self.u())
    }

    /// −*φ∧F + F³/6.
    fn xi(&self, f: &KForm<S>) -> Result<KForm<S>> {
        f.power(3)?.scale(&S::from_ratio(1, 6)).sub(&self.g.star_phi.wedge(f)?)
    }

    /// *(φ∧*F²)∧*F.
    fn twisted(&self, f: &KForm<S>) -> Result<KForm<S>> {
        let g = &self.g;
        g.star(&g.phi.wedge(&g.star(&f.wedge(f)?))?).wedge(&g.star(f))
    }

    /// 1 − h·*(φ∧F²).
    fn theta(&self, f: &KForm<S>, h: &S) -> Result<S> {
        let t = self.g.star(&self.g.phi.wedge(&f.wedge(f)?)?).top()?;
        Ok(S::one().minus(&h.times(&t)))
    }
}

/// Build the (lhs, rhs) pairs of an identity.
pub fn build<S: Scalar>(spec: &IdentitySpec, var: VarSource<'_, S>) -> Result<Vec<(KForm<S>, KForm<S>)>> {
    let cx = Ctx { g: G2Data::standard(), var };
    let g = &cx.g;
    let k = |name: &str| spec.constant::<S>(name);
    let zero_like = |f: &KForm<S>| KForm::zero(f.dim(), f.degree());
    Ok(match spec.id {
        "A1" => {
            let f = cx.f();
            let xi = cx.xi(&f)?;
            let s = sharp2(&f)?;
            let m = Endo::identity(7).sub(&s.compose(&s)?)?;
            let lhs = pullback(&m, &g.star(&xi))?;
            let rhs = g.star(&xi.add(&cx.twisted(&f)?.scale(&k("half")))?).scale(&k("rhs-scale"));
            vec![(lhs, rhs)]
        }
        "A2a" => {
            let f = cx.f();
            let gg = cx.two_form(Var::G);
            let star_f3 = g.star(&f.power(3)?);
            let plain = star_f3.wedge(&g.star(&f))?;
            let zero = zero_like(&plain)?;
            // Directional derivative along G, one term moved to the right.
            let polar_l = star_f3.wedge(&g.star(&gg))?;
            let polar_r = g.star(&f.wedge(&f)?.wedge(&gg)?).wedge(&g.star(&f))?.scale(&k("polar-scale").negated());
            vec![(plain, zero), (polar_l, polar_r)]
        }
        "A2b" => {
            let u = cx.u();
            let f = cx.f7()?.add(&cx.f14()?)?;
            let lhs = g.star(&g.phi.wedge(&g.star(&f.wedge(&f)?))?);
            let rhs = f.contract(&u)?.scale(&k("rhs-scale"));
            vec![(lhs, rhs)]
        }
        "A4" => {
            let f = cx.f();
            let n = cx.xi(&f)?.add(&cx.twisted(&f)?.scale(&S::from_ratio(1, 2)))?;
            let lhs = g.star(&n).wedge(&f)?.wedge(&g.phi)?;
            let theta = cx.theta(&f, &k("theta-half"))?;
            let rhs = g.phi.wedge(&g.star(&f.wedge(&f)?))?.scale(&theta.times(&k("rhs-scale")));
            vec![(lhs, rhs)]
        }
        "A5" => {
            let u = cx.u();
            let lhs = cx.f7()?.power(3)?;
            let rhs = g.star(&crate::exalg::flat(&u)).scale(&u.norm_sq().times(&k("rhs-scale")));
            vec![(lhs, rhs)]
        }
        "A3F" => {
            let f = cx.f();
            let a = cx.a();
            let half = S::from_ratio(1, 2);
            let theta = cx.theta(&f, &k("theta-half"))?;
            let xi = cx.xi(&f)?;
            let tw = cx.twisted(&f)?;
            let afphi = a.wedge(&f)?.wedge(&g.phi)?;
            let star_f = g.star(&f);
            // Left sides of the two Spin(7) equations and of the combined equation.
            let r2 = xi.sub(&g.star(&a).scale(&theta))?.add(&g.star(&afphi).wedge(&star_f)?)?;
            let r3 = g.phi.wedge(&g.star(&f.wedge(&f)?))?.scale(&half).sub(&afphi)?;
            let r4 = xi.add(&tw.scale(&half))?.sub(&g.star(&a).scale(&theta))?;
            let elim_lhs = r4.sub(&r2)?;
            let elim_rhs = g.star(&r3).wedge(&star_f)?.scale(&k("elim-scale"));
            // Converse: substitute θ·a = *N into θ·(first equation).
            let n = xi.add(&tw.scale(&half))?;
            let conv = xi
                .scale(&theta)
                .sub(&n.scale(&theta))?
                .add(&g.star(&g.star(&n).wedge(&f)?.wedge(&g.phi)?).wedge(&star_f)?)?;
            let z = zero_like(&conv)?;
            vec![(elim_lhs, elim_rhs), (conv, z)]
        }
        "DET" => {
            let s = sharp2(&cx.f())?;
            let id = Endo::identity(7);
            let lhs = id.sub(&s.compose(&s)?)?.det();
            let plus = id.add(&s)?.det();
            let rhs = plus.times(&plus).times(&k("rhs-scale"));
            vec![(KForm::scalar(7, lhs)?, KForm::scalar(7, rhs)?)]
        }
        "EIG7" => {
            let f7 = cx.f7()?;
            vec![(g.star_wedge_phi(&f7)?, f7.scale(&k("eigenvalue")))]
        }
        "EIG14" => {
            let b = cx.f14()?;
            vec![(g.star_wedge_phi(&b)?, b.scale(&k("eigenvalue")))]
        }
        "W3" => {
            let f = cx.f7()?.add(&cx.f14()?)?;
            let lhs = f.wedge(&g.star_phi)?;
            let rhs = g.star(&crate::exalg::flat(&cx.u())).scale(&k("rhs-scale"));
            vec![(lhs, rhs)]
        }
        "SF" => {
            let f7 = cx.f7()?;
            let f14 = cx.f14()?;
            vec![
                (g.star(&f7), g.phi.wedge(&f7)?.scale(&k("seven-scale"))),
                (g.star(&f14), g.phi.wedge(&f14)?.scale(&k("fourteen-scale"))),
            ]
        }
        "CYL" => {
            let e = cx.f();
            let adot = cx.a();
            let dt = KForm::blade(8, &[1])?;
            let x = dt.wedge(&adot.lift_to_cylinder()?)?.add(&e.lift_to_cylinder()?)?;
            let lhs = x.power(3)?.hodge().scale(&S::from_ratio(1, 6));
            let e2 = e.wedge(&e)?;
            let rhs = g
                .star(&adot.wedge(&e2)?)
                .lift_to_cylinder()?
                .scale(&k("half"))
                .add(&dt.wedge(&g.star(&e2.wedge(&e)?).lift_to_cylinder()?)?.scale(&k("sixth")))?;
            vec![(lhs, rhs)]
        }
        _ => unreachable!("identity ids are validated on construction"),
    })
}

/// Short description of each identity for reports.
pub fn describe(id: &str) -> &'static str {
    match id {
        "A1" => "(I - (F#)^2)^* *xi = *(xi + 1/2 *(phi ^ *F^2) ^ *F)",
        "A2a" => "(*F^3) ^ *F = 0 and its polarization",
        "A2b" => "*(phi ^ *F^2) = -6 i(u)F",
        "A4" => "*(N) ^ F ^ phi = 1/2 theta phi ^ *F^2",
        "A5" => "(i(u)phi)^3 = 6|u|^2 *u",
        "A3F" => "Spin(7) pair equivalent to the combined equation (theta cleared)",
        "DET" => "det(I - (F#)^2) = det(I + F#)^2",
        "EIG7" => "*(phi ^ F7) = 2 F7",
        "EIG14" => "*(phi ^ F14) = -F14",
        "W3" => "F ^ *phi = 3 *u",
        "SF" => "*F7 = 1/2 phi ^ F7, *F14 = -phi ^ F14",
        "CYL" => "1/6 *8 (dt^a + E)^3 = 1/2 *(a ^ E^2) + 1/6 dt ^ *E^3",
        _ => "",
    }
}
