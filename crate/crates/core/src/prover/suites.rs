//! Randomized float checks of the same identities, plus the Spin(7) pairing
//! equivalence on random samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ddt::{self, THETA_TOLERANCE};
use crate::exalg::{pullback, sharp2, Endo, KForm};
use crate::g2::{g2_f64, G2Data};
use crate::Result;

/// Relative tolerance for the float suites.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatCheck {
    pub name: String,
    pub max_relative_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FloatSuiteReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<FloatCheck>,
    pub min_det_identity_plus_sharp: f64,
    pub det_positive_everywhere: bool,
    pub passed: bool,
}

fn norm(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// |l − r| / max(|l|, |r|, scale).
pub fn relative_residual(l: &[f64], r: &[f64], scale: f64) -> f64 {
    let diff: Vec<f64> = l.iter().zip(r).map(|(a, b)| a - b).collect();
    let denom = norm(l).max(norm(r)).max(scale).max(f64::MIN_POSITIVE);
    norm(&diff) / denom
}

/// A random 2-form with coefficients uniform in [−1, 1].
pub fn random_two_form(rng: &mut impl Rng) -> KForm<f64> {
    KForm::from_coeffs(7, 2, (0..21).map(|_| rng.gen_range(-1.0..=1.0)).collect()).expect("21 coefficients")
}

pub fn random_one_form(rng: &mut impl Rng) -> KForm<f64> {
    KForm::from_coeffs(7, 1, (0..7).map(|_| rng.gen_range(-1.0..=1.0)).collect()).expect("7 coefficients")
}

const CHECKS: [&str; 7] = [
    "pulled-back-residual",
    "cube-wedge-star",
    "square-contraction",
    "combined-wedge-phi",
    "theta-decomposition",
    "phi-square-decomposition",
    "determinant-factorization",
];

/// Per-sample residuals in `CHECKS` order and det(I + F♯).
fn sample_residuals(g: &G2Data<f64>, f: &KForm<f64>) -> Result<([f64; 7], f64)> {
    let fn2 = f.norm_sq();
    let f2 = f.wedge(f)?;
    let f3 = f2.wedge(f)?;
    let star_f = g.star(f);
    let d = g.decompose2(f)?;

    let r = ddt::ddt_residual(g, f)?;
    let s = sharp2(f)?;
    let m = Endo::identity(7).sub(&s.compose(&s)?)?;
    let a1_l = pullback(&m, &g.star(&r))?;
    let a1_r = ddt::eta(g, f)?;
    let a1 = relative_residual(a1_l.coeffs(), a1_r.coeffs(), norm(r.coeffs()) * (1.0 + fn2));

    let cube = g.star(&f3).wedge(&star_f)?;
    let a2c = relative_residual(cube.coeffs(), &[0.0; 7], norm(f3.coeffs()) * fn2.sqrt());

    let contr_l = g.star(&g.phi.wedge(&g.star(&f2))?);
    let contr_r = f.contract(&d.u)?.scale(&-6.0);
    let a2k = relative_residual(contr_l.coeffs(), contr_r.coeffs(), fn2);

    let theta = ddt::theta_weight(g, f)?;
    let n = r.add(&ddt_correction(g, f)?)?;
    let a4_l = g.star(&n).wedge(f)?.wedge(&g.phi)?;
    let a4_r = g.phi.wedge(&g.star(&f2))?.scale(&(0.5 * theta));
    let a4 = relative_residual(a4_l.coeffs(), a4_r.coeffs(), norm(n.coeffs()) * fn2.sqrt());

    let u2 = d.u.norm_sq();
    let f14 = d.f14.norm_sq();
    let th = relative_residual(&[theta], &[1.0 - 3.0 * u2 + 0.5 * f14], 1.0 + fn2);

    let phi_sq = g.star(&g.phi.wedge(&f2)?).top()?;
    let ps = relative_residual(&[phi_sq], &[2.0 * d.f7.norm_sq() - f14], fn2);

    let plus = Endo::identity(7).add(&s)?.det();
    let det = relative_residual(&[m.det()], &[plus * plus], 1.0);
    Ok(([a1, a2c, a2k, a4, th, ps, det], plus))
}

fn ddt_correction(g: &G2Data<f64>, f: &KForm<f64>) -> Result<KForm<f64>> {
    let f2 = f.wedge(f)?;
    Ok(g.star(&g.phi.wedge(&g.star(&f2))?).wedge(&g.star(f))?.scale(&0.5))
}

/// Float property suite over `samples` random 2-forms.
pub fn float_suite(samples: usize, seed: u64) -> Result<FloatSuiteReport> {
    let g = g2_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 7];
    let mut min_det = f64::INFINITY;
    for _ in 0..samples {
        let f = random_two_form(&mut rng);
        let (res, det) = sample_residuals(g, &f)?;
        for (w, r) in worst.iter_mut().zip(res) {
            *w = w.max(r);
        }
        min_det = min_det.min(det);
    }
    let checks: Vec<FloatCheck> = CHECKS
        .iter()
        .zip(worst)
        .map(|(name, r)| FloatCheck { name: name.to_string(), max_relative_residual: r, passed: r <= FLOAT_TOLERANCE })
        .collect();
    let det_positive_everywhere = min_det > 0.0;
    let passed = det_positive_everywhere && checks.iter().all(|c| c.passed);
    Ok(FloatSuiteReport { samples, seed, checks, min_det_identity_plus_sharp: min_det, det_positive_everywhere, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub samples: usize,
    pub seed: u64,
    /// Samples with ȧ equal to the gradient density, where everything must vanish.
    pub gradient_samples: usize,
    /// Samples with independent random ȧ, where nothing should vanish.
    pub random_samples: usize,
    /// Samples where "pairings vanish" agreed with "residuals vanish".
    pub pairing_agreements: usize,
    /// Samples where "combined residual vanishes" agreed with "both residuals vanish".
    pub combined_agreements: usize,
    pub max_relative_on_gradient: f64,
    pub min_relative_on_random: f64,
    pub passed: bool,
}

struct PairingSample {
    pairs: f64,
    residuals: f64,
    combined: f64,
}

fn pairing_sample(g: &G2Data<f64>, e: &KForm<f64>, adot: &KForm<f64>) -> Result<PairingSample> {
    let scale = (1.0 + e.norm_sq().sqrt()).powi(3) * (1.0 + adot.norm_sq().sqrt());
    let mut pairs: f64 = 0.0;
    for j in 1..=7 {
        let b = KForm::blade(7, &[j])?;
        pairs = pairs.max(g.spin7_pair1(e, adot, &b)?.abs()).max(g.spin7_pair2(e, adot, &b)?.abs());
    }
    let sup = |f: &KForm<f64>| f.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let r1 = ddt::spin7_res1(g, e, adot)?;
    let r2 = ddt::spin7_res2(g, e, adot)?;
    let c = ddt::spin7_combined(g, e, adot)?;
    Ok(PairingSample { pairs: pairs / scale, residuals: sup(&r1).max(sup(&r2)) / scale, combined: sup(&c) / scale })
}

/// Pairing/residual equivalence on alternating gradient and random samples.
pub fn pairing_suite(samples: usize, seed: u64) -> Result<PairingReport> {
    let g = g2_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tol = FLOAT_TOLERANCE;
    let mut report = PairingReport {
        samples,
        seed,
        gradient_samples: 0,
        random_samples: 0,
        pairing_agreements: 0,
        combined_agreements: 0,
        max_relative_on_gradient: 0.0,
        min_relative_on_random: f64::INFINITY,
        passed: false,
    };
    for i in 0..samples {
        let e = loop {
            let e = random_two_form(&mut rng);
            if ddt::theta_weight(g, &e)?.abs() > 1e-3 {
                break e;
            }
        };
        let on_gradient = i % 2 == 0;
        let adot = if on_gradient {
            ddt::grad_density(g, &e, THETA_TOLERANCE)?
        } else {
            random_one_form(&mut rng)
        };
        let s = pairing_sample(g, &e, &adot)?;
        let (pz, rz, cz) = (s.pairs <= tol, s.residuals <= tol, s.combined <= tol);
        report.pairing_agreements += usize::from(pz == rz);
        report.combined_agreements += usize::from(cz == rz);
        let worst = s.pairs.max(s.residuals).max(s.combined);
        let least = s.pairs.min(s.residuals).min(s.combined);
        if on_gradient {
            report.gradient_samples += usize::from(pz && rz && cz);
            report.max_relative_on_gradient = report.max_relative_on_gradient.max(worst);
        } else {
            report.random_samples += usize::from(!pz && !rz && !cz);
            report.min_relative_on_random = report.min_relative_on_random.min(least);
        }
    }
    report.passed = report.pairing_agreements == samples
        && report.combined_agreements == samples
        && report.gradient_samples == samples.div_ceil(2)
        && report.random_samples == samples / 2;
    Ok(report)
}
