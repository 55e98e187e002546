//! Gauss–Newton continuation of the gauge-fixed scaled dDT system in the
//! large-radius parameter s = 1/r.

use serde::{Deserialize, Serialize};

use crate::ddt;
use crate::exalg::KForm;
use crate::g2::g2_f64;
use crate::torus::{Flux, FormField, GaugePotential, TorusGrid};
use crate::{Error, Result};

use super::instanton::instanton_solve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContinuationConfig {
    pub schedule: Vec<f64>,
    pub tol: f64,
    pub max_newton: usize,
    /// Relative stopping tolerance of the inner least-squares solve.
    pub linear_tol: f64,
    pub max_linear: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig {
            schedule: default_schedule(),
            tol: 1e-10,
            max_newton: 20,
            linear_tol: 1e-12,
            max_linear: 2000,
        }
    }
}

/// 0, 1/64, 1/32, …, 1.
pub fn default_schedule() -> Vec<f64> {
    std::iter::once(0.0).chain((0..=6).rev().map(|k| 1.0 / f64::from(1u32 << k))).collect()
}

impl ContinuationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.first() != Some(&0.0) {
            return Err(Error::InvalidInput("continuation schedule must start at s = 0".into()));
        }
        if self.schedule.windows(2).any(|w| !(w[1] > w[0])) || self.schedule.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput("continuation schedule must be strictly increasing".into()));
        }
        if !(self.tol > 0.0) || !(self.linear_tol > 0.0) || self.max_newton == 0 || self.max_linear == 0 {
            return Err(Error::InvalidInput("tolerances and iteration limits must be positive".into()));
        }
        Ok(())
    }
}

/// Accepted point on the continuation path.
#[derive(Debug, Clone)]
pub struct ContinuationStep {
    pub s: f64,
    pub potential: GaugePotential,
    pub residual_l2: f64,
    pub newton_iterations: usize,
    /// Full system residual before each Newton update and after the last.
    pub newton_residuals: Vec<f64>,
}

impl ContinuationStep {
    /// e_{n+1}/e_n² over consecutive Newton residuals.
    pub fn quadratic_ratios(&self) -> Vec<f64> {
        self.newton_residuals.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / (w[0] * w[0])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContinuationEnd {
    Completed,
    /// The constant part of the residual is orthogonal to the range of the
    /// linearization, so no Newton step can reduce it.
    Obstruction { s: f64, mean_residual: f64 },
    Divergence { s: f64, residuals: Vec<f64> },
}

impl ContinuationEnd {
    pub fn reason(&self) -> String {
        match self {
            ContinuationEnd::Completed => "completed".into(),
            ContinuationEnd::Obstruction { s, .. } => format!("cohomological obstruction suspected at s = {s}"),
            ContinuationEnd::Divergence { s, .. } => format!("newton divergence at s = {s}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContinuationResult {
    pub steps: Vec<ContinuationStep>,
    pub end: ContinuationEnd,
}

/// Residual of the coupled system: 6-form field, Coulomb 0-form, mean.
#[derive(Clone)]
struct Residual {
    six: FormField,
    gauge: FormField,
    mean: Vec<f64>,
}

impl Residual {
    fn dot(&self, o: &Residual) -> Result<f64> {
        Ok(self.six.inner(&o.six)? + self.gauge.inner(&o.gauge)? + self.mean.iter().zip(&o.mean).map(|(a, b)| a * b).sum::<f64>())
    }

    fn norm(&self) -> Result<f64> {
        Ok(self.dot(self)?.sqrt())
    }

    fn axpy(&self, c: f64, o: &Residual) -> Result<Residual> {
        Ok(Residual {
            six: self.six.axpy(c, &o.six)?,
            gauge: self.gauge.axpy(c, &o.gauge)?,
            mean: self.mean.iter().zip(&o.mean).map(|(a, b)| a + c * b).collect(),
        })
    }

    fn scale(&self, c: f64) -> Residual {
        Residual { six: self.six.scale(c), gauge: self.gauge.scale(c), mean: self.mean.iter().map(|a| c * a).collect() }
    }
}

/// The linearization at a fixed potential: δ ↦ (W ∧ dδ, d*δ, mean δ) with
/// W = s⁴E²/2 − *φ.
struct Linearization {
    weight: FormField,
    grid: TorusGrid,
}

impl Linearization {
    fn new(pot: &GaugePotential, s: f64) -> Result<Self> {
        let g = g2_f64();
        let e = pot.curvature()?;
        let c = 0.5 * s.powi(4);
        let weight = FormField::try_from_fn(pot.grid(), 4, |p| {
            let ep = e.at(p);
            ep.wedge(&ep)?.scale(&c).sub(&g.star_phi)
        })?;
        Ok(Linearization { weight, grid: pot.grid().clone() })
    }

    fn apply(&self, x: &FormField) -> Result<Residual> {
        let dx = x.d()?;
        let six = FormField::try_from_fn(&self.grid, 6, |p| self.weight.at(p).wedge(&dx.at(p)))?;
        Ok(Residual { six, gauge: x.codiff()?, mean: x.mean().into_coeffs() })
    }

    /// Pointwise the transpose of X ↦ W∧X is Y ↦ *(W∧*Y).
    fn adjoint(&self, r: &Residual) -> Result<FormField> {
        let t = FormField::try_from_fn(&self.grid, 2, |p| Ok(self.weight.at(p).wedge(&r.six.at(p).hodge())?.hodge()))?;
        let constant = FormField::constant(&self.grid, &KForm::from_coeffs(7, 1, r.mean.clone())?)?;
        t.codiff()?.add(&r.gauge.d()?)?.add(&constant)
    }

    /// Size of the operator, for relative rank tests.
    fn scale(&self) -> f64 {
        (1.0 + self.weight.max_abs()) * std::f64::consts::PI * self.grid.n() as f64
    }
}

fn system_residual(pot: &GaugePotential, s: f64) -> Result<Residual> {
    let g = g2_f64();
    let e = pot.curvature()?;
    let six = FormField::try_from_fn(pot.grid(), 6, |p| ddt::scaled_residual(g, &e.at(p), &s))?;
    Ok(Residual { six, gauge: pot.a.codiff()?, mean: pot.a.mean().into_coeffs() })
}

/// CGLS for min ‖J x − b‖, started from x = 0.
fn cgls(lin: &Linearization, b: &Residual, tol: f64, max_iter: usize) -> Result<FormField> {
    let mut x = FormField::zeros(&lin.grid, 1)?;
    let mut r = b.clone();
    let mut s = lin.adjoint(&r)?;
    let mut p = s.clone();
    let mut gamma = s.inner(&s)?;
    let stop = tol * gamma.sqrt();
    for _ in 0..max_iter {
        if gamma.sqrt() <= stop || gamma == 0.0 {
            break;
        }
        let q = lin.apply(&p)?;
        let qq = q.dot(&q)?;
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        x = x.axpy(alpha, &p)?;
        r = r.axpy(-alpha, &q)?;
        s = lin.adjoint(&r)?;
        let next = s.inner(&s)?;
        p = s.axpy(next / gamma, &p)?;
        gamma = next;
    }
    Ok(x)
}

/// Result of a Newton solve at a fixed s.
#[derive(Debug, Clone)]
pub enum NewtonOutcome {
    Converged { potential: GaugePotential, residuals: Vec<f64>, six_norm: f64 },
    Obstructed { mean_residual: f64 },
    Diverged { residuals: Vec<f64> },
}

/// Newton iteration on the gauge-fixed system at a fixed s from `start`.
pub fn newton_solve(start: &GaugePotential, s: f64, cfg: &ContinuationConfig) -> Result<NewtonOutcome> {
    cfg.validate()?;
    newton(start, s, cfg)
}

fn newton(start: &GaugePotential, s: f64, cfg: &ContinuationConfig) -> Result<NewtonOutcome> {
    let mut pot = start.clone();
    let mut residuals = Vec::new();
    for iter in 0..=cfg.max_newton {
        let res = system_residual(&pot, s)?;
        let norm = res.norm()?;
        residuals.push(norm);
        if !norm.is_finite() || (residuals[0] > 0.0 && norm > 1e3 * residuals[0].max(cfg.tol)) {
            return Ok(NewtonOutcome::Diverged { residuals });
        }
        if norm <= cfg.tol {
            return Ok(NewtonOutcome::Converged { potential: pot, residuals, six_norm: res.six.l2_norm() });
        }
        if iter == cfg.max_newton {
            break;
        }
        let lin = Linearization::new(&pot, s)?;
        let mean6 = res.six.mean();
        let mean_norm = mean6.norm_sq().sqrt();
        if mean_norm > cfg.tol {
            let probe = Residual {
                six: FormField::constant(&lin.grid, &mean6)?,
                gauge: FormField::zeros(&lin.grid, 0)?,
                mean: vec![0.0; 7],
            };
            if lin.adjoint(&probe)?.l2_norm() <= 1e-9 * lin.scale() * mean_norm {
                return Ok(NewtonOutcome::Obstructed { mean_residual: mean_norm });
            }
        }
        let step = cgls(&lin, &res.scale(-1.0), cfg.linear_tol, cfg.max_linear)?;
        pot = pot.with_a(pot.a.add(&step)?)?;
    }
    Ok(NewtonOutcome::Diverged { residuals })
}

/// Follow the branch from the s = 0 instanton through the schedule. An
/// optional `perturbation` is added to the instanton before the first solve.
pub fn continuation(
    flux: &Flux,
    grid: &TorusGrid,
    cfg: &ContinuationConfig,
    perturbation: Option<&FormField>,
) -> Result<ContinuationResult> {
    cfg.validate()?;
    let mut current = instanton_solve(flux, grid, None)?.potential;
    if let Some(p) = perturbation {
        current = current.with_a(current.a.add(p)?)?;
    }
    let mut steps = Vec::new();
    for &s in &cfg.schedule {
        match newton(&current, s, cfg)? {
            NewtonOutcome::Converged { potential, residuals, six_norm } => {
                current = potential.clone();
                steps.push(ContinuationStep {
                    s,
                    potential,
                    residual_l2: six_norm,
                    newton_iterations: residuals.len() - 1,
                    newton_residuals: residuals,
                });
            }
            NewtonOutcome::Obstructed { mean_residual } => {
                return Ok(ContinuationResult { steps, end: ContinuationEnd::Obstruction { s, mean_residual } })
            }
            NewtonOutcome::Diverged { residuals } => {
                return Ok(ContinuationResult { steps, end: ContinuationEnd::Divergence { s, residuals } })
            }
        }
    }
    Ok(ContinuationResult { steps, end: ContinuationEnd::Completed })
}
