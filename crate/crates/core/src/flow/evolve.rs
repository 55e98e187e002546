//! Explicit integration of the gradient flow ȧ = η(E)/θ(E) and the
//! Spin(7) consistency check of sampled trajectories.

use serde::{Deserialize, Serialize};

use crate::ddt::{self, THETA_TOLERANCE};
use crate::g2::g2_f64;
use crate::torus::{kl_functional, residual_field, FormField, GaugePotential};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    /// Smallest admissible θ anywhere on the grid.
    pub theta_min: f64,
    /// Store the potential every this many steps.
    pub record_every: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { dt: 1e-3, steps: 200, scheme: Scheme::Euler, theta_min: 1e-3, record_every: 1 }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 || self.record_every == 0 {
            return Err(Error::InvalidInput("steps and record_every must be at least 1".into()));
        }
        if !(self.theta_min.is_finite() && self.theta_min > 0.0) {
            return Err(Error::InvalidInput("theta_min must be positive".into()));
        }
        Ok(())
    }
}

/// Smallest θ over the grid and the point where it occurs.
pub fn theta_min(pot: &GaugePotential) -> Result<(f64, usize)> {
    theta_min_of(&pot.curvature()?)
}

fn theta_min_of(e: &FormField) -> Result<(f64, usize)> {
    let g = g2_f64();
    let mut best = (f64::INFINITY, 0);
    for p in 0..e.grid().points() {
        let t = ddt::theta_weight(g, &e.at(p))?;
        if t < best.0 {
            best = (t, p);
        }
    }
    Ok(best)
}

/// The gradient vector field η/θ at every grid point, guarded by `theta_min`.
pub fn vector_field(pot: &GaugePotential, theta_min_allowed: f64) -> Result<FormField> {
    let g = g2_f64();
    let e = pot.curvature()?;
    let (t, point) = theta_min_of(&e)?;
    if t <= theta_min_allowed {
        return Err(Error::LeftAlmostCalibrated { point, theta: t });
    }
    FormField::try_from_fn(pot.grid(), 1, |p| ddt::grad_density(g, &e.at(p), THETA_TOLERANCE))
}

/// One explicit step; every stage is checked against the θ guard.
pub fn flow_step(pot: &GaugePotential, cfg: &FlowConfig) -> Result<GaugePotential> {
    let dt = cfg.dt;
    let field = |a: &FormField| vector_field(&pot.with_a(a.clone())?, cfg.theta_min);
    let a = &pot.a;
    let next = match cfg.scheme {
        Scheme::Euler => a.axpy(dt, &field(a)?)?,
        Scheme::Rk4 => {
            let k1 = field(a)?;
            let k2 = field(&a.axpy(0.5 * dt, &k1)?)?;
            let k3 = field(&a.axpy(0.5 * dt, &k2)?)?;
            let k4 = field(&a.axpy(dt, &k3)?)?;
            let incr = k1.axpy(2.0, &k2)?.axpy(2.0, &k3)?.add(&k4)?;
            a.axpy(dt / 6.0, &incr)?
        }
    };
    pot.with_a(next)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    LeftAlmostCalibrated { step: usize, point: usize, theta: f64 },
}

/// Per-step diagnostics plus potentials sampled every `record_every` steps.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dt: f64,
    /// Times of the stored potentials.
    pub times: Vec<f64>,
    pub potentials: Vec<GaugePotential>,
    /// Times of the per-step diagnostics (every step, including t = 0).
    pub step_times: Vec<f64>,
    pub functional: Vec<f64>,
    pub residual_l2: Vec<f64>,
    pub theta_min: Vec<f64>,
    pub termination: Termination,
}

impl Trajectory {
    /// Largest drop of the functional between consecutive steps (0 if monotone).
    pub fn worst_decrease(&self) -> f64 {
        self.functional.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max)
    }

    /// Same samples in reverse order on the same time axis: the path traversed backwards.
    pub fn reversed(&self) -> Trajectory {
        let mut t = self.clone();
        t.potentials.reverse();
        t
    }

    /// Keep every `stride`-th stored sample.
    pub fn subsample(&self, stride: usize) -> Trajectory {
        let mut t = self.clone();
        t.times = self.times.iter().step_by(stride).copied().collect();
        t.potentials = self.potentials.iter().step_by(stride).cloned().collect();
        t
    }

    /// CSV with columns t, functional, residual_l2, theta_min.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,functional,residual_l2,theta_min\n");
        for i in 0..self.step_times.len() {
            out.push_str(&format!(
                "{:e},{:e},{:e},{:e}\n",
                self.step_times[i], self.functional[i], self.residual_l2[i], self.theta_min[i]
            ));
        }
        out
    }
}

fn diagnostics(pot: &GaugePotential) -> Result<(f64, f64, f64)> {
    Ok((kl_functional(pot)?, residual_field(pot, 1.0)?.1, theta_min(pot)?.0))
}

/// Run the flow; leaving the almost-calibrated set ends the run early with a
/// partial trajectory.
pub fn flow_run(start: &GaugePotential, cfg: &FlowConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let (f0, r0, t0) = diagnostics(start)?;
    let mut traj = Trajectory {
        dt: cfg.dt,
        times: vec![0.0],
        potentials: vec![start.clone()],
        step_times: vec![0.0],
        functional: vec![f0],
        residual_l2: vec![r0],
        theta_min: vec![t0],
        termination: Termination::Completed,
    };
    let mut pot = start.clone();
    for step in 1..=cfg.steps {
        pot = match flow_step(&pot, cfg) {
            Ok(next) => next,
            Err(Error::LeftAlmostCalibrated { point, theta }) => {
                traj.termination = Termination::LeftAlmostCalibrated { step, point, theta };
                break;
            }
            Err(e) => return Err(e),
        };
        let t = step as f64 * cfg.dt;
        let (f, r, th) = diagnostics(&pot)?;
        traj.step_times.push(t);
        traj.functional.push(f);
        traj.residual_l2.push(r);
        traj.theta_min.push(th);
        if step % cfg.record_every == 0 {
            traj.times.push(t);
            traj.potentials.push(pot.clone());
        }
    }
    Ok(traj)
}

/// Spin(7) residual norms at each interior sample of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderReport {
    pub spacing: f64,
    pub times: Vec<f64>,
    pub res1_l2: Vec<f64>,
    pub res2_l2: Vec<f64>,
    pub max_residual: f64,
}

fn uniform_spacing(times: &[f64]) -> Result<f64> {
    if times.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 samples, got {}", times.len())));
    }
    let h = times[1] - times[0];
    let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if !(h > 0.0) || !uniform {
        return Err(Error::InvalidInput("samples must be uniformly spaced in increasing time".into()));
    }
    Ok(h)
}

/// Approximate ȧ by central differences and evaluate both Spin(7) residuals
/// on the grid at every interior sample.
pub fn cylinder_check(traj: &Trajectory) -> Result<CylinderReport> {
    cylinder_check_at(traj, None)
}

/// As [`cylinder_check`], restricted to sample times in `only` (if given).
pub fn cylinder_check_at(traj: &Trajectory, only: Option<&[f64]>) -> Result<CylinderReport> {
    let h = uniform_spacing(&traj.times)?;
    if traj.potentials.len() != traj.times.len() {
        return Err(Error::InvalidInput("sample times and potentials differ in length".into()));
    }
    let g = g2_f64();
    let mut report = CylinderReport { spacing: h, times: vec![], res1_l2: vec![], res2_l2: vec![], max_residual: 0.0 };
    for i in 1..traj.times.len() - 1 {
        let t = traj.times[i];
        if let Some(keep) = only {
            if !keep.iter().any(|&s| (s - t).abs() <= 1e-9 * h) {
                continue;
            }
        }
        let adot = traj.potentials[i + 1].a.sub(&traj.potentials[i - 1].a)?.scale(0.5 / h);
        let e = traj.potentials[i].curvature()?;
        let r1 = FormField::try_from_fn(e.grid(), 6, |p| ddt::spin7_res1(g, &e.at(p), &adot.at(p)))?;
        let r2 = FormField::try_from_fn(e.grid(), 6, |p| ddt::spin7_res2(g, &e.at(p), &adot.at(p)))?;
        let (n1, n2) = (r1.l2_norm(), r2.l2_norm());
        report.times.push(t);
        report.res1_l2.push(n1);
        report.res2_l2.push(n2);
        report.max_residual = report.max_residual.max(n1).max(n2);
    }
    Ok(report)
}

/// Residual maxima at spacings h, 2h, 4h, … taken from one finely sampled
/// trajectory, all evaluated at the same sample times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderTable {
    pub spacings: Vec<f64>,
    pub max_residuals: Vec<f64>,
    /// max_residual(2h) / max_residual(h) for consecutive rows.
    pub ratios: Vec<f64>,
}

pub fn cylinder_order_table(traj: &Trajectory, levels: usize) -> Result<OrderTable> {
    if levels < 2 {
        return Err(Error::InvalidInput("an order table needs at least two levels".into()));
    }
    let coarsest = 1usize << (levels - 1);
    let coarse = traj.subsample(coarsest);
    uniform_spacing(&coarse.times)?;
    let common: Vec<f64> = coarse.times[1..coarse.times.len() - 1].to_vec();
    let mut table = OrderTable { spacings: vec![], max_residuals: vec![], ratios: vec![] };
    for level in 0..levels {
        let sub = traj.subsample(1 << level);
        let r = cylinder_check_at(&sub, Some(&common))?;
        table.spacings.push(r.spacing);
        table.max_residuals.push(r.max_residual);
    }
    table.ratios = table.max_residuals.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(table)
}
