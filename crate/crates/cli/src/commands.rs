use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use ddt_core::exalg::KForm;
use ddt_core::flow::{
    continuation, cylinder_check, cylinder_order_table, flow_run, instanton_solve, ContinuationEnd, Scheme,
    Termination, Trajectory,
};
use ddt_core::g2::g2_f64;
use ddt_core::prover::{canonical_mutation, float_suite, pairing_suite, mutate, verify_all, IdentitySpec};
use ddt_core::torus::io::{read_snapshots, write_snapshot};
use ddt_core::torus::{
    dtheta4, gauge_shift, nu, nu_derivative_check, theta3, FormField, GaugePotential,
};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::report::{Check, Failure, Outcome};

type CmdResult = Result<Outcome, Failure>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(scale)
}

fn write_fields<'a>(path: &Path, fields: impl IntoIterator<Item = &'a FormField>) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?);
    for f in fields {
        write_snapshot(&mut w, f)?;
    }
    w.flush()?;
    Ok(())
}

/// `ID`, `ID:site` or `ID:site=value`.
pub fn parse_mutation(text: &str) -> Result<IdentitySpec, Failure> {
    let (id, rest) = text.split_once(':').map_or((text, None), |(a, b)| (a, Some(b)));
    Ok(match rest {
        None => canonical_mutation(id)?,
        Some(site_text) => {
            let (site, value) = site_text.split_once('=').map_or((site_text, None), |(a, b)| (a, Some(b)));
            let value = match value {
                Some(v) => v.parse::<BigRational>().map_err(|e| Failure::input(format!("bad value `{v}`: {e}")))?,
                None => ddt_core::prover::sites(id)?
                    .into_iter()
                    .find(|s| s.name == site)
                    .ok_or_else(|| Failure::input(format!("identity {id} has no site `{site}`")))?
                    .mutation,
            };
            mutate(id, site, value)?
        }
    })
}

pub fn verify(mutations: &[IdentitySpec], float_samples: usize, pairing_samples: usize, seed: u64, timings: bool) -> CmdResult {
    let mut reports = verify_all(mutations)?;
    if !timings {
        for r in &mut reports {
            r.elapsed_seconds = None;
        }
    }
    let mut checks: Vec<Check> =
        reports.iter().map(|r| Check::new(&format!("identity:{}", r.id), r.reduced_to_zero, None)).collect();
    let float = float_suite(float_samples, seed)?;
    for c in &float.checks {
        checks.push(Check::new(&format!("float:{}", c.name), c.passed, Some(c.max_relative_residual)));
    }
    checks.push(Check::new("float:det-positive", float.det_positive_everywhere, Some(float.min_det_identity_plus_sharp)));
    let pairing = pairing_suite(pairing_samples, seed)?;
    checks.push(Check::new("pairing-equivalence", pairing.passed, Some(pairing.max_relative_on_gradient)));
    Ok(Outcome { checks, summary: json!({ "identities": reports, "float_suite": float, "pairing_suite": pairing }) })
}

pub fn decompose(cfg: &RunConfig, form: Option<&str>) -> CmdResult {
    let f = match form {
        Some(text) => {
            let values: Vec<f64> = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|e| Failure::input(format!("bad coefficient `{s}`: {e}"))))
                .collect::<Result<_, _>>()?;
            KForm::from_coeffs(7, 2, values)?
        }
        None => cfg.flux.form(),
    };
    let g = g2_f64();
    let d = g.decompose2(&f)?;
    let back = d.f7.add(&d.f14)?.sub(&f)?;
    let err = back.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let checks = vec![Check::new("reconstruction", err <= 1e-12, Some(err))];
    Ok(Outcome { checks, summary: serde_json::to_value(d.summary()).expect("serializable") })
}

pub fn instanton(cfg: &RunConfig, out: Option<&Path>) -> CmdResult {
    let grid = cfg.grid()?;
    let sol = instanton_solve(&cfg.flux, &grid, None)?;
    let a = &sol.potential.a;
    let codiff = a.codiff()?.max_abs();
    let mean = a.mean().coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if let Some(dir) = out {
        write_fields(&dir.join("instanton.snap"), [a])?;
    }
    let checks = vec![
        Check::new("seven-part-vanishes", sol.seven_residual <= 1e-10, Some(sol.seven_residual)),
        Check::new("coulomb-gauge", codiff <= 1e-12, Some(codiff)),
        Check::new("mean-zero", mean <= 1e-12, Some(mean)),
    ];
    Ok(Outcome { checks, summary: json!({ "max_abs_a": a.max_abs(), "seven_residual": sol.seven_residual }) })
}

pub fn continue_branch(cfg: &RunConfig, out: Option<&Path>) -> CmdResult {
    let grid = cfg.grid()?;
    let perturbation = if cfg.perturbation > 0.0 {
        let noise = FormField::random(&grid, 1, cfg.perturbation, &mut rng(cfg.seed))?;
        Some(noise.sub(&FormField::constant(&grid, &noise.mean())?)?)
    } else {
        None
    };
    let result = continuation(&cfg.flux, &grid, &cfg.continuation, perturbation.as_ref())?;
    let steps: Vec<Value> = result
        .steps
        .iter()
        .map(|st| {
            json!({
                "s": st.s,
                "residual_l2": st.residual_l2,
                "newton_iterations": st.newton_iterations,
                "newton_residuals": st.newton_residuals,
                "quadratic_ratios": st.quadratic_ratios(),
            })
        })
        .collect();
    if let (Some(dir), Some(last)) = (out, result.steps.last()) {
        write_fields(&dir.join("continuation.snap"), [&last.potential.a])?;
    }
    let summary = json!({ "steps": steps, "end": result.end, "reason": result.end.reason() });
    if result.end != ContinuationEnd::Completed {
        return Err(Failure::numerical(result.end.reason(), Some(summary)));
    }
    let checks = result
        .steps
        .iter()
        .map(|st| Check::new(&format!("accepted:s={}", st.s), st.residual_l2 <= cfg.continuation.tol, Some(st.residual_l2)))
        .collect();
    Ok(Outcome { checks, summary })
}

pub fn flow(cfg: &RunConfig, out: Option<&Path>) -> CmdResult {
    let grid = cfg.grid()?;
    let a0 = FormField::random(&grid, 1, cfg.initial_amplitude, &mut rng(cfg.seed))?;
    let start = GaugePotential::new(a0, cfg.flux.clone())?;
    let traj = flow_run(&start, &cfg.flow)?;
    if let Some(dir) = out {
        std::fs::write(dir.join("trajectory.csv"), traj.to_csv())?;
        write_fields(&dir.join("potentials.snap"), traj.potentials.iter().map(|p| &p.a))?;
    }
    let scale = traj.functional.iter().fold(1.0f64, |m, f| m.max(f.abs()));
    let summary = json!({
        "steps_completed": traj.step_times.len() - 1,
        "stored_samples": traj.potentials.len(),
        "functional_start": traj.functional[0],
        "functional_end": traj.functional.last(),
        "residual_l2_end": traj.residual_l2.last(),
        "theta_min": traj.theta_min.iter().fold(f64::INFINITY, |m, t| m.min(*t)),
        "worst_decrease": traj.worst_decrease(),
        "termination": traj.termination,
    });
    if let Termination::LeftAlmostCalibrated { step, point, theta } = traj.termination {
        let msg = format!("left the almost-calibrated set at step {step}, grid point {point} (theta = {theta:e})");
        return Err(Failure::numerical(msg, Some(summary)));
    }
    let checks = vec![Check::new("functional-non-decreasing", traj.worst_decrease() <= 1e-9 * scale, Some(traj.worst_decrease()))];
    Ok(Outcome { checks, summary })
}

pub fn cylinder(cfg: &RunConfig, snapshots: &Path) -> CmdResult {
    let file = File::open(snapshots).map_err(|e| Failure::input(format!("{}: {e}", snapshots.display())))?;
    let fields = read_snapshots(&mut BufReader::new(file))?;
    let h = cfg.flow.dt * cfg.flow.record_every as f64;
    let potentials =
        fields.into_iter().map(|a| GaugePotential::new(a, cfg.flux.clone())).collect::<ddt_core::Result<Vec<_>>>()?;
    let traj = Trajectory {
        dt: h,
        times: (0..potentials.len()).map(|i| i as f64 * h).collect(),
        potentials,
        step_times: Vec::new(),
        functional: Vec::new(),
        residual_l2: Vec::new(),
        theta_min: Vec::new(),
        termination: Termination::Completed,
    };
    let report = cylinder_check(&traj)?;
    // The coarsest level still needs three samples.
    let mut levels = cfg.order_levels;
    while levels >= 2 && (traj.times.len() - 1) / (1 << (levels - 1)) < 2 {
        levels -= 1;
    }
    if levels < 2 {
        return Err(Failure::input("too few samples for an order table (need at least 5)"));
    }
    let table = cylinder_order_table(&traj, levels)?;
    let mut checks = Vec::new();
    // Central differences of an rk4 path converge at second order; an Euler
    // path carries its own O(dt) defect, so no order is asserted for it.
    if cfg.flow.scheme == Scheme::Rk4 {
        let worst = table.ratios.iter().fold(f64::NAN, |m, r| if (r - 4.0).abs() > (m - 4.0).abs() || m.is_nan() { *r } else { m });
        checks.push(Check::new("second-order-refinement", table.ratios.iter().all(|r| (3.0..=5.0).contains(r)), Some(worst)));
    }
    Ok(Outcome { checks, summary: json!({ "residuals": report, "order_table": table }) })
}

pub fn moment(cfg: &RunConfig) -> CmdResult {
    let grid = cfg.moment_grid()?;
    let mut r = rng(cfg.seed);
    let mut worst = [0.0f64; 4];
    for _ in 0..cfg.moment_samples {
        let a = FormField::random(&grid, 1, cfg.initial_amplitude, &mut r)?;
        let pot = GaugePotential::new(a, cfg.flux.clone())?;
        let g1 = FormField::random(&grid, 0, 1.0, &mut r)?;
        let g2 = FormField::random(&grid, 0, 1.0, &mut r)?;
        let bs: Vec<FormField> = (0..4).map(|_| FormField::random(&grid, 1, 1.0, &mut r)).collect::<ddt_core::Result<_>>()?;
        let (derivative, theta) = nu_derivative_check(&pot, &g1, &g2, &bs[0])?;
        worst[0] = worst[0].max(rel(derivative, theta, 1.0));
        let t123 = theta3(&pot, &bs[1], &bs[2], &bs[3])?;
        let t213 = theta3(&pot, &bs[2], &bs[1], &bs[3])?;
        worst[1] = worst[1].max((t123 + t213).abs() / t123.abs().max(1.0));
        let d = dtheta4(&pot, [&bs[0], &bs[1], &bs[2], &bs[3]])?;
        worst[2] = worst[2].max(d.value.abs() / d.term_scale.max(1.0));
        let chi = FormField::random(&grid, 0, 1.0, &mut r)?;
        let moved = gauge_shift(&pot, &chi, [1, 0, 0, -1, 0, 0, 0])?;
        worst[3] = worst[3]
            .max(rel(nu(&pot, &g1, &g2)?, nu(&moved, &g1, &g2)?, 1.0))
            .max(rel(t123, theta3(&moved, &bs[1], &bs[2], &bs[3])?, 1.0));
    }
    let checks = vec![
        Check::new("moment-map-derivative", worst[0] <= 1e-10, Some(worst[0])),
        Check::new("theta-antisymmetry", worst[1] <= 1e-13, Some(worst[1])),
        Check::new("theta-closed", worst[2] <= 1e-10, Some(worst[2])),
        Check::new("gauge-invariance", worst[3] <= 1e-10, Some(worst[3])),
    ];
    Ok(Outcome { checks, summary: json!({ "samples": cfg.moment_samples, "points": grid.points() }) })
}
