//! The s = 0 problem π₇(E) = 0 in Coulomb gauge, solved Fourier mode by mode.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use crate::exalg::{lu_solve, Endo, KForm};
use crate::g2::g2_f64;
use crate::torus::{flux_is_seven_free, flux_seven_part, FormField, GaugePotential, TorusGrid};
use crate::torus::Flux;
use crate::{Error, Result};

/// Instanton potential together with the pointwise size of π₇(E) it achieves.
#[derive(Debug, Clone)]
pub struct InstantonSolution {
    pub potential: GaugePotential,
    /// max over the grid of |E ∧ *φ|.
    pub seven_residual: f64,
}

/// The wavevector 2πk of a spectral slot as a 7-vector.
fn wavevector(grid: &TorusGrid, k: &[i64]) -> [f64; 7] {
    let mut v = [0.0; 7];
    for (&axis, &kk) in grid.axes().iter().zip(k) {
        v[axis - 1] = 2.0 * PI * kk as f64;
    }
    v
}

/// Rows 0..7: coefficients of (k∧eʲ)∧*φ; row 7: kⱼ (the Coulomb condition).
fn mode_matrix(kv: &[f64; 7]) -> Result<Vec<Vec<f64>>> {
    let g = g2_f64();
    let k = KForm::from_coeffs(7, 1, kv.to_vec())?;
    let mut rows = vec![vec![0.0; 7]; 8];
    for j in 0..7 {
        let mut e = vec![0.0; 7];
        e[j] = 1.0;
        let col = k.wedge(&KForm::from_coeffs(7, 1, e)?)?.wedge(&g.star_phi)?;
        for (r, c) in col.coeffs().iter().enumerate() {
            rows[r][j] = *c;
        }
        rows[7][j] = kv[j];
    }
    Ok(rows)
}

/// Least-squares solution of `rows · x = rhs` through the normal equations.
fn normal_solve(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rows[0].len();
    let mut ata = Endo::zeros(n);
    let mut atb = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            ata.set(i, j, rows.iter().map(|r| r[i] * r[j]).sum());
        }
        atb[i] = rows.iter().zip(rhs).map(|(r, b)| r[i] * b).sum();
    }
    lu_solve(&ata, &atb)
}

/// Solve π₇(E₀ + B + da) = 0 with d*a = 0 and mean a = 0, where `background`
/// is an optional closed 2-form field B. Without a background the constant
/// flux makes every mode homogeneous and the answer is a = 0.
pub fn instanton_solve(flux: &Flux, grid: &TorusGrid, background: Option<&FormField>) -> Result<InstantonSolution> {
    let g = g2_f64();
    let mean_seven = match background {
        None => {
            if flux_is_seven_free(flux)? {
                0.0
            } else {
                let u = flux_seven_part(flux)?;
                u.iter().map(|x| x * x).sum::<f64>().sqrt()
            }
        }
        Some(b) => {
            if b.degree() != 2 || b.grid() != grid {
                return Err(Error::InvalidInput("background must be a 2-form field on the same grid".into()));
            }
            let mean = flux.form().add(&b.mean())?;
            g.decompose2(&mean)?.u.norm_sq().sqrt()
        }
    };
    if mean_seven > 1e-12 {
        return Err(Error::InstantonObstruction { norm: mean_seven });
    }

    let a = match background {
        None => FormField::zeros(grid, 1)?,
        Some(b) => {
            // Spectrum of −B ∧ *φ, component by component.
            let rhs_field = FormField::try_from_fn(grid, 6, |p| Ok(b.at(p).wedge(&g.star_phi)?.neg()))?;
            let rhs = rhs_field.spectra();
            let mut out = vec![vec![Complex64::default(); grid.points()]; 7];
            for p in 0..grid.points() {
                let Some(k) = rhs_field.mode(p) else { continue };
                if k.iter().all(|&x| x == 0) {
                    continue;
                }
                let rows = mode_matrix(&wavevector(grid, &k))?;
                // i·M·â = rhŝ, so M·â = −i·rhŝ; the Coulomb row is homogeneous.
                let target: Vec<Complex64> = (0..7).map(|r| rhs[r][p] * Complex64::new(0.0, -1.0)).collect();
                let mut re: Vec<f64> = target.iter().map(|z| z.re).collect();
                let mut im: Vec<f64> = target.iter().map(|z| z.im).collect();
                re.push(0.0);
                im.push(0.0);
                let (xr, xi) = (normal_solve(&rows, &re)?, normal_solve(&rows, &im)?);
                for j in 0..7 {
                    out[j][p] = Complex64::new(xr[j], xi[j]);
                }
            }
            FormField::from_spectra(grid, 1, out)
        }
    };
    let potential = GaugePotential::new(a, flux.clone())?;
    let mut e = potential.curvature()?;
    if let Some(b) = background {
        e = e.add(b)?;
    }
    let seven = FormField::try_from_fn(grid, 6, |p| e.at(p).wedge(&g.star_phi))?;
    Ok(InstantonSolution { potential, seven_residual: seven.max_abs() })
}
