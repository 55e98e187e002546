mod common;

use std::f64::consts::PI;

use common::*;
use ddt_core::exalg::KForm;
use ddt_core::torus::*;

fn grid3() -> TorusGrid {
    TorusGrid::new(&[1, 4, 6], 8).unwrap()
}

#[test]
fn integrals_of_constants_and_exact_forms() {
    let g = grid3();
    let vol = FormField::constant(&g, &KForm::volume(7).unwrap()).unwrap();
    assert_eq!(integrate(&vol).unwrap(), 1.0);
    let wave = FormField::from_fn(&g, 7, |p| KForm::volume(7).unwrap().scale(&(2.0 * PI * g.coords(p)[0]).sin())).unwrap();
    assert!(integrate(&wave).unwrap().abs() < 1e-14);
    let mut r = rng(1);
    let six = FormField::random(&g, 6, 1.0, &mut r).unwrap();
    assert!(integrate(&six.d().unwrap()).unwrap().abs() < 1e-12);
}

#[test]
fn codiff_of_exact_mode_is_laplacian() {
    let g = TorusGrid::new(&[2, 3], 8).unwrap();
    let f = FormField::from_fn(&g, 0, |p| {
        let x = g.coords(p);
        KForm::scalar(7, (2.0 * PI * (x[1] + 2.0 * x[2])).cos()).unwrap()
    })
    .unwrap();
    let lap = f.d().unwrap().codiff().unwrap();
    let k2 = (2.0 * PI).powi(2) * 5.0;
    assert!(lap.sub(&f.scale(k2)).unwrap().max_abs() < 1e-10 * k2);
    let c = FormField::constant(&g, &KForm::blade(7, &[3]).unwrap()).unwrap();
    assert!(c.codiff().unwrap().max_abs() < 1e-14);
}

#[test]
fn curvature_mean_and_gauge_invariance() {
    let g = grid3();
    let mut r = rng(2);
    let pot = random_potential(&g, cubic_flux(), 0.3, &mut r);
    let e = pot.curvature().unwrap();
    let mean = e.mean().sub(&cubic_flux().form()).unwrap();
    assert!(sup(&mean) < 1e-12);
    let chi = FormField::random(&g, 0, 1.0, &mut r).unwrap();
    let shifted = gauge_shift(&pot, &chi, [1, 0, -2, 0, 0, 3, 0]).unwrap();
    assert!(shifted.curvature().unwrap().sub(&e).unwrap().max_abs() < 1e-12);
    assert!(e.d().unwrap().max_abs() < 1e-11);
}

#[test]
fn kl_oneform_vanishes_at_ddt_flux_and_on_exact_directions() {
    let g = grid3();
    let mut r = rng(3);
    let flat = GaugePotential::zero(&g, ddt_flux()).unwrap();
    let b = FormField::random(&g, 1, 1.0, &mut r).unwrap();
    assert!(kl_oneform(&flat, &b).unwrap().abs() < 1e-10);
    let pot = random_potential(&g, cubic_flux(), 0.2, &mut r);
    let chi = FormField::random(&g, 0, 1.0, &mut r).unwrap();
    let scale = kl_oneform(&pot, &b).unwrap().abs().max(1.0);
    assert!(kl_oneform(&pot, &chi.d().unwrap()).unwrap().abs() < 1e-10 * scale);
}

#[test]
fn functional_is_a_potential_for_the_oneform() {
    let g = grid3();
    let mut r = rng(4);
    let pot = random_potential(&g, cubic_flux(), 0.2, &mut r);
    let flux = pot.flux.clone();
    assert_eq!(kl_functional(&GaugePotential::zero(&g, flux.clone()).unwrap()).unwrap(), 0.0);
    let f = kl_functional(&pot).unwrap();
    let zero = FormField::zeros(&g, 1).unwrap();
    let straight = kl_path_integral(&flux, &zero, &pot.a).unwrap();
    let half = pot.a.scale(0.5);
    let kinked = FormField::random(&g, 1, 0.2, &mut r).unwrap();
    let two_leg = kl_path_integral(&flux, &zero, &half).unwrap() + kl_path_integral(&flux, &half, &pot.a).unwrap();
    let detour = kl_path_integral(&flux, &zero, &kinked).unwrap() + kl_path_integral(&flux, &kinked, &pot.a).unwrap();
    assert!(close(f, straight, 1e-10, 1.0), "{f} vs {straight}");
    assert!(close(straight, two_leg, 1e-10, 1.0), "{straight} vs {two_leg}");
    assert!(close(straight, detour, 1e-10, 1.0), "{straight} vs {detour}");

    // Derivative of the functional along b equals the 1-form.
    let b = FormField::random(&g, 1, 1.0, &mut r).unwrap();
    let h = 1e-4;
    let plus = kl_functional(&pot.with_a(pot.a.axpy(h, &b).unwrap()).unwrap()).unwrap();
    let minus = kl_functional(&pot.with_a(pot.a.axpy(-h, &b).unwrap()).unwrap()).unwrap();
    let fd = (plus - minus) / (2.0 * h);
    let exact = kl_oneform(&pot, &b).unwrap();
    assert!(close(fd, exact, 1e-6, 1.0), "{fd} vs {exact}");
}

#[test]
fn functional_small_gauge_invariance() {
    let g = grid3();
    let mut r = rng(5);
    let pot = random_potential(&g, cubic_flux(), 0.2, &mut r);
    let chi = FormField::random(&g, 0, 1.0, &mut r).unwrap();
    let shifted = gauge_shift(&pot, &chi, [0; 7]).unwrap();
    let (a, b) = (kl_functional(&pot).unwrap(), kl_functional(&shifted).unwrap());
    assert!(close(a, b, 1e-10, 1.0), "{a} vs {b}");
}

#[test]
fn theta3_antisymmetry_and_flat_value() {
    let g = grid3();
    let mut r = rng(6);
    let pot = random_potential(&g, cubic_flux(), 0.2, &mut r);
    let b: Vec<FormField> = (0..3).map(|_| FormField::random(&g, 1, 1.0, &mut r).unwrap()).collect();
    let t = theta3(&pot, &b[0], &b[1], &b[2]).unwrap();
    assert_eq!(theta3(&pot, &b[0], &b[0], &b[2]).unwrap(), 0.0);
    assert!(close(theta3(&pot, &b[1], &b[0], &b[2]).unwrap(), -t, 1e-13, 1.0));
    assert!(close(theta3(&pot, &b[1], &b[2], &b[0]).unwrap(), t, 1e-13, 1.0));
}

#[test]
fn dtheta_vanishes_and_nu_is_a_moment_map() {
    let g = grid3();
    let mut r = rng(7);
    let pot = random_potential(&g, cubic_flux(), 0.2, &mut r);
    let b: Vec<FormField> = (0..4).map(|_| FormField::random(&g, 1, 1.0, &mut r).unwrap()).collect();
    let d = dtheta4(&pot, [&b[0], &b[1], &b[2], &b[3]]).unwrap();
    assert!(d.value.abs() <= 1e-10 * d.term_scale, "{d:?}");
    let g1 = FormField::random(&g, 0, 1.0, &mut r).unwrap();
    let g2 = FormField::random(&g, 0, 1.0, &mut r).unwrap();
    let (lhs, rhs) = nu_derivative_check(&pot, &g1, &g2, &b[0]).unwrap();
    assert!(close(lhs, rhs, 1e-10, 0.0), "{lhs} vs {rhs}");
    assert_eq!(nu(&pot, &g1, &g1).unwrap(), 0.0);
    let flat = GaugePotential::zero(&g, ddt_flux()).unwrap();
    assert!(nu(&flat, &g1, &g2).unwrap().abs() < 1e-10);
}

#[test]
fn residual_field_examples() {
    let g = grid3();
    let (_, n) = residual_field(&GaugePotential::zero(&g, ddt_flux()).unwrap(), 1.0).unwrap();
    assert!(n <= 1e-12);
    let cubic = GaugePotential::zero(&g, cubic_flux()).unwrap();
    assert!(residual_field(&cubic, 0.0).unwrap().1 <= 1e-12);
    let (_, n1) = residual_field(&cubic, 1.0).unwrap();
    assert!((n1 - 2.0 * (2.0 * PI).powi(3)).abs() < 1e-10 * n1);
}
