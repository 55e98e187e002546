#![allow(dead_code)]

use ddt_core::exalg::KForm;
use ddt_core::torus::{FormField, Flux, GaugePotential, TorusGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// n₁₂ = n₄₇ = 1: the flux form lies in Λ²₁₄ and has vanishing cube.
pub fn ddt_flux() -> Flux {
    Flux::from_entries(&[(1, 2, 1), (4, 7, 1)]).unwrap()
}

/// n₁₂ = 1, n₄₇ = 2, n₅₆ = −1: no Λ²₇ part but a nonzero cube.
pub fn cubic_flux() -> Flux {
    Flux::from_entries(&[(1, 2, 1), (4, 7, 2), (5, 6, -1)]).unwrap()
}

pub fn random_potential(grid: &TorusGrid, flux: Flux, amplitude: f64, r: &mut ChaCha8Rng) -> GaugePotential {
    GaugePotential::new(FormField::random(grid, 1, amplitude, r).unwrap(), flux).unwrap()
}

pub fn close(a: f64, b: f64, rel: f64, scale: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(scale)
}

pub fn sup(f: &KForm<f64>) -> f64 {
    f.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
}
