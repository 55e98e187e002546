//! Spectral exterior calculus on the flat 7-torus with the standard G2
//! structure, line bundles with quantized flux, and the observables of the
//! dDT moment-map picture.

mod field;
mod gauge;
mod grid;
pub mod io;

pub use field::{integrate, integrate_exact, FormField};
pub use gauge::{
    dtheta4, flux_is_seven_free, flux_seven_part, gauge_shift, kl_functional, kl_oneform, kl_path_integral, nu,
    nu_derivative_check, residual_field, theta3, Dtheta4, Flux, GaugePotential,
};
pub use grid::{quadrature_resolution, TorusGrid};
