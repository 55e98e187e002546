//! Deformed Donaldson–Thomas connections on G2-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! * [`exalg`]: exterior algebra on R⁷ and R⁸, generic over a scalar ring;
//! * [`g2`]: the standard G2 structure and the Λ²₇ ⊕ Λ²₁₄ split;
//! * [`ddt`]: pointwise dDT and Spin(7)-dDT operators;
//! * [`prover`]: exact polynomial verification of the algebraic identities
//!   the pointwise operators rely on;
//! * [`torus`]: spectral exterior calculus and gauge-theoretic observables
//!   on the flat 7-torus;
//! * [`flow`]: gradient flow, instanton solve, Newton continuation and
//!   Fourier-mode probes.
//!
//! Curvature is handled through the real 2-form `E` with `F = √−1·E`
//! throughout; see [`ddt`] for the sign conventions this implies.

pub mod ddt;
pub mod error;
pub mod exalg;
pub mod flow;
pub mod g2;
pub mod prover;
pub mod torus;

pub use error::{Error, Result};
