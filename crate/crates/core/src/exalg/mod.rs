//! Graded exterior algebra over R⁷ and R⁸ with the Euclidean metric.

pub mod basis;
pub mod endo;
pub mod form;
pub mod scalar;

pub use basis::{basis, binomial, MultiIndex};
pub use endo::{evaluate, lu_solve, nullspace, pullback, sharp2, solve_endo, Endo};
pub use form::{flat, sharp1, KForm, Vector};
pub use scalar::{rat, Field, Scalar};
