//! Gradient flow of the Karigiannis–Leung functional, the s = 0 instanton
//! solve, large-radius continuation and the per-mode kernel probe.

mod evolve;
mod instanton;
mod newton;
mod probe;

pub use evolve::{
    cylinder_check, cylinder_check_at, cylinder_order_table, flow_run, flow_step, theta_min, vector_field,
    CylinderReport, FlowConfig, OrderTable, Scheme, Termination, Trajectory,
};
pub use instanton::{instanton_solve, InstantonSolution};
pub use newton::{
    continuation, default_schedule, newton_solve, ContinuationConfig, ContinuationEnd, ContinuationResult, ContinuationStep, NewtonOutcome,
};
pub use probe::{kernel_probe, mode_kernel, mode_ranks, KernelProbeReport, ModeRanks};
