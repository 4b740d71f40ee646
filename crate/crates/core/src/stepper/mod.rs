//! Iteration kernels, the solver loop and convergence estimators.

mod kernel;
mod order;
mod solver;

pub use kernel::{
    binomial_newton_step, binomial_power_sum, general_binomial_coefficient, newton_step, qth_root_with,
    real_qth_root, Branch, MethodSpec,
};
pub use order::{
    estimate_order, estimate_order_with, estimate_ratio, estimate_ratio_with, DEFAULT_WINDOW, ERROR_FLOOR,
    MIN_TRACE_POINTS,
};
pub use solver::{run_solver, IterationTrace, SolverConfig, Status, TracePoint, DIVERGENCE_BOUND};
