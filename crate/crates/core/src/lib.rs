//! Binomial-expansion variants of Newton's method.
//!
//! A method is fixed by a real exponent `q != 0` and a truncation depth `m`:
//! the next iterate is the real `q`-th root of the first `m + 1` terms of the
//! binomial expansion of `(x + h)^q`, where `h = -f(x)/f'(x)` is the Newton
//! correction. `q = 1` is Newton's method, and for integer `q` with `m >= q`
//! the expansion is complete and the step is Newton's again.
//!
//! Besides the solver, [`analysis`] compares a method with Newton's through
//! the curvature of `g(t) = f(t^(1/q))`, and [`tables`] recomputes the
//! reference experiment tables for `f(x) = x^2 - 3x + 2`.

pub mod analysis;
pub mod cli;
mod error;
pub mod format;
pub mod funcmodel;
pub mod power;
pub mod stepper;
pub mod tables;

pub use analysis::{admissible_q_interval, comparison_report, ComparisonReport, Convexity};
pub use error::{Component, NumericError, Result};
pub use funcmodel::{DifferentiableFunction, Derivs, FnTriple, Polynomial};
pub use stepper::{
    binomial_newton_step, estimate_order, estimate_ratio, newton_step, run_solver, Branch, IterationTrace,
    MethodSpec, SolverConfig, Status,
};
