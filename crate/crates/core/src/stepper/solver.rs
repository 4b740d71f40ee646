//! Solver loop, stopping rules and the recorded trace.

use serde::{Deserialize, Serialize};

use crate::error::{NumericError, Result};
use crate::funcmodel::DifferentiableFunction;
use crate::stepper::kernel::{binomial_newton_step, MethodSpec};

/// Iterates beyond this magnitude count as divergence.
pub const DIVERGENCE_BOUND: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative successive-iterate tolerance.
    pub step_tol: f64,
    /// Absolute residual tolerance on `|f|`.
    pub resid_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { step_tol: 1e-14, resid_tol: 1e-15, max_iter: 100 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.step_tol) || !positive(self.resid_tol) {
            return Err(NumericError::InvalidParameter("tolerances must be positive and finite".into()));
        }
        if self.max_iter == 0 {
            return Err(NumericError::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    MaxIter,
    DerivativeVanished,
    DomainError,
    Diverged,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIter => "max-iter",
            Status::DerivativeVanished => "derivative-vanished",
            Status::DomainError => "domain-error",
            Status::Diverged => "diverged",
        }
    }

    fn from_error(err: &NumericError) -> Status {
        match err {
            NumericError::DerivativeVanished { .. } => Status::DerivativeVanished,
            NumericError::Domain(_) | NumericError::InvalidParameter(_) => Status::DomainError,
            _ => Status::Diverged,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub k: usize,
    pub x: f64,
    pub fx: f64,
    /// `|x - root|` when a reference root was supplied.
    pub err: Option<f64>,
}

/// Every iterate of one solver run.
///
/// `iterations` indexes the accepted iterate. A run that stops on the step
/// rule records one extra point: the step that showed `x_k` had settled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub points: Vec<TracePoint>,
    pub status: Status,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl IterationTrace {
    /// The accepted iterate.
    pub fn solution(&self) -> f64 {
        self.points[self.iterations].x
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn errors(&self, root: f64) -> Vec<f64> {
        self.points.iter().map(|p| (p.x - root).abs()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// Runs the method from `x0` until the accepted iterate `x_k` satisfies
/// `|f(x_k)| <= resid_tol`, or the next step is negligible:
/// `|x_{k+1} - x_k| <= step_tol * max(1, |x_{k+1}|)`.
///
/// Failures are recorded in the trace status; this never returns an error.
pub fn run_solver<F: DifferentiableFunction + ?Sized>(
    func: &F,
    spec: &MethodSpec,
    x0: f64,
    cfg: &SolverConfig,
    ref_root: Option<f64>,
) -> IterationTrace {
    let point = |k: usize, x: f64| TracePoint { k, x, fx: func.value(x), err: ref_root.map(|r| (x - r).abs()) };
    let mut points = vec![point(0, x0)];
    let finish = |points: Vec<TracePoint>, status: Status, iterations: usize, message: Option<String>| {
        IterationTrace { points, status, iterations, message }
    };

    if let Err(e) = cfg.validate() {
        return finish(points, Status::DomainError, 0, Some(e.to_string()));
    }
    if !x0.is_finite() {
        return finish(points, Status::DomainError, 0, Some(format!("initial value {x0} is not finite")));
    }

    let mut k = 0;
    loop {
        let current = points[k];
        if current.fx.abs() <= cfg.resid_tol {
            return finish(points, Status::Converged, k, None);
        }
        if k == cfg.max_iter {
            return finish(points, Status::MaxIter, k, None);
        }
        let next = match binomial_newton_step(func, current.x, spec) {
            Ok(x) => x,
            Err(e) => return finish(points, Status::from_error(&e), k, Some(e.to_string())),
        };
        let p = point(k + 1, next);
        points.push(p);
        if next.abs() > DIVERGENCE_BOUND || !p.fx.is_finite() {
            return finish(points, Status::Diverged, k + 1, Some(format!("iterate {next} left the bounded region")));
        }
        if (next - current.x).abs() <= cfg.step_tol * next.abs().max(1.0) {
            return finish(points, Status::Converged, k, None);
        }
        k += 1;
    }
}
