//! Empirical convergence order and asymptotic constant from a trace.
//!
//! Both estimators work on the tail of the error sequence `e_k = |x_k - root|`:
//! the longest strictly decreasing run that ends at the last error above
//! [`ERROR_FLOOR`], cut to its final `window` points. With the default three
//! points the order estimate is the usual computational order of convergence
//! `ln(e_{k+1}/e_k) / ln(e_k/e_{k-1})`; longer windows fit the slope of
//! `ln e_{k+1}` against `ln e_k` by least squares.

use crate::error::{NumericError, Result};
use crate::stepper::solver::IterationTrace;

/// Errors at or below this are treated as roundoff and excluded.
pub const ERROR_FLOOR: f64 = 1e-13;

/// Points used by [`estimate_order`] and [`estimate_ratio`].
pub const DEFAULT_WINDOW: usize = 3;

/// Minimum trace length accepted by the estimators.
pub const MIN_TRACE_POINTS: usize = 4;

fn qualifying_tail(trace: &IterationTrace, root: f64, window: usize) -> Result<Vec<f64>> {
    if window < 3 {
        return Err(NumericError::InvalidParameter(format!("window must hold at least 3 points, got {window}")));
    }
    if !trace.is_converged() {
        return Err(NumericError::Inapplicable("trace did not converge"));
    }
    if trace.points.len() < MIN_TRACE_POINTS {
        return Err(NumericError::TooFewPoints { found: trace.points.len(), needed: MIN_TRACE_POINTS });
    }
    let errors = trace.errors(root);
    let last = errors
        .iter()
        .rposition(|&e| e > ERROR_FLOOR)
        .ok_or(NumericError::DegenerateErrors("no error above the roundoff floor"))?;
    let mut first = last;
    while first > 0 && errors[first - 1] > errors[first] {
        first -= 1;
    }
    let run = &errors[first..=last];
    if run.len() < 3 {
        return Err(NumericError::TooFewPoints { found: run.len(), needed: 3 });
    }
    Ok(run[run.len().saturating_sub(window)..].to_vec())
}

/// Order `p` in `e_{k+1} ~ C e_k^p`, over the default window.
pub fn estimate_order(trace: &IterationTrace, root: f64) -> Result<f64> {
    estimate_order_with(trace, root, DEFAULT_WINDOW)
}

pub fn estimate_order_with(trace: &IterationTrace, root: f64, window: usize) -> Result<f64> {
    let tail = qualifying_tail(trace, root, window)?;
    let xs: Vec<f64> = tail[..tail.len() - 1].iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = tail[1..].iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(NumericError::DegenerateErrors("constant errors over the window"));
    }
    Ok(sxy / sxx)
}

/// Geometric mean of `e_{k+1} / e_k^order` over the default window.
pub fn estimate_ratio(trace: &IterationTrace, root: f64, order: f64) -> Result<f64> {
    estimate_ratio_with(trace, root, order, DEFAULT_WINDOW)
}

pub fn estimate_ratio_with(trace: &IterationTrace, root: f64, order: f64, window: usize) -> Result<f64> {
    let tail = qualifying_tail(trace, root, window)?;
    let logs: Vec<f64> = tail.windows(2).map(|w| w[1].ln() - order * w[0].ln()).collect();
    Ok((logs.iter().sum::<f64>() / logs.len() as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::Polynomial;
    use crate::stepper::kernel::MethodSpec;
    use crate::stepper::solver::{run_solver, SolverConfig, Status, TracePoint};

    fn synthetic(errors: &[f64]) -> IterationTrace {
        let points = errors
            .iter()
            .enumerate()
            .map(|(k, &e)| TracePoint { k, x: 1.0 + e, fx: e, err: Some(e) })
            .collect();
        IterationTrace { points, status: Status::Converged, iterations: errors.len() - 1, message: None }
    }

    #[test]
    fn exact_quadratic_sequence() {
        // e_{k+1} = 3 e_k^2
        let mut e = vec![0.1];
        while *e.last().unwrap() > 1e-12 {
            let l = *e.last().unwrap();
            e.push(3.0 * l * l);
        }
        e.push(0.0);
        let t = synthetic(&e);
        assert!((estimate_order(&t, 1.0).unwrap() - 2.0).abs() < 1e-6);
        assert!((estimate_ratio(&t, 1.0, 2.0).unwrap() - 3.0).abs() < 1e-5);
        assert!((estimate_order_with(&t, 1.0, 10).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn tail_skips_non_monotone_prefix() {
        let t = synthetic(&[0.5, 0.1, 0.4, 0.2, 0.1, 0.05, 0.0]);
        assert!((estimate_order_with(&t, 1.0, 50).unwrap() - 1.0).abs() < 1e-9);
        assert!((estimate_ratio_with(&t, 1.0, 1.0, 50).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn error_signals() {
        let t = synthetic(&[0.1, 0.0, 0.0, 0.0]);
        assert!(matches!(estimate_order(&t, 1.0), Err(NumericError::TooFewPoints { .. })));
        let t = synthetic(&[0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(estimate_order(&t, 1.0), Err(NumericError::DegenerateErrors(_))));
        let t = synthetic(&[0.1, 0.01]);
        assert!(matches!(estimate_order(&t, 1.0), Err(NumericError::TooFewPoints { .. })));
        let mut t = synthetic(&[0.1, 0.01, 1e-4, 1e-8]);
        t.status = Status::MaxIter;
        assert!(estimate_order(&t, 1.0).is_err());
        let t = synthetic(&[0.1, 0.01, 1e-4, 1e-8]);
        assert!(estimate_order_with(&t, 1.0, 2).is_err());
    }

    #[test]
    fn newton_simple_root_from_06() {
        let p = Polynomial::new(vec![1.0, -3.0, 2.0]);
        let t = run_solver(&p, &MethodSpec::newton(), 0.6, &SolverConfig::default(), Some(1.0));
        let order = estimate_order(&t, 1.0).unwrap();
        assert!((order - 2.0).abs() <= 0.2, "{order}");
        let ratio = estimate_ratio(&t, 1.0, 2.0).unwrap();
        assert!((ratio - 1.0).abs() <= 0.1, "{ratio}");
    }
}
