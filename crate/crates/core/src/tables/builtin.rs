//! The four built-in experiment tables on `f(x) = x^2 - 3x + 2`.

use std::fmt;
use std::str::FromStr;

use crate::funcmodel::{Derivs, DifferentiableFunction, Polynomial};
use crate::stepper::SolverConfig;
use crate::tables::fixture::{diff_convergence, diff_curvature, load_fixtures, DiffReport, Tolerances};
use crate::tables::{convergence_grid, curvature_table, q_label, ConvergenceCell, ConvergenceRow, CurvatureRow};

/// `(x - 1)(x - 2)` as a coefficient list.
pub fn example_polynomial() -> Polynomial {
    Polynomial::new(vec![1.0, -3.0, 2.0])
}

/// `x^2 - 3x + 2` evaluated term by term rather than by Horner's rule.
///
/// The reference tables were computed from the expanded form, and the last
/// one or two ulps of the terminal errors depend on it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExampleQuadratic;

impl DifferentiableFunction for ExampleQuadratic {
    fn derivs(&self, x: f64) -> Derivs {
        Derivs { f: x * x - 3.0 * x + 2.0, df: 2.0 * x - 3.0, d2f: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    /// Iteration counts toward root 1.
    Convergence1,
    /// Iteration counts toward root 2.
    Convergence2,
    /// Curvature columns at root 1.
    Curvature1,
    /// Curvature columns at root 2.
    Curvature2,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::Convergence1, TableId::Convergence2, TableId::Curvature1, TableId::Curvature2];

    pub fn as_str(&self) -> &'static str {
        match self {
            TableId::Convergence1 => "5.1.1",
            TableId::Convergence2 => "5.1.2",
            TableId::Curvature1 => "5.2.1",
            TableId::Curvature2 => "5.2.2",
        }
    }

    pub fn root(&self) -> f64 {
        match self {
            TableId::Convergence1 | TableId::Curvature1 => 1.0,
            TableId::Convergence2 | TableId::Curvature2 => 2.0,
        }
    }

    /// Exponents swept by the curvature tables.
    pub fn curvature_qs(&self) -> &'static [f64] {
        match self {
            TableId::Curvature1 => &[-4.0, -3.5, -3.0, -2.5, -2.0, -1.5, -0.5, 0.5, 1.0, 1.5],
            TableId::Curvature2 => &[-2.0, -1.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0],
            _ => &[],
        }
    }

    /// Every `(q, m, x0)` cell of a convergence table, in printed order.
    pub fn convergence_cells(&self) -> Vec<ConvergenceCell> {
        match self {
            TableId::Convergence1 => {
                let mut cells = newton_cells(&[0.85, 1.3]);
                cells.extend(block(-4.0, 0.85, 2..=4));
                for q in [-3.0, -2.0, -1.0, -0.5, -1.0 / 3.0, 0.5, 1.5] {
                    cells.extend(block(q, 1.3, 2..=4));
                }
                cells.extend(block(2.0, 1.3, 2..=3));
                cells
            }
            TableId::Convergence2 => {
                let mut cells = newton_cells(&[1.505, 1.58, 2.27, 2.6]);
                cells.extend(block(0.5, 1.505, 2..=4));
                cells.extend(block(1.5, 1.58, 2..=4));
                cells.extend(block(2.0, 2.27, 2..=3));
                for q in 3..=9 {
                    cells.extend(block(q as f64, 1.58, 2..=4));
                }
                // the printed q = 10 rows mix both initial values; run both
                for x0 in [2.27, 2.6] {
                    cells.extend(block(10.0, x0, 2..=4));
                }
                cells
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown table {s:?} (expected one of 5.1.1, 5.1.2, 5.2.1, 5.2.2)"))
    }
}

fn newton_cells(x0s: &[f64]) -> Vec<ConvergenceCell> {
    x0s.iter().map(|&x0| ConvergenceCell::new("N-method", 1.0, 1, x0)).collect()
}

fn block(q: f64, x0: f64, terms: std::ops::RangeInclusive<u32>) -> Vec<ConvergenceCell> {
    terms
        .map(|t| {
            let mut label = format!("{}({t} term)", q_label(q));
            if q.fract() == 0.0 && q >= 1.0 && t - 1 >= q as u32 {
                label.push_str("=N-method");
            }
            ConvergenceCell::new(label, q, t - 1, x0)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableRows {
    Convergence(Vec<ConvergenceRow>),
    Curvature(Vec<CurvatureRow>),
}

impl TableRows {
    pub fn len(&self) -> usize {
        match self {
            TableRows::Convergence(r) => r.len(),
            TableRows::Curvature(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct BuiltinRun {
    pub id: TableId,
    pub rows: TableRows,
    pub diff: DiffReport,
}

/// Computes a built-in table and diffs it against the shipped fixture.
pub fn run_builtin(id: TableId, cfg: &SolverConfig, tol: &Tolerances) -> BuiltinRun {
    let f = ExampleQuadratic;
    let fixtures = load_fixtures();
    let expected = fixtures.get(id.as_str()).expect("every built-in table has a fixture");
    let (rows, diff) = match id {
        TableId::Convergence1 | TableId::Convergence2 => {
            let rows = convergence_grid(&f, id.root(), &id.convergence_cells(), cfg);
            let diff = diff_convergence(id.as_str(), &rows, expected, tol);
            (TableRows::Convergence(rows), diff)
        }
        TableId::Curvature1 | TableId::Curvature2 => {
            let rows = curvature_table(&f, id.root(), id.curvature_qs());
            let diff = diff_curvature(id.as_str(), &rows, expected, tol);
            (TableRows::Curvature(rows), diff)
        }
    };
    BuiltinRun { id, rows, diff }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expanded_form_agrees_with_polynomial() {
        let p = example_polynomial();
        for &x in &[0.85, 1.3, 1.505, 2.6, -4.0] {
            let (a, b) = (ExampleQuadratic.derivs(x), p.derivs(x));
            assert!((a.f - b.f).abs() <= 1e-14 * (1.0 + x * x));
            assert!((a.df - b.df).abs() <= 1e-15 * (1.0 + x.abs()));
            assert_eq!(a.d2f, b.d2f);
        }
    }

    #[test]
    fn ids_parse() {
        for id in TableId::ALL {
            assert_eq!(id.as_str().parse::<TableId>().unwrap(), id);
        }
        assert!("5.3".parse::<TableId>().is_err());
    }

    #[test]
    fn labels_follow_table_vocabulary() {
        let cells = TableId::Convergence1.convergence_cells();
        let labels: Vec<&str> = cells.iter().map(|c| c.label.as_str()).collect();
        assert!(labels.contains(&"-1/3(2 term)"));
        assert!(labels.contains(&"2(3 term)=N-method"));
        assert!(labels.contains(&"-4(4 term)"));
        let c = cells.iter().find(|c| c.label == "-4(4 term)").unwrap();
        assert_eq!((c.m, c.x0), (3, 0.85));
        let cells = TableId::Convergence2.convergence_cells();
        assert!(cells.iter().any(|c| c.label == "3(4 term)=N-method"));
        assert_eq!(cells.iter().filter(|c| c.q == 10.0).count(), 6);
    }

    #[test]
    fn curvature_sweeps_have_printed_sizes() {
        assert_eq!(TableId::Curvature1.curvature_qs().len(), 10);
        assert_eq!(TableId::Curvature2.curvature_qs().len(), 13);
    }

    #[test]
    fn every_builtin_diff_passes() {
        for id in TableId::ALL {
            let run = run_builtin(id, &SolverConfig::default(), &Tolerances::default());
            assert!(run.diff.is_pass(), "{id}: {}", run.diff.render_failures());
        }
    }
}
