//! Golden fixtures and the cell-by-cell diff against them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::stepper::Status;
use crate::tables::builtin::TableRows;
use crate::tables::{ConvergenceRow, CurvatureRow};

const FIXTURES_JSON: &str = include_str!("../../fixtures/tables.json");

/// Printed values for one row. Blank cells are absent.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct FixtureRow {
    pub iterations: Option<usize>,
    pub abs_error: Option<f64>,
    pub mu_q: Option<f64>,
    pub rhs_52x: Option<f64>,
    pub mu_alpha: Option<f64>,
    pub lemma43_value: Option<f64>,
    pub rhs_417: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FixtureTable {
    pub root: f64,
    pub rows: BTreeMap<String, FixtureRow>,
    /// Computed but deliberately left out of the golden set, with the reason.
    #[serde(default)]
    pub excluded: BTreeMap<String, String>,
}

pub type Fixtures = BTreeMap<String, FixtureTable>;

pub fn load_fixtures() -> Fixtures {
    serde_json::from_str(FIXTURES_JSON).expect("shipped fixture file parses")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Tolerance on curvature-table values, relative once the printed value exceeds 1.
    pub value: f64,
    /// Allowed difference in iteration counts.
    pub iterations: usize,
    /// Terminal errors pass when no worse than this multiple of the printed one.
    pub error_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { value: 1e-6, iterations: 1, error_factor: 100.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    pub key: String,
    pub column: &'static str,
    pub expected: f64,
    pub actual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    pub table: String,
    pub checks: Vec<CellCheck>,
    /// Fixture rows with no computed counterpart.
    pub missing: Vec<String>,
    pub rows_checked: usize,
    pub rows_passed: usize,
}

impl DiffReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count() + self.missing.len()
    }

    pub fn is_pass(&self) -> bool {
        self.failures() == 0
    }

    /// `"10/10 rows pass"`
    pub fn summary(&self) -> String {
        format!(
            "table {}: {}/{} pass ({} cells checked, {} failures)",
            self.table,
            self.rows_passed,
            self.rows_checked,
            self.checks.len(),
            self.failures()
        )
    }

    pub fn render_failures(&self) -> String {
        let mut out = String::new();
        for c in self.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(out, "FAIL {} [{}]: expected {}, got {}", c.key, c.column, c.expected, c.actual);
        }
        for m in &self.missing {
            let _ = writeln!(out, "FAIL {m}: no computed row");
        }
        out
    }
}

struct Collector<'a> {
    report: DiffReport,
    expected: &'a FixtureTable,
    seen: Vec<String>,
}

impl<'a> Collector<'a> {
    fn new(table: &str, expected: &'a FixtureTable) -> Self {
        Collector {
            report: DiffReport {
                table: table.to_string(),
                checks: Vec::new(),
                missing: Vec::new(),
                rows_checked: 0,
                rows_passed: 0,
            },
            expected,
            seen: Vec::new(),
        }
    }

    fn row(&mut self, key: String, checks: impl FnOnce(&FixtureRow) -> Vec<CellCheck>) {
        let Some(fixture) = self.expected.rows.get(&key) else { return };
        let cells = checks(fixture);
        self.report.rows_checked += 1;
        if cells.iter().all(|c| c.pass) {
            self.report.rows_passed += 1;
        }
        self.report.checks.extend(cells);
        self.seen.push(key);
    }

    fn finish(mut self) -> DiffReport {
        for key in self.expected.rows.keys() {
            if !self.seen.contains(key) {
                self.report.missing.push(key.clone());
            }
        }
        self.report
    }
}

fn value_check(key: &str, column: &'static str, expected: Option<f64>, actual: f64, tol: f64) -> Option<CellCheck> {
    expected.map(|e| CellCheck { key: key.to_string(), column, expected: e, actual, pass: (actual - e).abs() <= tol * e.abs().max(1.0) })
}

pub fn diff_curvature(table: &str, rows: &[CurvatureRow], expected: &FixtureTable, tol: &Tolerances) -> DiffReport {
    let mut c = Collector::new(table, expected);
    for row in rows {
        let key = row.key();
        c.row(key.clone(), |f| {
            [
                value_check(&key, "mu_q", f.mu_q, row.mu_q, tol.value),
                value_check(&key, "rhs_52x", f.rhs_52x, row.rhs_52x, tol.value),
                value_check(&key, "mu_alpha", f.mu_alpha, row.mu_alpha, tol.value),
                value_check(&key, "lemma43_value", f.lemma43_value, row.lemma43_value, tol.value),
                value_check(&key, "rhs_417", f.rhs_417, row.rhs_417, tol.value),
            ]
            .into_iter()
            .flatten()
            .collect()
        });
    }
    c.finish()
}

/// Iteration counts within `tol.iterations` of the printed count (and the
/// run must have converged); terminal errors no worse than
/// `tol.error_factor` times the printed error.
pub fn diff_convergence(table: &str, rows: &[ConvergenceRow], expected: &FixtureTable, tol: &Tolerances) -> DiffReport {
    let mut c = Collector::new(table, expected);
    let converged = Status::Converged.as_str();
    for row in rows {
        let key = row.key();
        c.row(key.clone(), |f| {
            let mut cells = Vec::new();
            if let Some(e) = f.iterations {
                cells.push(CellCheck {
                    key: key.clone(),
                    column: "iterations",
                    expected: e as f64,
                    actual: row.iterations as f64,
                    pass: row.status == converged && row.iterations.abs_diff(e) <= tol.iterations,
                });
            }
            if let Some(e) = f.abs_error {
                cells.push(CellCheck {
                    key: key.clone(),
                    column: "abs_error",
                    expected: e,
                    actual: row.abs_error,
                    pass: row.status == converged && row.abs_error <= tol.error_factor * e,
                });
            }
            cells
        });
    }
    c.finish()
}

pub fn diff_expected(table: &str, rows: &TableRows, expected: &FixtureTable, tol: &Tolerances) -> DiffReport {
    match rows {
        TableRows::Convergence(r) => diff_convergence(table, r, expected, tol),
        TableRows::Curvature(r) => diff_curvature(table, r, expected, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepper::SolverConfig;
    use crate::tables::builtin::{ExampleQuadratic, TableId};
    use crate::tables::{convergence_grid, curvature_table};

    #[test]
    fn fixtures_cover_every_table() {
        let f = load_fixtures();
        assert_eq!(f["5.2.1"].rows.len(), 10);
        assert_eq!(f["5.2.2"].rows.len(), 13);
        for id in TableId::ALL {
            assert_eq!(f[id.as_str()].root, id.root());
        }
    }

    #[test]
    fn exclusions_name_real_cells() {
        let f = load_fixtures();
        for id in [TableId::Convergence1, TableId::Convergence2] {
            let keys: Vec<String> = convergence_grid(&ExampleQuadratic, id.root(), &id.convergence_cells(), &SolverConfig::default())
                .iter()
                .map(|r| r.key())
                .collect();
            for k in f[id.as_str()].rows.keys().chain(f[id.as_str()].excluded.keys()) {
                assert!(keys.contains(k), "{id}: fixture key {k:?} matches no cell");
            }
        }
    }

    #[test]
    fn curvature_table_passes_and_is_sensitive() {
        let fixtures = load_fixtures();
        let id = TableId::Curvature1;
        let rows = curvature_table(&ExampleQuadratic, id.root(), id.curvature_qs());
        let tol = Tolerances::default();
        let ok = diff_curvature(id.as_str(), &rows, &fixtures[id.as_str()], &tol);
        assert!(ok.is_pass(), "{}", ok.render_failures());
        assert_eq!((ok.rows_passed, ok.rows_checked), (10, 10));

        let mut perturbed = fixtures[id.as_str()].clone();
        let row = perturbed.rows.get_mut("-2.5").unwrap();
        row.rhs_417 = row.rhs_417.map(|v| v + 1e-3);
        let bad = diff_curvature(id.as_str(), &rows, &perturbed, &tol);
        assert_eq!(bad.failures(), 1);
        assert_eq!(bad.rows_passed, 9);
    }

    #[test]
    fn newton_rows_of_root_two_pass() {
        let fixtures = load_fixtures();
        let id = TableId::Convergence2;
        let cells: Vec<_> = id.convergence_cells().into_iter().filter(|c| c.label == "N-method").collect();
        let rows = convergence_grid(&ExampleQuadratic, id.root(), &cells, &SolverConfig::default());
        let mut expected = fixtures[id.as_str()].clone();
        expected.rows.retain(|k, _| k.starts_with("N-method"));
        let d = diff_convergence(id.as_str(), &rows, &expected, &Tolerances::default());
        assert!(d.is_pass(), "{}", d.render_failures());
        assert_eq!(d.rows_checked, 4);
    }

    #[test]
    fn missing_rows_and_iteration_slack() {
        let fixtures = load_fixtures();
        let table = &fixtures["5.1.1"];
        let d = diff_convergence("5.1.1", &[], table, &Tolerances::default());
        assert_eq!(d.missing.len(), table.rows.len());
        assert!(!d.is_pass());

        let rows = convergence_grid(&ExampleQuadratic, 1.0, &TableId::Convergence1.convergence_cells(), &SolverConfig::default());
        let strict = Tolerances { iterations: 0, ..Default::default() };
        let d = diff_convergence("5.1.1", &rows, table, &strict);
        assert!(!d.is_pass(), "some counts differ by one from the printed table");
    }
}
