//! Experiment tables: iteration-count grids and curvature sweeps, their
//! CSV/JSON emission, and diffs against the shipped golden fixtures.

mod builtin;
mod fixture;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::curvature_columns;
use crate::format::fmt17;
use crate::funcmodel::DifferentiableFunction;
use crate::stepper::{run_solver, MethodSpec, SolverConfig};

pub use builtin::{example_polynomial, run_builtin, ExampleQuadratic, BuiltinRun, TableId, TableRows};
pub use fixture::{
    diff_convergence, diff_curvature, diff_expected, load_fixtures, CellCheck, DiffReport, FixtureRow,
    FixtureTable, Fixtures, Tolerances,
};

/// One `(q, m, x0)` cell of a convergence grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCell {
    pub label: String,
    pub q: f64,
    pub m: u32,
    pub x0: f64,
}

impl ConvergenceCell {
    pub fn new(label: impl Into<String>, q: f64, m: u32, x0: f64) -> Self {
        ConvergenceCell { label: label.into(), q, m, x0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub label: String,
    pub q: f64,
    pub m: u32,
    pub x0: f64,
    pub iterations: usize,
    pub abs_error: f64,
    pub status: String,
}

impl ConvergenceRow {
    /// Fixture key: the row label with its initial value.
    pub fn key(&self) -> String {
        row_key(&self.label, self.x0)
    }
}

pub(crate) fn row_key(label: &str, x0: f64) -> String {
    format!("{label} x0={x0}")
}

/// The five columns of a curvature comparison table at one `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub q: f64,
    /// `|mu_q(a^q)|`
    pub mu_q: f64,
    /// `|f''(a)| / [(q a^(q-1))^2 (1 + (f'(a)/(q a^(q-1)))^2)^(3/2)]`
    pub rhs_52x: f64,
    /// `|mu(a)|`
    pub mu_alpha: f64,
    /// `|1 + (f'(a)/f''(a)) (1-q)/a|`
    pub lemma43_value: f64,
    /// `(q a^(q-1))^2 (1 + (f'(a)/(q a^(q-1)))^2)^(3/2) / (1 + f'(a)^2)^(3/2)`
    pub rhs_417: f64,
}

impl CurvatureRow {
    pub fn key(&self) -> String {
        q_label(self.q)
    }
}

/// Text used for `q` in labels and fixture keys; thirds print as fractions.
pub fn q_label(q: f64) -> String {
    let thirds = q * 3.0;
    if q.fract() != 0.0 && thirds.round() == thirds && (thirds.round() / 3.0) == q {
        format!("{}/3", thirds.round() as i64)
    } else {
        q.to_string()
    }
}

/// Runs every cell; failures land in the row's `status`.
pub fn convergence_grid<F: DifferentiableFunction + ?Sized>(
    func: &F,
    root: f64,
    cells: &[ConvergenceCell],
    cfg: &SolverConfig,
) -> Vec<ConvergenceRow> {
    cells
        .iter()
        .map(|cell| {
            let row = |iterations, abs_error, status: String| ConvergenceRow {
                label: cell.label.clone(),
                q: cell.q,
                m: cell.m,
                x0: cell.x0,
                iterations,
                abs_error,
                status,
            };
            match MethodSpec::new(cell.q, cell.m, Default::default()) {
                Ok(spec) => {
                    let trace = run_solver(func, &spec, cell.x0, cfg, Some(root));
                    row(trace.iterations, (trace.solution() - root).abs(), trace.status.to_string())
                }
                Err(e) => row(0, f64::NAN, format!("invalid: {e}")),
            }
        })
        .collect()
}

/// One row per `q`. Rows where the transform is undefined are filled with NaN.
pub fn curvature_table<F: DifferentiableFunction + ?Sized>(func: &F, root: f64, qs: &[f64]) -> Vec<CurvatureRow> {
    qs.iter()
        .map(|&q| match curvature_columns(func, root, q) {
            Ok(c) => CurvatureRow {
                q,
                mu_q: c.mu_q,
                rhs_52x: c.bound,
                mu_alpha: c.mu_alpha,
                lemma43_value: c.lemma43_abs,
                rhs_417: c.scale_ratio,
            },
            Err(_) => CurvatureRow {
                q,
                mu_q: f64::NAN,
                rhs_52x: f64::NAN,
                mu_alpha: f64::NAN,
                lemma43_value: f64::NAN,
                rhs_417: f64::NAN,
            },
        })
        .collect()
}

/// A row type that can go through [`emit`] and back.
pub trait TableRow: Serialize + Sized {
    const HEADER: &'static [&'static str];

    fn record(&self) -> Vec<String>;

    fn from_record(record: &csv::StringRecord) -> Option<Self>;
}

fn parse_field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize) -> Option<T> {
    record.get(i)?.parse().ok()
}

impl TableRow for ConvergenceRow {
    const HEADER: &'static [&'static str] = &["label", "q", "m", "x0", "iterations", "abs_error", "status"];

    fn record(&self) -> Vec<String> {
        vec![
            self.label.clone(),
            fmt17(self.q),
            self.m.to_string(),
            fmt17(self.x0),
            self.iterations.to_string(),
            fmt17(self.abs_error),
            self.status.clone(),
        ]
    }

    fn from_record(r: &csv::StringRecord) -> Option<Self> {
        Some(ConvergenceRow {
            label: r.get(0)?.to_string(),
            q: parse_field(r, 1)?,
            m: parse_field(r, 2)?,
            x0: parse_field(r, 3)?,
            iterations: parse_field(r, 4)?,
            abs_error: parse_field(r, 5)?,
            status: r.get(6)?.to_string(),
        })
    }
}

impl TableRow for CurvatureRow {
    const HEADER: &'static [&'static str] = &["q", "mu_q", "rhs_52x", "mu_alpha", "lemma43_value", "rhs_417"];

    fn record(&self) -> Vec<String> {
        [self.q, self.mu_q, self.rhs_52x, self.mu_alpha, self.lemma43_value, self.rhs_417]
            .iter()
            .map(|&v| fmt17(v))
            .collect()
    }

    fn from_record(r: &csv::StringRecord) -> Option<Self> {
        Some(CurvatureRow {
            q: parse_field(r, 0)?,
            mu_q: parse_field(r, 1)?,
            rhs_52x: parse_field(r, 2)?,
            mu_alpha: parse_field(r, 3)?,
            lemma43_value: parse_field(r, 4)?,
            rhs_417: parse_field(r, 5)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// CSV with a header row (17 significant digits), or a JSON array of objects.
pub fn emit<R: TableRow, W: Write + ?Sized>(rows: &[R], format: Format, dest: &mut W) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(dest);
            w.write_record(R::HEADER)?;
            for row in rows {
                w.write_record(row.record())?;
            }
            w.flush()
        }
        Format::Json => {
            serde_json::to_writer(&mut *dest, rows)?;
            dest.write_all(b"\n")
        }
    }
}

/// Reads back what [`emit`] wrote as CSV.
pub fn parse_csv<R: TableRow, Rd: io::Read>(input: Rd) -> io::Result<Vec<R>> {
    let mut reader = csv::Reader::from_reader(input);
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(io::Error::other)?;
            R::from_record(&rec).ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "malformed row"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::Polynomial;
    use proptest::prelude::*;

    fn quad() -> Polynomial {
        Polynomial::new(vec![1.0, -3.0, 2.0])
    }

    #[test]
    fn grid_examples() {
        let cells = [
            ConvergenceCell::new("N-method", 1.0, 1, 0.85),
            ConvergenceCell::new("2(3 term)=N-method", 2.0, 2, 1.3),
            ConvergenceCell::new("N-method", 1.0, 1, 1.3),
            ConvergenceCell::new("N-method", 1.0, 1, 1.0),
            ConvergenceCell::new("bad", 0.0, 1, 1.0),
            ConvergenceCell::new("0.5(3 term)", 0.5, 2, 1.505),
        ];
        let rows = convergence_grid(&ExampleQuadratic, 1.0, &cells, &SolverConfig::default());
        assert_eq!(rows.len(), cells.len());
        assert_eq!(rows[0].iterations, 4);
        assert!((rows[0].abs_error - 6.66134e-15).abs() < 1e-19);
        assert_eq!((rows[1].iterations, rows[1].abs_error), (rows[2].iterations, rows[2].abs_error));
        assert!((rows[1].iterations as i64 - 5).abs() <= 1);
        assert_eq!((rows[3].iterations, rows[3].abs_error), (0, 0.0));
        assert!(rows[4].status.starts_with("invalid"));
        assert_eq!(rows[5].status, "domain-error");
        assert!(rows.iter().zip(&cells).all(|(r, c)| r.label == c.label));
    }

    #[test]
    fn curvature_examples() {
        let rows = curvature_table(&quad(), 1.0, &[-4.0, 1.0]);
        let r = rows[0];
        let expect = [0.171201618, 0.114134412, 0.707106781, 1.5, 6.195386388];
        let got = [r.mu_q, r.rhs_52x, r.mu_alpha, r.lemma43_value, r.rhs_417];
        for (g, e) in got.iter().zip(expect) {
            assert!((g - e).abs() < 1e-9, "{g} vs {e}");
        }
        let one = rows[1];
        assert_eq!(one.mu_q, one.mu_alpha);
        assert_eq!(one.rhs_52x, one.mu_alpha);
        assert_eq!((one.lemma43_value, one.rhs_417), (1.0, 1.0));

        let at2 = curvature_table(&quad(), 2.0, &[5.0, 0.0]);
        assert_eq!(at2[0].mu_q, 0.0);
        assert!(at2[1].mu_q.is_nan());
    }

    #[test]
    fn q_labels() {
        assert_eq!(q_label(-1.0 / 3.0), "-1/3");
        assert_eq!(q_label(-4.0), "-4");
        assert_eq!(q_label(-0.5), "-0.5");
        assert_eq!(q_label(2.0 / 3.0), "2/3");
        assert_eq!(q_label(10.0), "10");
    }

    #[test]
    fn emit_empty_is_header_only() {
        let mut out = Vec::new();
        emit::<CurvatureRow, _>(&[], Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "q,mu_q,rhs_52x,mu_alpha,lemma43_value,rhs_417\n");
        let mut out = Vec::new();
        emit::<ConvergenceRow, _>(&[], Format::Json, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap().trim(), "[]");
    }

    #[test]
    fn emit_one_curvature_row() {
        let rows = curvature_table(&quad(), 1.0, &[-4.0]);
        let mut out = Vec::new();
        emit(&rows, Format::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 6);
        assert!(lines[1].starts_with("-4.0000000000000000e0,"));
    }

    #[test]
    fn emit_json_objects() {
        let rows = convergence_grid(&quad(), 1.0, &[ConvergenceCell::new("N-method", 1.0, 1, 0.85)], &SolverConfig::default());
        let mut out = Vec::new();
        emit(&rows, Format::Json, &mut out).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v[0]["label"], "N-method");
        assert_eq!(v[0]["iterations"], 4);
        let back: Vec<ConvergenceRow> = serde_json::from_slice(&out).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn convergence_csv_round_trip() {
        let cells: Vec<_> = [0.85, 1.3].iter().map(|&x0| ConvergenceCell::new("-1/3(3 term)", -1.0 / 3.0, 2, x0)).collect();
        let rows = convergence_grid(&quad(), 1.0, &cells, &SolverConfig::default());
        let mut out = Vec::new();
        emit(&rows, Format::Csv, &mut out).unwrap();
        let back: Vec<ConvergenceRow> = parse_csv(&out[..]).unwrap();
        assert_eq!(back, rows);
    }

    proptest! {
        #[test]
        fn curvature_csv_round_trip_bit_exact(vals in prop::collection::vec(prop::array::uniform6(-1e6f64..1e6), 0..8)) {
            let rows: Vec<CurvatureRow> = vals.iter().map(|v| CurvatureRow {
                q: v[0], mu_q: v[1], rhs_52x: v[2], mu_alpha: v[3], lemma43_value: v[4], rhs_417: v[5],
            }).collect();
            let mut out = Vec::new();
            emit(&rows, Format::Csv, &mut out).unwrap();
            let back: Vec<CurvatureRow> = parse_csv(&out[..]).unwrap();
            prop_assert_eq!(back.len(), rows.len());
            for (a, b) in back.iter().zip(&rows) {
                prop_assert_eq!(a.record(), b.record());
                prop_assert_eq!(a.mu_q.to_bits(), b.mu_q.to_bits());
                prop_assert_eq!(a.rhs_417.to_bits(), b.rhs_417.to_bits());
            }
        }
    }
}
