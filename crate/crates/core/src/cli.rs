//! Command-line surface: `solve`, `compare`, `qrange` and `table`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{admissible_q_interval, comparison_report, ComparisonReport};
use crate::format::{fmt17, fmt_sig};
use crate::funcmodel::Polynomial;
use crate::stepper::{run_solver, Branch, IterationTrace, MethodSpec, SolverConfig, Status};
use crate::tables::{emit, run_builtin, BuiltinRun, Format, TableId, TableRows, Tolerances};

/// Significant digits in text output.
const TEXT_DIGITS: usize = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Clone, thiserror::Error)]
#[error("{message}")]
pub struct UsageError {
    pub message: String,
    /// 0 for `--help` and `--version`, which clap reports through the error path.
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "binewton", version, about = "Binomial-expansion Newton iterations and convergence comparison")]
struct RawCli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Iterate from x0 and report the final iterate.
    Solve(RawSolve),
    /// Compare a method with Newton's at a root, for one q or a sweep.
    Compare(RawCompare),
    /// Print the admissible q interval at a root.
    Qrange(RawQrange),
    /// Recompute a built-in table and diff it against the shipped fixture.
    Table(RawTable),
}

#[derive(Debug, Args)]
struct PolyArg {
    /// Coefficients, highest degree first.
    #[arg(long, default_value = "1,-3,2", allow_hyphen_values = true, value_parser = parse_poly)]
    poly: Polynomial,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TolArgs {
    #[arg(long)]
    step_tol: Option<f64>,
    #[arg(long)]
    resid_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Debug, Args)]
struct RawSolve {
    #[command(flatten)]
    poly: PolyArg,
    /// Exponent; fractions such as -1/3 are accepted.
    #[arg(long, default_value = "1", allow_hyphen_values = true, value_parser = parse_q)]
    q: f64,
    /// Number of expansion terms kept (at least 2).
    #[arg(long, default_value_t = 2)]
    terms: u32,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    /// Reference root for absolute errors.
    #[arg(long, allow_hyphen_values = true)]
    root: Option<f64>,
    #[arg(long, value_enum, default_value_t = BranchArg::SignedOdd)]
    branch: BranchArg,
    /// Print every iterate.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Principal,
    SignedOdd,
}

#[derive(Debug, Args)]
struct RawCompare {
    #[command(flatten)]
    poly: PolyArg,
    #[arg(long, allow_hyphen_values = true)]
    root: f64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_q, conflicts_with = "sweep", required_unless_present = "sweep")]
    q: Option<f64>,
    /// `start,stop,step`; q = 0 is skipped.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_sweep)]
    sweep: Option<Sweep>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RawQrange {
    #[command(flatten)]
    poly: PolyArg,
    #[arg(long, allow_hyphen_values = true)]
    root: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RawTable {
    /// 5.1.1, 5.1.2, 5.2.1 or 5.2.2
    #[arg(value_parser = parse_table_id)]
    id: TableId,
    /// Tolerance on curvature values.
    #[arg(long, default_value_t = Tolerances::default().value)]
    value_tol: f64,
    /// Allowed difference in iteration counts.
    #[arg(long, default_value_t = Tolerances::default().iterations)]
    iter_tol: usize,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    /// Grid points `start + i * step` up to `stop` (inclusive, with slack for rounding), without 0.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as i64;
        (0..=n.max(-1))
            .map(|i| self.start + i as f64 * self.step)
            .filter(|&q| q.abs() > 1e-12)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SolveInvocation {
    pub poly: Polynomial,
    pub spec: MethodSpec,
    pub x0: f64,
    pub root: Option<f64>,
    pub config: SolverConfig,
    pub trace: bool,
}

#[derive(Debug, Clone)]
pub struct CompareInvocation {
    pub poly: Polynomial,
    pub root: f64,
    pub qs: Vec<f64>,
    pub sweep: bool,
}

#[derive(Debug, Clone)]
pub struct TableInvocation {
    pub id: TableId,
    pub config: SolverConfig,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone)]
pub enum Command {
    Solve(SolveInvocation),
    Compare(CompareInvocation),
    Qrange { poly: Polynomial, root: f64 },
    Table(TableInvocation),
}

#[derive(Debug, Clone)]
pub struct CliInvocation {
    pub command: Command,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

fn parse_poly(s: &str) -> Result<Polynomial, String> {
    let p: Polynomial = s.parse().map_err(|e: crate::funcmodel::ParsePolynomialError| e.to_string())?;
    if p.is_zero() {
        return Err("polynomial must not be identically zero".into());
    }
    Ok(p)
}

/// A real number or a fraction `a/b`, divided in floating point.
pub fn parse_q(s: &str) -> Result<f64, String> {
    let q = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| format!("invalid numerator in {s:?}"))?;
            let den: f64 = den.trim().parse().map_err(|_| format!("invalid denominator in {s:?}"))?;
            if den == 0.0 {
                return Err("zero denominator".into());
            }
            num / den
        }
        None => s.trim().parse().map_err(|_| format!("invalid number {s:?}"))?,
    };
    if !q.is_finite() {
        return Err("q must be finite".into());
    }
    if q == 0.0 {
        return Err("q must be nonzero".into());
    }
    Ok(q)
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [start, stop, step] = parts[..] else {
        return Err("expected start,stop,step".into());
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid number {t:?}"));
    let sweep = Sweep { start: num(start)?, stop: num(stop)?, step: num(step)? };
    if !(sweep.step > 0.0 && sweep.step.is_finite()) || !(sweep.stop >= sweep.start) {
        return Err("sweep needs start <= stop and a positive step".into());
    }
    Ok(sweep)
}

fn parse_table_id(s: &str) -> Result<TableId, String> {
    s.parse()
}

fn solver_config(t: &TolArgs) -> Result<SolverConfig, String> {
    let d = SolverConfig::default();
    let cfg = SolverConfig {
        step_tol: t.step_tol.unwrap_or(d.step_tol),
        resid_tol: t.resid_tol.unwrap_or(d.resid_tol),
        max_iter: t.max_iter.unwrap_or(d.max_iter),
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn usage(message: impl Into<String>) -> UsageError {
    UsageError { message: message.into(), exit_code: EXIT_USAGE }
}

/// Parses `argv` (including the program name) into a validated invocation.
pub fn parse_args<I, T>(argv: I) -> Result<CliInvocation, UsageError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let raw = RawCli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                if e.exit_code() == 0 =>
            {
                UsageError { message: e.to_string(), exit_code: EXIT_OK }
            }
            _ => {
                let text = e.to_string();
                let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
                usage(line.trim_start_matches("error: ").to_string())
            }
        }
    })?;

    let (command, output) = match raw.command {
        RawCommand::Solve(s) => {
            if s.terms < 2 {
                return Err(usage("terms must be at least 2"));
            }
            let branch = match s.branch {
                BranchArg::Principal => Branch::Principal,
                BranchArg::SignedOdd => Branch::SignedOdd,
            };
            let spec = MethodSpec::from_terms(s.q, s.terms).map_err(|e| usage(e.to_string()))?.with_branch(branch);
            if !s.x0.is_finite() {
                return Err(usage("x0 must be finite"));
            }
            let config = solver_config(&s.tol).map_err(usage)?;
            let cmd = Command::Solve(SolveInvocation {
                poly: s.poly.poly,
                spec,
                x0: s.x0,
                root: s.root,
                config,
                trace: s.trace,
            });
            (cmd, s.output)
        }
        RawCommand::Compare(c) => {
            let (qs, sweep) = match (c.q, c.sweep) {
                (Some(q), _) => (vec![q], false),
                (None, Some(sw)) => (sw.values(), true),
                (None, None) => return Err(usage("either --q or --sweep is required")),
            };
            (Command::Compare(CompareInvocation { poly: c.poly.poly, root: c.root, qs, sweep }), c.output)
        }
        RawCommand::Qrange(r) => (Command::Qrange { poly: r.poly.poly, root: r.root }, r.output),
        RawCommand::Table(t) => {
            let config = solver_config(&t.tol).map_err(usage)?;
            if !(t.value_tol >= 0.0) {
                return Err(usage("value tolerance must be nonnegative"));
            }
            let tolerances = Tolerances { value: t.value_tol, iterations: t.iter_tol, ..Tolerances::default() };
            (Command::Table(TableInvocation { id: t.id, config, tolerances }), t.output)
        }
    };
    Ok(CliInvocation { command, format: output.format, out: output.out })
}

/// Runs an invocation. Results go to `--out` or `stdout`; diagnostics to `stderr`.
/// Returns the process exit status.
pub fn dispatch(inv: &CliInvocation, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut file;
    let dest: &mut dyn Write = match &inv.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };
    let result = match &inv.command {
        Command::Solve(s) => run_solve(s, inv.format, dest, stderr),
        Command::Compare(c) => run_compare(c, inv.format, dest, stderr),
        Command::Qrange { poly, root } => run_qrange(poly, *root, inv.format, dest, stderr),
        Command::Table(t) => run_table(t, inv.format, dest, stderr),
    };
    match result.and_then(|code| dest.flush().map(|_| code)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: write failed: {e}");
            EXIT_NUMERIC
        }
    }
}

/// Parses and dispatches; the body of `main`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(inv) => dispatch(&inv, stdout, stderr),
        Err(e) if e.exit_code == EXIT_OK => {
            let _ = write!(stdout, "{}", e.message);
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.exit_code
        }
    }
}

fn g(v: f64) -> String {
    fmt_sig(v, TEXT_DIGITS)
}

fn csv_writer(dest: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(dest)
}

fn run_solve(s: &SolveInvocation, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let trace = run_solver(&s.poly, &s.spec, s.x0, &s.config, s.root);
    match format {
        OutputFormat::Json => writeln!(out, "{}", trace.to_json())?,
        OutputFormat::Csv => write_trace_csv(&trace, out)?,
        OutputFormat::Text => {
            let x = trace.solution();
            writeln!(out, "status      {}", trace.status)?;
            writeln!(out, "x           {}", g(x))?;
            writeln!(out, "iterations  {}", trace.iterations)?;
            writeln!(out, "f(x)        {}", g(trace.points[trace.iterations].fx))?;
            if let Some(root) = s.root {
                writeln!(out, "abs_error   {}", g((x - root).abs()))?;
            }
            if s.trace {
                writeln!(out)?;
                writeln!(out, "{:>4}  {:>20}  {:>20}  {:>20}", "k", "x", "f(x)", "error")?;
                for p in &trace.points {
                    let e = p.err.map(g).unwrap_or_else(|| "-".into());
                    writeln!(out, "{:>4}  {:>20}  {:>20}  {:>20}", p.k, g(p.x), g(p.fx), e)?;
                }
            }
        }
    }
    if let Some(msg) = &trace.message {
        writeln!(err, "{}: {msg}", trace.status)?;
    }
    Ok(match trace.status {
        Status::Converged => EXIT_OK,
        _ => EXIT_NUMERIC,
    })
}

fn write_trace_csv(trace: &IterationTrace, out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["k", "x", "fx", "err"])?;
    for p in &trace.points {
        w.write_record([p.k.to_string(), fmt17(p.x), fmt17(p.fx), p.err.map(fmt17).unwrap_or_default()])?;
    }
    w.flush()
}

#[derive(Serialize)]
struct FailedReport {
    root: f64,
    q: f64,
    error: String,
}

const REPORT_HEADER: [&str; 16] = [
    "root",
    "q",
    "t41",
    "t42_applicable",
    "t42",
    "convexity",
    "lemma43_value",
    "t45",
    "t47",
    "t48",
    "q_lo",
    "q_hi",
    "mu_f",
    "mu_g",
    "newton_constant",
    "binomial_constant",
];

fn report_record(r: &ComparisonReport) -> Vec<String> {
    let b = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
    let f = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    vec![
        fmt17(r.root),
        fmt17(r.q),
        b(r.t41),
        r.t42_applicable.to_string(),
        b(r.t42),
        r.convexity.map(|c| c.to_string()).unwrap_or_default(),
        f(r.lemma43_value),
        b(r.t45),
        b(r.t47),
        b(r.t48),
        f(r.q_interval.map(|i| i.0)),
        f(r.q_interval.map(|i| i.1)),
        fmt17(r.curvatures.mu_f),
        fmt17(r.curvatures.mu_g),
        fmt17(r.newton_constant),
        fmt17(r.binomial_constant),
    ]
}

fn opt_text<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn write_report_text(r: &ComparisonReport, out: &mut dyn Write) -> io::Result<()> {
    let interval = r.q_interval.map(|(lo, hi)| format!("{} {}", g(lo), g(hi)));
    let lines: [(&str, String); 15] = [
        ("root", g(r.root)),
        ("q", g(r.q)),
        ("mu_f", g(r.curvatures.mu_f)),
        ("mu_g", g(r.curvatures.mu_g)),
        ("t41", opt_text(r.t41)),
        ("t45", opt_text(r.t45)),
        ("t47", opt_text(r.t47)),
        ("t48", opt_text(r.t48)),
        ("t42_applicable", r.t42_applicable.to_string()),
        ("t42", opt_text(r.t42)),
        ("convexity", opt_text(r.convexity)),
        ("lemma43_value", opt_text(r.lemma43_value.map(g))),
        ("q_interval", interval.unwrap_or_else(|| "-".into())),
        ("newton_constant", g(r.newton_constant)),
        ("binomial_constant", g(r.binomial_constant)),
    ];
    for (k, v) in lines {
        writeln!(out, "{k:<18}{v}")?;
    }
    Ok(())
}

fn run_compare(c: &CompareInvocation, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let results: Vec<(f64, crate::Result<ComparisonReport>)> =
        c.qs.iter().map(|&q| (q, comparison_report(&c.poly, c.root, q))).collect();
    for (q, r) in &results {
        if let Err(e) = r {
            writeln!(err, "q={}: {e}", g(*q))?;
        }
    }
    let failed = results.iter().any(|(_, r)| r.is_err());
    if !c.sweep && failed {
        return Ok(EXIT_NUMERIC);
    }
    match format {
        OutputFormat::Json => {
            let values: Vec<serde_json::Value> = results
                .iter()
                .map(|(q, r)| match r {
                    Ok(rep) => serde_json::to_value(rep),
                    Err(e) => serde_json::to_value(FailedReport { root: c.root, q: *q, error: e.to_string() }),
                })
                .collect::<Result<_, _>>()?;
            if c.sweep {
                serde_json::to_writer(&mut *out, &values)?;
            } else {
                serde_json::to_writer(&mut *out, &values[0])?;
            }
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(REPORT_HEADER)?;
            for (_, r) in &results {
                if let Ok(rep) = r {
                    w.write_record(report_record(rep))?;
                }
            }
            w.flush()?;
        }
        OutputFormat::Text if !c.sweep => {
            if let Ok(rep) = &results[0].1 {
                write_report_text(rep, out)?;
            }
        }
        OutputFormat::Text => {
            writeln!(
                out,
                "{:>8}  {:>18}  {:>18}  {:>5}  {:>5}  {:>5}  {:>5}  {:>18}",
                "q", "mu_g", "mu_f", "t41", "t45", "t47", "t48", "binomial_constant"
            )?;
            for (q, r) in &results {
                match r {
                    Ok(rep) => writeln!(
                        out,
                        "{:>8}  {:>18}  {:>18}  {:>5}  {:>5}  {:>5}  {:>5}  {:>18}",
                        g(*q),
                        g(rep.curvatures.mu_g),
                        g(rep.curvatures.mu_f),
                        opt_text(rep.t41),
                        opt_text(rep.t45),
                        opt_text(rep.t47),
                        opt_text(rep.t48),
                        g(rep.binomial_constant)
                    )?,
                    Err(e) => writeln!(out, "{:>8}  {e}", g(*q))?,
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_qrange(poly: &Polynomial, root: f64, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let (lo, hi) = match admissible_q_interval(poly, root) {
        Ok(i) => i,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_NUMERIC);
        }
    };
    match format {
        OutputFormat::Text => writeln!(out, "{} {}", g(lo), g(hi))?,
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["lo", "hi"])?;
            w.write_record([fmt17(lo), fmt17(hi)])?;
            w.flush()?;
        }
        OutputFormat::Json => writeln!(out, "{}", serde_json::json!({ "lo": lo, "hi": hi }))?,
    }
    Ok(EXIT_OK)
}

fn run_table(t: &TableInvocation, format: OutputFormat, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let BuiltinRun { rows, diff, .. } = run_builtin(t.id, &t.config, &t.tolerances);
    let fmt = match format {
        OutputFormat::Csv => Some(Format::Csv),
        OutputFormat::Json => Some(Format::Json),
        OutputFormat::Text => None,
    };
    match (fmt, &rows) {
        (Some(f), TableRows::Convergence(r)) => emit(r, f, out)?,
        (Some(f), TableRows::Curvature(r)) => emit(r, f, out)?,
        (None, TableRows::Convergence(r)) => {
            writeln!(out, "{:<22}  {:>6}  {:>9}  {:>18}  {}", "row", "x0", "iterations", "abs_error", "status")?;
            for row in r {
                writeln!(
                    out,
                    "{:<22}  {:>6}  {:>9}  {:>18}  {}",
                    row.label,
                    row.x0,
                    row.iterations,
                    g(row.abs_error),
                    row.status
                )?;
            }
        }
        (None, TableRows::Curvature(r)) => {
            writeln!(
                out,
                "{:>6}  {:>18}  {:>18}  {:>18}  {:>18}  {:>18}",
                "q", "mu_q", "rhs_52x", "mu_alpha", "lemma43_value", "rhs_417"
            )?;
            for row in r {
                writeln!(
                    out,
                    "{:>6}  {:>18}  {:>18}  {:>18}  {:>18}  {:>18}",
                    row.key(),
                    g(row.mu_q),
                    g(row.rhs_52x),
                    g(row.mu_alpha),
                    g(row.lemma43_value),
                    g(row.rhs_417)
                )?;
            }
        }
    }
    // Rows own stdout in csv/json mode; the diff then goes to stderr.
    let report: &mut dyn Write = if fmt.is_some() { err } else { out };
    if fmt.is_none() {
        writeln!(report)?;
    }
    writeln!(report, "{}", diff.summary())?;
    write!(report, "{}", diff.render_failures())?;
    Ok(if diff.is_pass() { EXIT_OK } else { EXIT_NUMERIC })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<CliInvocation, UsageError> {
        parse_args(std::iter::once("binewton").chain(args.iter().copied()))
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("binewton").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn solve_maps_terms_to_depth() {
        let inv = parse(&["solve", "--poly", "1,-3,2", "--q", "2", "--terms", "2", "--x0", "1.3"]).unwrap();
        let Command::Solve(s) = inv.command else { panic!("not solve") };
        assert_eq!((s.spec.q(), s.spec.m()), (2.0, 1));
        assert_eq!(s.poly.coeffs(), &[1.0, -3.0, 2.0]);
        assert_eq!(inv.format, OutputFormat::Text);
    }

    #[test]
    fn q_accepts_fractions_and_rejects_zero() {
        assert_eq!(parse_q("-1/3").unwrap(), -1.0 / 3.0);
        assert_eq!(parse_q("2.5").unwrap(), 2.5);
        assert!(parse_q("1/0").is_err());
        assert_eq!(parse_q("0").unwrap_err(), "q must be nonzero");
        let e = parse(&["solve", "--q", "0", "--x0", "1"]).unwrap_err();
        assert_eq!(e.exit_code, EXIT_USAGE);
        assert!(e.message.contains("q must be nonzero"), "{}", e.message);
        assert!(!e.message.contains('\n'));
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["solve", "--x0", "1", "--terms", "1"][..],
            &["solve"],
            &["qrange", "--root"],
            &["table", "5.3"],
            &["compare", "--root", "1"],
            &["compare", "--root", "1", "--q", "1", "--sweep", "1,2,1"],
            &["compare", "--root", "1", "--sweep", "2,1,1"],
            &["solve", "--x0", "1", "--poly", "0,0"],
            &["solve", "--x0", "1", "--max-iter", "0"],
            &["frobnicate"],
        ] {
            let e = parse(args).unwrap_err();
            assert_eq!(e.exit_code, EXIT_USAGE, "{args:?}");
        }
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("qrange"));
    }

    #[test]
    fn sweep_values_skip_zero() {
        let s = parse_sweep("-1,1,0.5").unwrap();
        assert_eq!(s.values(), vec![-1.0, -0.5, 0.5, 1.0]);
        let s = parse_sweep("-4,11,0.5").unwrap();
        assert_eq!(s.values().len(), 30);
    }

    #[test]
    fn qrange_prints_endpoints() {
        let (code, out, _) = run_str(&["qrange", "--poly", "1,-3,2", "--root", "1"]);
        assert_eq!((code, out.as_str()), (0, "-3 1\n"));
        let (code, out, _) = run_str(&["qrange", "--root", "2"]);
        assert_eq!((code, out.as_str()), (0, "1 9\n"));
        let (code, _, err) = run_str(&["qrange", "--root", "1.5"]);
        assert_eq!(code, EXIT_NUMERIC);
        assert!(!err.is_empty());
    }

    #[test]
    fn solve_text_summary() {
        let (code, out, _) = run_str(&["solve", "--poly", "1,-3,2", "--q", "1", "--terms", "2", "--x0", "0.85", "--root", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("iterations  4\n"), "{out}");
        assert!(out.contains("x           1\n"), "{out}");
        let err: f64 = out.lines().find_map(|l| l.strip_prefix("abs_error")).unwrap().trim().parse().unwrap();
        assert!(err < 1e-14, "{out}");
    }

    #[test]
    fn solve_failure_exits_two() {
        let (code, out, err) = run_str(&["solve", "--q", "0.5", "--terms", "3", "--x0", "1.505"]);
        assert_eq!(code, EXIT_NUMERIC);
        assert!(out.contains("domain-error"));
        assert!(err.contains("domain-error"));
    }

    #[test]
    fn compare_single_and_sweep() {
        let (code, out, _) = run_str(&["compare", "--root", "1", "--q", "-1/3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["t41"], true);
        assert_eq!(v["q_interval"], serde_json::json!([-3.0, 1.0]));
        let (code, out, _) = run_str(&["compare", "--root", "2", "--sweep", "-2,11,1", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1 + 13);
    }

    #[test]
    fn table_exit_tracks_diff() {
        let (code, out, _) = run_str(&["table", "5.2.1"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("10/10 pass"), "{out}");
        let (code, out, _) = run_str(&["table", "5.2.1", "--value-tol", "1e-12"]);
        assert_eq!(code, EXIT_NUMERIC, "{out}");
        let (code, out, err) = run_str(&["table", "5.2.2", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 14);
        assert!(err.contains("13/13 pass"));
    }
}
