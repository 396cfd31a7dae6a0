//! Command-line front end: builds a nearfield context, runs the
//! elimination engines or the closure oracle, and renders the results.
//!
//! Exit codes: 0 for a completed job, 1 when oracle-verify finds a
//! mismatch, 2 for any input or environment problem.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nearvec::gen::ege;
use nearvec::nvs::{parse_matrix, render_vector, NfMatrix};
use nearvec::oracle::OracleCaps;
use nearvec::solver::{default_routes, lookup, Problem, SetSolver};
use nearvec::span::{aege, subspace_count};
use nearvec::{
    gen_report, render_cayley, span_report, DicksonPair, NearfieldCtx, NfError, TableFormat,
};

#[derive(Parser)]
#[command(
    name = "nearvec",
    version,
    about = "Finite nearfield arithmetic, generated sets, and spans"
)]
struct Cli {
    /// Output format where the command supports more than one
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the construction conditions for the pair (q, m)
    CheckPair { q: u32, m: u32 },
    /// Print the multiplication table of DN(q, m)
    Table { q: u32, m: u32 },
    /// Reduce the rows of a matrix file to a generated-set basis
    Gen { q: u32, m: u32, matrix: PathBuf },
    /// Compute the span of the rows of a matrix file
    Span { q: u32, m: u32, matrix: PathBuf },
    /// Solve with two independent routes and diff the resulting sets
    OracleVerify {
        q: u32,
        m: u32,
        matrix: PathBuf,
        /// Restrict to one problem (default: both)
        #[arg(long, value_enum)]
        problem: Option<ProblemArg>,
        /// Route name for the first solver
        #[arg(long, requires = "problem")]
        left: Option<String>,
        /// Route name for the second solver
        #[arg(long, requires = "problem")]
        right: Option<String>,
    },
    /// Count coordinate subspaces of R^n: binomial(n, k), or 2^n without k
    Count { n: u64, k: Option<u64> },
    /// Print the canonical triple witnessing a right-distributivity failure
    Triple { q: u32, m: u32 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    Gen,
    Span,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Problem {
        match p {
            ProblemArg::Gen => Problem::Gen,
            ProblemArg::Span => Problem::Span,
        }
    }
}

/// Writes to stdout, exiting quietly when the reader has closed the
/// pipe (head, less, and friends) instead of panicking mid-print.
fn emit(args: std::fmt::Arguments, newline: bool) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    let result = if newline {
        stdout.write_fmt(args).and_then(|_| stdout.write_all(b"\n"))
    } else {
        stdout.write_fmt(args)
    };
    if let Err(e) = result {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error[Io]: stdout: {e}");
        std::process::exit(2);
    }
}

macro_rules! outln {
    () => { emit(format_args!(""), true) };
    ($($arg:tt)*) => { emit(format_args!($($arg)*), true) };
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*), false) };
}

/// A failure that ends the run with exit code 2 and a coded message.
struct Failure(String);

impl From<NfError> for Failure {
    fn from(e: NfError) -> Failure {
        Failure(format!("error[{}]: {e}", e.code()))
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(format!("error[BadRange]: {}", msg.into()))
}

fn caps_from_env() -> Result<OracleCaps, Failure> {
    match std::env::var("ORACLE_CAP") {
        Ok(text) => {
            let v: u64 = text.trim().parse().map_err(|_| {
                input_error(format!("ORACLE_CAP must be a non-negative integer, got {text:?}"))
            })?;
            Ok(OracleCaps { gen_cap: v, span_cap: v })
        }
        Err(_) => Ok(OracleCaps::default()),
    }
}

fn load_matrix(nf: &NearfieldCtx, path: &Path) -> Result<NfMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure(format!("error[Io]: {}: {e}", path.display())))?;
    Ok(parse_matrix(nf, &text)?)
}

fn to_json(value: &impl serde::Serialize) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure(format!("error[Internal]: serialization failed: {e}")))
}

fn run_check_pair(q: u32, m: u32, format: Format) -> Result<ExitCode, Failure> {
    let verdict = DicksonPair::check(q, m);
    match format {
        Format::Json => {
            let body = serde_json::json!({
                "pair": [q, m],
                "valid": verdict.is_pair(),
                "reason": verdict.reason(),
            });
            outln!("{}", to_json(&body)?);
        }
        _ => match verdict.reason() {
            None => outln!("true"),
            Some(reason) => outln!("false: {reason}"),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn run_table(q: u32, m: u32, format: Format) -> Result<ExitCode, Failure> {
    let nf = NearfieldCtx::build(q, m)?;
    let kind = match format {
        Format::Ascii => TableFormat::Ascii,
        Format::Csv => TableFormat::Csv,
        Format::Json => TableFormat::Json,
    };
    out!("{}", render_cayley(&nf, kind)?);
    if kind == TableFormat::Json {
        outln!();
    }
    Ok(ExitCode::SUCCESS)
}

fn run_gen(q: u32, m: u32, path: &Path, format: Format) -> Result<ExitCode, Failure> {
    let nf = NearfieldCtx::build(q, m)?;
    let input = load_matrix(&nf, path)?;
    let out = ege(&nf, &input)?;
    let report = gen_report(&nf, &out);
    match format {
        Format::Json => outln!("{}", to_json(&report)?),
        Format::Csv => {
            for row in &report.basis {
                outln!("{}", row.join(","));
            }
        }
        Format::Ascii => {
            outln!("rank: {}", report.rank);
            outln!("field mode: {}", report.field_mode);
            outln!("basis:");
            for row in out.basis.rows() {
                outln!("  {}", render_vector(&nf, row));
            }
            outln!("certificate: {}", to_json(&report.certificate)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_span(q: u32, m: u32, path: &Path, format: Format) -> Result<ExitCode, Failure> {
    let nf = NearfieldCtx::build(q, m)?;
    let input = load_matrix(&nf, path)?;
    let out = aege(&nf, &input)?;
    let report = span_report(&nf, &out);
    match format {
        Format::Json => outln!("{}", to_json(&report)?),
        Format::Csv => {
            if report.field_mode {
                for row in &report.basis {
                    outln!("{}", row.join(","));
                }
            } else {
                outln!(
                    "{}",
                    report.mask.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
                );
            }
        }
        Format::Ascii => {
            if report.field_mode {
                outln!("echelon basis:");
                for row in out.gen.basis.rows() {
                    outln!("  {}", render_vector(&nf, row));
                }
            } else {
                let inner = report
                    .mask
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                outln!("mask: {{{inner}}}");
            }
            outln!("dimension: {}", report.dimension);
            outln!("subspace of the generated set: {}", report.is_subspace_of_inputs_gen);
            outln!("certificate: {}", to_json(&report.certificate)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn route(name: &str, prob: Problem) -> Result<Box<dyn SetSolver>, Failure> {
    let solver =
        lookup(name).ok_or_else(|| input_error(format!("unknown route {name:?}")))?;
    if solver.problem() != prob {
        return Err(input_error(format!(
            "route {:?} solves {}, not {}",
            solver.name(),
            solver.problem(),
            prob
        )));
    }
    Ok(solver)
}

#[allow(clippy::too_many_arguments)]
fn run_oracle_verify(
    q: u32,
    m: u32,
    path: &Path,
    problem: Option<ProblemArg>,
    left: Option<String>,
    right: Option<String>,
) -> Result<ExitCode, Failure> {
    let nf = NearfieldCtx::build(q, m)?;
    let caps = caps_from_env()?;
    let input = load_matrix(&nf, path)?;

    let problems: Vec<Problem> = match problem {
        Some(p) => vec![p.into()],
        None => vec![Problem::Gen, Problem::Span],
    };

    let mut mismatched = false;
    for prob in problems {
        let (default_left, default_right) = default_routes(prob);
        let left_name = left.as_deref().unwrap_or(default_left);
        let right_name = right.as_deref().unwrap_or(default_right);
        let left_solver = route(left_name, prob)?;
        let right_solver = route(right_name, prob)?;

        let left_set = left_solver.solve(&nf, &input, &caps)?;
        let right_set = right_solver.solve(&nf, &input, &caps)?;
        if left_set == right_set {
            outln!("MATCH {prob}: {left_name} = {right_name} ({} elements)", left_set.len());
        } else {
            mismatched = true;
            outln!("MISMATCH {prob}: {left_name} vs {right_name}");
            for v in left_set.difference(&right_set) {
                outln!("  only {left_name}: {}", render_vector(&nf, v));
            }
            for v in right_set.difference(&left_set) {
                outln!("  only {right_name}: {}", render_vector(&nf, v));
            }
        }
    }
    Ok(if mismatched { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run_count(n: u64, k: Option<u64>, format: Format) -> Result<ExitCode, Failure> {
    let count = subspace_count(n, k)?;
    match format {
        Format::Json => {
            let body = serde_json::json!({ "n": n, "k": k, "count": count });
            outln!("{}", to_json(&body)?);
        }
        _ => outln!("{count}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_triple(q: u32, m: u32, format: Format) -> Result<ExitCode, Failure> {
    let nf = NearfieldCtx::build(q, m)?;
    let t = nf.find_nd_triple()?;
    let (a, b, l) = (nf.render(t.alpha), nf.render(t.beta), nf.render(t.lambda));
    match format {
        Format::Json => {
            let body = serde_json::json!({ "alpha": a, "beta": b, "lambda": l });
            outln!("{}", to_json(&body)?);
        }
        Format::Csv => outln!("{a},{b},{l}"),
        Format::Ascii => outln!("({a}, {b}, {l})"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::CheckPair { q, m } => run_check_pair(q, m, cli.format),
        Command::Table { q, m } => run_table(q, m, cli.format),
        Command::Gen { q, m, matrix } => run_gen(q, m, &matrix, cli.format),
        Command::Span { q, m, matrix } => run_span(q, m, &matrix, cli.format),
        Command::OracleVerify { q, m, matrix, problem, left, right } => {
            run_oracle_verify(q, m, &matrix, problem, left, right)
        }
        Command::Count { n, k } => run_count(n, k, cli.format),
        Command::Triple { q, m } => run_triple(q, m, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
