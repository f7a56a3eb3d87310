//! `nmds`: command-line front end for nmds-core.
//!
//! Every command prints one JSON report on stdout and a table derived from it
//! on stderr. Exit codes: 0 success or CONSISTENT, 1 error, 2 VIOLATION,
//! 3 BUDGET_PARTIAL or an exceeded budget.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nmds_core::budget::DEFAULT_BUDGET;
use nmds_core::code::{classify, generator_matrix, h_extendability_oracle, LinearCode};
use nmds_core::curve::{curve_scan, nq1, DEFAULT_SCAN_LIMIT};
use nmds_core::extendability::{verify_j0_theorem, verify_main_theorem, Verdict, VerifyOptions};
use nmds_core::geometry::{addable_points, complete_arc, secant_profile, ArcReport};
use nmds_core::parse::{format_matrix, parse_coeffs, parse_matrix, parse_point};
use nmds_core::secants::{geometric_tangents, line_profile, min_trisecants};
use nmds_core::{Budget, EllipticArc, EllipticCurve, Error, Field};

use report::{Report, Run};

#[derive(Parser)]
#[command(
    name = "nmds",
    version,
    about = "Near-MDS codes from elliptic curves over odd-order finite fields",
    after_help = "Curves are Y^2 + a1 XY + a2 Y = X^3 + a3 X^2 + a4 X + a5, given as --curve a1,a2,a3,a4,a5; \
                  in conventional Weierstrass labels the literal lists a1,a3,a2,a4,a6. \
                  Elements are canonical integer encodings; a leading '-' negates."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap on the estimated element operations of each exhaustive scan.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for the parallel scans [default: all cores].
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArgs {
    /// Field order, or the characteristic when --r is given.
    #[arg(long)]
    q: u64,
    /// Extension degree: the field is F_{q^r}.
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Curve literal a1,a2,a3,a4,a5.
    #[arg(long, allow_hyphen_values = true)]
    curve: String,
}

/// A code given either by a matrix file or by a curve and `k`.
#[derive(Args)]
struct CodeArgs {
    /// Generator matrix file: header "q k n", then k rows of n encodings.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["q", "r", "curve", "k"])]
    matrix: Option<PathBuf>,
    #[arg(long, required_unless_present = "matrix")]
    q: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "matrix")]
    curve: Option<String>,
    #[arg(long, required_unless_present = "matrix")]
    k: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum JFilter {
    JZero,
    JNonzero,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Main,
    J0,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum number of rational points of an elliptic curve over F_q.
    Nq1(FieldArgs),
    /// Every nonsingular y^2 = x^3 + a x^2 + b x + c over F_q.
    CurveScan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        filter: Option<JFilter>,
        /// Keep only curves with exactly this many points.
        #[arg(long)]
        n: Option<usize>,
        /// Lift the field-size limit of the scan.
        #[arg(long)]
        force: bool,
    },
    /// The curve's points and the generator matrix of its k-elliptic code.
    Build {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        k: usize,
        /// Also write the generator matrix as a matrix file.
        #[arg(long, value_name = "PATH")]
        matrix_out: Option<PathBuf>,
    },
    /// Minimum distances, Singleton defects and MDS/NMDS label of a code.
    Classify(CodeArgs),
    /// Minimum trisecant count over external points, or the line profile of one point.
    Trisecants {
        #[command(flatten)]
        curve: CurveArgs,
        /// Point literal: inf, x,y or c1:c2:c3.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Secant profile and addable points of the arc phi_k(E(F_q)).
    Arc {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        k: usize,
        /// Greedily complete the arc.
        #[arg(long)]
        complete: bool,
        /// Maximum number of points added by --complete.
        #[arg(long, requires = "complete")]
        h: Option<usize>,
    },
    /// Check the (non-)extendability theorems on one curve.
    Verify {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "main")]
        theorem: TheoremArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points sampled for witness checks.
        #[arg(long)]
        sample: Option<u64>,
        /// Run outside the theorem hypotheses.
        #[arg(long)]
        force: bool,
        /// For k = 5, also scan all of P^4.
        #[arg(long)]
        full_scan: bool,
    },
    /// Brute-force decision whether the code is h-extendable.
    Oracle {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        h: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => f.write_str(msg),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn field_of(q: u64, r: Option<u32>) -> CliResult<Arc<Field>> {
    let field = match r {
        Some(r) => Field::new(q, r)?,
        None => Field::of_order(q)?,
    };
    Ok(Arc::new(field))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Records the field in the run and returns it.
fn open_field(run: &mut Run, args: &FieldArgs) -> CliResult<Arc<Field>> {
    let field = field_of(args.q, args.r)?;
    run.field = Some(field.descriptor());
    Ok(field)
}

fn open_curve(run: &mut Run, args: &CurveArgs) -> CliResult<EllipticCurve> {
    let field = open_field(run, &args.field)?;
    let coeffs = parse_coeffs(&field, &args.curve)?;
    run.curve = Some(coeffs);
    Ok(EllipticCurve::new(field, coeffs)?)
}

fn open_code(run: &mut Run, args: &CodeArgs) -> CliResult<LinearCode> {
    if let Some(path) = &args.matrix {
        let code = parse_matrix(&read_file(path)?)?.to_code()?;
        run.matrix = Some(path.display().to_string());
        run.field = Some(code.field().descriptor());
        run.k = Some(code.k());
        return Ok(code);
    }
    let (q, curve, k) = match (args.q, &args.curve, args.k) {
        (Some(q), Some(c), Some(k)) => (q, c, k),
        _ => {
            return Err(CliError::Io(
                "either --matrix or all of --q, --curve and --k are required".into(),
            ))
        }
    };
    let curve = open_curve(
        run,
        &CurveArgs {
            field: FieldArgs { q, r: args.r },
            curve: curve.clone(),
        },
    )?;
    run.k = Some(k);
    Ok(generator_matrix(&curve, k)?)
}

fn exit_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Consistent => 0,
        Verdict::Violation => 2,
        Verdict::BudgetPartial => 3,
    }
}

/// Runs one command; returns the result object and the exit code.
fn execute(command: &Command, run: &mut Run, budget: &Budget) -> CliResult<(Value, u8)> {
    let value = match command {
        Command::Nq1(args) => {
            let field = open_field(run, args)?;
            let q = field.q() as u64;
            json!({ "q": q, "nq1": nq1(q)? })
        }
        Command::CurveScan {
            field,
            filter,
            n,
            force,
        } => {
            let field = open_field(run, field)?;
            run.force = Some(*force);
            run.filter =
                filter.map(|f| f.to_possible_value().expect("named").get_name().to_string());
            run.n = *n;
            let limit = if *force { u64::MAX } else { DEFAULT_SCAN_LIMIT };
            let filter = *filter;
            let n = *n;
            let curves = curve_scan(&field, limit, move |s| {
                let j_ok = match filter {
                    Some(JFilter::JZero) => s.j_is_zero,
                    Some(JFilter::JNonzero) => !s.j_is_zero,
                    None => true,
                };
                j_ok && n.is_none_or(|n| s.n == n)
            })?;
            let summaries: Vec<_> = curves.iter().map(EllipticCurve::summary).collect();
            json!({
                "q": field.q(),
                "count": summaries.len(),
                "maxN": summaries.iter().map(|s| s.n).max(),
                "curves": summaries,
            })
        }
        Command::Build {
            curve,
            k,
            matrix_out,
        } => {
            let curve = open_curve(run, curve)?;
            run.k = Some(*k);
            let code = generator_matrix(&curve, *k)?;
            if let Some(path) = matrix_out {
                write_file(path, &format_matrix(&code))?;
            }
            json!({
                "curve": curve.report(),
                "k": code.k(),
                "n": code.n(),
                "generator": code.generator(),
            })
        }
        Command::Classify(args) => {
            let code = open_code(run, args)?;
            to_value(&classify(&code, budget)?)
        }
        Command::Trisecants { curve, point } => {
            let curve = open_curve(run, curve)?;
            match point {
                None => to_value(&min_trisecants(&curve)),
                Some(literal) => {
                    run.point = Some(literal.clone());
                    let p = parse_point(curve.field(), literal, 3)?;
                    json!({
                        "profile": line_profile(&curve, &p)?,
                        "geometricTangents": geometric_tangents(&curve, p.coords()),
                    })
                }
            }
        }
        Command::Arc {
            curve,
            k,
            complete,
            h,
        } => {
            let curve = open_curve(run, curve)?;
            run.k = Some(*k);
            run.h = *h;
            let arc = EllipticArc::new(&curve, *k)?;
            let profile = secant_profile(arc.set(), budget)?;
            let addable = addable_points(arc.set(), budget)?;
            let mut value = to_value(&ArcReport::new(arc.set(), &profile, addable));
            if *complete {
                let completion = complete_arc(arc.set(), h.unwrap_or(usize::MAX), budget)?;
                value["completion"] = to_value(&completion);
            }
            value
        }
        Command::Verify {
            curve,
            k,
            theorem,
            seed,
            sample,
            force,
            full_scan,
        } => {
            let curve = open_curve(run, curve)?;
            run.k = Some(*k);
            run.seed = Some(*seed);
            run.sample = *sample;
            run.force = Some(*force);
            run.full_scan = Some(*full_scan);
            let opts = VerifyOptions {
                seed: *seed,
                sample: *sample,
                force: *force,
                full_scan: *full_scan,
            };
            let report = match theorem {
                TheoremArg::Main => verify_main_theorem(&curve, *k, budget, &opts)?,
                TheoremArg::J0 => verify_j0_theorem(&curve, *k, budget, &opts)?,
            };
            return Ok((to_value(&report), exit_code(report.verdict)));
        }
        Command::Oracle { code, h } => {
            let code = open_code(run, code)?;
            run.h = Some(*h);
            json!({
                "n": code.n(),
                "k": code.k(),
                "h": h,
                "extendable": h_extendability_oracle(&code, *h, budget)?,
            })
        }
    };
    Ok((value, 0))
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Nq1(_) => "nq1",
        Command::CurveScan { .. } => "curve-scan",
        Command::Build { .. } => "build",
        Command::Classify(_) => "classify",
        Command::Trisecants { .. } => "trisecants",
        Command::Arc { .. } => "arc",
        Command::Verify { .. } => "verify",
        Command::Oracle { .. } => "oracle",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("error: invalid usage");
            eprintln!("{line}");
            return ExitCode::from(1);
        }
    };
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .expect("global pool is configured once");
    }
    let budget = Budget::new(cli.budget);
    let mut run = Run::new(command_name(&cli.command), cli.budget, cli.workers);
    let (result, code) = match execute(&cli.command, &mut run, &budget) {
        Ok(ok) => ok,
        Err(e) => {
            eprintln!("error: {e}");
            let exceeded = matches!(e, CliError::Core(Error::BudgetExceeded { .. }));
            return ExitCode::from(if exceeded { 3 } else { 1 });
        }
    };
    run.budget_spent = budget.spent();
    let report = Report::new(run, result);
    let text = report.to_json();
    if let Some(path) = &cli.json_out {
        if let Err(e) = write_file(path, &text) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    print!("{text}");
    eprint!("{}", report.table());
    ExitCode::from(code)
}
