use std::path::PathBuf;
use std::process::ExitCode;

use arthurlab::orders::OrderKind;
use arthurlab_cli::dot::emit_dot;
use arthurlab_cli::fixtures::{check, Corpus, ENV_VAR};
use arthurlab_cli::json::JsonError;
use arthurlab_cli::ops::{run_op, CliError};
use arthurlab_cli::render::render_text;
use arthurlab_cli::suites::{run_suite, Suite};
use arthurlab_cli::dsl;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// Arthur parameters, their orders and Arthur-type checks for classical groups.
#[derive(Parser, Debug)]
#[command(name = "arthurlab", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Group tag such as `Sp:10` or `SO:9`.
    #[arg(long, global = true)]
    group: Option<String>,
    /// One of A, D, O, C.
    #[arg(long, global = true, default_value = "O")]
    order: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    trials: usize,
    /// Directory of fixture files replacing the built-in corpus.
    #[arg(long, global = true, env = ENV_VAR)]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Multisegment, L-data and segment arguments are JSON text or `@path`.
#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse an Arthur or L-parameter and print it back.
    Parse { text: String },
    Validate { psi: String },
    /// Good-parity part and the rest.
    Split { psi: String },
    Dual { psi: String },
    Phi { psi: String },
    /// Infinitesimal parameter of an L- or Arthur parameter.
    Lambda { param: String },
    Partitions { psi: String },
    ExtremalParams { psi: String },
    /// Dominance between two partitions, e.g. `[4,2^2]`.
    Dominance { p: String, q: String },
    Compare { left: String, right: String },
    Extremal { #[arg(required = true)] params: Vec<String> },
    /// Covering relations; `--format dot` draws the Hasse diagram.
    Poset { #[arg(required = true)] params: Vec<String> },
    UiApplicable { psi: String, i: usize, j: usize },
    Apply { psi: String, op: String },
    Raising { psi: String },
    Lowering { psi: String },
    Transport { op: String },
    Cancel { left: String, right: String },
    Unramified { param: String },
    MMatrix {
        #[arg(allow_hyphen_values = true)]
        x: String,
        a: u32,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        grid: Vec<String>,
    },
    RankTriangles { param: String },
    ClosedForm {
        #[arg(value_name = "A", allow_hyphen_values = true)]
        big_a: String,
        #[arg(value_name = "B", allow_hyphen_values = true)]
        big_b: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Orbit-closure comparison of two L-parameters.
    Closure { left: String, right: String },
    TrianglePartition { triangle: String, n: u64 },
    ValidateEms { ems: String },
    PsiOfEms { ems: String },
    ShiftAdd {
        ems: String,
        j: u64,
        #[arg(allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value = "shift")]
        mode: String,
        #[arg(long, default_value = "tr(1,O)")]
        rho: String,
    },
    EMinus {
        ems: String,
        #[arg(long, default_value = "tr(1,O)")]
        rho: String,
    },
    ERhoMinus {
        ems: String,
        #[arg(long, default_value = "tr(1,O)")]
        rho: String,
    },
    EPlusUpper {
        ems: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        r: u64,
        #[arg(long, default_value = "tr(1,O)")]
        rho: String,
    },
    EPlusLower {
        ems: String,
        removed: String,
        #[arg(long, default_value = "tr(1,O)")]
        rho: String,
    },
    DualTempered { ems: String },
    ShowLdata { ldata: String },
    ReduceUpper {
        ldata: String,
        #[arg(long)]
        rho: Option<String>,
    },
    ReduceLower {
        ldata: String,
        #[arg(long)]
        rho: Option<String>,
    },
    MaxB { ldata: String, psi: String },
    PredicateUpper {
        psi: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        r: u64,
        #[arg(long, default_value = "tr(1,O)")]
        rho: String,
    },
    PredicateLower {
        psi: String,
        removed: String,
        #[arg(allow_hyphen_values = true)]
        x_min: String,
    },
    Insert { ldata: String, segments: String },
    /// Run a check suite; fixture suites honor `--trials` as a cap.
    Suite { name: String },
    /// Run the fixture corpus.
    Fixtures {
        #[arg(long)]
        suite: Option<String>,
    },
    /// Run a named operation on a JSON input object.
    Op { name: String, input: String },
}

fn json_arg(text: &str) -> Result<Value, CliError> {
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?,
        None => text.to_string(),
    };
    Ok(serde_json::from_str(&body).map_err(JsonError::from)?)
}

fn op_input(cli: &Cli) -> Result<(&'static str, Value), CliError> {
    let s = |v: &str| Value::String(v.to_string());
    let (op, fields): (&'static str, Vec<(&str, Value)>) = match &cli.cmd {
        Cmd::Parse { text } => ("parse", vec![("text", s(text))]),
        Cmd::Validate { psi } => ("validate", vec![("psi", s(psi))]),
        Cmd::Split { psi } => ("split", vec![("psi", s(psi))]),
        Cmd::Dual { psi } => ("dual", vec![("psi", s(psi))]),
        Cmd::Phi { psi } => ("phi", vec![("psi", s(psi))]),
        Cmd::Lambda { param } => ("lambda", vec![("param", s(param))]),
        Cmd::Partitions { psi } => ("partitions", vec![("psi", s(psi))]),
        Cmd::ExtremalParams { psi } => ("extremal-params", vec![("psi", s(psi))]),
        Cmd::Dominance { p, q } => ("dominance", vec![("p", s(p)), ("q", s(q))]),
        Cmd::Compare { left, right } => ("compare", vec![("left", s(left)), ("right", s(right)), ("order", s(&cli.order))]),
        Cmd::Extremal { params } => ("extremal", vec![("params", json!(params)), ("order", s(&cli.order))]),
        Cmd::Poset { params } => ("poset", vec![("params", json!(params)), ("order", s(&cli.order))]),
        Cmd::UiApplicable { psi, i, j } => ("ui-applicable", vec![("psi", s(psi)), ("i", json!(i)), ("j", json!(j))]),
        Cmd::Apply { psi, op } => ("apply", vec![("psi", s(psi)), ("op", s(op))]),
        Cmd::Raising { psi } => ("raising", vec![("psi", s(psi))]),
        Cmd::Lowering { psi } => ("lowering", vec![("psi", s(psi))]),
        Cmd::Transport { op } => ("transport", vec![("op", s(op))]),
        Cmd::Cancel { left, right } => ("cancel", vec![("left", s(left)), ("right", s(right))]),
        Cmd::Unramified { param } => ("unramified", vec![("param", s(param))]),
        Cmd::MMatrix { x, a, grid } => ("m-matrix", vec![("x", s(x)), ("a", json!(a)), ("grid", json!(grid))]),
        Cmd::RankTriangles { param } => ("rank-triangles", vec![("param", s(param))]),
        Cmd::ClosedForm { big_a, big_b, x, y } => {
            ("closed-form", vec![("A", s(big_a)), ("B", s(big_b)), ("x", s(x)), ("y", s(y))])
        }
        Cmd::Closure { left, right } => ("closure", vec![("left", s(left)), ("right", s(right))]),
        Cmd::TrianglePartition { triangle, n } => ("triangle-partition", vec![("triangle", s(triangle)), ("n", json!(n))]),
        Cmd::ValidateEms { ems } => ("validate-ems", vec![("ems", json_arg(ems)?)]),
        Cmd::PsiOfEms { ems } => ("psi-of-ems", vec![("ems", json_arg(ems)?)]),
        Cmd::ShiftAdd { ems, j, d, mode, rho } => (
            "shift-add",
            vec![("ems", json_arg(ems)?), ("rho", s(rho)), ("j", json!(j)), ("d", json!(d)), ("mode", s(mode))],
        ),
        Cmd::EMinus { ems, rho } => ("e-minus", vec![("ems", json_arg(ems)?), ("rho", s(rho))]),
        Cmd::ERhoMinus { ems, rho } => ("e-rho-minus", vec![("ems", json_arg(ems)?), ("rho", s(rho))]),
        Cmd::EPlusUpper { ems, x, y, r, rho } => (
            "e-plus-upper",
            vec![("ems", json_arg(ems)?), ("rho", s(rho)), ("x", s(x)), ("y", s(y)), ("r", json!(r))],
        ),
        Cmd::EPlusLower { ems, removed, rho } => {
            ("e-plus-lower", vec![("ems", json_arg(ems)?), ("rho", s(rho)), ("removed", json_arg(removed)?)])
        }
        Cmd::DualTempered { ems } => ("dual-tempered", vec![("ems", json_arg(ems)?)]),
        Cmd::ShowLdata { ldata } => ("show-ldata", vec![("ldata", json_arg(ldata)?)]),
        Cmd::ReduceUpper { ldata, rho } => ("reduce-upper", vec![("ldata", json_arg(ldata)?), ("rho", json!(rho))]),
        Cmd::ReduceLower { ldata, rho } => ("reduce-lower", vec![("ldata", json_arg(ldata)?), ("rho", json!(rho))]),
        Cmd::MaxB { ldata, psi } => ("max-b", vec![("ldata", json_arg(ldata)?), ("psi", s(psi))]),
        Cmd::PredicateUpper { psi, x, y, r, rho } => {
            ("predicate-upper", vec![("psi", s(psi)), ("rho", s(rho)), ("x", s(x)), ("y", s(y)), ("r", json!(r))])
        }
        Cmd::PredicateLower { psi, removed, x_min } => {
            ("predicate-lower", vec![("psi", s(psi)), ("removed", json_arg(removed)?), ("x_min", s(x_min))])
        }
        Cmd::Insert { ldata, segments } => ("insert", vec![("ldata", json_arg(ldata)?), ("segments", json_arg(segments)?)]),
        Cmd::Suite { .. } | Cmd::Fixtures { .. } | Cmd::Op { .. } => unreachable!("handled in run"),
    };
    let mut m: Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    if let Some(g) = &cli.group {
        m.insert("group".into(), s(g));
    }
    Ok((op, Value::Object(m)))
}

fn print(format: Format, v: &Value) -> Result<(), CliError> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("values serialize")),
        Format::Text => print!("{}", render_text(v)),
        Format::Dot => return Err(CliError::Usage("--format dot applies to poset only".into())),
    }
    Ok(())
}

fn corpus(cli: &Cli) -> Result<Corpus, CliError> {
    Corpus::locate(cli.fixtures.as_deref()).map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.cmd {
        Cmd::Suite { name } => {
            let suite: Suite = name.parse().map_err(CliError::Usage)?;
            let corpus = if suite.uses_fixtures() { corpus(cli)? } else { Corpus::default() };
            let report = run_suite(suite, cli.seed, cli.trials, &corpus);
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize")),
                Format::Text => print!("{report}"),
                Format::Dot => return Err(CliError::Usage("--format dot applies to poset only".into())),
            }
            Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Fixtures { suite } => {
            let corpus = corpus(cli)?;
            let mut failed = 0;
            let mut total = 0;
            for case in corpus.cases.iter().filter(|c| suite.as_ref().is_none_or(|s| &c.suite == s)) {
                total += 1;
                match check(case) {
                    Ok(()) => println!("PASS {}", case.id),
                    Err(e) => {
                        failed += 1;
                        println!("FAIL {e}");
                    }
                }
            }
            println!("{} of {total} fixtures passed", total - failed);
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Op { name, input } => {
            let v = run_op(name, &json_arg(input)?)?;
            print(cli.format, &v)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Poset { params } if cli.format == Format::Dot => {
            let group = cli.group.as_deref().ok_or_else(|| CliError::Usage("--group is required".into()))?;
            let group = group.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
            let kind: OrderKind = cli.order.parse().map_err(CliError::Usage)?;
            let ps = params.iter().map(|p| dsl::parse_arthur(p, group)).collect::<Result<Vec<_>, _>>()?;
            let dot = emit_dot(&ps, kind)
                .map_err(|e| CliError::Failed { kind: "Order".into(), message: e.to_string() })?;
            print!("{dot}");
            Ok(ExitCode::SUCCESS)
        }
        _ => {
            let (op, input) = op_input(cli)?;
            print(cli.format, &run_op(op, &input)?)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
