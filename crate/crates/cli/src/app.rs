//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use parity_forge_core::ancient::{
    binary_decompose, egyptian_multiply, nicomachus_table, pair_bijection_decode, pair_bijection_encode,
    perfect_numbers, unit_fraction_split,
};
use parity_forge_core::engine::{
    cbrt_verdict, classical_sqrt2_trace, coprime_reduce, generalization_failure_demo, parity_sqrt2_trace,
    prime_base_verdict, sqrt_verdict, ClassicalVariant, Outcome, Policy, Query, Strategy, Verdict,
    DEFAULT_RESIDUE_CUTOFF, FAILURE_DEMO_BOUND,
};
use parity_forge_core::kernel::{check_trace, render_text, CheckResult, ContradictionShape, ProofTrace};
use parity_forge_core::valuation::base_decompose;
use parity_forge_core::{Error, Natural};
use serde_json::{json, Value};

use crate::document::{trace_from_json, trace_from_value, trace_to_json, trace_value};
use crate::envelope::{exit, Envelope};
use crate::mutation::{corpus, run_mutations, DEFAULT_MUTATIONS};
use crate::render::{render_trace, Format};

/// Overrides the residue-scan cutoff.
pub const CUTOFF_ENV: &str = "PARITY_FORGE_RESIDUE_CUTOFF";

/// Largest table `rows × cols` printed in one go.
const TABLE_CELL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "parity-forge", version, about = "Degree-of-parity arithmetic and checked irrationality proofs")]
pub struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized helpers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write N as 2^h · u with u odd, or as X^k · u with --base.
    Decompose {
        n: String,
        #[arg(long)]
        base: Option<String>,
    },
    /// Decide whether √N is rational.
    Sqrt(RootArgs),
    /// Decide whether ∛N is rational.
    Cbrt(RootArgs),
    /// Odd-exponent test of √N against the prime X.
    PrimeBase { x: String, n: String },
    /// Emit a checked proof.
    Prove {
        #[arg(value_enum)]
        target: ProveTarget,
        #[arg(long, value_enum, default_value = "parity")]
        variant: Variant,
        /// Write the JSON trace to FILE.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Check a trace document, or the trace inside an envelope.
    Check { file: PathBuf },
    /// Render an accepted trace.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Egyptian multiplication by doubling.
    Egymul { a: String, b: String },
    /// N as a sum of distinct powers of two.
    Binary { n: String },
    /// The table of evens 2^k(2m+1).
    Table {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cols: String,
    },
    /// The bijection (i, j) ↦ 2^i(2j+1).
    Bijection {
        #[command(subcommand)]
        op: BijectionOp,
    },
    /// Perfect numbers 2^(k−1)(2^k − 1) for k below the bound.
    Perfect {
        #[arg(long = "max-k")]
        max_k: String,
    },
    /// Unit fractions from the proper divisors of a perfect number.
    UnitFractions { n: String },
    /// P/Q in lowest terms.
    Reduce { p: String, q: String },
    /// Smallest square whose exponent of the composite X is odd.
    FailureDemo {
        x: String,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Mutate the built-in trace corpus and count what the kernel accepts.
    MutationCheck {
        #[arg(long)]
        count: Option<String>,
    },
}

#[derive(Debug, clap::Args)]
pub struct RootArgs {
    pub n: String,
    /// Comma-separated strategy identifiers, tried in order.
    #[arg(long, value_delimiter = ',')]
    pub strategies: Option<Vec<String>>,
    /// Write the JSON trace to FILE.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProveTarget {
    Sqrt2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Parity,
    Standard,
    Alexander,
    Viii14,
}

#[derive(Debug, Subcommand)]
pub enum BijectionOp {
    Encode { i: String, j: String },
    Decode { n: String },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Rejected(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => exit::USAGE,
            Failure::Input(_) => exit::DOMAIN,
            Failure::Rejected(_) => exit::REJECTED,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Input(_) => "domain",
            Failure::Rejected(_) => "rejected",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Rejected(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Usage(e.to_string()),
            Error::RenderRefused(_) => Failure::Rejected(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// What a command produced: the text form, the JSON result, and a trace.
struct Output {
    text: String,
    result: Value,
    trace: Option<ProofTrace>,
    trace_file: Option<PathBuf>,
    code: i32,
}

impl Output {
    fn new(text: String, result: Value) -> Self {
        Output {
            text,
            result,
            trace: None,
            trace_file: None,
            code: exit::OK,
        }
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    exit::OK
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    exit::USAGE
                }
            };
        }
    };
    let (name, inputs) = describe(&cli.command);
    let (code, envelope, text) = match dispatch(&cli) {
        Ok(o) => {
            let mut env = Envelope::new(name, inputs, o.result, o.code);
            env.trace = match (&o.trace, &o.trace_file) {
                (Some(t), None) => Some(trace_value(t)),
                _ => None,
            };
            env.trace_file = o.trace_file.map(|p| p.display().to_string());
            (o.code, env, Some(o.text))
        }
        Err(f) => {
            let result = json!({ "error": { "kind": f.kind(), "message": f.message() } });
            let _ = writeln!(err, "error: {}", f.message());
            (f.code(), Envelope::new(name, inputs, result, f.code()), None)
        }
    };
    if cli.json {
        let _ = out.write_all(envelope.to_json().as_bytes());
    } else if let Some(text) = text {
        let _ = out.write_all(text.as_bytes());
    }
    code
}

fn describe(c: &Command) -> (&'static str, Value) {
    match c {
        Command::Decompose { n, base } => ("decompose", json!({ "n": n, "base": base })),
        Command::Sqrt(a) => ("sqrt", root_inputs(a)),
        Command::Cbrt(a) => ("cbrt", root_inputs(a)),
        Command::PrimeBase { x, n } => ("prime-base", json!({ "x": x, "n": n })),
        Command::Prove { variant, .. } => ("prove", json!({ "target": "sqrt2", "variant": variant_name(*variant) })),
        Command::Check { file } => ("check", json!({ "file": file.display().to_string() })),
        Command::Render { file, format } => (
            "render",
            json!({ "file": file.display().to_string(), "format": format!("{format:?}").to_lowercase() }),
        ),
        Command::Egymul { a, b } => ("egymul", json!({ "a": a, "b": b })),
        Command::Binary { n } => ("binary", json!({ "n": n })),
        Command::Table { rows, cols } => ("table", json!({ "rows": rows, "cols": cols })),
        Command::Bijection { op: BijectionOp::Encode { i, j } } => ("bijection encode", json!({ "i": i, "j": j })),
        Command::Bijection { op: BijectionOp::Decode { n } } => ("bijection decode", json!({ "n": n })),
        Command::Perfect { max_k } => ("perfect", json!({ "max_k": max_k })),
        Command::UnitFractions { n } => ("unit-fractions", json!({ "n": n })),
        Command::Reduce { p, q } => ("reduce", json!({ "p": p, "q": q })),
        Command::FailureDemo { x, bound } => ("failure-demo", json!({ "x": x, "bound": bound })),
        Command::MutationCheck { count } => ("mutation-check", json!({ "count": count })),
    }
}

fn root_inputs(a: &RootArgs) -> Value {
    json!({ "n": a.n, "strategies": a.strategies })
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Parity => "parity",
        Variant::Standard => "standard",
        Variant::Alexander => "alexander",
        Variant::Viii14 => "viii14",
    }
}

fn number(s: &str) -> Result<Natural, Failure> {
    s.parse().map_err(|_| Failure::Input(format!("{s:?} is not a decimal natural number")))
}

fn small(s: &str) -> Result<u64, Failure> {
    number(s)?
        .to_u64()
        .ok_or_else(|| Failure::Input(format!("{s} does not fit in 64 bits")))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Decompose { n, base } => decompose_cmd(n, base.as_deref()),
        Command::Sqrt(a) => root_cmd(Query::Square, a, cli.json),
        Command::Cbrt(a) => root_cmd(Query::Cube, a, cli.json),
        Command::PrimeBase { x, n } => {
            let v = prime_base_verdict(&number(x)?, &number(n)?)?;
            Ok(verdict_output(&v))
        }
        Command::Prove { variant, trace, .. } => prove_cmd(*variant, trace.as_deref(), cli.json),
        Command::Check { file } => check_cmd(file),
        Command::Render { file, format } => {
            let t = load_trace(file)?;
            let text = render_trace(&t, *format)?;
            let result = match format {
                Format::Text => json!({ "text": text }),
                Format::Json => json!({ "document": trace_value(&t) }),
            };
            Ok(Output::new(text, result))
        }
        Command::Egymul { a, b } => {
            let w = egyptian_multiply(&number(a)?, &number(b)?)?;
            let width = w.rows.last().map_or(1, |r| r.factor.to_decimal().len());
            let pwidth = w.rows.last().map_or(1, |r| r.partial.to_decimal().len());
            let mut text = String::new();
            for r in &w.rows {
                let mark = if r.selected { "  *" } else { "" };
                text += &format!("{:>width$}  {:>pwidth$}{mark}\n", r.factor.to_decimal(), r.partial.to_decimal());
            }
            let mut picked: Vec<String> = w.selected().map(|r| r.partial.to_decimal()).collect();
            picked.reverse();
            text += &format!("{} = {}\n", picked.join(" + "), w.total);
            text += &format!("total: {}\n", w.total);
            Ok(Output::new(text, to_value(&w)))
        }
        Command::Binary { n } => {
            let b = binary_decompose(&number(n)?)?;
            let parts: Vec<String> = b.powers.iter().map(|e| format!("2^{e}")).collect();
            Ok(Output::new(format!("{} = {}\n", b.n, parts.join(" + ")), to_value(&b)))
        }
        Command::Table { rows, cols } => {
            let (rows, cols) = (small(rows)?, small(cols)?);
            if rows.saturating_mul(cols) > TABLE_CELL_LIMIT {
                return Err(Failure::Input(format!("table larger than {TABLE_CELL_LIMIT} cells")));
            }
            let table = nicomachus_table(rows, cols);
            let width = table.iter().flatten().map(|v| v.to_decimal().len()).max().unwrap_or(1);
            let mut text = String::new();
            for row in &table {
                let cells: Vec<String> = row.iter().map(|v| format!("{:>width$}", v.to_decimal())).collect();
                text += cells.join(" ").trim_end();
                text.push('\n');
            }
            Ok(Output::new(text, json!({ "rows": to_value(&table) })))
        }
        Command::Bijection { op: BijectionOp::Encode { i, j } } => {
            let (i, j) = (small(i)?, number(j)?);
            let n = pair_bijection_encode(i, &j);
            Ok(Output::new(format!("{n}\n"), json!({ "i": i, "j": j, "n": n })))
        }
        Command::Bijection { op: BijectionOp::Decode { n } } => {
            let n = number(n)?;
            let (i, j) = pair_bijection_decode(&n)?;
            Ok(Output::new(format!("{i} {j}\n"), json!({ "i": i, "j": j, "n": n })))
        }
        Command::Perfect { max_k } => {
            let ps = perfect_numbers(small(max_k)?)?;
            let text: String = ps
                .iter()
                .map(|p| format!("k = {:<2}  2^{} - 1 = {:<10}  {}\n", p.k, p.k, p.mersenne.to_decimal(), p.perfect))
                .collect();
            Ok(Output::new(text, json!({ "perfect": to_value(&ps) })))
        }
        Command::UnitFractions { n } => {
            let n = number(n)?;
            let ds = unit_fraction_split(&n)?;
            let parts: Vec<String> = ds.iter().map(|d| format!("1/{d}")).collect();
            let text = format!("1 = {}\n", parts.join(" + "));
            Ok(Output::new(text, json!({ "n": n, "denominators": to_value(&ds) })))
        }
        Command::Reduce { p, q } => {
            let (p, q) = (number(p)?, number(q)?);
            let (a, b) = coprime_reduce(&p, &q)?;
            Ok(Output::new(format!("{p}/{q} = {a}/{b}\n"), json!({ "p": a, "q": b })))
        }
        Command::FailureDemo { x, bound } => {
            let bound = match bound {
                Some(b) => number(b)?,
                None => Natural::from(FAILURE_DEMO_BOUND),
            };
            let r = generalization_failure_demo(&number(x)?, &bound)?;
            let text = match &r.counterexample {
                Some(c) => format!(
                    "{} = {}^2 is a square, yet the exponent of {} in it is {}, an odd number\n",
                    c.n, c.root, r.base, c.k
                ),
                None => format!("no square up to {} has an odd exponent of {}\n", r.bound, r.base),
            };
            Ok(Output::new(text, to_value(&r)))
        }
        Command::MutationCheck { count } => {
            let count = match count {
                Some(c) => small(c)? as usize,
                None => DEFAULT_MUTATIONS,
            };
            let traces = corpus();
            let report = run_mutations(&traces, count, cli.seed);
            let mut text = format!(
                "{} of {} mutations rejected over {} traces (seed {})\n",
                report.rejected, report.trials, report.corpus, report.seed
            );
            for s in &report.survivors {
                text += &format!("accepted: trace {} step {}: {}\n", s.trace, s.step, s.description);
            }
            let mut o = Output::new(text, to_value(&report));
            if !report.all_rejected() {
                o.code = exit::REJECTED;
            }
            Ok(o)
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results always serialize")
}

fn decompose_cmd(n: &str, base: Option<&str>) -> Result<Output, Failure> {
    let n = number(n)?;
    let base = match base {
        Some(b) => number(b)?,
        None => Natural::from(2u64),
    };
    let d = base_decompose(&base, &n)?;
    let text = format!("{n} = {base}^{} · {}\n", d.degree(), d.cofactor());
    let result = json!({ "n": n, "base": base, "degree": d.degree(), "cofactor": d.cofactor() });
    Ok(Output::new(text, result))
}

fn policy(strategies: Option<&[String]>) -> Result<Policy, Failure> {
    let mut p = match strategies {
        Some(names) => {
            let order = names.iter().map(|s| s.parse::<Strategy>()).collect::<Result<Vec<_>, _>>()?;
            if order.is_empty() {
                return Err(Failure::Usage("--strategies needs at least one strategy".into()));
            }
            Policy::only(&order)
        }
        None => Policy::default(),
    };
    p.residue_cutoff = match std::env::var(CUTOFF_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{CUTOFF_ENV}={v:?} is not a natural number")))?,
        Err(_) => DEFAULT_RESIDUE_CUTOFF,
    };
    Ok(p)
}

fn root_cmd(query: Query, a: &RootArgs, json: bool) -> Result<Output, Failure> {
    let n = number(&a.n)?;
    let policy = policy(a.strategies.as_deref())?;
    let v = match query {
        Query::Square => sqrt_verdict(&n, &policy)?,
        Query::Cube => cbrt_verdict(&n, &policy)?,
    };
    let mut o = verdict_output(&v);
    attach_trace(&mut o, a.trace.as_deref(), json)?;
    Ok(o)
}

fn verdict_output(v: &Verdict) -> Output {
    let sign = match v.query {
        Query::Square => "√",
        Query::Cube => "∛",
    };
    let mut text = match &v.outcome {
        Outcome::Rational { root } => format!("{sign}{} = {root}\n", v.radicand),
        Outcome::Irrational => format!("{sign}{} is irrational\n", v.radicand),
        Outcome::Inconclusive { reason } => format!("{sign}{}: inconclusive ({reason})\n", v.radicand),
    };
    text += &format!("strategy: {}\n", v.strategy);
    if let Some(k) = &v.reduced_kernel {
        text += &format!("odd kernel: {k}\n");
    }
    let result = json!({
        "query": to_value(&v.query),
        "radicand": v.radicand,
        "outcome": to_value(&v.outcome),
        "strategy": v.strategy,
        "reduced_kernel": v.reduced_kernel,
        "uses_oracle": v.trace.as_ref().is_some_and(ProofTrace::uses_oracle),
    });
    let mut o = Output::new(text, result);
    o.trace = v.trace.clone();
    if matches!(v.outcome, Outcome::Inconclusive { .. }) {
        o.code = exit::INCONCLUSIVE;
    }
    o
}

/// Writes the trace to `file` if given; text mode also shows the proof.
fn attach_trace(o: &mut Output, file: Option<&Path>, json: bool) -> Result<(), Failure> {
    let Some(t) = &o.trace else { return Ok(()) };
    if let Some(path) = file {
        std::fs::write(path, trace_to_json(t))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        o.trace_file = Some(path.to_path_buf());
        if !json {
            o.text += &format!("trace written to {}\n", path.display());
        }
    } else if !json {
        o.text.push('\n');
        o.text += &render_text(t)?;
    }
    Ok(())
}

fn prove_cmd(variant: Variant, file: Option<&Path>, json: bool) -> Result<Output, Failure> {
    let t = match variant {
        Variant::Parity => parity_sqrt2_trace(),
        Variant::Standard => classical_sqrt2_trace(ClassicalVariant::Standard),
        Variant::Alexander => classical_sqrt2_trace(ClassicalVariant::Alexander),
        Variant::Viii14 => classical_sqrt2_trace(ClassicalVariant::Viii14),
    };
    let verdict = check_trace(&t);
    let shape = t.contradiction_shape().map(shape_name);
    let result = json!({
        "variant": variant_name(variant),
        "check": verdict.to_string(),
        "contradiction": shape,
    });
    let mut o = Output::new(String::new(), result);
    o.trace = Some(t);
    if !verdict.is_accepted() {
        return Err(Failure::Rejected(verdict.to_string()));
    }
    attach_trace(&mut o, file, json)?;
    if o.text.starts_with('\n') {
        o.text.remove(0);
    }
    Ok(o)
}

fn shape_name(s: ContradictionShape) -> &'static str {
    match s {
        ContradictionShape::OddsBecomeEven => "odds_become_even",
        ContradictionShape::EvenAndOdd => "even_and_odd",
        ContradictionShape::DegreeParityClash => "degree_parity_clash",
        ContradictionShape::CoprimeAndNot => "coprime_and_not",
        ContradictionShape::OracleRefutation => "oracle_refutation",
        ContradictionShape::Other => "other",
    }
}

/// Reads a trace document, or an envelope carrying one inline or by path.
fn load_trace(file: &Path) -> Result<ProofTrace, Failure> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))
    };
    let text = read(file)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed JSON: {e}")))?;
    let malformed = |e: crate::document::DocumentError| Failure::Input(e.to_string());
    if value.get("schema").is_some() {
        return trace_from_value(value).map_err(malformed);
    }
    if let Some(t) = value.get("trace") {
        return trace_from_value(t.clone()).map_err(malformed);
    }
    if let Some(p) = value.get("trace_file").and_then(Value::as_str) {
        return trace_from_json(&read(Path::new(p))?).map_err(malformed);
    }
    Err(Failure::Input(format!("{} holds no trace", file.display())))
}

fn check_cmd(file: &Path) -> Result<Output, Failure> {
    let t = load_trace(file)?;
    let verdict = check_trace(&t);
    let result = match &verdict {
        CheckResult::Accepted => json!({ "status": "accepted" }),
        CheckResult::Rejected { step, reason } => json!({ "status": "rejected", "step": step, "reason": reason }),
    };
    let mut o = Output::new(format!("{verdict}\n"), result);
    if !verdict.is_accepted() {
        o.code = exit::REJECTED;
    }
    Ok(o)
}
