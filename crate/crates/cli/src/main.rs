//! `agr`: command-line front end for agr-core.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use agr_core::asymptotics::{agr_compare, rank_difficulty, CompareOptions};
use agr_core::empirics::{hardness_sweep, preimage_census_bounded, write_csv_to, SweepConfig};
use agr_core::error::{Error, ErrorClass};
use agr_core::expr::{differentiate, parse, render, Expr};
use agr_core::field::*;
use agr_core::granularity::{grain, Mode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "agr", version, about = "Inversion-hardness comparison and prime-field experiments")]
struct Cli {
    /// key=value file merged under explicit flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and print the canonical form
    Parse(ExprArg),
    /// Symbolic derivative
    Diff(ExprArg),
    /// Granularity form after k logarithms
    Grain(GrainArgs),
    /// Compare inversion difficulty of f against h
    Compare(CompareArgs),
    /// Sort expressions into ascending difficulty classes
    Rank(RankArgs),
    /// Solve one modular instance
    Solve(SolveArgs),
    /// Run a reduction end to end
    Reduce(ReduceArgs),
    /// Prime sweep report
    Sweep(SweepArgs),
    /// Preimage census of one family
    Census(CensusArgs),
}

#[derive(Args, Debug)]
struct Out {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
struct ExprArg {
    #[arg(long)]
    f: String,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct AgrFlags {
    #[arg(long)]
    k: Option<u8>,
    #[arg(long, default_value = "discrete")]
    mode: Mode,
    #[arg(long)]
    use_derivative: bool,
}

impl AgrFlags {
    fn options(&self) -> CompareOptions {
        CompareOptions { mode: self.mode, k: self.k, use_derivative: self.use_derivative }
    }
}

#[derive(Args, Debug)]
struct GrainArgs {
    #[arg(long)]
    f: String,
    #[arg(long, default_value_t = 1)]
    k: u8,
    #[arg(long, default_value = "discrete")]
    mode: Mode,
    #[arg(long)]
    use_derivative: bool,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    h: String,
    #[command(flatten)]
    agr: AgrFlags,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(required = true, allow_hyphen_values = true)]
    exprs: Vec<String>,
    #[command(flatten)]
    agr: AgrFlags,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug, Clone)]
struct FieldFlags {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    g: Option<u64>,
    #[arg(long)]
    g1: Option<u64>,
    #[arg(long)]
    n: Option<u32>,
}

impl FieldFlags {
    fn field(&self) -> Result<FieldParams, Error> {
        make_field_with(self.p, self.g, self.g1)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Exhaustive,
    Bsgs,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    family: Family,
    #[command(flatten)]
    field: FieldFlags,
    #[arg(long)]
    y: u64,
    /// SPP constants, comma separated
    #[arg(long, value_delimiter = ',')]
    c: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
    method: Method,
    #[command(flatten)]
    out: Out,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Demo {
    GxShift,
    Gxxx,
    GxnDlog,
    DlpSpp,
    Crt,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    demo: Demo,
    #[command(flatten)]
    field: FieldFlags,
    /// Second prime for the CRT demo
    #[arg(long)]
    q: Option<u64>,
    /// Family for the CRT demo
    #[arg(long, default_value = "DLP")]
    family: Family,
    #[arg(long)]
    y: u64,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "DLP,TLP")]
    families: Vec<Family>,
    /// Comma list or an inclusive a:b range
    #[arg(long, default_value = "7,11,13")]
    primes: String,
    #[arg(long)]
    g: Option<u64>,
    #[arg(long)]
    g1: Option<u64>,
    #[arg(long, default_value_t = 5)]
    n: u32,
    #[arg(long, default_value_t = 16)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    family: Family,
    #[command(flatten)]
    field: FieldFlags,
    #[command(flatten)]
    out: Out,
}

/// Failures before any work starts.
struct Usage(String);

enum Failure {
    Usage(Usage),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(Usage(msg.into()))
}

fn work_bound() -> Result<u64, Failure> {
    match std::env::var("AGR_WORK_BOUND") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("AGR_WORK_BOUND={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_WORK_BOUND),
    }
}

fn parse_primes(s: &str) -> Result<Vec<u64>, Failure> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad prime list {s:?}")));
    if let Some((a, b)) = s.split_once(':') {
        let (a, b) = (num(a)?, num(b)?);
        let ps: Vec<u64> = (a.max(3)..=b).filter(|&p| is_prime(p)).collect();
        if ps.is_empty() {
            return Err(usage(format!("no odd primes in {s}")));
        }
        Ok(ps)
    } else {
        s.split(',').map(num).collect()
    }
}

fn expr(text: &str) -> Result<Expr, Failure> {
    Ok(parse(text).map_err(Error::from)?)
}

fn emit<T: Serialize>(value: &T, text: Option<String>, out: &Out) -> Result<(), Failure> {
    let body = match (out.format, text) {
        (Format::Text, Some(t)) => t,
        (Format::Csv, _) => return Err(usage("csv output is only available for sweep")),
        _ => serde_json::to_string_pretty(value).expect("serializable"),
    };
    write_out(&body, out.out.as_ref())
}

fn write_out(body: &str, path: Option<&PathBuf>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, format!("{body}\n"))?,
        None => writeln!(std::io::stdout(), "{body}")?,
    }
    Ok(())
}

fn strings(xs: &BTreeSet<u64>) -> Vec<String> {
    xs.iter().map(u64::to_string).collect()
}

#[derive(Serialize)]
struct Solved<'a> {
    instance: &'a ProblemInstance,
    method: &'static str,
    solutions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ops: Option<String>,
}

#[derive(Serialize)]
struct Reduced {
    demo: &'static str,
    solutions: Vec<String>,
    trace: ReductionTrace,
}

fn solve(a: &SolveArgs) -> Result<(), Failure> {
    let field = a.field.field()?;
    let inst = if a.family == Family::Spp {
        ProblemInstance::spp(field.clone(), a.c.clone(), a.y)?
    } else {
        ProblemInstance::new(a.family, field.clone(), a.field.n.or(a.family.uses_n().then_some(5)), a.y)?
    };
    let solved = match a.method {
        Method::Bsgs if a.family != Family::Dlp => return Err(usage("--method bsgs needs --family DLP")),
        Method::Bsgs => {
            let d = solve_dlp_bsgs(&field, a.y)?;
            Solved { instance: &inst, method: "bsgs", solutions: vec![d.x.to_string()], ops: Some(d.ops.to_string()) }
        }
        Method::Exhaustive => {
            let xs = solve_exhaustive_bounded(&inst, None, work_bound()?)?;
            Solved { instance: &inst, method: "exhaustive", solutions: strings(&xs), ops: Some(inst.max_x().to_string()) }
        }
    };
    let text = solved.solutions.join(" ");
    emit(&solved, Some(text), &a.out)
}

fn reduce(a: &ReduceArgs) -> Result<(), Failure> {
    let (name, xs, trace) = match a.demo {
        Demo::GxShift => {
            // the shift needs a base coprime to p-1; pick one unless told otherwise
            let g = a.field.g.or_else(|| {
                (2..a.field.p).find(|&b| num_integer::gcd(b, a.field.p - 1) == 1 && is_generator(b, a.field.p))
            });
            let field = make_field_with(a.field.p, g, a.field.g1)?;
            let (xs, t) = reduce_gx_shift(a.y, &field, exhaustive_tlp_oracle(field.p))?;
            ("gx-shift", xs, t)
        }
        Demo::Gxxx => {
            let (xs, t) = solve_gxxx(&a.field.field()?, a.y)?;
            ("gxxx", xs, t)
        }
        Demo::GxnDlog => {
            let field = a.field.field()?;
            let n = a.field.n.unwrap_or(5);
            let (xs, t) = reduce_gxn_to_dlp(a.y, &field, n, |y| solve_dlp_bsgs(&field, y).map(|d| d.x))?;
            ("gxn-dlog", xs, t)
        }
        Demo::DlpSpp => {
            let field = a.field.field()?;
            let n = a.field.n.unwrap_or(64 - (field.p - 1).leading_zeros());
            let (x, t) = reduce_dlp_to_spp(a.y, &field, n, spp_solve_exhaustive)?;
            ("dlp-spp", BTreeSet::from([x]), t)
        }
        Demo::Crt => {
            let q = a.q.ok_or_else(|| usage("--demo crt needs --q"))?;
            let params = CompositeParams {
                g1: a.field.g1,
                n: a.field.n.or(a.family.uses_n().then_some(5)),
                ..CompositeParams::new(a.field.p, q, a.field.g.unwrap_or(2))
            };
            let (xs, t) = reduce_composite_crt(a.y, a.family, &params, exhaustive_prime_oracle)?;
            ("crt", xs, t)
        }
    };
    let r = Reduced { demo: name, solutions: strings(&xs), trace };
    let text = r.solutions.join(" ");
    emit(&r, Some(text), &a.out)
}

fn sweep(a: &SweepArgs) -> Result<(), Failure> {
    if a.format == Format::Text {
        return Err(usage("sweep writes csv or json"));
    }
    let cfg = SweepConfig {
        families: a.families.clone(),
        primes: parse_primes(&a.primes)?,
        g: a.g,
        g1: a.g1,
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        work_bound: work_bound()?,
        out: None,
    };
    let report = hardness_sweep(&cfg)?;
    let body = match a.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        _ => {
            let mut buf = Vec::new();
            write_csv_to(&report, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8").trim_end().to_string()
        }
    };
    write_out(&body, a.out.as_ref())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Parse(a) => {
            let e = expr(&a.f)?;
            emit(&serde_json::json!({ "input": a.f, "canonical": render(&e) }), Some(render(&e)), &a.out)
        }
        Cmd::Diff(a) => {
            let e = expr(&a.f)?;
            let d = differentiate(&e).map_err(Error::from)?;
            emit(&serde_json::json!({ "f": render(&e), "derivative": render(&d) }), Some(render(&d)), &a.out)
        }
        Cmd::Grain(a) => {
            let g = grain(&expr(&a.f)?, a.k, a.mode, a.use_derivative)?;
            emit(&g, Some(g.to_string()), &a.out)
        }
        Cmd::Compare(a) => {
            let r = agr_compare(&expr(&a.f)?, &expr(&a.h)?, a.agr.options())?;
            emit(&r, Some(format!("{:?}", r.verdict)), &a.out)
        }
        Cmd::Rank(a) => {
            let fs = a.exprs.iter().map(|s| expr(s)).collect::<Result<Vec<_>, _>>()?;
            let classes: Vec<Vec<String>> =
                rank_difficulty(&fs, a.agr.options())?.iter().map(|c| c.iter().map(render).collect()).collect();
            let text = classes.iter().map(|c| c.join(" = ")).collect::<Vec<_>>().join(" < ");
            emit(&classes, Some(text), &a.out)
        }
        Cmd::Solve(a) => solve(&a),
        Cmd::Reduce(a) => reduce(&a),
        Cmd::Sweep(a) => sweep(&a),
        Cmd::Census(a) => {
            let field = a.field.field()?;
            let c = preimage_census_bounded(a.family, &field, a.field.n.unwrap_or(5), work_bound()?)?;
            emit(&c, None, &a.out)
        }
    }
}

/// Inserts `--key value` pairs from the config file for keys not given on the command line.
fn merge_config(mut argv: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(i) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[i].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => argv.get(i + 1).cloned().ok_or_else(|| usage("--config needs a path"))?,
    };
    let text = std::fs::read_to_string(&path)?;
    let mut at = None;
    let mut j = 1;
    while j < argv.len() {
        if argv[j] == "--config" {
            j += 2;
            continue;
        }
        if !argv[j].starts_with('-') {
            at = Some(j + 1);
            break;
        }
        j += 1;
    }
    let Some(at) = at else {
        return Err(usage("--config needs a subcommand"));
    };
    let mut extra = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('[') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let key = format!("--{}", k.trim().replace('_', "-"));
        let v = v.trim().trim_matches('"');
        if argv.iter().any(|a| a == &key || a.starts_with(&format!("{key}="))) {
            continue;
        }
        match v {
            "true" => extra.push(key),
            "false" => {}
            _ => extra.push(format!("{key}={v}")),
        }
    }
    let tail = argv.split_off(at);
    argv.extend(extra);
    argv.extend(tail);
    Ok(argv)
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) => 2,
        Failure::Core(e) => match e.class() {
            ErrorClass::Domain => 3,
            ErrorClass::WorkBound => 4,
            ErrorClass::Io => 1,
        },
    }
}

fn fail(f: Failure) -> ExitCode {
    match &f {
        Failure::Usage(Usage(m)) => eprintln!("agr: {m}"),
        Failure::Core(e) => eprintln!("agr: {e}"),
    }
    ExitCode::from(exit_code(&f))
}

fn main() -> ExitCode {
    let argv = match merge_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(f) => return fail(f),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}
