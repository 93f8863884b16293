//! Command-line front end. `run` does everything except process exit, so it
//! can be driven from tests with in-memory buffers.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::exactnum::{rat, rat_int, Rational, RationalJson, Tables};
use crate::hypersum::{hyper_sum_bruteforce, s1_poly, Engine, Method, Prefactor};
use crate::polyring::RatPoly;
use crate::verify::{golden_fixtures, run_grid, GridSpec};
use crate::{build_h, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

const CACHE_ENV: &str = "HYPERSUM_CACHE_DIR";
/// Above this `n`, `eval --method auto` skips the brute-force cross-check.
const CROSS_CHECK_LIMIT: u64 = 20;

#[derive(Parser, Debug)]
#[command(name = "hypersum", version, about = "Exact hyper-sums of powers of integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate S_m^(r)(n) exactly.
    Eval(EvalArgs),
    /// Print S_m^(r) as a polynomial.
    Poly(PolyArgs),
    /// Print the Hessenberg matrix H_m^(r) and its determinant.
    Det(DetArgs),
    /// Cross-check every route and identity over a grid, plus fixtures.
    Verify(VerifyArgs),
    /// Tabulate S_m^(r)(n) for a range of m and r.
    Table(TableArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum EvalMethod {
    Auto,
    Bruteforce,
    Det,
    Q,
    C,
    Lemma,
    Chain,
}

impl EvalMethod {
    fn route(self) -> Option<Method> {
        match self {
            EvalMethod::Auto | EvalMethod::Bruteforce => None,
            EvalMethod::Det => Some(Method::Determinant),
            EvalMethod::Q => Some(Method::QForm),
            EvalMethod::C => Some(Method::CForm),
            EvalMethod::Lemma => Some(Method::LemmaChain),
            EvalMethod::Chain => Some(Method::CRecurrence),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VarArg {
    #[value(name = "n")]
    Index,
    #[value(name = "N")]
    Centered,
    #[value(name = "u")]
    Product,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value_t = EvalMethod::Auto)]
    method: EvalMethod,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, value_enum, default_value_t = VarArg::Index)]
    var: VarArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Show S_1^(r)(n) times the bracket in N = n + r/2.
    #[arg(long)]
    factored: bool,
}

#[derive(Args, Debug)]
struct DetArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
    /// Substitute a concrete n (so N = n + r/2).
    #[arg(long)]
    at: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    max_m: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    max_r: u64,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: u64,
    /// Comma-separated routes to compare; all five by default.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Replace B_J by B_J + 1 before running (checks that failures are caught).
    #[arg(long, hide = true, value_name = "J")]
    corrupt_bernoulli: Option<usize>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 5)]
    max_m: usize,
    #[arg(long, default_value_t = 5)]
    max_r: usize,
    #[arg(long, default_value_t = 10)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parse `args` (program name first), run the command, return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };

    let cache_dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let tables = Tables::new();
    if let Some(dir) = &cache_dir {
        if let Err(e) = tables.load_dir(dir) {
            let _ = writeln!(err, "warning: ignoring table cache in {}: {e}", dir.display());
        }
    }
    let tables = match &cli.command {
        Command::Verify(VerifyArgs { corrupt_bernoulli: Some(j), .. }) => {
            let bad = tables.bernoulli(*j) + Rational::one();
            let _ = writeln!(err, "fault injection: B_{j} := {bad}");
            tables.with_bernoulli_override(*j, bad)
        }
        _ => tables,
    };
    let engine = Engine::with_tables(Arc::new(tables));

    let result = match cli.command {
        Command::Eval(a) => cmd_eval(&engine, a, out, err),
        Command::Poly(a) => cmd_poly(&engine, a, out),
        Command::Det(a) => cmd_det(&engine, a, out),
        Command::Verify(a) => cmd_verify(&engine, a, out),
        Command::Table(a) => cmd_table(&engine, a, out),
    };

    if let Some(dir) = &cache_dir {
        if !engine.tables().has_overrides() {
            if let Err(e) = engine.tables().save_dir(dir) {
                let _ = writeln!(err, "warning: could not write table cache: {e}");
            }
        }
    }

    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn write_json(out: &mut dyn Write, value: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("serializable"))
}

fn rational_json(q: &Rational) -> Value {
    serde_json::to_value(RationalJson(q.clone())).expect("serializable")
}

fn poly_json(p: &RatPoly) -> Value {
    serde_json::to_value(p).expect("serializable")
}

fn reject_format(format: Format, command: &str) -> std::result::Result<(), Failure> {
    Err(Failure::usage(format!("{command} does not support --format {:?}", format).to_lowercase()))
}

fn cmd_eval(engine: &Engine, a: EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (value, used) = match a.method {
        EvalMethod::Bruteforce => (rat_int(hyper_sum_bruteforce(a.m, a.r, a.n)), "bruteforce".to_string()),
        EvalMethod::Auto => {
            let route = if a.m == 0 { Method::QForm } else { Method::Determinant };
            let value = engine.hyper_sum(a.m, a.r, route)?.eval(a.n);
            if a.n <= CROSS_CHECK_LIMIT {
                let truth = rat_int(hyper_sum_bruteforce(a.m, a.r, a.n));
                if truth != value {
                    let _ = writeln!(err, "cross-check failed: {} gives {value}, bruteforce gives {truth}", route.name());
                    return Ok(EXIT_MISMATCH);
                }
            }
            (value, route.name().to_string())
        }
        other => {
            let route = other.route().expect("explicit route");
            (engine.hyper_sum(a.m, a.r, route)?.eval(a.n), route.name().to_string())
        }
    };
    match a.format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => write_json(
            out,
            &json!({ "m": a.m, "r": a.r, "n": a.n, "method": used, "value": rational_json(&value) }),
        )?,
        Format::Latex => writeln!(out, "{}", latex_rational(&value))?,
        Format::Csv => writeln!(out, "m,r,n,value\n{},{},{},{value}", a.m, a.r, a.n)?,
    }
    Ok(EXIT_OK)
}

fn latex_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        let sign = if q.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom())
    }
}

/// `p = content * primitive`, the primitive part having coprime integer
/// coefficients and positive leading coefficient.
fn split_content(p: &RatPoly) -> (Rational, RatPoly) {
    if p.is_zero() {
        return (Rational::zero(), p.clone());
    }
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from(lcm.clone())).to_integer()).collect();
    let mut gcd = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if p.leading().is_negative() {
        gcd = -gcd;
    }
    let content = Rational::new(gcd.clone(), lcm);
    let primitive = RatPoly::new(p.var(), ints.into_iter().map(|c| Rational::from(c / &gcd)).collect());
    (content, primitive)
}

fn frame_note(r: usize) -> String {
    format!("N = n + {}", rat(r as i64, 2))
}

fn cmd_poly(engine: &Engine, a: PolyArgs, out: &mut dyn Write) -> CmdResult {
    let (m, r) = (a.m, a.r);
    if a.var == VarArg::Product || a.factored {
        if m == 0 || (a.var == VarArg::Product && r == 0) {
            return Err(Failure::usage("factored and u-frame forms need m >= 1 (and r >= 1 for u)"));
        }
    }
    if a.var == VarArg::Product {
        let form = engine.theorem1_forms(m, r)?;
        let pre_name = match form.prefactor {
            Prefactor::S1 => format!("S_1^({r})(n)"),
            Prefactor::S2 => format!("S_2^({r})(n)"),
        };
        match a.format {
            Format::Text => writeln!(out, "{pre_name} * ({}), u = n(n + {r})", form.poly)?,
            Format::Json => write_json(
                out,
                &json!({ "m": m, "r": r, "prefactor": form.prefactor, "poly": poly_json(&form.poly) }),
            )?,
            Format::Latex => {
                let pre = match form.prefactor {
                    Prefactor::S1 => format!("S_1^{{({r})}}(n)"),
                    Prefactor::S2 => format!("S_2^{{({r})}}(n)"),
                };
                writeln!(out, "{pre} \\left({}\\right)", form.poly.to_latex())?
            }
            Format::Csv => write!(out, "{}", form.poly.to_csv())?,
        }
        return Ok(EXIT_OK);
    }

    if a.factored {
        let g = engine.faulhaber_det(m, r)?.poly;
        let (content, bracket) = split_content(&g);
        let s1 = s1_poly(r);
        match a.format {
            Format::Text => {
                let body = if content.is_one() {
                    format!("({bracket})")
                } else if content.numer().is_one() {
                    format!("({bracket})/{}", content.denom())
                } else {
                    format!("{content} * ({bracket})")
                };
                writeln!(out, "C(n + {r}, {}) * {body}, {}", r + 1, frame_note(r))?
            }
            Format::Json => write_json(
                out,
                &json!({
                    "m": m,
                    "r": r,
                    "prefactor": poly_json(&s1),
                    "content": rational_json(&content),
                    "bracket": poly_json(&bracket),
                    "factor": poly_json(&g),
                }),
            )?,
            Format::Latex => {
                let scale = if content.is_one() { String::new() } else { format!("{} ", latex_rational(&content)) };
                writeln!(out, "{scale}\\binom{{n+{r}}}{{{}}} \\left({}\\right)", r + 1, bracket.to_latex())?
            }
            Format::Csv => write!(out, "{}", g.to_csv())?,
        }
        return Ok(EXIT_OK);
    }

    let route = if m == 0 { Method::QForm } else { Method::Determinant };
    let poly = engine.hyper_sum(m, r, route)?.poly;
    let poly = match a.var {
        VarArg::Centered => poly.to_centered(r)?,
        _ => poly,
    };
    match a.format {
        Format::Text => {
            if a.var == VarArg::Centered {
                writeln!(out, "{poly}, {}", frame_note(r))?
            } else {
                writeln!(out, "{poly}")?
            }
        }
        Format::Json => write_json(out, &poly_json(&poly))?,
        Format::Latex => writeln!(out, "{}", poly.to_latex())?,
        Format::Csv => write!(out, "{}", poly.to_csv())?,
    }
    Ok(EXIT_OK)
}

fn cmd_det(engine: &Engine, a: DetArgs, out: &mut dyn Write) -> CmdResult {
    if a.m < 1 {
        return Err(Failure::usage("det needs --m >= 1"));
    }
    let h = build_h(a.m, a.r, engine.tables())?;
    let det = h.det();
    match a.at {
        None => match a.format {
            Format::Text => {
                write!(out, "H_{}^({}), {}:\n{}", a.m, a.r, frame_note(a.r), h.pretty())?;
                writeln!(out, "det = {det}")?;
            }
            Format::Json => {
                let mut v = poly_json(&det);
                let entries: Vec<Value> = h.rows().iter().flatten().map(poly_json).collect();
                v["m"] = json!(a.m);
                v["order"] = json!(h.order());
                v["entries"] = Value::Array(entries);
                write_json(out, &v)?
            }
            Format::Latex => writeln!(out, "{}", det.to_latex())?,
            Format::Csv => write!(out, "{}", det.to_csv())?,
        },
        Some(n) => {
            let x = rat_int(n) + rat(a.r as i64, 2);
            let hv = h.evaluate(&x);
            let value = det.eval(&x);
            match a.format {
                Format::Text => {
                    write!(out, "H_{}^({}) at n = {n} (N = {x}):\n{}", a.m, a.r, hv.pretty())?;
                    writeln!(out, "det = {value}")?;
                }
                Format::Json => {
                    let entries: Vec<Value> = hv.rows().iter().flatten().map(rational_json).collect();
                    write_json(
                        out,
                        &json!({
                            "m": a.m,
                            "r": a.r,
                            "n": n,
                            "order": hv.order(),
                            "entries": entries,
                            "det": rational_json(&value),
                        }),
                    )?
                }
                Format::Latex => writeln!(out, "{}", latex_rational(&value))?,
                Format::Csv => writeln!(out, "n,det\n{n},{value}")?,
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(engine: &Engine, a: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let mut spec = GridSpec::new(a.max_m as usize, a.max_r as usize, a.max_n);
    if !a.methods.is_empty() {
        spec.methods = a.methods;
    }
    let report = run_grid(engine, &spec).with_golden(golden_fixtures(engine));
    match a.format {
        Format::Text => write!(out, "{}", report.render_text())?,
        Format::Json => write_json(out, &serde_json::to_value(&report).expect("serializable"))?,
        other => reject_format(other, "verify")?,
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_table(engine: &Engine, a: TableArgs, out: &mut dyn Write) -> CmdResult {
    let mut rows = Vec::new();
    for m in 1..=a.max_m {
        for r in 1..=a.max_r {
            rows.push((m, r, engine.hyper_sum_det(m, r)?.eval(a.n)));
        }
    }
    match a.format {
        Format::Csv => {
            writeln!(out, "m,r,value")?;
            for (m, r, v) in &rows {
                writeln!(out, "{m},{r},{v}")?;
            }
        }
        Format::Json => {
            let items: Vec<Value> =
                rows.iter().map(|(m, r, v)| json!({ "m": m, "r": r, "value": rational_json(v) })).collect();
            write_json(out, &json!({ "n": a.n, "rows": items }))?
        }
        Format::Text => {
            let width = rows.iter().map(|(_, _, v)| v.to_string().len()).max().unwrap_or(1).max(5);
            write!(out, "{:>4}", "m\\r")?;
            for r in 1..=a.max_r {
                write!(out, " {r:>width$}")?;
            }
            writeln!(out)?;
            for chunk in rows.chunks(a.max_r.max(1)) {
                if let Some((m, _, _)) = chunk.first() {
                    write!(out, "{m:>4}")?;
                }
                for (_, _, v) in chunk {
                    write!(out, " {:>width$}", v.to_string())?;
                }
                writeln!(out)?;
            }
        }
        Format::Latex => {
            writeln!(out, "\\begin{{array}}{{r|{}}}", "r".repeat(a.max_r))?;
            let head: Vec<String> = (1..=a.max_r).map(|r| r.to_string()).collect();
            writeln!(out, "m \\backslash r & {} \\\\ \\hline", head.join(" & "))?;
            for chunk in rows.chunks(a.max_r.max(1)) {
                if let Some((m, _, _)) = chunk.first() {
                    let cells: Vec<String> = chunk.iter().map(|(_, _, v)| latex_rational(v)).collect();
                    writeln!(out, "{m} & {} \\\\", cells.join(" & "))?;
                }
            }
            writeln!(out, "\\end{{array}}")?;
        }
    }
    Ok(EXIT_OK)
}
