//! `sfavg`: certified constants, estimate reports and verification sweeps
//! for averages of square-free supported multiplicative functions.

mod catalog;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num::BigInt;
use serde::Serialize;
use serde_json::json;

use sfavg::estimator::{
    auto_estimate, convolution_estimate, critical_estimate, j_tail_inequality, ra13_comparison, Config, Domain,
    EstimateReport, RA13_MODULI,
};
use sfavg::function::FunctionSpec;
use sfavg::interval::{decimal_bound, Direction};
use sfavg::mainterm::Shape;
use sfavg::oracle::{bound_sweep, default_grid, SweepOutcome};
use sfavg::primefn::Q64;
use sfavg::{presets, Error, Interval};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Convolution,
    Critical,
    Auto,
}

#[derive(Parser, Debug)]
#[command(name = "sfavg", version, about = "Certified estimates for averages of square-free supported multiplicative functions")]
struct Cli {
    /// Primes up to this limit are summed explicitly.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    prime_limit: u64,
    /// Error exponent of the convolution method, e.g. 1/3 or 0.45.
    #[arg(long, global = true, default_value = "1/3")]
    delta: String,
    /// Worker threads; RIGOR_THREADS takes precedence.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified enclosures of named constants.
    Constants {
        names: Vec<String>,
        #[arg(long)]
        all: bool,
    },
    /// Main term and explicit error bound for a preset.
    Estimate {
        preset: String,
        #[arg(long, default_value_t = 1)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Exponent for `one_over_p_alpha`.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Checks a report against brute-force partial sums.
    Verify {
        preset: Option<String>,
        #[arg(long, default_value_t = 1)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value = "1e6")]
        xmax: String,
        /// Every preset in {one_over_phi, one_over_p, unit}, q in {1,2,3,6}, both methods.
        #[arg(long)]
        all: bool,
    },
    /// Our constants for `Σ μ²(ℓ)/φ(ℓ)` against `5.9·j(q)`.
    CompareRa13,
}

fn parse_rational(s: &str) -> Result<Q64, Error> {
    let bad = || Error::DomainError(format!("cannot parse '{s}' as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n = i64::from_str(n.trim()).map_err(|_| bad())?;
        let d = i64::from_str(d.trim()).map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q64::new(n, d));
    }
    let r = num::BigRational::from_str(s.trim()).ok().or_else(|| {
        let (int, frac) = s.trim().split_once('.')?;
        let digits = format!("{int}{frac}");
        let n = BigInt::from_str(&digits).ok()?;
        Some(num::BigRational::new(n, BigInt::from(10).pow(frac.len() as u32)))
    });
    let r = r.ok_or_else(bad)?;
    let n = i64::try_from(r.numer()).map_err(|_| bad())?;
    let d = i64::try_from(r.denom()).map_err(|_| bad())?;
    Ok(Q64::new(n, d))
}

fn parse_xmax(s: &str) -> Result<f64, Error> {
    let x = f64::from_str(s).map_err(|_| Error::DomainError(format!("cannot parse '{s}' as a number")))?;
    if !(x >= 1.0 && x <= 1e8) {
        return Err(Error::DomainError(format!("xmax {x} outside [1, 1e8]")));
    }
    Ok(x)
}

fn text_interval(x: Interval) -> String {
    format!("[{}, {}]", decimal_bound(x, 6, Direction::Lower), decimal_bound(x, 6, Direction::Upper))
}

fn lookup(preset: &str, alpha: &Option<String>) -> Result<FunctionSpec, Error> {
    let a = alpha.as_deref().map(parse_rational).transpose()?;
    presets::preset(preset, a)
}

fn run_estimate(f: &FunctionSpec, q: u64, method: Method, cfg: &Config) -> Result<(EstimateReport, bool), Error> {
    if q == 0 {
        return Err(Error::DomainError("q must be at least 1".into()));
    }
    match method {
        Method::Convolution => Ok((convolution_estimate(f, q, cfg)?, false)),
        Method::Critical => Ok((critical_estimate(f, q, cfg)?, false)),
        Method::Auto => {
            let (r, fell_back) = auto_estimate(f, q, cfg)?;
            if fell_back {
                eprintln!("warning: beta - alpha <= 1/2 for {}, using the convolution method", f.name);
            }
            Ok((r, fell_back))
        }
    }
}

fn shape_text(s: &Shape) -> String {
    match s {
        Shape::Const => "1".into(),
        Shape::LogX => "log X".into(),
        Shape::XPow { exponent } => format!("X^{}", decimal_bound(*exponent, 6, Direction::Lower)),
    }
}

fn report_text(r: &EstimateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "provenance: {:?}", r.provenance);
    for t in &r.main.terms {
        let _ = writeln!(s, "main: {} * {}", text_interval(t.coefficient), shape_text(&t.shape));
    }
    if let Some(total) = r.complement_of {
        let _ = writeln!(s, "estimates: {} - partial sum", text_interval(total));
    }
    let _ = writeln!(s, "error constant: {}", text_interval(r.error_constant));
    let _ = writeln!(s, "error exponent: {}", text_interval(r.error_exponent));
    if r.error_has_log {
        let _ = writeln!(s, "error log factor: 1 + log(X)/2");
    }
    if r.additive_error_const.hi() > 0.0 {
        let _ = writeln!(s, "additive error: {}", text_interval(r.additive_error_const));
    }
    let _ = writeln!(s, "domain: {}", if r.domain == Domain::Positive { "X > 0" } else { "X >= 1" });
    s
}

fn cmd_constants(names: Vec<String>, all: bool, cfg: &Config, format: Format) -> Result<String, Error> {
    let names: Vec<String> = if all { catalog::NAMES.iter().map(|s| s.to_string()).collect() } else { names };
    if names.is_empty() {
        return Err(Error::UnknownConstant("no constant named; use --all".into()));
    }
    if let Some(bad) = names.iter().find(|n| !catalog::NAMES.contains(&n.as_str())) {
        return Err(Error::UnknownConstant(bad.clone()));
    }
    let mut rows = Vec::new();
    for n in &names {
        let t = Instant::now();
        let v = catalog::evaluate(n, cfg)?;
        rows.push((n.clone(), v, t.elapsed().as_millis() as u64));
    }
    Ok(match format {
        Format::Json => {
            let arr: Vec<_> = rows
                .iter()
                .map(|(n, v, ms)| json!({"name": n, "lo": v.lo(), "hi": v.hi(), "prime_limit": cfg.prime_limit, "time_ms": ms}))
                .collect();
            serde_json::to_string_pretty(&arr).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("name,lo,hi,prime_limit,time_ms\n");
            for (n, v, ms) in &rows {
                let _ = writeln!(
                    s,
                    "{n},{},{},{},{ms}",
                    decimal_bound(*v, 12, Direction::Lower),
                    decimal_bound(*v, 12, Direction::Upper),
                    cfg.prime_limit
                );
            }
            s
        }
        Format::Text => rows.iter().map(|(n, v, _)| format!("{n} {}\n", text_interval(*v))).collect(),
    })
}

fn cmd_estimate(preset: &str, q: u64, method: Method, alpha: &Option<String>, cfg: &Config, format: Format) -> Result<String, Error> {
    let f = lookup(preset, alpha)?;
    let (r, fell_back) = run_estimate(&f, q, method, cfg)?;
    Ok(match format {
        Format::Text => report_text(&r),
        _ => {
            let v = json!({"preset": preset, "q": q, "method": method, "fell_back": fell_back, "report": r});
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
    })
}

fn sweep_json(out: &SweepOutcome) -> String {
    let rows: Vec<_> = out
        .rows
        .iter()
        .map(|r| {
            json!({
                "x": r.x,
                "partial_sum": [r.partial_sum.lo(), r.partial_sum.hi()],
                "main": [r.main_value.lo(), r.main_value.hi()],
                "residual": [r.residual.lo(), r.residual.hi()],
                "bound": [r.bound_value.lo(), r.bound_value.hi()],
                "margin": [r.margin.lo(), r.margin.hi()],
            })
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("serializable") + "\n"
}

fn sweep(f: &FunctionSpec, q: u64, r: &EstimateReport, xmax: f64) -> Result<SweepOutcome, Error> {
    let grid = default_grid(xmax, r.domain == Domain::Positive);
    bound_sweep(r, f, q, &grid)
}

fn cmd_verify_all(cfg: &Config, xmax: f64) -> Result<(String, bool), Error> {
    let mut s = String::new();
    let mut ok = true;
    for name in ["one_over_phi", "one_over_p", "unit"] {
        let f = presets::preset(name, None)?;
        for q in [1u64, 2, 3, 6] {
            for method in [Method::Convolution, Method::Critical] {
                match run_estimate(&f, q, method, cfg) {
                    Ok((r, _)) => {
                        let out = sweep(&f, q, &r, xmax)?;
                        ok &= out.passed();
                        let _ = writeln!(
                            s,
                            "{name} q={q} {method:?}: {} rows, min margin {:.6e}, {}",
                            out.rows.len(),
                            out.min_margin(),
                            if out.passed() { "ok" } else { "VIOLATED" }
                        );
                    }
                    Err(e) => {
                        let _ = writeln!(s, "{name} q={q} {method:?}: not applicable ({e})");
                    }
                }
            }
        }
    }
    Ok((s, ok))
}

fn cmd_compare(cfg: &Config, format: Format) -> Result<String, Error> {
    let rows: Vec<_> = RA13_MODULI.iter().map(|&q| ra13_comparison(q, cfg)).collect::<Result<_, _>>()?;
    let chain = j_tail_inequality(3)?;
    Ok(match format {
        Format::Json => {
            let arr: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "q": r.q,
                        "ours": [r.ours.lo(), r.ours.hi()],
                        "theirs": [r.theirs.lo(), r.theirs.hi()],
                        "verdict": if r.improved { "improved" } else { "not improved" },
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({"rows": arr, "j_tail_inequality_p3": chain})).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("q,ours_lo,ours_hi,theirs_lo,theirs_hi,verdict\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.q,
                    decimal_bound(r.ours, 12, Direction::Lower),
                    decimal_bound(r.ours, 12, Direction::Upper),
                    decimal_bound(r.theirs, 12, Direction::Lower),
                    decimal_bound(r.theirs, 12, Direction::Upper),
                    if r.improved { "improved" } else { "not improved" }
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("{:>3}  {:<24}  {:<24}  verdict\n", "q", "ours", "5.9 j(q)");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>3}  {:<24}  {:<24}  {}",
                    r.q,
                    text_interval(r.ours),
                    text_interval(r.theirs),
                    if r.improved { "improved" } else { "not improved" }
                );
            }
            let _ = writeln!(s, "(p-2)/(p^(3/2)-p-sqrt(p)+2) < 1/sqrt(p) at p = 3: {chain}");
            s
        }
    })
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

fn configure_threads(requested: usize) -> Result<(), Error> {
    let n = match std::env::var("RIGOR_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| Error::DomainError(format!("RIGOR_THREADS = '{v}' is not a count")))?,
        Err(_) => requested,
    };
    if n == 0 {
        return Err(Error::DomainError("thread count must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::DomainError(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<u8, Error> {
    configure_threads(cli.threads)?;
    if cli.prime_limit < 10_000 {
        return Err(Error::LimitExceeded(format!("prime limit {} below 10^4", cli.prime_limit)));
    }
    let cfg = Config { prime_limit: cli.prime_limit, delta: parse_rational(&cli.delta)?, ..Config::default() };
    match cli.command {
        Command::Constants { names, all } => {
            emit(&cmd_constants(names, all, &cfg, cli.format.unwrap_or(Format::Json))?);
            Ok(0)
        }
        Command::Estimate { preset, q, method, alpha } => {
            emit(&cmd_estimate(&preset, q, method, &alpha, &cfg, cli.format.unwrap_or(Format::Json))?);
            Ok(0)
        }
        Command::Verify { preset, q, method, alpha, xmax, all } => {
            let xmax = parse_xmax(&xmax)?;
            if all {
                let (s, ok) = cmd_verify_all(&cfg, xmax)?;
                emit(&s);
                return Ok(if ok { 0 } else { EXIT_VIOLATION });
            }
            let preset = preset.ok_or_else(|| Error::DomainError("verify needs a preset or --all".into()))?;
            let f = lookup(&preset, &alpha)?;
            let (r, _) = run_estimate(&f, q, method, &cfg)?;
            let out = sweep(&f, q, &r, xmax)?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => emit(&sweep_json(&out)),
                Format::Csv => emit(&out.to_csv()),
                Format::Text => {
                    let mut s = format!("{} rows, min margin {:.6e}\n", out.rows.len(), out.min_margin());
                    for r in out.failures() {
                        let _ = writeln!(s, "violated at X = {}: residual {} bound {}", r.x, text_interval(r.residual), text_interval(r.bound_value));
                    }
                    emit(&s);
                }
            }
            if !out.passed() {
                eprintln!("bound violated at {} points", out.failures().len());
            }
            Ok(if out.passed() { 0 } else { EXIT_VIOLATION })
        }
        Command::CompareRa13 => {
            emit(&cmd_compare(&cfg, cli.format.unwrap_or(Format::Text))?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
