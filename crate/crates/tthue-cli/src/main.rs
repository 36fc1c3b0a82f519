//! `tthue` — exact and certified computations for the twisted Thue
//! equations `|F(X, Y; n, s, t)| = 1` over the simplest cubic fields.
//!
//! Every subcommand prints one JSON object per result line on stdout
//! (or `--output`); human-readable diagnostics go to stderr. Exit codes:
//! `0` success / all checks pass, `1` a verification failed or a sought
//! certificate was not produced, `2` usage or configuration error.

mod config;
mod emit;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use config::{parse_bigint, parse_positive_ratio, parse_ratio, RunConfig};
use tthue::analysis::{
    check_condition, classify_solution, decompose_beta, separation_condition, verify_lemma,
    Epsilon, LemmaParams, LemmaReport, SolutionRecord,
};
use tthue::bounds::{baker_constant, derived_bounds};
use tthue::cubic::{
    compute_root_logs, compute_roots, verify_root_brackets, verify_root_log_brackets,
};
use tthue::form::{evaluate_form, form_coeffs};
use tthue::precision::{PrecisionPolicy, Verdict};
use tthue::search::{enumerate_solutions, ParamRange, SearchGrid};
use tthue::RealEnclosure;

/// Field degree of the cubic family, fixed throughout.
const DEGREE: u32 = 3;

#[derive(Parser)]
#[command(
    name = "tthue",
    version,
    about = "Certified arithmetic for twisted Thue equations over the simplest cubic fields",
    after_help = "Output is JSONL on stdout; exit 0 = all checks pass, 1 = a check failed \
                  or stayed uncertified, 2 = usage/config error."
)]
struct Cli {
    /// Config file with key=value lines (bits, max_bits, epsilon, c2..c5, c_cu, output)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Starting precision in bits (overrides config and TTHUE_BITS)
    #[arg(long, global = true, value_name = "BITS")]
    bits: Option<u32>,

    /// Precision escalation ceiling in bits
    #[arg(long, global = true, value_name = "BITS")]
    max_bits: Option<u32>,

    /// Write result lines to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified enclosures of the three roots and their logarithms
    Roots {
        #[arg(long)]
        n: i64,
    },
    /// Integer coefficients of the twisted norm form
    Form {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
    },
    /// Exact evaluation of the form at an integer point
    Eval {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Windowed enumeration of solutions over a parameter grid
    Search {
        #[arg(long)]
        n_min: i64,
        #[arg(long)]
        n_max: i64,
        #[arg(long, allow_negative_numbers = true)]
        s_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        s_max: i64,
        #[arg(long, allow_negative_numbers = true)]
        t_min: i64,
        #[arg(long, allow_negative_numbers = true)]
        t_max: i64,
        #[arg(long)]
        y_max: i64,
        /// Twist condition parameter as a rational p/q
        #[arg(long, value_name = "E")]
        epsilon: Option<String>,
        /// Skip (s, t) cells that fail the admissibility condition
        #[arg(long)]
        require_condition: bool,
    },
    /// Exponents of the unit x − α₀y over the fundamental pair
    Decompose {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Run one named inequality verifier (three-valued status)
    Verify {
        /// One of: alphadiff, prodbymax, alphamax, alphasalad, coeff_ub_theta
        #[arg(long, value_name = "NAME")]
        lemma: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        s: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// Rational p/q (alphadiff requires it; alphamax may use it)
        #[arg(long, value_name = "E")]
        epsilon: Option<String>,
        /// First rational of a prodbymax triple
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        /// Second rational of a prodbymax triple
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Third rational of a prodbymax triple
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Coefficient cap (rational) for coeff_ub_theta
        #[arg(long, allow_hyphen_values = true)]
        cap: Option<String>,
    },
    /// Baker constant and the derived effective bound report
    Bounds {
        #[arg(long)]
        n: i64,
        /// Number of logarithms in the Baker constant
        #[arg(long)]
        t_count: u32,
        #[arg(long)]
        tau: i64,
        /// Known value of log|y| as a rational, to test against the bounds
        #[arg(long, value_name = "L", allow_hyphen_values = true)]
        logy: Option<String>,
    },
    /// Twist admissibility and separation conditions
    Condition {
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        /// Rational p/q (falls back to the config value)
        #[arg(long, value_name = "E")]
        epsilon: Option<String>,
    },
}

/// A dispatch failure carrying the exit code mandated for its class.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn run(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<tthue::Error> for Failure {
    fn from(e: tthue::Error) -> Self {
        match e {
            tthue::Error::InvalidParameter(_) => Failure::usage(e.to_string()),
            other => Failure::run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::run(format!("output error: {e}"))
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(run(argv));
}

/// Parses `argv`, executes the subcommand, and returns the process exit code.
fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Resolves the configuration (defaults < TTHUE_BITS < config file < flags)
/// and dispatches.
fn execute(cli: Cli) -> Result<i32, Failure> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.load_file(path).map_err(Failure::usage)?;
    }
    cfg.apply_env().map_err(Failure::usage)?;
    if let Some(bits) = cli.bits {
        cfg.bits = bits;
        cfg.bits_explicit = true;
    }
    if let Some(max_bits) = cli.max_bits {
        cfg.max_bits = max_bits;
    }
    if let Some(path) = cli.output {
        cfg.output = Some(path);
    }
    let policy = cfg.policy().map_err(Failure::usage)?;

    let mut sink: Box<dyn Write> = match &cfg.output {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    let code = dispatch(cli.command, &cfg, &policy, &mut sink)?;
    sink.flush()?;
    Ok(code)
}

fn dispatch(
    command: Command,
    cfg: &RunConfig,
    policy: &PrecisionPolicy,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Roots { n } => cmd_roots(n, policy, out),
        Command::Form { n, s, t } => cmd_form(n, s, t, out),
        Command::Eval { n, s, t, x, y } => cmd_eval(n, s, t, &x, &y, out),
        Command::Search {
            n_min,
            n_max,
            s_min,
            s_max,
            t_min,
            t_max,
            y_max,
            epsilon,
            require_condition,
        } => {
            let grid = build_grid(
                n_min,
                n_max,
                s_min,
                s_max,
                t_min,
                t_max,
                y_max,
                epsilon.as_deref(),
                require_condition,
                cfg,
            )?;
            cmd_search(&grid, policy, out)
        }
        Command::Decompose { n, s, t, x, y } => cmd_decompose(n, s, t, &x, &y, policy, out),
        Command::Verify { lemma, n, s, t, x, y, epsilon, a, b, c, cap } => {
            let args = VerifyArgs { n, s, t, x, y, epsilon, a, b, c, cap };
            cmd_verify(&lemma, args, cfg, policy, out)
        }
        Command::Bounds { n, t_count, tau, logy } => {
            cmd_bounds(n, t_count, tau, logy.as_deref(), cfg, out)
        }
        Command::Condition { s, t, epsilon } => cmd_condition(s, t, epsilon.as_deref(), cfg, out),
    }
}

fn emit_line(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    writeln!(out, "{value}")?;
    Ok(())
}

/// The ε for the current invocation: flag text first, then config.
fn resolve_epsilon(flag: Option<&str>, cfg: &RunConfig) -> Result<Option<Epsilon>, Failure> {
    let ratio = match flag {
        Some(text) => Some(parse_positive_ratio(text).map_err(Failure::usage)?),
        None => cfg.epsilon.clone(),
    };
    match ratio {
        Some(r) => Ok(Some(Epsilon::new(r)?)),
        None => Ok(None),
    }
}

fn cmd_roots(n: i64, policy: &PrecisionPolicy, out: &mut dyn Write) -> Result<i32, Failure> {
    let roots = compute_roots(n, policy)?;
    let logs = compute_root_logs(n, policy)?;
    let brackets = verify_root_brackets(n, policy)?;
    let log_brackets = verify_root_log_brackets(n, policy)?;
    emit_line(
        out,
        &json!({
            "n": emit::int(n),
            "lam0": emit::enclosure(&roots.lam0),
            "lam1": emit::enclosure(&roots.lam1),
            "lam2": emit::enclosure(&roots.lam2),
            "log_lam0": emit::enclosure(&logs.log_lam0),
            "log_abs_lam1": emit::enclosure(&logs.log_abs_lam1),
            "log_abs_lam2": emit::enclosure(&logs.log_abs_lam2),
            "bits": roots.bits,
            "converged": roots.converged && logs.converged,
            "bracket_status": emit::verdict(brackets.verdict),
            "log_bracket_status": emit::verdict(log_brackets.verdict),
        }),
    )?;
    Ok(exit_for_verdicts([brackets.verdict, log_brackets.verdict]))
}

fn cmd_form(n: i64, s: i64, t: i64, out: &mut dyn Write) -> Result<i32, Failure> {
    let coeffs = form_coeffs(n, s, t)?;
    emit_line(
        out,
        &json!({
            "n": emit::int(n),
            "s": emit::int(s),
            "t": emit::int(t),
            "e1": emit::big(&coeffs.e1),
            "e2": emit::big(&coeffs.e2),
            "e3": emit::big(&coeffs.e3),
        }),
    )?;
    Ok(0)
}

fn cmd_eval(
    n: i64,
    s: i64,
    t: i64,
    x: &str,
    y: &str,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let x = parse_bigint(x).map_err(Failure::usage)?;
    let y = parse_bigint(y).map_err(Failure::usage)?;
    let value = evaluate_form(n, s, t, &x, &y)?;
    let is_solution = value == BigInt::from(1) || value == BigInt::from(-1);
    emit_line(
        out,
        &json!({
            "n": emit::int(n),
            "s": emit::int(s),
            "t": emit::int(t),
            "x": emit::big(&x),
            "y": emit::big(&y),
            "value": emit::big(&value),
            "is_solution": is_solution,
        }),
    )?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn build_grid(
    n_min: i64,
    n_max: i64,
    s_min: i64,
    s_max: i64,
    t_min: i64,
    t_max: i64,
    y_max: i64,
    epsilon: Option<&str>,
    require_condition: bool,
    cfg: &RunConfig,
) -> Result<SearchGrid, Failure> {
    let mut grid = SearchGrid::new(
        ParamRange::new(n_min, n_max),
        ParamRange::new(s_min, s_max),
        ParamRange::new(t_min, t_max),
        y_max,
    )?;
    if let Some(eps) = resolve_epsilon(epsilon, cfg)? {
        grid = grid.with_epsilon(eps);
    }
    Ok(grid.filter_by_condition(require_condition))
}

/// JSON object for one found solution, including the certified indices
/// when classification succeeded.
fn solution_value(rec: &tthue::search::FoundSolution) -> Value {
    let mut obj = json!({
        "kind": "solution",
        "n": emit::int(rec.n),
        "s": emit::int(rec.s),
        "t": emit::int(rec.t),
        "x": emit::big(&rec.x),
        "y": emit::big(&rec.y),
        "classified": rec.classification.is_some(),
    });
    if let Some(record) = &rec.classification {
        let map = obj.as_object_mut().expect("object literal");
        map.insert("j".into(), emit::uint(record.j as u64));
        map.insert("k".into(), emit::uint(record.k as u64));
        map.insert("l".into(), emit::uint(record.l as u64));
        map.insert("u".into(), emit::uint(record.u as u64));
        map.insert("v".into(), emit::uint(record.v as u64));
        map.insert("bits".into(), json!(record.bits));
    }
    obj
}

fn cmd_search(
    grid: &SearchGrid,
    policy: &PrecisionPolicy,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let result = enumerate_solutions(grid, policy)?;
    for rec in &result.records {
        emit_line(out, &solution_value(rec))?;
    }
    emit_line(
        out,
        &json!({
            "kind": "summary",
            "strategy": result.strategy.to_string(),
            "candidates_tested": emit::uint(result.stats.candidates_tested),
            "solutions_found": emit::uint(result.stats.solutions_found),
            "undecided_classifications": emit::uint(result.stats.undecided_classifications),
            "completeness_caveat": result.stats.completeness_caveat,
        }),
    )?;
    Ok(if result.stats.undecided_classifications > 0 { 1 } else { 0 })
}

fn cmd_decompose(
    n: i64,
    s: i64,
    t: i64,
    x: &str,
    y: &str,
    policy: &PrecisionPolicy,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let x = parse_bigint(x).map_err(Failure::usage)?;
    let y = parse_bigint(y).map_err(Failure::usage)?;
    let decomposition = decompose_beta(x.clone(), y.clone(), n, s, t, policy)?;
    emit_line(
        out,
        &json!({
            "n": emit::int(n),
            "s": emit::int(s),
            "t": emit::int(t),
            "x": emit::big(&x),
            "y": emit::big(&y),
            "sign": emit::int(decomposition.word.sign as i64),
            "a": emit::int(decomposition.word.a),
            "b": emit::int(decomposition.word.b),
            "exact_verified": decomposition.exact_verified,
        }),
    )?;
    Ok(if decomposition.exact_verified { 0 } else { 1 })
}

struct VerifyArgs {
    n: Option<i64>,
    s: Option<i64>,
    t: Option<i64>,
    x: Option<String>,
    y: Option<String>,
    epsilon: Option<String>,
    a: Option<String>,
    b: Option<String>,
    c: Option<String>,
    cap: Option<String>,
}

fn required<T>(value: Option<T>, name: &str, lemma: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("lemma {lemma} requires --{name}")))
}

/// Classifies the point named on the command line, for record-based lemmas.
fn record_from_args(
    args: &VerifyArgs,
    lemma: &str,
    policy: &PrecisionPolicy,
) -> Result<SolutionRecord, Failure> {
    let n = required(args.n, "n", lemma)?;
    let s = required(args.s, "s", lemma)?;
    let t = required(args.t, "t", lemma)?;
    let x = parse_bigint(required(args.x.as_deref(), "x", lemma)?).map_err(Failure::usage)?;
    let y = parse_bigint(required(args.y.as_deref(), "y", lemma)?).map_err(Failure::usage)?;
    Ok(classify_solution(x, y, n, s, t, policy)?)
}

fn cmd_verify(
    lemma: &str,
    args: VerifyArgs,
    cfg: &RunConfig,
    policy: &PrecisionPolicy,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let report: LemmaReport = match lemma {
        "alphadiff" => {
            let n = required(args.n, "n", lemma)?;
            let s = required(args.s, "s", lemma)?;
            let t = required(args.t, "t", lemma)?;
            let eps = resolve_epsilon(args.epsilon.as_deref(), cfg)?
                .ok_or_else(|| Failure::usage("lemma alphadiff requires --epsilon"))?;
            verify_lemma(LemmaParams::AlphaDiff { n, s, t, epsilon: &eps }, policy)?
        }
        "prodbymax" => {
            let a = parse_ratio(required(args.a.as_deref(), "a", lemma)?).map_err(Failure::usage)?;
            let b = parse_ratio(required(args.b.as_deref(), "b", lemma)?).map_err(Failure::usage)?;
            let c = parse_ratio(required(args.c.as_deref(), "c", lemma)?).map_err(Failure::usage)?;
            verify_lemma(LemmaParams::ProdByMax { a: &a, b: &b, c: &c }, policy)?
        }
        "alphamax" => {
            let n = required(args.n, "n", lemma)?;
            let s = required(args.s, "s", lemma)?;
            let t = required(args.t, "t", lemma)?;
            let eps = resolve_epsilon(args.epsilon.as_deref(), cfg)?;
            verify_lemma(LemmaParams::AlphaMax { n, s, t, epsilon: eps.as_ref() }, policy)?
        }
        "alphasalad" => {
            let record = record_from_args(&args, lemma, policy)?;
            verify_lemma(LemmaParams::AlphaSalad { record: &record }, policy)?
        }
        "coeff_ub_theta" => {
            let record = record_from_args(&args, lemma, policy)?;
            let decomposition = decompose_beta(
                record.x.clone(),
                record.y.clone(),
                record.n,
                record.s,
                record.t,
                policy,
            )?;
            let cap = parse_positive_ratio(required(args.cap.as_deref(), "cap", lemma)?)
                .map_err(Failure::usage)?;
            verify_lemma(
                LemmaParams::CoeffUbTheta { record: &record, decomposition: &decomposition, cap: &cap },
                policy,
            )?
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown lemma {other:?}; expected one of alphadiff, prodbymax, alphamax, \
                 alphasalad, coeff_ub_theta"
            )))
        }
    };

    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|item| json!({ "what": item.what, "status": emit::verdict(item.verdict) }))
        .collect();
    let mut obj = json!({
        "lemma": report.name,
        "status": emit::verdict(report.verdict),
        "hypothesis_ok": report.hypothesis_ok,
        "checks": checks,
        "notes": report.notes,
    });
    if let Some(ratio) = &report.observed_ratio {
        obj.as_object_mut()
            .expect("object literal")
            .insert("observed_ratio".into(), emit::enclosure(ratio));
    }
    emit_line(out, &obj)?;
    Ok(exit_for_verdicts([report.verdict]))
}

fn cmd_bounds(
    n: i64,
    t_count: u32,
    tau: i64,
    logy: Option<&str>,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let baker = baker_constant(t_count, DEGREE)?;
    let logy_enc: Option<RealEnclosure> = match logy {
        Some(text) => {
            let r = parse_ratio(text).map_err(Failure::usage)?;
            Some(RealEnclosure::from_ratio(&r, cfg.bits))
        }
        None => None,
    };
    let report = derived_bounds(n, tau, &cfg.consts, logy_enc.as_ref())?;

    let mut verdicts = vec![report.tau_within];
    let mut obj = json!({
        "n": emit::int(n),
        "tau": emit::int(tau),
        "t_count": t_count,
        "baker_constant": emit::enclosure(&baker),
        "logy_ub": emit::enclosure(&report.logy_ub),
        "tau_ub": emit::enclosure(&report.tau_ub),
        "logy_by_n": emit::enclosure(&report.logy_by_n),
        "coeff_by_n": emit::enclosure(&report.coeff_by_n),
        "tau_within": emit::verdict(report.tau_within),
        "constants": {
            "c2": emit::ratio(&cfg.consts.c2),
            "c3": emit::ratio(&cfg.consts.c3),
            "c4": emit::ratio(&cfg.consts.c4),
            "c5": emit::ratio(&cfg.consts.c5),
            "c_cu": emit::ratio(&cfg.consts.c_cu),
        },
    });
    let map = obj.as_object_mut().expect("object literal");
    if let Some(v) = report.logy_within {
        map.insert("logy_within".into(), emit::verdict(v));
        verdicts.push(v);
    }
    if let Some(v) = report.logy_by_n_within {
        map.insert("logy_by_n_within".into(), emit::verdict(v));
        verdicts.push(v);
    }
    emit_line(out, &obj)?;
    Ok(exit_for_verdicts(verdicts))
}

fn cmd_condition(
    s: i64,
    t: i64,
    epsilon: Option<&str>,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let eps = resolve_epsilon(epsilon, cfg)?
        .ok_or_else(|| Failure::usage("condition requires --epsilon (or a config value)"))?;
    let holds = check_condition(s, t, &eps);
    let separation = separation_condition(s, t, &eps);
    emit_line(
        out,
        &json!({
            "s": emit::int(s),
            "t": emit::int(t),
            "epsilon": emit::ratio(eps.value()),
            "holds": holds,
            "separation": separation,
        }),
    )?;
    Ok(if holds { 0 } else { 1 })
}

/// `0` iff every verdict is `Pass`; a failed or undecided check means the
/// sought certificate was not produced.
fn exit_for_verdicts(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    if verdicts.into_iter().all(|v| v.is_pass()) {
        0
    } else {
        1
    }
}
