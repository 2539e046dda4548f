//! Command-line front end. [`run`] returns the exit code and both output
//! streams so the binary stays a thin wrapper and the CLI is testable.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bounds::{covering_theorem_bounds, pa_theorem_bounds, Task};
use crate::cq::{load_state, CQState};
use crate::divergence::{d_2_star, d_h, d_s, rel_entropy, rel_entropy_variance, DivergencePair, DEFAULT_DS_GRID};
use crate::entropic::{
    cond_entropy_with_variance, covering_second_order, h_h_cond, i_h, mutual_info_with_variance, pa_second_order,
    Direction,
};
use crate::error::Error;
use crate::rates::{moderate_sweep, second_order_sweep};
use crate::sim::{max_extractable_search, min_codebook_search, simulate_covering, simulate_pa, Method, Sampling};

pub const SCHEMA: &str = "oneshot-qit/1";

const CSV_HELP: &str = "\
Output: JSON documents carry \"schema\", \"version\", \"log_base\" (always 2), \"command\", \"params\"
and \"result\". With --format csv every row starts with the columns schema, version, log_base and
one \"param.<name>\" column per parameter (lists joined by ';'), followed by the result columns:
  divergence  kind, value_bits, lower_bits, upper_bits, exact  (var reports bits^2)
  rates       n, first_order_bits, variance_bits2, second_order_coeff_bits, value_at_n_bits
  bounds      lower_bits, upper_bits, nu, nu_regularized, family, then the intermediate terms
  simulate    value, method, samples, seed, half_width, family
  search      size, value, samples, found, saturated
  sweep       n, regime, eps, a_n, exact_bits, prediction_bits, residual_bits, direction
Result columns appear in alphabetical order.
Exit codes: 0 success, 2 invalid input or violated precondition, 3 numerical failure.";

#[derive(Parser, Debug)]
#[command(name = "oneshot-qit", version, about = "One-shot quantum information bounds and protocol simulation", after_help = CSV_HELP)]
struct Cli {
    /// Output document format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Suppress warnings on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divergence between the joint operators of two state files.
    Divergence(DivergenceArgs),
    /// First- and second-order rates of a state.
    Rates(RatesArgs),
    /// One-shot sandwich bounds on log l^eps or log M^eps.
    Bounds(BoundsArgs),
    /// Exact or Monte-Carlo trace distance of the protocol.
    Simulate(SimulateArgs),
    /// Exact search for l^eps or M^eps up to a cap.
    Search(SearchArgs),
    /// Classical i.i.d. sweep against second-order or moderate predictions.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DivergenceKind {
    Ds,
    Dh,
    D2,
    Kl,
    Var,
}

#[derive(Args, Debug, Serialize)]
struct DivergenceArgs {
    #[arg(long, value_enum)]
    kind: DivergenceKind,
    #[arg(long)]
    state_a: PathBuf,
    #[arg(long)]
    state_b: PathBuf,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DS_GRID)]
    grid: usize,
}

#[derive(Args, Debug, Serialize)]
struct RatesArgs {
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long, conflicts_with = "n_list")]
    n: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<u64>>,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    c: f64,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    size: usize,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores); results do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    cap: usize,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SweepRegime {
    Second,
    Moderate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DirectionArg {
    Plus,
    Minus,
    Both,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long, value_enum)]
    regime: SweepRegime,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    /// Moderate branch: plus (error 1 - eps_n), minus (error eps_n) or both.
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    command: &'static str,
    params: Value,
    result: Value,
    rows: Vec<Map<String, Value>>,
    warnings: Vec<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => 3,
        Error::Domain(_) | Error::Format(_) => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            let stderr = if cli.quiet {
                String::new()
            } else {
                report.warnings.iter().map(|w| format!("warning: {w}\n")).collect()
            };
            match render(&report, cli.format) {
                Ok(stdout) => Outcome { code: 0, stdout, stderr },
                Err(e) => Outcome { code: 3, stdout: String::new(), stderr: format!("error: {e}\n") },
            }
        }
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read_state_file(path: &Path) -> crate::Result<CQState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read state file {}: {e}", path.display())))?;
    load_state(&text).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("argument structs serialize")
}

fn require_eps(eps: Option<f64>, what: &str) -> crate::Result<f64> {
    eps.ok_or_else(|| Error::Domain(format!("--eps is required for {what}")))
}

fn row(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn dispatch(command: &Command) -> crate::Result<Report> {
    match command {
        Command::Divergence(a) => divergence(a),
        Command::Rates(a) => rates(a),
        Command::Bounds(a) => bounds(a),
        Command::Simulate(a) => simulate(a),
        Command::Search(a) => search(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn divergence(a: &DivergenceArgs) -> crate::Result<Report> {
    let rho = read_state_file(&a.state_a)?.embed().rho_xb;
    let sigma = read_state_file(&a.state_b)?.embed().rho_xb;
    let pair = DivergencePair::new(rho, sigma)?;
    let (value, lower, upper, exact) = match a.kind {
        DivergenceKind::Ds => {
            let v = d_s(&pair, require_eps(a.eps, "kind ds")?, a.grid)?;
            (v.value / LN_2, v.bracket.0 / LN_2, v.bracket.1 / LN_2, v.exact)
        }
        DivergenceKind::Dh => {
            let v = d_h(&pair, require_eps(a.eps, "kind dh")?)? / LN_2;
            (v, v, v, false)
        }
        DivergenceKind::D2 => {
            let v = d_2_star(&pair)? / LN_2;
            (v, v, v, true)
        }
        DivergenceKind::Kl => {
            let v = rel_entropy(&pair)? / LN_2;
            (v, v, v, true)
        }
        DivergenceKind::Var => {
            let v = rel_entropy_variance(&pair)? / (LN_2 * LN_2);
            (v, v, v, true)
        }
    };
    let r = row([
        ("kind", json!(a.kind)),
        ("value_bits", json!(value)),
        ("lower_bits", json!(lower)),
        ("upper_bits", json!(upper)),
        ("exact", json!(exact)),
    ]);
    Ok(Report {
        command: "divergence",
        params: params(a),
        result: Value::Object(r.clone()),
        rows: vec![r],
        warnings: vec![],
    })
}

fn rates(a: &RatesArgs) -> crate::Result<Report> {
    let s = read_state_file(&a.state)?;
    let ns = match (&a.n, &a.n_list) {
        (Some(n), _) => vec![*n],
        (None, Some(list)) => list.clone(),
        (None, None) => vec![1],
    };
    let (first, var, one_shot) = match a.task {
        Task::Pa => {
            let (h, v) = cond_entropy_with_variance(&s)?;
            (h, v, h_h_cond(&s, a.eps)?)
        }
        Task::Covering => {
            let (i, v) = mutual_info_with_variance(&s)?;
            (i, v, i_h(&s, a.eps)?)
        }
    };
    let (first, var) = (first / LN_2, var / (LN_2 * LN_2));
    let mut rows = Vec::new();
    for n in ns {
        let e = match a.task {
            Task::Pa => pa_second_order(first, var, a.eps, n)?,
            Task::Covering => covering_second_order(first, var, a.eps, n)?,
        };
        rows.push(row([
            ("n", json!(n)),
            ("first_order_bits", json!(e.first_order)),
            ("variance_bits2", json!(var)),
            ("second_order_coeff_bits", json!(e.second_order_coeff)),
            ("value_at_n_bits", json!(e.value_at_n)),
        ]));
    }
    let one_shot_key = match a.task {
        Task::Pa => "h_h_bits",
        Task::Covering => "i_h_bits",
    };
    let result = json!({
        "first_order_bits": first,
        "variance_bits2": var,
        one_shot_key: one_shot / LN_2,
        "expansions": rows,
    });
    Ok(Report { command: "rates", params: params(a), result, rows, warnings: vec![] })
}

fn bounds(a: &BoundsArgs) -> crate::Result<Report> {
    crate::bounds::validate_parameters(a.eps, a.delta, a.c)?;
    let s = read_state_file(&a.state)?;
    let report = match a.task {
        Task::Pa => pa_theorem_bounds(&s, a.eps, a.delta, a.c)?,
        Task::Covering => covering_theorem_bounds(&s, a.eps, a.delta, a.c)?,
    };
    let mut warnings = Vec::new();
    if report.nu != report.nu_regularized {
        warnings
            .push(format!("spectrum count changes under regularization ({} -> {})", report.nu, report.nu_regularized));
    }
    let mut r = row([
        ("lower_bits", json!(report.lower_bits)),
        ("upper_bits", json!(report.upper_bits)),
        ("nu", json!(report.nu)),
        ("nu_regularized", json!(report.nu_regularized)),
        ("family", json!(report.family)),
    ]);
    for (k, v) in &report.intermediate {
        r.insert(k.clone(), json!(v));
    }
    Ok(Report {
        command: "bounds",
        params: params(a),
        result: serde_json::to_value(&report).expect("report serializes"),
        rows: vec![r],
        warnings,
    })
}

fn simulate(a: &SimulateArgs) -> crate::Result<Report> {
    let s = read_state_file(&a.state)?;
    let sampling = Sampling { samples: a.samples, seed: a.seed, workers: a.workers };
    let est = match a.task {
        Task::Pa => simulate_pa(&s, a.size, a.method, sampling)?,
        Task::Covering => simulate_covering(&s, a.size, a.method, sampling)?,
    };
    let result = serde_json::to_value(&est).expect("estimate serializes");
    let r = result.as_object().cloned().unwrap_or_default();
    Ok(Report { command: "simulate", params: params(a), result, rows: vec![r], warnings: vec![] })
}

fn search(a: &SearchArgs) -> crate::Result<Report> {
    let s = read_state_file(&a.state)?;
    let mut warnings = Vec::new();
    let (found, saturated, curve, extra) = match a.task {
        Task::Pa => {
            let r = max_extractable_search(&s, a.eps, a.cap, a.workers)?;
            if r.saturated {
                warnings.push(format!("Delta(cap = {}) <= eps: the maximum may exceed the cap", a.cap));
            }
            (json!(r.ell), r.saturated, r.curve, json!({ "ell": r.ell, "saturated": r.saturated }))
        }
        Task::Covering => {
            let r = min_codebook_search(&s, a.eps, a.cap, a.workers)?;
            if r.m.is_none() {
                warnings.push(format!("no codebook size up to {} reaches eps", a.cap));
            }
            if !r.monotonicity_violations.is_empty() {
                warnings.push(format!("covering curve increases after sizes {:?}", r.monotonicity_violations));
            }
            (json!(r.m), false, r.curve, json!({ "m": r.m, "monotonicity_violations": r.monotonicity_violations }))
        }
    };
    let rows: Vec<Map<String, Value>> = curve
        .iter()
        .map(|(size, e)| {
            row([
                ("size", json!(size)),
                ("value", json!(e.value)),
                ("samples", json!(e.samples)),
                ("found", found.clone()),
                ("saturated", json!(saturated)),
            ])
        })
        .collect();
    let mut result = extra;
    result["curve"] = json!(curve.iter().map(|(size, e)| json!({ "size": size, "estimate": e })).collect::<Vec<_>>());
    result["family"] = json!(curve.first().map(|(_, e)| e.family.clone()));
    Ok(Report { command: "search", params: params(a), result, rows, warnings })
}

fn sweep(a: &SweepArgs) -> crate::Result<Report> {
    let rows = match a.regime {
        SweepRegime::Second => {
            second_order_sweep(&a.p, &a.q, require_eps(a.eps, "the second-order regime")?, &a.n_list)?
        }
        SweepRegime::Moderate => {
            let t = a.t.ok_or_else(|| Error::Domain("--t is required for the moderate regime".into()))?;
            let dirs: &[Direction] = match a.direction {
                DirectionArg::Plus => &[Direction::Plus],
                DirectionArg::Minus => &[Direction::Minus],
                DirectionArg::Both => &[Direction::Minus, Direction::Plus],
            };
            let mut out = Vec::new();
            for &d in dirs {
                out.extend(moderate_sweep(&a.p, &a.q, t, &a.n_list, d)?.into_iter().map(|r| (Some(d), r)));
            }
            return Ok(sweep_report(a, out));
        }
    };
    Ok(sweep_report(a, rows.into_iter().map(|r| (None, r)).collect()))
}

fn sweep_report(a: &SweepArgs, rows: Vec<(Option<Direction>, crate::rates::SweepRow)>) -> Report {
    let rows: Vec<Map<String, Value>> = rows
        .into_iter()
        .map(|(d, r)| {
            let mut m = serde_json::to_value(&r).expect("row serializes").as_object().cloned().unwrap_or_default();
            if let Some(d) = d {
                m.insert("direction".into(), json!(d));
            }
            m
        })
        .collect();
    Report { command: "sweep", params: params(a), result: json!({ "rows": rows }), rows, warnings: vec![] }
}

fn param_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(param_cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn render(report: &Report, format: Format) -> crate::Result<String> {
    match format {
        Format::Json => {
            let mut doc = json!({
                "schema": SCHEMA,
                "version": env!("CARGO_PKG_VERSION"),
                "log_base": 2,
                "command": report.command,
                "params": report.params,
                "result": report.result,
            });
            if let Some(seed) = report.params.get("seed") {
                doc["seed"] = seed.clone();
            }
            Ok(serde_json::to_string_pretty(&doc).expect("json serializes") + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let param_cols: Vec<(String, String)> = report
                .params
                .as_object()
                .map(|m| m.iter().map(|(k, v)| (k.clone(), param_cell(v))).collect())
                .unwrap_or_default();
            let mut header: Vec<String> = vec!["schema".into(), "version".into(), "log_base".into()];
            header.extend(param_cols.iter().map(|(k, _)| format!("param.{k}")));
            let result_cols: Vec<String> = report.rows.first().map(|r| r.keys().cloned().collect()).unwrap_or_default();
            header.extend(result_cols.iter().cloned());
            let csv_err = |e: csv::Error| Error::Numerical(format!("csv output: {e}"));
            w.write_record(&header).map_err(csv_err)?;
            for r in &report.rows {
                let mut rec: Vec<String> = vec![SCHEMA.into(), env!("CARGO_PKG_VERSION").into(), "2".into()];
                rec.extend(param_cols.iter().map(|(_, v)| v.clone()));
                rec.extend(result_cols.iter().map(|k| r.get(k).map(param_cell).unwrap_or_default()));
                w.write_record(&rec).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Numerical(format!("csv output: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv is utf-8"))
        }
    }
}

/// Rebuilds an argument vector from a JSON document's `command` and
/// `params`, so a result can be reproduced from its own output.
pub fn argv_from_document(doc: &Value) -> Option<Vec<String>> {
    let command = doc.get("command")?.as_str()?;
    let params = doc.get("params")?.as_object()?;
    let mut argv = vec!["oneshot-qit".to_string(), command.to_string()];
    let ordered: BTreeMap<&String, &Value> = params.iter().collect();
    for (k, v) in ordered {
        if v.is_null() {
            continue;
        }
        argv.push(format!("--{}", k.replace('_', "-")));
        argv.push(match v {
            Value::Array(xs) => xs.iter().map(param_cell).collect::<Vec<_>>().join(","),
            other => param_cell(other),
        });
    }
    Some(argv)
}
