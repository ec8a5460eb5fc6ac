//! Command-line front end: JSON experiment configs in, CSV/JSON artifacts
//! out.
//!
//! Every artifact embeds the fully resolved configuration and the tool
//! version, so an output file is enough to re-run the experiment
//! identically.  Exit codes: 0 success, 2 config error, 3 physics/regime
//! error, 4 verification failure.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{carnot_bounds, emp, emp_expansion_closed_form, emp_expansion_fit};
use crate::config::{
    self, ExpansionConfig, FiniteTimeTarget, OptimizeConfig, SimulateConfig, SweepCmpConfig,
    SweepEmpConfig, SweepFiniteTimeConfig, SweepQuenchConfig, VerifyConfig,
};
use crate::dynamics::{average_power, gap_work_per_period, limit_cycle, Protocol};
use crate::error::{Error, Result};
use crate::finite_time::{finite_period_factor, heater_finite_period_factor, quench_power};
use crate::optimize::{ideal_mode_power, max_power, optimal_time_split};
use crate::search::{random_protocol_search, subcycle_split_check};
use crate::thermo::{Bath, BathLabel, BathPair, OperatingMode, RateModel};

/// Driven two-level machine toolkit: simulate limit cycles, optimize
/// fast-cycle power, sweep figure data, verify invariants.
#[derive(Debug, Parser)]
#[command(name = "otto", version)]
pub struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

impl Cli {
    pub fn into_spec(self) -> ExperimentSpec {
        let (command, run, verify) = match self.command {
            CliCommand::Simulate(a) => (ExperimentCommand::Simulate, Some(a), None),
            CliCommand::Optimize(a) => (ExperimentCommand::Optimize, Some(a), None),
            CliCommand::SweepEmp(a) => (ExperimentCommand::SweepEmp, Some(a), None),
            CliCommand::SweepCmp(a) => (ExperimentCommand::SweepCmp, Some(a), None),
            CliCommand::SweepFiniteTime(a) => (ExperimentCommand::SweepFiniteTime, Some(a), None),
            CliCommand::SweepQuench(a) => (ExperimentCommand::SweepQuench, Some(a), None),
            CliCommand::Expansion(a) => (ExperimentCommand::Expansion, Some(a), None),
            CliCommand::Verify(a) => (ExperimentCommand::Verify, None, Some(a)),
        };
        match (run, verify) {
            (Some(a), _) => ExperimentSpec {
                command,
                config_path: Some(a.config),
                output_path: a.out,
                overrides: a.set,
                threads: a.threads,
                seed: a.seed,
            },
            (_, Some(a)) => ExperimentSpec {
                command,
                config_path: a.config,
                output_path: a.out,
                overrides: a.set,
                threads: a.threads,
                seed: a.seed,
            },
            _ => unreachable!("every subcommand carries its arguments"),
        }
    }
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Integrate a driving protocol to its limit cycle; orbit as CSV.
    Simulate(RunArgs),
    /// Maximize one operating mode's power over a gap box; JSON report.
    Optimize(RunArgs),
    /// Efficiency at maximum power against the Carnot bounds; CSV.
    SweepEmp(RunArgs),
    /// COP at maximum cooling power against the Carnot COP; CSV.
    SweepCmp(RunArgs),
    /// Finite-period power reduction factor tabulation; CSV.
    SweepFiniteTime(RunArgs),
    /// Power deficit of finite-time gap switches; CSV.
    SweepQuench(RunArgs),
    /// Small-temperature-difference expansion coefficients; JSON.
    Expansion(RunArgs),
    /// Run the built-in invariant suite; exits 4 on any failed check.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Path to the JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Artifact path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted-path config override, repeatable: --set baths.hot.beta=2.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads (fallback: OTTO_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed override for randomized commands.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Optional budget config; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dotted-path config override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads (fallback: OTTO_THREADS, then all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed override for the randomized checks.
    #[arg(long)]
    seed: Option<u64>,
}

/// The eight experiment commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentCommand {
    Simulate,
    Optimize,
    SweepEmp,
    SweepCmp,
    SweepFiniteTime,
    SweepQuench,
    Expansion,
    Verify,
}

impl ExperimentCommand {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentCommand::Simulate => "simulate",
            ExperimentCommand::Optimize => "optimize",
            ExperimentCommand::SweepEmp => "sweep-emp",
            ExperimentCommand::SweepCmp => "sweep-cmp",
            ExperimentCommand::SweepFiniteTime => "sweep-finite-time",
            ExperimentCommand::SweepQuench => "sweep-quench",
            ExperimentCommand::Expansion => "expansion",
            ExperimentCommand::Verify => "verify",
        }
    }
}

/// A fully resolved experiment invocation.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub command: ExperimentCommand,
    pub config_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    /// `key.path=value` overrides, applied to the config document in order.
    pub overrides: Vec<String>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

/// Entry point used by the `otto` binary: parse arguments, run, exit.
pub fn main_entry() -> i32 {
    run_experiment(&Cli::parse().into_spec())
}

/// Runs one experiment and returns the process exit code.
pub fn run_experiment(spec: &ExperimentSpec) -> i32 {
    match run_checked(spec) {
        Ok(true) => 0,
        Ok(false) => 4,
        Err(e) => {
            eprintln!("otto: {e}");
            e.exit_code()
        }
    }
}

fn run_checked(spec: &ExperimentSpec) -> Result<bool> {
    match resolve_threads(spec.threads)? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
            pool.install(|| dispatch(spec))
        }
        None => dispatch(spec),
    }
}

fn resolve_threads(explicit: Option<usize>) -> Result<Option<usize>> {
    if explicit.is_some() {
        return Ok(explicit);
    }
    match std::env::var("OTTO_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Error::Config(format!("OTTO_THREADS must be a thread count, got '{s}'"))),
        Err(_) => Ok(None),
    }
}

fn dispatch(spec: &ExperimentSpec) -> Result<bool> {
    match spec.command {
        ExperimentCommand::Simulate => run_simulate(spec).map(|()| true),
        ExperimentCommand::Optimize => run_optimize(spec).map(|()| true),
        ExperimentCommand::SweepEmp => run_sweep_emp(spec).map(|()| true),
        ExperimentCommand::SweepCmp => run_sweep_cmp(spec).map(|()| true),
        ExperimentCommand::SweepFiniteTime => run_sweep_finite_time(spec).map(|()| true),
        ExperimentCommand::SweepQuench => run_sweep_quench(spec).map(|()| true),
        ExperimentCommand::Expansion => run_expansion(spec).map(|()| true),
        ExperimentCommand::Verify => run_verify(spec),
    }
}

fn load<T: serde::de::DeserializeOwned>(spec: &ExperimentSpec) -> Result<T> {
    let path = spec.config_path.as_ref().ok_or_else(|| {
        Error::Config(format!("{} needs --config <path>", spec.command.name()))
    })?;
    config::load_config(path, &spec.overrides)
}

/// 17-significant-digit decimal form used by all CSV artifacts.
fn format_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// RFC-style CSV quoting: only fields containing separators or quotes are
/// wrapped, with inner quotes doubled.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn tool_line() -> String {
    format!("otto {}", env!("CARGO_PKG_VERSION"))
}

fn render_csv(
    command: ExperimentCommand,
    config: &Value,
    context: Option<&Value>,
    columns: &[&str],
    rows: &[Vec<String>],
) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", tool_line()));
    out.push_str(&format!("# command: {}\n", command.name()));
    out.push_str(&format!("# config: {config}\n"));
    if let Some(ctx) = context {
        out.push_str(&format!("# context: {ctx}\n"));
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let escaped: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&escaped.join(","));
        out.push('\n');
    }
    out
}

fn render_json(command: ExperimentCommand, config: &Value, report: Value) -> String {
    let doc = json!({
        "tool": tool_line(),
        "command": command.name(),
        "config": config,
        "report": report,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn write_artifact(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Canonical JSON form of a parsed config: defaults filled in, field order
/// fixed by the schema.  This is what artifact headers embed.
fn resolved<T: Serialize>(cfg: &T) -> Result<Value> {
    serde_json::to_value(cfg).map_err(|e| Error::Config(format!("config not serializable: {e}")))
}

/// Short CSV label of a rate model.
fn model_label(model: &RateModel) -> String {
    match model {
        RateModel::Constant { .. } => "constant".into(),
        RateModel::FermiPower { n, .. } => format!("fermi_{n}"),
        RateModel::BosePower { n, .. } => format!("bose_{n}"),
        RateModel::Lorentzian { .. } => "lorentzian".into(),
        RateModel::GaussianX { .. } => "gaussian_x".into(),
    }
}

fn run_simulate(spec: &ExperimentSpec) -> Result<()> {
    let cfg: SimulateConfig = load(spec)?;
    let pair = cfg.baths.build()?;
    let protocol = cfg.protocol.build()?;
    let cycle = limit_cycle(&protocol, &pair)?;
    let context = json!({
        "period": cycle.period(),
        "p_start": cycle.p_start,
        "contraction": cycle.contraction,
        "avg_j_hot": cycle.avg_j_hot,
        "avg_j_cold": cycle.avg_j_cold,
        "gap_work_per_period": gap_work_per_period(&cycle, &pair)?,
        "power": {
            "engine": average_power(&cycle, OperatingMode::Engine),
            "refrigerator": average_power(&cycle, OperatingMode::Refrigerator),
            "accelerator": average_power(&cycle, OperatingMode::Accelerator),
            "heater": average_power(&cycle, OperatingMode::Heater),
        },
    });
    let rows: Vec<Vec<String>> = cycle
        .orbit
        .samples
        .iter()
        .map(|s| {
            vec![
                format_num(s.t),
                format_num(s.p),
                format_num(s.eps),
                format_num(s.lambda_hot),
                format_num(s.j_hot),
                format_num(s.j_cold),
            ]
        })
        .collect();
    let content = render_csv(
        spec.command,
        &resolved(&cfg)?,
        Some(&context),
        &["t", "p", "eps", "lambda_hot", "j_hot", "j_cold"],
        &rows,
    );
    write_artifact(&spec.output_path, &content)
}

fn run_optimize(spec: &ExperimentSpec) -> Result<()> {
    let cfg: OptimizeConfig = load(spec)?;
    let pair = cfg.baths.build()?;
    let result = max_power(cfg.mode, &pair, &cfg.gap_box)?;
    let mut report = json!({ "result": result });
    if let (Some(eh), Some(ec)) = (result.eps_h, result.eps_c) {
        if let Ok(bounds) = carnot_bounds(pair.hot.beta, pair.cold.beta) {
            match cfg.mode {
                OperatingMode::Engine if eh != 0.0 => {
                    report["efficiency"] = json!({
                        "eta": 1.0 - ec / eh,
                        "eta_carnot": bounds.eta_carnot,
                        "eta_ca": bounds.eta_ca,
                        "eta_ss": bounds.eta_ss,
                    });
                }
                OperatingMode::Refrigerator if eh - ec > 0.0 => {
                    report["efficiency"] = json!({
                        "cop": ec / (eh - ec),
                        "cop_carnot": bounds.cop_carnot,
                    });
                }
                _ => {}
            }
        }
    }
    let content = render_json(spec.command, &resolved(&cfg)?, report);
    write_artifact(&spec.output_path, &content)
}

fn checked_models(models: &[RateModel]) -> Result<()> {
    if models.is_empty() {
        return Err(Error::Config("model list must not be empty".into()));
    }
    for m in models {
        m.validate()?;
    }
    Ok(())
}

fn run_sweep_emp(spec: &ExperimentSpec) -> Result<()> {
    let cfg: SweepEmpConfig = load(spec)?;
    checked_models(&cfg.models)?;
    let etas = cfg.eta_c.values()?;
    if etas.iter().any(|&v| !(0.0 < v && v < 1.0)) {
        return Err(Error::Config(
            "eta_c grid must lie strictly inside (0, 1)".into(),
        ));
    }
    let points: Vec<(usize, f64)> = cfg
        .models
        .iter()
        .enumerate()
        .flat_map(|(mi, _)| etas.iter().map(move |&v| (mi, v)))
        .collect();
    let rows: Result<Vec<Vec<String>>> = points
        .par_iter()
        .map(|&(mi, eta_c)| {
            let model = &cfg.models[mi];
            let pair = BathPair::from_parts(
                cfg.beta_h,
                model.clone(),
                cfg.beta_h / (1.0 - eta_c),
                model.clone(),
            )?;
            let rep = emp(&pair, &cfg.gap_box)?;
            Ok(vec![
                format_num(eta_c),
                model_label(model),
                format_num(rep.eta / eta_c),
                format_num(rep.bounds.eta_ca),
                format_num(rep.bounds.eta_ss),
            ])
        })
        .collect();
    let content = render_csv(
        spec.command,
        &resolved(&cfg)?,
        None,
        &["eta_c", "model", "emp_over_etac", "eta_ca", "eta_ss"],
        &rows?,
    );
    write_artifact(&spec.output_path, &content)
}

fn run_sweep_cmp(spec: &ExperimentSpec) -> Result<()> {
    let cfg: SweepCmpConfig = load(spec)?;
    checked_models(&cfg.models)?;
    let carnots = cfg.cop_carnot.values()?;
    if carnots.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(Error::Config("cop_carnot grid must be positive".into()));
    }
    let points: Vec<(usize, f64)> = cfg
        .models
        .iter()
        .enumerate()
        .flat_map(|(mi, _)| carnots.iter().map(move |&v| (mi, v)))
        .collect();
    let rows: Result<Vec<Vec<String>>> = points
        .par_iter()
        .map(|&(mi, cc)| {
            let model = &cfg.models[mi];
            let pair = BathPair::from_parts(
                cfg.beta_h,
                model.clone(),
                cfg.beta_h * (1.0 + 1.0 / cc),
                model.clone(),
            )?;
            let rep = crate::analysis::cmp(&pair, &cfg.gap_box)?;
            Ok(vec![
                format_num(cc),
                model_label(model),
                format_num(rep.cop),
                format_num(rep.cop / cc),
            ])
        })
        .collect();
    let content = render_csv(
        spec.command,
        &resolved(&cfg)?,
        None,
        &["cop_carnot", "model", "cmp", "cmp_over_cc"],
        &rows?,
    );
    write_artifact(&spec.output_path, &content)
}

fn run_sweep_finite_time(spec: &ExperimentSpec) -> Result<()> {
    let cfg: SweepFiniteTimeConfig = load(spec)?;
    let grid = cfg.grid.values()?;
    let (columns, rows): (&[&str], Vec<Vec<String>>) = match cfg.target {
        FiniteTimeTarget::Heater => {
            let rows: Result<Vec<Vec<String>>> = grid
                .iter()
                .map(|&x| {
                    Ok(vec![
                        format_num(x),
                        format_num(heater_finite_period_factor(x)?),
                    ])
                })
                .collect();
            (["x", "factor"].as_slice(), rows?)
        }
        FiniteTimeTarget::Rates { gamma_h, gamma_c } => {
            let rows: Result<Vec<Vec<String>>> = grid
                .iter()
                .map(|&dt| {
                    let rep = finite_period_factor(dt, gamma_h, gamma_c)?;
                    let regime = serde_json::to_value(rep.regime)
                        .map_err(|e| Error::Config(e.to_string()))?;
                    Ok(vec![
                        format_num(dt),
                        format_num(rep.factor),
                        format_num(rep.gamma_tilde),
                        format_num(rep.gamma_tilde_h),
                        format_num(rep.gamma_tilde_c),
                        regime.as_str().unwrap_or("?").to_string(),
                    ])
                })
                .collect();
            (
                [
                    "dt",
                    "factor",
                    "gamma_tilde",
                    "gamma_tilde_h",
                    "gamma_tilde_c",
                    "regime",
                ]
                .as_slice(),
                rows?,
            )
        }
    };
    let content = render_csv(spec.command, &resolved(&cfg)?, None, columns, &rows);
    write_artifact(&spec.output_path, &content)
}

fn run_sweep_quench(spec: &ExperimentSpec) -> Result<()> {
    let cfg: SweepQuenchConfig = load(spec)?;
    let pair = cfg.baths.build()?;
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(Error::Config(format!(
            "contact time dt must be positive, got {}",
            cfg.dt
        )));
    }
    let (eps_h, eps_c, theta, source) = match (cfg.gaps, &cfg.gap_box) {
        (Some((eh, ec)), _) => {
            let theta = match cfg.time_split {
                Some(t) if 0.0 < t && t < 1.0 => t,
                Some(t) => {
                    return Err(Error::Config(format!(
                        "time_split must lie strictly inside (0, 1), got {t}"
                    )))
                }
                None => optimal_time_split(pair.hot.rate(eh)?, pair.cold.rate(ec)?)?,
            };
            (eh, ec, theta, "explicit")
        }
        (None, Some(bx)) => {
            let opt = max_power(cfg.mode, &pair, bx)?;
            let (Some(eh), Some(ec), Some(theta)) = (opt.eps_h, opt.eps_c, opt.time_split)
            else {
                return Err(Error::Infeasible(
                    "no positive-power optimum in the gap box; give explicit gaps".into(),
                ));
            };
            (eh, ec, theta, "optimized")
        }
        (None, None) => {
            return Err(Error::Config(
                "sweep-quench needs either gaps or gap_box".into(),
            ))
        }
    };
    let fractions = cfg.tau_over_dt.values()?;
    let rows: Result<Vec<Vec<String>>> = fractions
        .par_iter()
        .map(|&f| {
            let rep = quench_power(
                eps_h,
                eps_c,
                theta * cfg.dt,
                (1.0 - theta) * cfg.dt,
                f * cfg.dt,
                &pair,
                cfg.mode,
            )?;
            Ok(vec![
                format_num(f),
                format_num(rep.tau),
                format_num(rep.p_bar),
                format_num(rep.power),
                format_num(rep.deficit),
            ])
        })
        .collect();
    let context = json!({
        "eps_h": eps_h,
        "eps_c": eps_c,
        "time_split": theta,
        "dt": cfg.dt,
        "gap_source": source,
    });
    let content = render_csv(
        spec.command,
        &resolved(&cfg)?,
        Some(&context),
        &["tau_over_dt", "tau", "p_bar", "power", "deficit"],
        &rows?,
    );
    write_artifact(&spec.output_path, &content)
}

fn run_expansion(spec: &ExperimentSpec) -> Result<()> {
    let cfg: ExpansionConfig = load(spec)?;
    if cfg.pairs.is_empty() {
        return Err(Error::Config("pair list must not be empty".into()));
    }
    let (w0, w1) = cfg.window;
    if !(0.0 < w0 && w0 < w1 && w1 <= 0.1) {
        return Err(Error::Config(format!(
            "window ({w0}, {w1}) must sit inside (0, 0.1] with positive width"
        )));
    }
    let items: Result<Vec<Value>> = cfg
        .pairs
        .par_iter()
        .map(|pe| {
            let hot = Bath::new(BathLabel::Hot, cfg.beta_h, pe.hot.clone())?;
            let cold = Bath::new(BathLabel::Cold, cfg.beta_h / (1.0 - w0), pe.cold.clone())?;
            let baths = BathPair::new(hot.clone(), cold)?;
            let closed = emp_expansion_closed_form(&baths)?;
            let fit = emp_expansion_fit(&hot, &pe.cold, &cfg.gap_box, cfg.window, cfg.n_samples)?;
            Ok(json!({
                "hot": pe.hot,
                "cold": pe.cold,
                "closed_form": closed,
                "fit": fit,
            }))
        })
        .collect();
    let content = render_json(spec.command, &resolved(&cfg)?, json!({ "pairs": items? }));
    write_artifact(&spec.output_path, &content)
}

/// Outcome of one verification check.
#[derive(Debug, Serialize)]
struct CheckResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn run_verify(spec: &ExperimentSpec) -> Result<bool> {
    let mut cfg: VerifyConfig = match &spec.config_path {
        Some(path) => config::load_config(path, &spec.overrides)?,
        None => {
            let mut value = resolved(&VerifyConfig::default())?;
            for arg in &spec.overrides {
                let (path, v) = config::parse_override(arg)?;
                config::apply_override(&mut value, &path, v)?;
            }
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?
        }
    };
    if let Some(seed) = spec.seed {
        cfg.seed = seed;
    }
    let checks = run_invariant_suite(&cfg);
    let passed = checks.iter().all(|c| c.passed);
    let report = json!({ "passed": passed, "checks": checks });
    let content = render_json(spec.command, &resolved(&cfg)?, report);
    write_artifact(&spec.output_path, &content)?;
    Ok(passed)
}

fn check(name: &'static str, body: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    match body() {
        Ok((passed, detail)) => CheckResult {
            name,
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn run_invariant_suite(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        check("detailed-balance", check_detailed_balance),
        check("heater-curve-simulation", check_heater_curve),
        check("finite-period-factor-exactness", check_factor_exactness),
        check("subcycle-identity", || check_subcycle_identity(cfg)),
        check("random-search-ceiling", || check_search_bounds(cfg)),
        check("efficiency-bound-ordering", check_bound_ordering),
    ]
}

fn check_detailed_balance() -> Result<(bool, String)> {
    let models = [
        RateModel::Constant { k: 0.7 },
        RateModel::FermiPower { k: 1.3, n: 2 },
        RateModel::BosePower {
            k: 0.9,
            n: 1,
            eps_floor: 1e-9,
        },
        RateModel::Lorentzian {
            gamma: 1.0,
            sigma: 0.3,
            eps_bar: 1.5,
        },
        RateModel::GaussianX { k: 1.0, x_bar: 2.0 },
    ];
    let mut worst = 0.0f64;
    for model in &models {
        let bath = Bath::new(BathLabel::Hot, 1.7, model.clone())?;
        for eps in [0.2, 1.0, 3.5] {
            let (up, down) = crate::thermo::rate_components(model, eps, &bath)?;
            let err = (up / down - (-bath.beta * eps).exp()).abs();
            worst = worst.max(err);
            let total = (up + down - bath.rate(eps)?).abs();
            worst = worst.max(total);
        }
    }
    Ok((worst <= 1e-12, format!("max residual {worst:.3e}")))
}

fn check_heater_curve() -> Result<(bool, String)> {
    let k = 1.0;
    let pair = BathPair::from_parts(
        1.0,
        RateModel::Constant { k },
        1.0,
        RateModel::Constant { k },
    )?;
    let delta = 1.5;
    let ideal = ideal_mode_power(OperatingMode::Heater, delta, -delta, &pair)?;
    let mut worst = 0.0f64;
    for x in [0.5, 2.0, 10.0] {
        let dt = x / k;
        let protocol = Protocol::square_wave(delta, -delta, dt / 2.0, dt / 2.0)?;
        let cycle = limit_cycle(&protocol, &pair)?;
        let power = average_power(&cycle, OperatingMode::Heater);
        let factor = heater_finite_period_factor(x)?;
        worst = worst.max((power / ideal - factor).abs());
    }
    Ok((
        worst <= 1e-8,
        format!("max |simulated ratio - factor| = {worst:.3e}"),
    ))
}

fn check_factor_exactness() -> Result<(bool, String)> {
    let pair = BathPair::from_parts(
        1.0,
        RateModel::Constant { k: 1.0 },
        2.0,
        RateModel::Constant { k: 4.0 },
    )?;
    let (eps_h, eps_c) = (2.0, 1.5);
    let theta = optimal_time_split(1.0, 4.0)?;
    let ideal = ideal_mode_power(OperatingMode::Engine, eps_h, eps_c, &pair)?;
    let mut worst = 0.0f64;
    for x in [0.01, 1.0, 10.0] {
        let dt = x / 4.0;
        let protocol = Protocol::square_wave(eps_h, eps_c, theta * dt, (1.0 - theta) * dt)?;
        let cycle = limit_cycle(&protocol, &pair)?;
        let power = average_power(&cycle, OperatingMode::Engine);
        let factor = finite_period_factor(dt, 1.0, 4.0)?.factor;
        worst = worst.max((power / ideal - factor).abs());
    }
    Ok((
        worst <= 1e-8,
        format!("max |simulated ratio - factor| = {worst:.3e}"),
    ))
}

fn check_subcycle_identity(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    let mut used = 0usize;
    let mut skipped = 0usize;
    let mut attempts = 0usize;
    while used < cfg.split_cycles && attempts < 40 * cfg.split_cycles.max(1) {
        attempts += 1;
        let beta_c = rng.random_range(1.2..=3.0);
        let eps_h = rng.random_range(0.3..=3.0);
        let eps_c = rng.random_range(-2.0..=2.5);
        let k_h = rng.random_range(0.2..=5.0);
        let k_c = rng.random_range(0.2..=5.0);
        let pair = BathPair::from_parts(
            1.0,
            RateModel::Constant { k: k_h },
            beta_c,
            RateModel::Constant { k: k_c },
        )?;
        let period = 1e-3 / k_h.max(k_c);
        let tau_h = rng.random_range(0.2..=0.8) * period;
        match subcycle_split_check(
            eps_h,
            eps_c,
            tau_h,
            period - tau_h,
            &pair,
            OperatingMode::Engine,
            9,
        ) {
            Ok(rep) => {
                worst = worst.max(rep.max_identity_error);
                used += 1;
            }
            Err(Error::SplitUndefined(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((
        used == cfg.split_cycles && worst <= 1e-10,
        format!("{used} cycles, max identity error {worst:.3e}, {skipped} degenerate draws skipped"),
    ))
}

fn check_search_bounds(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let gaussian = RateModel::GaussianX { k: 1.0, x_bar: 2.0 };
    let cases = [
        (
            OperatingMode::Engine,
            BathPair::from_parts(
                1.0,
                RateModel::FermiPower { k: 1.0, n: 0 },
                2.0,
                RateModel::FermiPower { k: 1.0, n: 0 },
            )?,
            (1.0, 2.8),
        ),
        (
            OperatingMode::Refrigerator,
            BathPair::from_parts(1.0, gaussian.clone(), 2.0, gaussian.clone())?,
            (0.5, 2.9),
        ),
        (
            OperatingMode::Accelerator,
            BathPair::from_parts(1.0, gaussian.clone(), 2.0, gaussian.clone())?,
            (1.1, 2.2),
        ),
        (
            OperatingMode::Heater,
            BathPair::from_parts(1.0, gaussian.clone(), 1.0, gaussian.clone())?,
            (-3.2, 3.2),
        ),
    ];
    let mut passed = true;
    let mut details = Vec::new();
    for (mode, pair, range) in &cases {
        let report = random_protocol_search(*mode, pair, &cfg.search_config(*range))?;
        passed &= report.violations == 0;
        let ratio = report
            .ratio
            .map_or("n/a".to_string(), |r| format!("{r:.3}"));
        details.push(format!(
            "{mode}: violations {} best/bound {ratio}",
            report.violations
        ));
    }
    Ok((passed, details.join("; ")))
}

fn check_bound_ordering() -> Result<(bool, String)> {
    let wide = crate::thermo::ConstraintBox::new(1e-3, 60.0)?;
    let mut details = Vec::new();
    let mut passed = true;
    for model in [
        RateModel::FermiPower { k: 1.0, n: 0 },
        RateModel::BosePower {
            k: 1.0,
            n: 0,
            eps_floor: 1e-9,
        },
    ] {
        let pair = BathPair::from_parts(1.0, model.clone(), 2.0, model.clone())?;
        let rep = emp(&pair, &wide)?;
        let eta_c = rep.bounds.eta_carnot;
        let ok = rep.eta >= eta_c / 2.0 - 1e-12 && rep.eta <= rep.bounds.eta_ss + 1e-12;
        passed &= ok;
        details.push(format!(
            "{}: emp {:.6} in [{:.6}, {:.6}]",
            model_label(&model),
            rep.eta,
            eta_c / 2.0,
            rep.bounds.eta_ss
        ));
    }
    Ok((passed, details.join("; ")))
}
