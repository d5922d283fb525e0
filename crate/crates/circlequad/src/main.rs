//! Command-line interface for the circle-quadrature experiment drivers.
//!
//! Each subcommand wraps one driver from [`circlequad::experiments`]; inputs
//! come from a TOML config (`--config`), from flags, or from a config with
//! flag overrides applied on top. Results go to stdout or `--output` in the
//! format chosen by `--format` (`csv`, `json`, or — for node geometry —
//! `svg`).
//!
//! Exit codes: `0` success, `2` validation error (bad flags, malformed or
//! inconsistent config), `3` numerical failure (zero finding, rank collapse,
//! reference-oracle non-convergence). A stalled oracle still prints its
//! partial report before exiting with `3`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circlequad::experiments::{
    self, AngleSpec, ExperimentConfig, ExperimentOutput, HermiteCompareConfig, IntegrateConfig,
    MtableConfig, NodesConfig, RunStatus, WeightsConfig, WeightsMode,
};
use circlequad::quad::BuiltinIntegrand;
use circlequad::regress::LsWeighting;
use circlequad::{Error, Result};

/// Experiment pipelines for mixed interpolation–regression quadrature on
/// the unit circle (Rogers–Szegő weight).
#[derive(Parser)]
#[command(name = "circlequad", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Node geometry: uniform grid, para-orthogonal zeros, mimic selection,
    /// and the gap-uniformity-optimal subset of the discarded nodes.
    Nodes(NodesArgs),
    /// Feasibility sweep of the maximal para-orthogonal degree m(N, q).
    Mtable(MtableArgs),
    /// Quadrature weights: uniform closed form, CMV closed form, or mimic.
    Weights(WeightsArgs),
    /// Three-rule integration comparison against the reference oracle.
    Integrate(IntegrateArgs),
    /// Hermite vs Lagrange interpolation error on the discarded nodes.
    HermiteCompare(HermiteArgs),
    /// Run every config in a directory and write all output files.
    ReproduceAll(ReproduceArgs),
}

/// Output rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Tabular, 15-significant-digit cells (columns in docs/formats.md).
    Csv,
    /// Structured report with stable key order.
    Json,
    /// Scatter figure (node geometry only).
    Svg,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct NodesArgs {
    /// TOML config (kind = "nodes").
    #[arg(long)]
    config: Option<PathBuf>,
    /// Measure parameter q ∈ (0, 1).
    #[arg(long)]
    q: Option<f64>,
    /// Grid size N.
    #[arg(long)]
    n: Option<usize>,
    /// Grid anchor θ₀ (radians or "5*pi/6").
    #[arg(long)]
    theta0: Option<String>,
    /// Para-orthogonal degree m (default: maximal feasible).
    #[arg(long)]
    m: Option<usize>,
    /// Subset-enumeration budget for the gap-uniformity search.
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MtableArgs {
    /// TOML config (kind = "mtable").
    #[arg(long)]
    config: Option<PathBuf>,
    /// Measure parameters, comma-separated.
    #[arg(long, value_delimiter = ',')]
    qs: Vec<f64>,
    /// Grid sizes, comma-separated.
    #[arg(long, value_delimiter = ',')]
    ns: Vec<usize>,
    /// Grid anchor θ₀ (default pi/6, matching the reference table).
    #[arg(long)]
    theta0: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct WeightsArgs {
    /// TOML config (kind = "weights").
    #[arg(long)]
    config: Option<PathBuf>,
    /// Measure parameter q ∈ (0, 1).
    #[arg(long)]
    q: Option<f64>,
    /// Grid size N.
    #[arg(long)]
    n: Option<usize>,
    /// Grid anchor θ₀.
    #[arg(long)]
    theta0: Option<String>,
    /// Weight family: uniform, cmv, or mimic.
    #[arg(long, value_parser = parse_kebab::<WeightsMode>)]
    mode: Option<WeightsMode>,
    /// uniform: exactness exponent r (z^{−r}…z^{s}, r+s+1=N).
    #[arg(long)]
    r_exp: Option<i64>,
    /// uniform: exactness exponent s.
    #[arg(long)]
    s_exp: Option<i64>,
    /// cmv, even N: boundary sign ε ∈ {−1, +1}.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<i32>,
    /// mimic: para-orthogonal degree m (default: maximal feasible).
    #[arg(long)]
    m: Option<usize>,
    /// mimic: window shift p̃ (default ⌊(m−1)/2⌋).
    #[arg(long, allow_hyphen_values = true)]
    p_tilde: Option<i64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct IntegrateArgs {
    /// TOML config (kind = "integrate").
    #[arg(long)]
    config: Option<PathBuf>,
    /// Measure parameter q ∈ (0, 1).
    #[arg(long)]
    q: Option<f64>,
    /// Grid size N.
    #[arg(long)]
    n: Option<usize>,
    /// Para-orthogonal degree m.
    #[arg(long)]
    m: Option<usize>,
    /// Grid anchor θ₀.
    #[arg(long)]
    theta0: Option<String>,
    /// Integrand: one, exp, exp-half, pole-near, pole-inner, step-f2.
    #[arg(long, value_parser = parse_kebab::<BuiltinIntegrand>)]
    integrand: Option<BuiltinIntegrand>,
    /// Total mixed-rule order r (default: m + best-subset cardinality).
    #[arg(long)]
    r: Option<usize>,
    /// Mixed-rule window shift p (default ⌊(r−1)/2⌋).
    #[arg(long, allow_hyphen_values = true)]
    p: Option<i64>,
    /// Interpolatory window shift p̃ (default ⌊(m−1)/2⌋).
    #[arg(long, allow_hyphen_values = true)]
    p_tilde: Option<i64>,
    /// Regression functional: true-residual or transformed.
    #[arg(long, value_parser = parse_kebab::<LsWeighting>)]
    weighting: Option<LsWeighting>,
    /// Reference-oracle accuracy (default 1e−12).
    #[arg(long)]
    accuracy: Option<f64>,
    /// Subset-enumeration budget when r is derived.
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct HermiteArgs {
    /// TOML config (kind = "hermite-compare").
    #[arg(long)]
    config: Option<PathBuf>,
    /// Measure parameter q ∈ (0, 1).
    #[arg(long)]
    q: Option<f64>,
    /// Grid size N.
    #[arg(long)]
    n: Option<usize>,
    /// Number of interpolation nodes m.
    #[arg(long)]
    m: Option<usize>,
    /// Grid anchor θ₀.
    #[arg(long)]
    theta0: Option<String>,
    /// Integrand (must provide derivatives).
    #[arg(long, value_parser = parse_kebab::<BuiltinIntegrand>)]
    integrand: Option<BuiltinIntegrand>,
    /// Hermite order r (r − m nodes get a doubled condition).
    #[arg(long)]
    r: Option<usize>,
    /// ChaCha seed for the derivative placement.
    #[arg(long)]
    seed: Option<u64>,
    /// Hermite window shift p (default ⌊(r−1)/2⌋).
    #[arg(long, allow_hyphen_values = true)]
    p: Option<i64>,
    /// Lagrange window shift p̃ (default ⌊(m−1)/2⌋).
    #[arg(long, allow_hyphen_values = true)]
    p_tilde: Option<i64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Directory of experiment configs.
    #[arg(long, default_value = "experiments")]
    config_dir: PathBuf,
    /// Directory for the generated tables and figures.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn dispatch(command: &Command) -> Result<ExitCode> {
    match command {
        Command::Nodes(args) => {
            let cfg = nodes_config(args)?;
            emit(&experiments::run_nodes(&cfg)?, &args.out, Format::Csv)
        }
        Command::Mtable(args) => {
            let cfg = mtable_config(args)?;
            emit(&experiments::run_mtable(&cfg)?, &args.out, Format::Csv)
        }
        Command::Weights(args) => {
            let cfg = weights_config(args)?;
            emit(&experiments::run_weights(&cfg)?, &args.out, Format::Csv)
        }
        Command::Integrate(args) => {
            let cfg = integrate_config(args)?;
            emit(&experiments::run_integrate(&cfg)?, &args.out, Format::Json)
        }
        Command::HermiteCompare(args) => {
            let cfg = hermite_config(args)?;
            emit(&experiments::run_hermite_compare(&cfg)?, &args.out, Format::Json)
        }
        Command::ReproduceAll(args) => {
            let report = experiments::reproduce_all(&args.config_dir, &args.out_dir)?;
            for line in &report.lines {
                println!("{line}");
            }
            if report.partial > 0 {
                eprintln!("warning: {} run(s) produced partial reports", report.partial);
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Renders a driver output in the requested format and prints or writes it.
/// A partial run still emits its report, then maps to exit code 3.
fn emit(output: &ExperimentOutput, out: &OutputArgs, default_format: Format) -> Result<ExitCode> {
    let format = out.format.unwrap_or(default_format);
    let text = match format {
        Format::Csv => output.csv.clone(),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&output.json).expect("reports serialize")
        ),
        Format::Svg => output
            .svg
            .clone()
            .ok_or_else(|| Error::Domain("this subcommand produces no SVG geometry".into()))?,
    };
    match &out.output {
        Some(path) => fs::write(path, &text)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    match &output.status {
        RunStatus::Ok => Ok(ExitCode::SUCCESS),
        RunStatus::Partial(msg) => {
            eprintln!("warning: partial report — {msg}");
            Ok(ExitCode::from(3))
        }
    }
}

// ---------------------------------------------------------------------------
// Config assembly: file, flags, or file + flag overrides
// ---------------------------------------------------------------------------

/// Parses a kebab-case enum value the same way config files spell it.
fn parse_kebab<T: serde::de::DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown value {s:?}"))
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    experiments::parse_config(&text)
        .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

fn kind_mismatch(expected: &str, found: &ExperimentConfig) -> Error {
    let found = match found {
        ExperimentConfig::Mtable(_) => "mtable",
        ExperimentConfig::Nodes(_) => "nodes",
        ExperimentConfig::Weights(_) => "weights",
        ExperimentConfig::Integrate(_) => "integrate",
        ExperimentConfig::HermiteCompare(_) => "hermite-compare",
    };
    Error::Domain(format!("config kind mismatch: expected {expected}, found {found}"))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Domain(format!("missing {flag} (give a --config file or the flag)")))
}

fn angle_override(cfg_field: &mut AngleSpec, flag: &Option<String>) {
    if let Some(s) = flag {
        *cfg_field = AngleSpec::Expression(s.clone());
    }
}

fn nodes_config(args: &NodesArgs) -> Result<NodesConfig> {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::Nodes(c) => c,
            other => return Err(kind_mismatch("nodes", &other)),
        },
        None => NodesConfig {
            q: require(args.q, "--q")?,
            n: require(args.n, "--n")?,
            theta0: AngleSpec::default(),
            m: None,
            budget: None,
        },
    };
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    angle_override(&mut cfg.theta0, &args.theta0);
    if args.m.is_some() {
        cfg.m = args.m;
    }
    if args.budget.is_some() {
        cfg.budget = args.budget;
    }
    Ok(cfg)
}

fn mtable_config(args: &MtableArgs) -> Result<MtableConfig> {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::Mtable(c) => c,
            other => return Err(kind_mismatch("mtable", &other)),
        },
        None => {
            if args.qs.is_empty() || args.ns.is_empty() {
                return Err(Error::Domain(
                    "missing --qs/--ns (give a --config file or both flags)".into(),
                ));
            }
            MtableConfig {
                qs: args.qs.clone(),
                ns: args.ns.clone(),
                theta0: AngleSpec::Expression("pi/6".into()),
            }
        }
    };
    if !args.qs.is_empty() {
        cfg.qs = args.qs.clone();
    }
    if !args.ns.is_empty() {
        cfg.ns = args.ns.clone();
    }
    angle_override(&mut cfg.theta0, &args.theta0);
    Ok(cfg)
}

fn weights_config(args: &WeightsArgs) -> Result<WeightsConfig> {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::Weights(c) => c,
            other => return Err(kind_mismatch("weights", &other)),
        },
        None => WeightsConfig {
            q: require(args.q, "--q")?,
            n: require(args.n, "--n")?,
            theta0: AngleSpec::default(),
            mode: require(args.mode, "--mode")?,
            r_exp: None,
            s_exp: None,
            eps: None,
            m: None,
            p_tilde: None,
        },
    };
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    angle_override(&mut cfg.theta0, &args.theta0);
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if args.r_exp.is_some() {
        cfg.r_exp = args.r_exp;
    }
    if args.s_exp.is_some() {
        cfg.s_exp = args.s_exp;
    }
    if args.eps.is_some() {
        cfg.eps = args.eps;
    }
    if args.m.is_some() {
        cfg.m = args.m;
    }
    if args.p_tilde.is_some() {
        cfg.p_tilde = args.p_tilde;
    }
    Ok(cfg)
}

fn integrate_config(args: &IntegrateArgs) -> Result<IntegrateConfig> {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::Integrate(c) => c,
            other => return Err(kind_mismatch("integrate", &other)),
        },
        None => IntegrateConfig {
            q: require(args.q, "--q")?,
            n: require(args.n, "--n")?,
            m: require(args.m, "--m")?,
            theta0: AngleSpec::default(),
            integrand: require(args.integrand, "--integrand")?,
            r: None,
            p: None,
            p_tilde: None,
            weighting: LsWeighting::default(),
            accuracy: None,
            budget: None,
        },
    };
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    angle_override(&mut cfg.theta0, &args.theta0);
    if let Some(f) = args.integrand {
        cfg.integrand = f;
    }
    if args.r.is_some() {
        cfg.r = args.r;
    }
    if args.p.is_some() {
        cfg.p = args.p;
    }
    if args.p_tilde.is_some() {
        cfg.p_tilde = args.p_tilde;
    }
    if let Some(w) = args.weighting {
        cfg.weighting = w;
    }
    if args.accuracy.is_some() {
        cfg.accuracy = args.accuracy;
    }
    if args.budget.is_some() {
        cfg.budget = args.budget;
    }
    Ok(cfg)
}

fn hermite_config(args: &HermiteArgs) -> Result<HermiteCompareConfig> {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path)? {
            ExperimentConfig::HermiteCompare(c) => c,
            other => return Err(kind_mismatch("hermite-compare", &other)),
        },
        None => HermiteCompareConfig {
            q: require(args.q, "--q")?,
            n: require(args.n, "--n")?,
            m: require(args.m, "--m")?,
            theta0: AngleSpec::default(),
            integrand: require(args.integrand, "--integrand")?,
            r: require(args.r, "--r")?,
            seed: require(args.seed, "--seed")?,
            p: None,
            p_tilde: None,
        },
    };
    if let Some(q) = args.q {
        cfg.q = q;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    angle_override(&mut cfg.theta0, &args.theta0);
    if let Some(f) = args.integrand {
        cfg.integrand = f;
    }
    if let Some(r) = args.r {
        cfg.r = r;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.p.is_some() {
        cfg.p = args.p;
    }
    if args.p_tilde.is_some() {
        cfg.p_tilde = args.p_tilde;
    }
    Ok(cfg)
}
