//! Declarative experiment drivers behind the command-line interface.
//!
//! Every study this crate can reproduce — the feasibility table m(N, q), the
//! node-geometry figures, the closed-form weight tables, the three-rule
//! integration comparison, and the Hermite-versus-Lagrange interpolation
//! contest — is described by a small TOML config and executed by [`run`].
//! A config names its driver in a `kind` field:
//!
//! | `kind`            | driver                    | outputs          |
//! |-------------------|---------------------------|------------------|
//! | `mtable`          | [`run_mtable`]            | CSV, JSON        |
//! | `nodes`           | [`run_nodes`]             | CSV, JSON, SVG   |
//! | `weights`         | [`run_weights`]           | CSV, JSON        |
//! | `integrate`       | [`run_integrate`]         | CSV, JSON        |
//! | `hermite-compare` | [`run_hermite_compare`]   | CSV, JSON        |
//!
//! [`reproduce_all`] walks a directory of such configs in filename order and
//! materializes every output file, which is how the checked-in `experiments/`
//! matrix regenerates the reference tables end-to-end.
//!
//! # Determinism
//!
//! Drivers are pure functions of their config: the only randomness (the
//! derivative placement of `hermite-compare`) is drawn from a ChaCha stream
//! seeded by the config's `seed` field, sweeps are parallelized only over
//! independent cells whose results are reassembled in input order, and CSV
//! cells go through the fixed 15-significant-digit formatter
//! ([`crate::report::fmt_g`]). Re-running a config therefore reproduces every
//! output byte for byte.
//!
//! # Angles
//!
//! Angle fields (`theta0`) accept either a plain float (radians) or a compact
//! expression string of the form `[−][a*]pi[/b]` — `"pi/6"`, `"5*pi/6"`,
//! `"-pi/4"`, `"11*pi/6"` — so configs can state grid anchors exactly as the
//! reference tables print them.
//!
//! # Window-shift conventions
//!
//! Where a driver needs the Laurent window shifts `p̃` (interpolatory part)
//! or `p` (full rule) and the config does not pin them, it falls back to the
//! library's balanced defaults `⌊(m−1)/2⌋` and `⌊(r−1)/2⌋`. The checked-in
//! reproduction configs pin the alternative shifts `⌊m/2⌋`, `⌊r/2⌋` where a
//! published table calls for them; see `docs/formats.md`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::interp::{default_p_tilde, hermite_laurent, lagrange_laurent, HermiteData};
use crate::measure::MeasureSpec;
use crate::paraorth::{configuration, max_m, NodeConfiguration};
use crate::quad::{
    cmv_weights_closed, interpolatory_weights_uniform, mixed_rule, reference_integral,
    rule_on_mimic_nodes, BuiltinIntegrand, Integrand, QuadratureRule,
};
use crate::regress::{best_subpartition, LsWeighting, Subpartition, SUBPARTITION_BUDGET};
use crate::report::{csv_string, fmt_g, json_complex, svg_scatter, ScatterSeries};
use crate::{C64, Error, Result};

/// Default reference-oracle accuracy for the `integrate` driver. Tight
/// enough that the reference never limits the error columns of the
/// integration table (whose smallest entries sit near 5e−15), loose enough
/// that the smooth oracle converges for every built-in integrand it is
/// expected to handle.
pub const DEFAULT_REFERENCE_ACCURACY: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

/// An angle in radians, given either numerically or as a `[−][a*]pi[/b]`
/// expression string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    /// Plain radians.
    Radians(f64),
    /// Expression such as `"5*pi/6"`.
    Expression(String),
}

impl AngleSpec {
    /// Resolves the angle to radians.
    ///
    /// # Errors
    ///
    /// `Domain` for an unparseable expression or a non-finite value.
    pub fn radians(&self) -> Result<f64> {
        let v = match self {
            AngleSpec::Radians(x) => *x,
            AngleSpec::Expression(s) => parse_angle(s)?,
        };
        if !v.is_finite() {
            return Err(Error::Domain(format!("angle must be finite, got {v}")));
        }
        Ok(v)
    }
}

impl Default for AngleSpec {
    fn default() -> Self {
        AngleSpec::Radians(0.0)
    }
}

/// Parses `[−][a*]pi[/b]` (or a plain float) into radians.
fn parse_angle(text: &str) -> Result<f64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = compact.to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        // Reject "inf"/"nan", which f64::from_str accepts but no grid wants.
        if v.is_finite() {
            return Ok(v);
        }
        return Err(Error::Domain(format!("angle must be finite, got {text:?}")));
    }
    let bad = || Error::Domain(format!("cannot parse angle {text:?} (expected `[-][a*]pi[/b]` or a float)"));
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, s.as_str()),
    };
    let pi_at = rest.find("pi").ok_or_else(bad)?;
    let (prefix, tail) = rest.split_at(pi_at);
    let suffix = &tail[2..];
    let mult = if prefix.is_empty() {
        1.0
    } else {
        prefix
            .strip_suffix('*')
            .and_then(|a| a.parse::<f64>().ok())
            .ok_or_else(bad)?
    };
    let div = if suffix.is_empty() {
        1.0
    } else {
        let b = suffix
            .strip_prefix('/')
            .and_then(|b| b.parse::<f64>().ok())
            .ok_or_else(bad)?;
        if b == 0.0 {
            return Err(Error::Domain(format!("zero divisor in angle {text:?}")));
        }
        b
    };
    Ok(sign * mult * PI / div)
}

/// A parsed experiment config; the TOML `kind` field selects the variant.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    /// Feasibility sweep `m = m(N, q)`.
    Mtable(MtableConfig),
    /// Node geometry: grid, zeros, selection, gap-uniformity subset.
    Nodes(NodesConfig),
    /// Quadrature weights (uniform closed form, CMV closed form, or mimic).
    Weights(WeightsConfig),
    /// Three-rule integration comparison against the reference oracle.
    Integrate(IntegrateConfig),
    /// Hermite versus Lagrange interpolation error on the discarded nodes.
    HermiteCompare(HermiteCompareConfig),
}

/// Config for [`run_mtable`].
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct MtableConfig {
    /// Measure parameters to sweep (each in `(0, 1)`).
    pub qs: Vec<f64>,
    /// Grid sizes to sweep.
    pub ns: Vec<usize>,
    /// Grid anchor; defaults to the reference table's `π/6`.
    #[serde(default = "mtable_default_theta0")]
    pub theta0: AngleSpec,
}

fn mtable_default_theta0() -> AngleSpec {
    AngleSpec::Radians(PI / 6.0)
}

/// Config for [`run_nodes`].
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct NodesConfig {
    /// Measure parameter.
    pub q: f64,
    /// Grid size.
    pub n: usize,
    /// Grid anchor (radians or expression); default 0.
    #[serde(default)]
    pub theta0: AngleSpec,
    /// Para-orthogonal degree; defaults to the maximal feasible `m`.
    #[serde(default)]
    pub m: Option<usize>,
    /// Subset-enumeration budget for the gap-uniformity search.
    #[serde(default)]
    pub budget: Option<u64>,
}

/// Which weight family [`run_weights`] emits.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum WeightsMode {
    /// Closed-form interpolatory weights on the full uniform grid.
    Uniform,
    /// Closed-form weights mimicking the CMV/para-orthogonal window.
    Cmv,
    /// Weights on the mimic (selected) nodes, `λ̃_k = I(ℓ_k)`.
    Mimic,
}

/// Config for [`run_weights`].
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WeightsConfig {
    /// Measure parameter.
    pub q: f64,
    /// Grid size.
    pub n: usize,
    /// Grid anchor; default 0.
    #[serde(default)]
    pub theta0: AngleSpec,
    /// Weight family.
    pub mode: WeightsMode,
    /// `uniform` only: exactness exponent `r` (`z^{−r}…z^{s}`, `r+s+1=N`);
    /// default `⌊N/2⌋`.
    #[serde(default)]
    pub r_exp: Option<i64>,
    /// `uniform` only: exactness exponent `s`; default `N − 1 − r`.
    #[serde(default)]
    pub s_exp: Option<i64>,
    /// `cmv` with even `N` only: boundary sign `ε ∈ {−1, +1}`; default `+1`.
    #[serde(default)]
    pub eps: Option<i32>,
    /// `mimic` only: para-orthogonal degree; default maximal feasible.
    #[serde(default)]
    pub m: Option<usize>,
    /// `mimic` only: window shift; default `⌊(m−1)/2⌋`.
    #[serde(default)]
    pub p_tilde: Option<i64>,
}

/// Config for [`run_integrate`].
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct IntegrateConfig {
    /// Measure parameter.
    pub q: f64,
    /// Grid size.
    pub n: usize,
    /// Para-orthogonal degree (number of selected nodes).
    pub m: usize,
    /// Grid anchor; default 0.
    #[serde(default)]
    pub theta0: AngleSpec,
    /// Integrand.
    pub integrand: BuiltinIntegrand,
    /// Total mixed-rule order; default `m` plus the cardinality of the best
    /// gap-uniformity subset of the discarded nodes.
    #[serde(default)]
    pub r: Option<usize>,
    /// Mixed-rule window shift; default `⌊(r−1)/2⌋`.
    #[serde(default)]
    pub p: Option<i64>,
    /// Interpolatory window shift; default `⌊(m−1)/2⌋`.
    #[serde(default)]
    pub p_tilde: Option<i64>,
    /// Regression functional; default minimizes the true residual.
    #[serde(default)]
    pub weighting: LsWeighting,
    /// Reference-oracle accuracy; default [`DEFAULT_REFERENCE_ACCURACY`].
    #[serde(default)]
    pub accuracy: Option<f64>,
    /// Subset-enumeration budget when `r` is derived; default 2²⁰.
    #[serde(default)]
    pub budget: Option<u64>,
}

/// Config for [`run_hermite_compare`].
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct HermiteCompareConfig {
    /// Measure parameter.
    pub q: f64,
    /// Grid size.
    pub n: usize,
    /// Para-orthogonal degree (number of interpolation nodes).
    pub m: usize,
    /// Grid anchor; default 0.
    #[serde(default)]
    pub theta0: AngleSpec,
    /// Integrand (must provide derivatives — the step integrand refuses).
    pub integrand: BuiltinIntegrand,
    /// Hermite order `r`: `r − m` nodes get a doubled (value + derivative)
    /// interpolation condition.
    pub r: usize,
    /// ChaCha seed for the derivative placement.
    pub seed: u64,
    /// Hermite window shift; default `⌊(r−1)/2⌋`.
    #[serde(default)]
    pub p: Option<i64>,
    /// Lagrange window shift; default `⌊(m−1)/2⌋`.
    #[serde(default)]
    pub p_tilde: Option<i64>,
}

// ---------------------------------------------------------------------------
// Driver outputs
// ---------------------------------------------------------------------------

/// How a driver run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// Everything computed to specification.
    Ok,
    /// The run produced a usable but incomplete report (e.g. the reference
    /// oracle stalled); the message says what is missing. The CLI maps this
    /// to the numerical-failure exit code after printing the report.
    Partial(String),
}

/// One driver run, rendered every way the CLI can emit it.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    /// Structured report (stable key order, native floats).
    pub json: Value,
    /// Tabular report; 15-significant-digit cells.
    pub csv: String,
    /// Node-geometry scatter, when the driver has geometry to show.
    pub svg: Option<String>,
    /// Completion status.
    pub status: RunStatus,
}

/// Runs any experiment config through its driver.
///
/// # Errors
///
/// Validation errors (`Domain`, …) for inconsistent configs; numerical
/// errors propagated from the pipeline.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    match config {
        ExperimentConfig::Mtable(c) => run_mtable(c),
        ExperimentConfig::Nodes(c) => run_nodes(c),
        ExperimentConfig::Weights(c) => run_weights(c),
        ExperimentConfig::Integrate(c) => run_integrate(c),
        ExperimentConfig::HermiteCompare(c) => run_hermite_compare(c),
    }
}

/// Parses a TOML experiment config.
///
/// # Errors
///
/// `Domain` with the parser's line-and-column message on malformed input.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).map_err(|e| Error::Domain(format!("config parse error: {e}")))
}

// ---------------------------------------------------------------------------
// mtable
// ---------------------------------------------------------------------------

/// Sweeps `max_m` over a `(q, N)` grid (rows parallelized; output in input
/// order).
///
/// # Errors
///
/// `Domain` for an empty sweep; `InvalidMeasure` for `q ∉ (0, 1)`.
pub fn run_mtable(cfg: &MtableConfig) -> Result<ExperimentOutput> {
    let theta0 = cfg.theta0.radians()?;
    if cfg.qs.is_empty() || cfg.ns.is_empty() {
        return Err(Error::Domain("mtable sweep needs at least one q and one N".into()));
    }
    let cells: Vec<(f64, usize)> = cfg
        .qs
        .iter()
        .flat_map(|&q| cfg.ns.iter().map(move |&n| (q, n)))
        .collect();
    let results: Vec<(f64, usize, usize)> = cells
        .par_iter()
        .map(|&(q, n)| -> Result<(f64, usize, usize)> {
            let mu = MeasureSpec::rogers_szego(q)?;
            let ncfg = max_m(&mu, n, theta0)?;
            Ok((q, n, ncfg.m))
        })
        .collect::<Result<Vec<_>>>()?;

    let headers = ["q", "n", "m_max"].map(String::from);
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|&(q, n, m)| vec![fmt_g(q), n.to_string(), m.to_string()])
        .collect();
    let json = json!({
        "kind": "mtable",
        "theta0": theta0,
        "rows": results
            .iter()
            .map(|&(q, n, m)| json!({"q": q, "n": n, "m_max": m}))
            .collect::<Vec<_>>(),
    });
    Ok(ExperimentOutput {
        json,
        csv: csv_string(&headers, &rows)?,
        svg: None,
        status: RunStatus::Ok,
    })
}

// ---------------------------------------------------------------------------
// nodes
// ---------------------------------------------------------------------------

/// Builds the node configuration (grid, anchored zeros, mimic selection)
/// and, when at least three nodes are discarded, the gap-uniformity-optimal
/// subset of the discarded nodes.
///
/// # Errors
///
/// Propagates configuration errors; `Domain` when a pinned `m` is
/// infeasible on the grid.
pub fn run_nodes(cfg: &NodesConfig) -> Result<ExperimentOutput> {
    let theta0 = cfg.theta0.radians()?;
    let mu = MeasureSpec::rogers_szego(cfg.q)?;
    let ncfg = match cfg.m {
        Some(m) => configuration(&mu, cfg.n, m, theta0)?,
        None => max_m(&mu, cfg.n, theta0)?,
    };
    let discarded = ncfg.discarded_indices();
    let sub = subpartition_of_discarded(&ncfg, cfg.budget.unwrap_or(SUBPARTITION_BUDGET))?;
    let sub_grid: Vec<usize> = sub
        .as_ref()
        .map(|s| s.indices.iter().map(|&i| discarded[i]).collect())
        .unwrap_or_default();

    let headers = ["role", "index", "theta", "re", "im", "subpartition"].map(String::from);
    let mut rows = Vec::with_capacity(cfg.n + ncfg.m);
    for (j, node) in ncfg.grid.iter().enumerate() {
        let role = if ncfg.selected_indices.contains(&j) {
            "selected"
        } else {
            "discarded"
        };
        rows.push(vec![
            role.to_string(),
            j.to_string(),
            fmt_g(node.theta),
            fmt_g(node.z.re),
            fmt_g(node.z.im),
            u8::from(sub_grid.contains(&j)).to_string(),
        ]);
    }
    for (k, zero) in ncfg.zeros.iter().enumerate() {
        rows.push(vec![
            "zero".to_string(),
            k.to_string(),
            fmt_g(zero.theta),
            fmt_g(zero.z.re),
            fmt_g(zero.z.im),
            "0".to_string(),
        ]);
    }

    let json = json!({
        "kind": "nodes",
        "q": cfg.q,
        "n": ncfg.n,
        "m": ncfg.m,
        "m_source": if cfg.m.is_some() { "config" } else { "max" },
        "theta0": theta0,
        "tau": json_complex(ncfg.tau),
        "grid": ncfg.grid.iter().enumerate().map(|(j, u)| json!({
            "index": j,
            "theta": u.theta,
            "z": json_complex(u.z),
            "role": if ncfg.selected_indices.contains(&j) { "selected" } else { "discarded" },
        })).collect::<Vec<_>>(),
        "zeros": ncfg.zeros.iter().enumerate().map(|(k, u)| json!({
            "index": k,
            "theta": u.theta,
            "z": json_complex(u.z),
        })).collect::<Vec<_>>(),
        "selected_indices": ncfg.selected_indices,
        "discarded_indices": discarded,
        "subpartition": sub.as_ref().map(|s| json!({
            "grid_indices": sub_grid,
            "k_value": s.k_value,
            "cardinality": s.cardinality,
            "exhaustive": s.exhaustive,
        })),
    });

    let svg = svg_scatter(
        &format!(
            "nodes: q={} N={} m={} theta0={}",
            fmt_g(cfg.q),
            ncfg.n,
            ncfg.m,
            fmt_g(theta0)
        ),
        &node_series(&ncfg, &sub_grid),
    );

    Ok(ExperimentOutput {
        json,
        csv: csv_string(&headers, &rows)?,
        svg: Some(svg),
        status: RunStatus::Ok,
    })
}

/// Gap-uniformity subset of the discarded nodes, or `None` when fewer than
/// three nodes were discarded.
fn subpartition_of_discarded(
    ncfg: &NodeConfiguration,
    budget: u64,
) -> Result<Option<Subpartition>> {
    let angles: Vec<f64> = ncfg.discarded_nodes().iter().map(|u| u.theta).collect();
    if angles.len() < 3 {
        return Ok(None);
    }
    best_subpartition(&angles, budget).map(Some)
}

/// Scatter series for the node figure: discarded grid (gray rings),
/// selected grid (blue disks), zeros (red disks), subset overlay (orange
/// rings).
fn node_series(ncfg: &NodeConfiguration, sub_grid: &[usize]) -> Vec<ScatterSeries> {
    let pts = |idx: &[usize]| -> Vec<(f64, f64)> {
        idx.iter().map(|&j| (ncfg.grid[j].z.re, ncfg.grid[j].z.im)).collect()
    };
    let discarded = ncfg.discarded_indices();
    vec![
        ScatterSeries {
            label: "discarded".into(),
            color: "#9aa0a6".into(),
            points: pts(&discarded),
            radius: 6.0,
            filled: false,
        },
        ScatterSeries {
            label: "selected".into(),
            color: "#1a73e8".into(),
            points: pts(&ncfg.selected_indices),
            radius: 6.0,
            filled: true,
        },
        ScatterSeries {
            label: "zeros".into(),
            color: "#d93025".into(),
            points: ncfg.zeros.iter().map(|u| (u.z.re, u.z.im)).collect(),
            radius: 3.0,
            filled: true,
        },
        ScatterSeries {
            label: "subpartition".into(),
            color: "#f9ab00".into(),
            points: pts(sub_grid),
            radius: 10.0,
            filled: false,
        },
    ]
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

/// Emits one weight family as a node/weight table.
///
/// # Errors
///
/// `Domain` for exponents violating `r + s + 1 = N` or a bad `ε`;
/// propagates configuration errors in `mimic` mode.
pub fn run_weights(cfg: &WeightsConfig) -> Result<ExperimentOutput> {
    let theta0 = cfg.theta0.radians()?;
    let mu = MeasureSpec::rogers_szego(cfg.q)?;

    // (rule, node angles, mode-specific JSON details)
    let (rule, thetas, detail): (QuadratureRule, Vec<f64>, Value) = match cfg.mode {
        WeightsMode::Uniform => {
            let r_exp = cfg.r_exp.unwrap_or((cfg.n / 2) as i64);
            let s_exp = cfg.s_exp.unwrap_or(cfg.n as i64 - 1 - r_exp);
            let rule = interpolatory_weights_uniform(&mu, cfg.n, r_exp, s_exp, theta0)?;
            let thetas = crate::paraorth::uniform_grid(cfg.n, theta0)?
                .iter()
                .map(|u| u.theta)
                .collect();
            (rule, thetas, json!({"r_exp": r_exp, "s_exp": s_exp}))
        }
        WeightsMode::Cmv => {
            let eps = cfg.eps.unwrap_or(1);
            let rule = cmv_weights_closed(&mu, cfg.n, theta0, eps)?;
            let thetas = crate::paraorth::uniform_grid(cfg.n, theta0)?
                .iter()
                .map(|u| u.theta)
                .collect();
            (rule, thetas, json!({"eps": eps}))
        }
        WeightsMode::Mimic => {
            let ncfg = match cfg.m {
                Some(m) => configuration(&mu, cfg.n, m, theta0)?,
                None => max_m(&mu, cfg.n, theta0)?,
            };
            let p_tilde = cfg.p_tilde.unwrap_or_else(|| default_p_tilde(ncfg.m));
            let selected = ncfg.selected_nodes();
            let sel_z: Vec<C64> = selected.iter().map(|u| u.z).collect();
            let rule = rule_on_mimic_nodes(&mu, &sel_z, p_tilde)?;
            let thetas = selected.iter().map(|u| u.theta).collect();
            (
                rule,
                thetas,
                json!({
                    "m": ncfg.m,
                    "p_tilde": p_tilde,
                    "selected_indices": ncfg.selected_indices,
                    "tau": json_complex(ncfg.tau),
                }),
            )
        }
    };

    let headers =
        ["index", "theta", "node_re", "node_im", "weight_re", "weight_im"].map(String::from);
    let rows: Vec<Vec<String>> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .zip(&thetas)
        .enumerate()
        .map(|(j, ((z, w), &th))| {
            vec![
                j.to_string(),
                fmt_g(th),
                fmt_g(z.re),
                fmt_g(z.im),
                fmt_g(w.re),
                fmt_g(w.im),
            ]
        })
        .collect();

    let mode_name = match cfg.mode {
        WeightsMode::Uniform => "uniform",
        WeightsMode::Cmv => "cmv",
        WeightsMode::Mimic => "mimic",
    };
    let json = json!({
        "kind": "weights",
        "mode": mode_name,
        "q": cfg.q,
        "n": cfg.n,
        "theta0": theta0,
        "detail": detail,
        "validity": {"lo": rule.validity.0, "hi": rule.validity.1},
        "weight_sum": json_complex(rule.weight_sum()),
        "rows": rule.nodes.iter().zip(&rule.weights).zip(&thetas).enumerate().map(
            |(j, ((z, w), &th))| json!({
                "index": j,
                "theta": th,
                "node": json_complex(*z),
                "weight": json_complex(*w),
            })
        ).collect::<Vec<_>>(),
    });

    Ok(ExperimentOutput {
        json,
        csv: csv_string(&headers, &rows)?,
        svg: None,
        status: RunStatus::Ok,
    })
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

/// Runs the three-rule integration comparison on one configuration:
///
/// 1. the closed-form interpolatory rule on the full `N`-node grid,
/// 2. the interpolatory rule on the `m` mimic nodes, and
/// 3. the mixed interpolation–regression rule of order `r`,
///
/// each applied to the configured integrand and compared against the
/// reference oracle.
///
/// When the oracle stalls ([`Error::NoConvergence`]), the run still returns
/// the three rule values plus the oracle's best estimate and gap, with
/// [`RunStatus::Partial`] so the CLI can exit with the numerical-failure
/// code after printing the partial report.
///
/// # Errors
///
/// `Domain` for violations of `0 < m ≤ r ≤ N`; propagates pipeline errors
/// other than the oracle's `NoConvergence`.
pub fn run_integrate(cfg: &IntegrateConfig) -> Result<ExperimentOutput> {
    let theta0 = cfg.theta0.radians()?;
    let mu = MeasureSpec::rogers_szego(cfg.q)?;
    let f = cfg.integrand;
    let accuracy = cfg.accuracy.unwrap_or(DEFAULT_REFERENCE_ACCURACY);
    let ncfg = configuration(&mu, cfg.n, cfg.m, theta0)?;

    // Total order: pinned, or m plus the best-subset cardinality.
    let (r, r_source, sub) = match cfg.r {
        Some(r) => (r, "config", None),
        None => {
            let sub = subpartition_of_discarded(&ncfg, cfg.budget.unwrap_or(SUBPARTITION_BUDGET))?;
            let extra = sub.as_ref().map_or(0, |s| s.cardinality);
            (cfg.m + extra, "subpartition", sub)
        }
    };
    if !(0 < cfg.m && cfg.m <= r && r <= cfg.n) {
        return Err(Error::Domain(format!(
            "order chain violated: need 0 < m ≤ r ≤ N, got m = {}, r = {r}, N = {}",
            cfg.m, cfg.n
        )));
    }
    let p = cfg.p.unwrap_or((r as i64 - 1) / 2);
    let p_tilde = cfg.p_tilde.unwrap_or_else(|| default_p_tilde(cfg.m));

    // Rule 1: full uniform grid, balanced exactness window.
    let r_exp = (cfg.n / 2) as i64;
    let s_exp = cfg.n as i64 - 1 - r_exp;
    let uniform = interpolatory_weights_uniform(&mu, cfg.n, r_exp, s_exp, theta0)?;
    let i_uniform = uniform.apply(&f)?;

    // Rule 2: interpolatory on the mimic nodes.
    let sel_z: Vec<C64> = ncfg.selected_nodes().iter().map(|u| u.z).collect();
    let mimic = rule_on_mimic_nodes(&mu, &sel_z, p_tilde)?;
    let i_mimic = mimic.apply(&f)?;

    // Rule 3: mixed interpolation–regression.
    let mixed = mixed_rule(&mu, &ncfg, &f, r, p, p_tilde, cfg.weighting)?;

    let (reference, partial) = match reference_integral(&mu, &f, accuracy) {
        Ok(v) => (Some(v), None),
        Err(Error::NoConvergence { best, gap }) => (None, Some((best, gap))),
        Err(e) => return Err(e),
    };
    let errors = reference.map(|refv| {
        (
            (i_uniform - refv).norm(),
            (i_mimic - refv).norm(),
            (mixed.value - refv).norm(),
        )
    });

    let headers =
        ["q", "n", "m", "r", "error1", "error2", "error3", "reference_re", "reference_im", "status"]
            .map(String::from);
    let row = vec![
        fmt_g(cfg.q),
        cfg.n.to_string(),
        cfg.m.to_string(),
        r.to_string(),
        errors.map_or(String::new(), |e| fmt_g(e.0)),
        errors.map_or(String::new(), |e| fmt_g(e.1)),
        errors.map_or(String::new(), |e| fmt_g(e.2)),
        reference.map_or(String::new(), |v| fmt_g(v.re)),
        reference.map_or(String::new(), |v| fmt_g(v.im)),
        if partial.is_none() { "ok" } else { "no-convergence" }.to_string(),
    ];

    let json = json!({
        "kind": "integrate",
        "q": cfg.q,
        "n": cfg.n,
        "m": cfg.m,
        "r": r,
        "r_source": r_source,
        "p": p,
        "p_tilde": p_tilde,
        "weighting": serde_json::to_value(cfg.weighting).expect("enum serializes"),
        "integrand": serde_json::to_value(f).expect("enum serializes"),
        "theta0": theta0,
        "tau": json_complex(ncfg.tau),
        "accuracy": accuracy,
        "values": {
            "uniform": json_complex(i_uniform),
            "mimic": json_complex(i_mimic),
            "mixed": json_complex(mixed.value),
            "interp_part": json_complex(mixed.interp_value),
        },
        "reference": reference.map(json_complex),
        "errors": errors.map(|e| json!({"error1": e.0, "error2": e.1, "error3": e.2})),
        "oracle_best": partial.map(|(best, _)| json_complex(best)),
        "oracle_gap": partial.map(|(_, gap)| gap),
        "subpartition": sub.as_ref().map(|s| json!({
            "k_value": s.k_value,
            "cardinality": s.cardinality,
            "exhaustive": s.exhaustive,
        })),
        "status": if partial.is_none() { "ok" } else { "no-convergence" },
    });

    Ok(ExperimentOutput {
        json,
        csv: csv_string(&headers, &[row])?,
        svg: None,
        status: match partial {
            None => RunStatus::Ok,
            Some((_, gap)) => RunStatus::Partial(format!(
                "reference oracle stalled with successive-refinement gap {gap:.3e}"
            )),
        },
    })
}

// ---------------------------------------------------------------------------
// hermite-compare
// ---------------------------------------------------------------------------

/// Compares Hermite and Lagrange interpolation error in the discrete
/// 2-norm over the discarded nodes. The `r − m` doubled nodes (value +
/// first derivative) are drawn without replacement from the selected nodes
/// by a ChaCha stream seeded from the config.
///
/// # Errors
///
/// `Domain` for violations of `0 < m ≤ r ≤ N` or `r > 2m`;
/// `DerivativeUnavailable` for integrands without derivatives.
pub fn run_hermite_compare(cfg: &HermiteCompareConfig) -> Result<ExperimentOutput> {
    let theta0 = cfg.theta0.radians()?;
    let mu = MeasureSpec::rogers_szego(cfg.q)?;
    let f = cfg.integrand;
    if !(0 < cfg.m && cfg.m <= cfg.r && cfg.r <= cfg.n) {
        return Err(Error::Domain(format!(
            "order chain violated: need 0 < m ≤ r ≤ N, got m = {}, r = {}, N = {}",
            cfg.m, cfg.r, cfg.n
        )));
    }
    if cfg.r > 2 * cfg.m {
        return Err(Error::Domain(format!(
            "r = {} asks for {} doubled nodes but only m = {} nodes exist",
            cfg.r,
            cfg.r - cfg.m,
            cfg.m
        )));
    }
    let ncfg = configuration(&mu, cfg.n, cfg.m, theta0)?;
    let selected: Vec<C64> = ncfg.selected_nodes().iter().map(|u| u.z).collect();
    let discarded: Vec<C64> = ncfg.discarded_nodes().iter().map(|u| u.z).collect();

    let p_tilde = cfg.p_tilde.unwrap_or_else(|| default_p_tilde(cfg.m));
    let p = cfg.p.unwrap_or((cfg.r as i64 - 1) / 2);

    let doubled = choose_doubled(cfg.m, cfg.r - cfg.m, cfg.seed);
    let mut multiplicities = vec![1u32; cfg.m];
    for &k in &doubled {
        multiplicities[k] = 2;
    }
    let values: Vec<Vec<C64>> = selected
        .iter()
        .zip(&multiplicities)
        .map(|(&z, &nu)| -> Result<Vec<C64>> {
            let mut jet = vec![f.value(z)];
            if nu == 2 {
                jet.push(f.derivative(z, 1)?);
            }
            Ok(jet)
        })
        .collect::<Result<Vec<_>>>()?;

    let hermite = hermite_laurent(&HermiteData::new(
        selected.clone(),
        multiplicities.clone(),
        values,
        p,
    )?)?;
    let f_selected: Vec<C64> = selected.iter().map(|&z| f.value(z)).collect();
    let lagrange = lagrange_laurent(&selected, &f_selected, p_tilde)?;

    let mut herm_sq = 0.0;
    let mut lagr_sq = 0.0;
    for &z in &discarded {
        let fv = f.value(z);
        herm_sq += (fv - hermite.eval(z)?).norm_sqr();
        lagr_sq += (fv - lagrange.eval(z)?).norm_sqr();
    }
    let hermite_err = herm_sq.sqrt();
    let lagrange_err = lagr_sq.sqrt();

    let headers =
        ["q", "n", "m", "r", "seed", "lagrange_err", "hermite_err", "hermite_improves"]
            .map(String::from);
    let row = vec![
        fmt_g(cfg.q),
        cfg.n.to_string(),
        cfg.m.to_string(),
        cfg.r.to_string(),
        cfg.seed.to_string(),
        fmt_g(lagrange_err),
        fmt_g(hermite_err),
        u8::from(hermite_err < lagrange_err).to_string(),
    ];

    let json = json!({
        "kind": "hermite-compare",
        "q": cfg.q,
        "n": cfg.n,
        "m": cfg.m,
        "r": cfg.r,
        "seed": cfg.seed,
        "p": p,
        "p_tilde": p_tilde,
        "integrand": serde_json::to_value(f).expect("enum serializes"),
        "theta0": theta0,
        "doubled_indices": doubled,
        "lagrange_err": lagrange_err,
        "hermite_err": hermite_err,
        "hermite_improves": hermite_err < lagrange_err,
    });

    Ok(ExperimentOutput {
        json,
        csv: csv_string(&headers, &[row])?,
        svg: None,
        status: RunStatus::Ok,
    })
}

/// Draws `count` distinct indices from `0..m` by a partial Fisher–Yates
/// shuffle of a ChaCha8 stream; returns them sorted ascending.
fn choose_doubled(m: usize, count: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let j = rng.gen_range(i..m);
        idx.swap(i, j);
    }
    let mut chosen = idx[..count].to_vec();
    chosen.sort_unstable();
    chosen
}

// ---------------------------------------------------------------------------
// reproduce-all
// ---------------------------------------------------------------------------

/// Summary of a [`reproduce_all`] sweep.
#[derive(Clone, Debug)]
pub struct ReproduceReport {
    /// One human-readable line per config, in filename order.
    pub lines: Vec<String>,
    /// How many runs ended [`RunStatus::Partial`].
    pub partial: usize,
}

/// Runs every `*.toml` config under `config_dir` (filename order) and
/// writes `<stem>.csv`, `<stem>.json`, and — when the driver produces
/// geometry — `<stem>.svg` under `out_dir`.
///
/// # Errors
///
/// `Domain` for an unreadable directory, no configs, or a malformed config
/// (message names the file); propagates the first driver error.
pub fn reproduce_all(config_dir: &Path, out_dir: &Path) -> Result<ReproduceReport> {
    let mut paths: Vec<_> = fs::read_dir(config_dir)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", config_dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "toml"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::Domain(format!(
            "no .toml experiment configs under {}",
            config_dir.display()
        )));
    }
    fs::create_dir_all(out_dir)
        .map_err(|e| Error::Domain(format!("cannot create {}: {e}", out_dir.display())))?;

    let mut lines = Vec::with_capacity(paths.len());
    let mut partial = 0usize;
    for path in &paths {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("experiment")
            .to_string();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
        let config = parse_config(&text)
            .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
        let output = run(&config).map_err(|e| match e {
            // Keep validation/numerical classification; just add the file name.
            Error::Domain(msg) => Error::Domain(format!("{}: {msg}", path.display())),
            other => other,
        })?;

        let write = |name: &str, data: &str| -> Result<()> {
            fs::write(out_dir.join(name), data)
                .map_err(|e| Error::Domain(format!("cannot write {name}: {e}")))
        };
        write(&format!("{stem}.csv"), &output.csv)?;
        write(
            &format!("{stem}.json"),
            &format!("{}\n", serde_json::to_string_pretty(&output.json).expect("valid JSON")),
        )?;
        let mut formats = String::from("csv, json");
        if let Some(svg) = &output.svg {
            write(&format!("{stem}.svg"), svg)?;
            formats.push_str(", svg");
        }
        match &output.status {
            RunStatus::Ok => lines.push(format!("{stem}: ok ({formats})")),
            RunStatus::Partial(msg) => {
                partial += 1;
                lines.push(format!("{stem}: partial — {msg} ({formats})"));
            }
        }
    }
    Ok(ReproduceReport { lines, partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn angle_parser_accepts_floats_and_pi_expressions() {
        for (text, want) in [
            ("0", 0.0),
            ("1.25", 1.25),
            ("-0.5", -0.5),
            ("pi", PI),
            ("pi/6", PI / 6.0),
            ("5*pi/6", 5.0 * PI / 6.0),
            ("11*pi/6", 11.0 * PI / 6.0),
            ("-pi/4", -PI / 4.0),
            ("4 * pi / 3", 4.0 * PI / 3.0),
            ("2pi", 2.0 * PI), // bare multiplier without '*' is rejected below
        ] {
            if text == "2pi" {
                assert!(parse_angle(text).is_err(), "{text} should be rejected");
                continue;
            }
            assert_abs_diff_eq!(parse_angle(text).unwrap(), want, epsilon = 0.0);
        }
        for text in ["", "tau/2", "pi/0", "inf", "nan", "x*pi"] {
            assert!(parse_angle(text).is_err(), "{text:?} should be rejected");
        }
    }

    #[test]
    fn config_kind_dispatch_parses_each_variant() {
        let mtable: ExperimentConfig =
            parse_config("kind = \"mtable\"\nqs = [0.5]\nns = [6]\n").unwrap();
        assert!(matches!(mtable, ExperimentConfig::Mtable(_)));
        let nodes: ExperimentConfig =
            parse_config("kind = \"nodes\"\nq = 0.5\nn = 8\ntheta0 = \"pi/4\"\n").unwrap();
        assert!(matches!(nodes, ExperimentConfig::Nodes(_)));
        let weights: ExperimentConfig =
            parse_config("kind = \"weights\"\nq = 0.5\nn = 8\nmode = \"uniform\"\n").unwrap();
        assert!(matches!(weights, ExperimentConfig::Weights(_)));
        let integrate: ExperimentConfig = parse_config(
            "kind = \"integrate\"\nq = 0.5\nn = 10\nm = 5\nintegrand = \"exp\"\nweighting = \"transformed\"\n",
        )
        .unwrap();
        assert!(matches!(integrate, ExperimentConfig::Integrate(_)));
        let hermite: ExperimentConfig = parse_config(
            "kind = \"hermite-compare\"\nq = 0.5\nn = 10\nm = 5\nr = 7\nseed = 42\nintegrand = \"exp-half\"\n",
        )
        .unwrap();
        assert!(matches!(hermite, ExperimentConfig::HermiteCompare(_)));

        assert!(parse_config("kind = \"unknown\"\n").is_err());
        assert!(parse_config("qs = [0.5]\n").is_err());
    }

    #[test]
    fn mtable_driver_matches_direct_max_m() {
        let cfg = MtableConfig {
            qs: vec![0.5, 0.8],
            ns: vec![5, 10],
            theta0: mtable_default_theta0(),
        };
        let out = run_mtable(&cfg).unwrap();
        assert_eq!(out.status, RunStatus::Ok);
        let rows = out.json["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows {
            let q = row["q"].as_f64().unwrap();
            let n = row["n"].as_u64().unwrap() as usize;
            let mu = MeasureSpec::rogers_szego(q).unwrap();
            let want = max_m(&mu, n, PI / 6.0).unwrap().m;
            assert_eq!(row["m_max"].as_u64().unwrap() as usize, want);
        }
        // Row order is qs-major, ns-minor regardless of the parallel split.
        assert_eq!(rows[0]["q"].as_f64().unwrap(), 0.5);
        assert_eq!(rows[0]["n"].as_u64().unwrap(), 5);
        assert_eq!(rows[3]["q"].as_f64().unwrap(), 0.8);
        assert_eq!(rows[3]["n"].as_u64().unwrap(), 10);
    }

    #[test]
    fn nodes_driver_emits_all_roles_and_is_deterministic() {
        let cfg = NodesConfig {
            q: 0.7,
            n: 14,
            theta0: AngleSpec::Radians(0.0),
            m: Some(6),
            budget: None,
        };
        let a = run_nodes(&cfg).unwrap();
        let b = run_nodes(&cfg).unwrap();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.json, b.json);
        assert_eq!(a.svg, b.svg);

        let grid = a.json["grid"].as_array().unwrap();
        assert_eq!(grid.len(), 14);
        let selected = grid.iter().filter(|g| g["role"] == "selected").count();
        assert_eq!(selected, 6);
        assert_eq!(a.json["zeros"].as_array().unwrap().len(), 6);
        // Grid + zero rows, each with six CSV columns.
        assert_eq!(a.csv.lines().count(), 1 + 14 + 6);
        // The reference geometry for this configuration: a 4-element subset
        // with gap ratio 4/3.
        let sub = &a.json["subpartition"];
        assert_eq!(sub["cardinality"].as_u64().unwrap(), 4);
        assert_abs_diff_eq!(sub["k_value"].as_f64().unwrap(), 4.0 / 3.0, epsilon = 1e-12);
        assert!(a.svg.as_deref().unwrap().contains("subpartition"));
    }

    #[test]
    fn weights_driver_sums_to_one_in_every_mode() {
        for mode in [WeightsMode::Uniform, WeightsMode::Cmv, WeightsMode::Mimic] {
            let cfg = WeightsConfig {
                q: 0.8,
                n: 12,
                theta0: AngleSpec::Expression("pi/3".into()),
                mode,
                r_exp: None,
                s_exp: None,
                eps: None,
                m: Some(6),
                p_tilde: None,
            };
            let out = run_weights(&cfg).unwrap();
            let ws = &out.json["weight_sum"];
            assert_abs_diff_eq!(ws["re"].as_f64().unwrap(), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(ws["im"].as_f64().unwrap(), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn integrate_driver_is_exact_on_the_constant_integrand() {
        let cfg = IntegrateConfig {
            q: 0.6,
            n: 12,
            m: 6,
            theta0: AngleSpec::Radians(0.0),
            integrand: BuiltinIntegrand::One,
            r: None,
            p: None,
            p_tilde: None,
            weighting: LsWeighting::default(),
            accuracy: None,
            budget: None,
        };
        let out = run_integrate(&cfg).unwrap();
        assert_eq!(out.status, RunStatus::Ok);
        let errors = &out.json["errors"];
        for key in ["error1", "error2", "error3"] {
            assert!(
                errors[key].as_f64().unwrap() < 1e-12,
                "{key} = {} not exact on F ≡ 1",
                errors[key]
            );
        }
        assert_eq!(out.json["r_source"], "subpartition");
        assert_eq!(out.json["status"], "ok");
    }

    #[test]
    fn integrate_driver_returns_partial_report_when_oracle_stalls() {
        // A pole at |α| ≈ 0.943: the smooth oracle's contour samples blow
        // up and node escalation cannot meet any reasonable accuracy.
        let cfg = IntegrateConfig {
            q: 0.9,
            n: 10,
            m: 4,
            theta0: AngleSpec::Radians(0.0),
            integrand: BuiltinIntegrand::PoleNear,
            r: Some(6),
            p: None,
            p_tilde: None,
            weighting: LsWeighting::default(),
            accuracy: Some(1e-12),
            budget: None,
        };
        let out = run_integrate(&cfg).unwrap();
        assert!(matches!(out.status, RunStatus::Partial(_)));
        assert_eq!(out.json["status"], "no-convergence");
        assert!(out.json["errors"].is_null());
        assert!(out.json["reference"].is_null());
        assert!(out.json["oracle_gap"].as_f64().unwrap() > 0.0);
        // The rule values themselves are still reported.
        assert!(out.json["values"]["mixed"]["re"].as_f64().unwrap().is_finite());
        assert!(out.csv.contains("no-convergence"));
    }

    #[test]
    fn hermite_compare_is_seeded_and_reduces_to_lagrange_at_r_eq_m() {
        let base = HermiteCompareConfig {
            q: 0.5,
            n: 30,
            m: 15,
            theta0: AngleSpec::Radians(0.0),
            integrand: BuiltinIntegrand::ExpHalf,
            r: 19,
            seed: 7,
            p: None,
            p_tilde: None,
        };
        let a = run_hermite_compare(&base).unwrap();
        let b = run_hermite_compare(&base).unwrap();
        assert_eq!(a.json, b.json, "same seed must reproduce the report");
        assert_eq!(a.json["doubled_indices"].as_array().unwrap().len(), 4);

        let other = HermiteCompareConfig { seed: 8, ..base.clone() };
        let c = run_hermite_compare(&other).unwrap();
        assert_ne!(
            a.json["doubled_indices"], c.json["doubled_indices"],
            "different seeds should move the derivative placement"
        );

        // r = m with matching windows: no derivative slots, so the two
        // interpolants coincide. The error norms agree to roundoff only
        // (backward recursion vs direct deflation evaluate differently),
        // hence the loose absolute gate well under the ~4e−6 error scale.
        let degenerate = HermiteCompareConfig {
            r: 15,
            p: Some(7),
            p_tilde: Some(7),
            ..base
        };
        let d = run_hermite_compare(&degenerate).unwrap();
        assert_abs_diff_eq!(
            d.json["lagrange_err"].as_f64().unwrap(),
            d.json["hermite_err"].as_f64().unwrap(),
            epsilon = 1e-9
        );

        // The step integrand has no derivatives to place.
        let step = HermiteCompareConfig {
            integrand: BuiltinIntegrand::StepF2,
            ..degenerate.clone()
        };
        let err = run_hermite_compare(&HermiteCompareConfig { r: 16, ..step }).unwrap_err();
        assert!(matches!(err, Error::DerivativeUnavailable(_)));
    }

    #[test]
    fn choose_doubled_draws_distinct_sorted_indices() {
        for seed in 0..20 {
            let picked = choose_doubled(10, 4, seed);
            assert_eq!(picked.len(), 4);
            assert!(picked.windows(2).all(|w| w[0] < w[1]));
            assert!(picked.iter().all(|&k| k < 10));
        }
        assert!(choose_doubled(10, 0, 3).is_empty());
    }

    #[test]
    fn reproduce_all_writes_outputs_and_reports_in_filename_order() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_dir = dir.path().join("experiments");
        let out_dir = dir.path().join("out");
        fs::create_dir_all(&cfg_dir).unwrap();
        fs::write(
            cfg_dir.join("b_weights.toml"),
            "kind = \"weights\"\nq = 0.5\nn = 8\nmode = \"cmv\"\n",
        )
        .unwrap();
        fs::write(
            cfg_dir.join("a_mtable.toml"),
            "kind = \"mtable\"\nqs = [0.5]\nns = [6]\n",
        )
        .unwrap();
        let report = reproduce_all(&cfg_dir, &out_dir).unwrap();
        assert_eq!(report.partial, 0);
        assert_eq!(report.lines.len(), 2);
        assert!(report.lines[0].starts_with("a_mtable: ok"));
        assert!(report.lines[1].starts_with("b_weights: ok"));
        for name in ["a_mtable.csv", "a_mtable.json", "b_weights.csv", "b_weights.json"] {
            assert!(out_dir.join(name).exists(), "{name} missing");
        }

        // Re-run must be byte-identical.
        let csv1 = fs::read(out_dir.join("a_mtable.csv")).unwrap();
        let json1 = fs::read(out_dir.join("b_weights.json")).unwrap();
        reproduce_all(&cfg_dir, &out_dir).unwrap();
        assert_eq!(csv1, fs::read(out_dir.join("a_mtable.csv")).unwrap());
        assert_eq!(json1, fs::read(out_dir.join("b_weights.json")).unwrap());

        // A malformed config fails with the file named.
        fs::write(cfg_dir.join("c_bad.toml"), "kind = \"mtable\"\nqs = \"oops\"\n").unwrap();
        let err = reproduce_all(&cfg_dir, &out_dir).unwrap_err();
        assert!(matches!(err, Error::Domain(ref msg) if msg.contains("c_bad.toml")));

        // An empty directory is a validation error.
        let empty = dir.path().join("empty");
        fs::create_dir_all(&empty).unwrap();
        assert!(matches!(
            reproduce_all(&empty, &out_dir),
            Err(Error::Domain(_))
        ));
    }
}
