//! C ABI for the circle-quadrature core.
//!
//! The surface mirrors the library's construction pipeline: build a measure
//! handle, derive a node configuration (grid + para-orthogonal zeros + mimic
//! selection), then ask for weights, reference values, or the mixed
//! interpolation–regression rule. Handles are opaque; everything crosses the
//! boundary as plain C scalars, `CqComplex` pairs, or caller-allocated
//! buffers whose lengths are validated against the handle.
//!
//! # Conventions
//!
//! * Every fallible call returns a [`CqStatus`]; `CQ_STATUS_OK` is `0`. The
//!   other codes mirror the CLI's exit codes: `2` for argument/validation
//!   errors, `3` for numerical failures (zero finding, rank collapse,
//!   reference-oracle stall). `4` is reserved for caught panics, which
//!   indicate a library bug rather than a caller mistake.
//! * On any non-zero status the thread-local message retrieved by
//!   [`cq_last_error_message`] describes the failure; the pointer stays
//!   valid until the next failing call on the same thread.
//! * Output parameters are written only on `CQ_STATUS_OK`; on failure their
//!   contents are unspecified but never uninitialized reads.
//! * `NULL` handles and wrong buffer lengths are rejected, never
//!   dereferenced; `cq_*_free(NULL)` is a no-op, matching `free(3)`.
//! * No unwinding crosses the boundary: every entry point runs under
//!   `catch_unwind`.
//!
//! The matching header, `include/circlequad.h`, is regenerated by the build
//! script on every compile.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use circlequad::measure::MeasureSpec;
use circlequad::paraorth::{self, NodeConfiguration};
use circlequad::quad::{self, BuiltinIntegrand};
use circlequad::regress::LsWeighting;
use circlequad::{Error, C64};

/// Call status; `CQ_STATUS_OK` is zero, codes `2`/`3` mirror the CLI's
/// validation/numerical exit codes, `4` flags a caught panic.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqStatus {
    Ok = 0,
    InvalidArgument = 2,
    NumericalFailure = 3,
    Panic = 4,
}

/// A complex number as two IEEE-754 doubles.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CqComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for CqComplex {
    fn from(z: C64) -> Self {
        CqComplex { re: z.re, im: z.im }
    }
}

/// Built-in integrand codes for [`cq_reference_integral`] and
/// [`cq_mixed_rule_apply`] (passed as a validated `int32_t`).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqIntegrand {
    /// `F ≡ 1`.
    One = 0,
    /// `e^z`.
    Exp = 1,
    /// `e^{z/2}`.
    ExpHalf = 2,
    /// `1/(z − α)`, `α = 0.8 + 0.5i` (pole hugging the circle).
    PoleNear = 3,
    /// `1/(z − α)`, `α = (1+i)/5` (interior pole).
    PoleInner = 4,
    /// Piecewise-constant step `±10` with jump at `arg z = π/2`.
    StepF2 = 5,
}

/// Regression-functional codes for [`cq_mixed_rule_apply`] (passed as a
/// validated `int32_t`).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CqWeighting {
    /// Minimize the transformed residual (the published numerics).
    Transformed = 0,
    /// Minimize the true discrete residual on the discarded nodes.
    TrueResidual = 1,
}

/// Opaque measure handle (Rogers–Szegő family).
pub struct CqMeasure(MeasureSpec);

/// Opaque node-configuration handle: uniform grid, para-orthogonal zeros,
/// and the mimic selection.
pub struct CqNodeConfig(NodeConfiguration);

// ---------------------------------------------------------------------------
// Error reporting
// ---------------------------------------------------------------------------

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_message(msg: &str) {
    // NUL bytes cannot occur in our error texts; replace defensively anyway.
    let clean = msg.replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).expect("NUL bytes removed");
    });
}

fn invalid(msg: &str) -> CqStatus {
    set_message(msg);
    CqStatus::InvalidArgument
}

fn status_of(e: &Error) -> CqStatus {
    set_message(&e.to_string());
    if e.is_validation() {
        CqStatus::InvalidArgument
    } else {
        CqStatus::NumericalFailure
    }
}

/// Runs an entry-point body, converting any panic into `CQ_STATUS_PANIC`
/// instead of unwinding into the caller.
fn guard(body: impl FnOnce() -> CqStatus) -> CqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_message("internal panic — please report this as a circlequad bug");
            CqStatus::Panic
        }
    }
}

/// Message for the most recent failure on this thread; empty string if no
/// call has failed yet. Valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn cq_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Pointer plumbing
// ---------------------------------------------------------------------------

unsafe fn measure_ref<'a>(mu: *const CqMeasure) -> Result<&'a MeasureSpec, CqStatus> {
    if mu.is_null() {
        return Err(invalid("measure handle is NULL"));
    }
    Ok(&(*mu).0)
}

unsafe fn config_ref<'a>(cfg: *const CqNodeConfig) -> Result<&'a NodeConfiguration, CqStatus> {
    if cfg.is_null() {
        return Err(invalid("node-configuration handle is NULL"));
    }
    Ok(&(*cfg).0)
}

unsafe fn out_ref<'a, T>(out: *mut T, what: &str) -> Result<&'a mut T, CqStatus> {
    if out.is_null() {
        return Err(invalid(&format!("{what}: output pointer is NULL")));
    }
    Ok(&mut *out)
}

unsafe fn out_slice<'a, T>(
    out: *mut T,
    len: usize,
    need: usize,
    what: &str,
) -> Result<&'a mut [T], CqStatus> {
    if out.is_null() {
        return Err(invalid(&format!("{what}: output buffer is NULL")));
    }
    if len != need {
        return Err(invalid(&format!(
            "{what}: buffer holds {len} entries but {need} are required"
        )));
    }
    Ok(std::slice::from_raw_parts_mut(out, len))
}

fn integrand_of(code: i32) -> Result<BuiltinIntegrand, CqStatus> {
    Ok(match code {
        0 => BuiltinIntegrand::One,
        1 => BuiltinIntegrand::Exp,
        2 => BuiltinIntegrand::ExpHalf,
        3 => BuiltinIntegrand::PoleNear,
        4 => BuiltinIntegrand::PoleInner,
        5 => BuiltinIntegrand::StepF2,
        _ => return Err(invalid(&format!("unknown integrand code {code}"))),
    })
}

fn weighting_of(code: i32) -> Result<LsWeighting, CqStatus> {
    Ok(match code {
        0 => LsWeighting::Transformed,
        1 => LsWeighting::TrueResidual,
        _ => return Err(invalid(&format!("unknown weighting code {code}"))),
    })
}

/// Folds a `Result`-producing body into the status/out-parameter shape.
macro_rules! ffi_try {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

// ---------------------------------------------------------------------------
// Measure
// ---------------------------------------------------------------------------

/// Creates a Rogers–Szegő measure handle for `q ∈ (0, 1)`. On success the
/// caller owns `*out` and must release it with [`cq_measure_free`].
///
/// # Safety
///
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_measure_rogers_szego_new(
    q: f64,
    out: *mut *mut CqMeasure,
) -> CqStatus {
    guard(|| {
        let out = ffi_try!(out_ref(out, "cq_measure_rogers_szego_new"));
        match MeasureSpec::rogers_szego(q) {
            Ok(mu) => {
                *out = Box::into_raw(Box::new(CqMeasure(mu)));
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a measure handle. `NULL` is a no-op.
///
/// # Safety
///
/// `mu` must be `NULL` or a pointer obtained from
/// [`cq_measure_rogers_szego_new`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn cq_measure_free(mu: *mut CqMeasure) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}

/// Trigonometric moment `μ_k = I(z^k)`.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
#[no_mangle]
pub unsafe extern "C" fn cq_moment(
    mu: *const CqMeasure,
    k: i64,
    out: *mut CqComplex,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_ref(out, "cq_moment"));
        match mu.moment(k) {
            Ok(v) => {
                *out = v.into();
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Verblunsky coefficient `δ_n` (the reflection coefficient of the Szegő
/// recurrence), defined for `n ≥ 1`.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
#[no_mangle]
pub unsafe extern "C" fn cq_verblunsky(
    mu: *const CqMeasure,
    n: usize,
    out: *mut CqComplex,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_ref(out, "cq_verblunsky"));
        match mu.verblunsky(n) {
            Ok(v) => {
                *out = v.into();
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Unimodular anchoring parameter `τ` that places a zero of the degree-`m`
/// para-orthogonal polynomial at `e^{iθ₀}`.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
#[no_mangle]
pub unsafe extern "C" fn cq_anchored_tau(
    mu: *const CqMeasure,
    m: usize,
    theta0: f64,
    out: *mut CqComplex,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_ref(out, "cq_anchored_tau"));
        match paraorth::anchored_tau(mu, m, theta0) {
            Ok(v) => {
                *out = v.into();
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Node configuration
// ---------------------------------------------------------------------------

/// Builds the node configuration with the maximal feasible para-orthogonal
/// degree on the `N`-node grid anchored at `θ₀`. On success the caller owns
/// `*out` and must release it with [`cq_node_config_free`].
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_max_m(
    mu: *const CqMeasure,
    n: usize,
    theta0: f64,
    out: *mut *mut CqNodeConfig,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_ref(out, "cq_node_config_max_m"));
        match paraorth::max_m(mu, n, theta0) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(CqNodeConfig(cfg)));
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Like [`cq_node_config_max_m`] but pins the para-orthogonal degree `m`;
/// fails when `m` is infeasible on that grid.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_with_m(
    mu: *const CqMeasure,
    n: usize,
    m: usize,
    theta0: f64,
    out: *mut *mut CqNodeConfig,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_ref(out, "cq_node_config_with_m"));
        match paraorth::configuration(mu, n, m, theta0) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(CqNodeConfig(cfg)));
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a node-configuration handle. `NULL` is a no-op.
///
/// # Safety
///
/// `cfg` must be `NULL` or a pointer obtained from one of the
/// `cq_node_config_*` constructors that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_free(cfg: *mut CqNodeConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Grid size `N` of a configuration; `0` for a `NULL` handle.
///
/// # Safety
///
/// `cfg` must be `NULL` or a live node-configuration handle.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_n(cfg: *const CqNodeConfig) -> usize {
    if cfg.is_null() {
        0
    } else {
        (*cfg).0.n
    }
}

/// Para-orthogonal degree `m` (= number of mimic nodes); `0` for `NULL`.
///
/// # Safety
///
/// `cfg` must be `NULL` or a live node-configuration handle.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_m(cfg: *const CqNodeConfig) -> usize {
    if cfg.is_null() {
        0
    } else {
        (*cfg).0.m
    }
}

/// Anchoring parameter `τ` of the configuration's para-orthogonal
/// polynomial.
///
/// # Safety
///
/// `cfg` must be a live node-configuration handle; `out` valid for one
/// `CqComplex`.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_tau(
    cfg: *const CqNodeConfig,
    out: *mut CqComplex,
) -> CqStatus {
    guard(|| {
        let cfg = ffi_try!(config_ref(cfg));
        let out = ffi_try!(out_ref(out, "cq_node_config_tau"));
        *out = cfg.tau.into();
        CqStatus::Ok
    })
}

/// Copies the `N` grid nodes `z_j` into `out` (length must equal `N`).
///
/// # Safety
///
/// `cfg` must be a live node-configuration handle; `out` valid for `len`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_grid(
    cfg: *const CqNodeConfig,
    out: *mut CqComplex,
    len: usize,
) -> CqStatus {
    guard(|| {
        let cfg = ffi_try!(config_ref(cfg));
        let out = ffi_try!(out_slice(out, len, cfg.n, "cq_node_config_grid"));
        for (slot, node) in out.iter_mut().zip(&cfg.grid) {
            *slot = node.z.into();
        }
        CqStatus::Ok
    })
}

/// Copies the `m` para-orthogonal zeros into `out` (length must equal `m`).
///
/// # Safety
///
/// `cfg` must be a live node-configuration handle; `out` valid for `len`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_zeros(
    cfg: *const CqNodeConfig,
    out: *mut CqComplex,
    len: usize,
) -> CqStatus {
    guard(|| {
        let cfg = ffi_try!(config_ref(cfg));
        let out = ffi_try!(out_slice(out, len, cfg.m, "cq_node_config_zeros"));
        for (slot, zero) in out.iter_mut().zip(&cfg.zeros) {
            *slot = zero.z.into();
        }
        CqStatus::Ok
    })
}

/// Copies the `m` selected (mimic) grid indices into `out` (length must
/// equal `m`). Indices refer to the grid order of
/// [`cq_node_config_grid`].
///
/// # Safety
///
/// `cfg` must be a live node-configuration handle; `out` valid for `len`
/// entries.
#[no_mangle]
pub unsafe extern "C" fn cq_node_config_selected(
    cfg: *const CqNodeConfig,
    out: *mut usize,
    len: usize,
) -> CqStatus {
    guard(|| {
        let cfg = ffi_try!(config_ref(cfg));
        let out = ffi_try!(out_slice(out, len, cfg.m, "cq_node_config_selected"));
        out.copy_from_slice(&cfg.selected_indices);
        CqStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

/// Closed-form interpolatory weights on the uniform `N`-node grid, exact on
/// `span{z^{−r}, …, z^{s}}` with `r + s + 1 = N`. Writes `N` weights in
/// grid order.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn cq_uniform_weights(
    mu: *const CqMeasure,
    n: usize,
    r_exp: i64,
    s_exp: i64,
    theta0: f64,
    out: *mut CqComplex,
    len: usize,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_slice(out, len, n, "cq_uniform_weights"));
        match quad::interpolatory_weights_uniform(mu, n, r_exp, s_exp, theta0) {
            Ok(rule) => {
                for (slot, w) in out.iter_mut().zip(&rule.weights) {
                    *slot = (*w).into();
                }
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Closed-form CMV-window weights on the uniform grid: odd `N` uses the
/// balanced window (`eps` ignored), even `N = 2ℓ` uses `eps = +1` for
/// exactness on `span{z^{−ℓ}, …, z^{ℓ−1}}` and `eps = −1` for
/// `span{z^{−(ℓ−1)}, …, z^{ℓ}}`. Writes `N` weights in grid order.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn cq_cmv_weights(
    mu: *const CqMeasure,
    n: usize,
    theta0: f64,
    eps: i32,
    out: *mut CqComplex,
    len: usize,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let out = ffi_try!(out_slice(out, len, n, "cq_cmv_weights"));
        match quad::cmv_weights_closed(mu, n, theta0, eps) {
            Ok(rule) => {
                for (slot, w) in out.iter_mut().zip(&rule.weights) {
                    *slot = (*w).into();
                }
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Interpolatory weights on the `m` mimic nodes of `cfg` with window shift
/// `p̃` (library default is `⌊(m−1)/2⌋`), exact on
/// `span{z^{−p̃}, …, z^{m−1−p̃}}`. Writes `m` weights in mimic-node order.
///
/// # Safety
///
/// `mu` and `cfg` must be live handles; `out` valid for `len` entries.
#[no_mangle]
pub unsafe extern "C" fn cq_mimic_weights(
    mu: *const CqMeasure,
    cfg: *const CqNodeConfig,
    p_tilde: i64,
    out: *mut CqComplex,
    len: usize,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let cfg = ffi_try!(config_ref(cfg));
        let out = ffi_try!(out_slice(out, len, cfg.m, "cq_mimic_weights"));
        let nodes: Vec<C64> = cfg.selected_nodes().iter().map(|u| u.z).collect();
        match quad::rule_on_mimic_nodes(mu, &nodes, p_tilde) {
            Ok(rule) => {
                for (slot, w) in out.iter_mut().zip(&rule.weights) {
                    *slot = (*w).into();
                }
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

/// High-accuracy reference value of `I(F)` for a built-in integrand
/// (`integrand` is a `CqIntegrand` code). A stalled oracle returns
/// `CQ_STATUS_NUMERICAL_FAILURE` with the best value and gap in the error
/// message.
///
/// # Safety
///
/// `mu` must be a live measure handle; `out` valid for one `CqComplex`.
#[no_mangle]
pub unsafe extern "C" fn cq_reference_integral(
    mu: *const CqMeasure,
    integrand: i32,
    accuracy: f64,
    out: *mut CqComplex,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let f = ffi_try!(integrand_of(integrand));
        let out = ffi_try!(out_ref(out, "cq_reference_integral"));
        match quad::reference_integral(mu, &f, accuracy) {
            Ok(v) => {
                *out = v.into();
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Applies the mixed interpolation–regression rule of order `r` on `cfg` to
/// a built-in integrand: Hermite–Laurent data on the mimic nodes plus a
/// least-squares correction on the discarded nodes. `p` and `p_tilde` are
/// the mixed and interpolatory window shifts (library defaults `⌊(r−1)/2⌋`
/// and `⌊(m−1)/2⌋`); `weighting` is a `CqWeighting` code. Writes the rule
/// value to `out_value` and, when non-`NULL`, the plain interpolatory value
/// to `out_interp`.
///
/// # Safety
///
/// `mu` and `cfg` must be live handles; `out_value` valid for one
/// `CqComplex`; `out_interp` `NULL` or valid for one `CqComplex`.
#[no_mangle]
pub unsafe extern "C" fn cq_mixed_rule_apply(
    mu: *const CqMeasure,
    cfg: *const CqNodeConfig,
    integrand: i32,
    r: usize,
    p: i64,
    p_tilde: i64,
    weighting: i32,
    out_value: *mut CqComplex,
    out_interp: *mut CqComplex,
) -> CqStatus {
    guard(|| {
        let mu = ffi_try!(measure_ref(mu));
        let cfg = ffi_try!(config_ref(cfg));
        let f = ffi_try!(integrand_of(integrand));
        let weighting = ffi_try!(weighting_of(weighting));
        let out_value = ffi_try!(out_ref(out_value, "cq_mixed_rule_apply"));
        match quad::mixed_rule(mu, cfg, &f, r, p, p_tilde, weighting) {
            Ok(outcome) => {
                *out_value = outcome.value.into();
                if !out_interp.is_null() {
                    *out_interp = outcome.interp_value.into();
                }
                CqStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
