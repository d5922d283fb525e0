//! Mixed interpolation–regression quadrature on the unit circle.
//!
//! Given samples of a function `F` at `N` uniformly distributed nodes
//! `Z_N = {e^{i(θ₀ + 2πj/N)}}` and a measure `μ` on the circle (the
//! Rogers–Szegő weight in closed form, or explicit moment/Verblunsky data),
//! this crate approximates `∫ F(e^{iθ}) dμ(θ)` by
//!
//! 1. locating the `m` zeros of the para-orthogonal polynomial
//!    `B_m(z,τ) = ρ_m(z) + τ·ρ_m*(z)` anchored at the first grid node,
//! 2. selecting the grid subset `Υ_m ⊂ Z_N` that mimics those zeros,
//! 3. interpolating `F` at `Υ_m` by a Laurent polynomial (Lagrange or
//!    Hermite with per-node multiplicities),
//! 4. correcting with a complex least-squares fit on the discarded nodes
//!    through the ansatz `L = P_m + (ω_m/z^p)·Q`,
//! 5. integrating `L` exactly against `μ` via trigonometric moments.
//!
//! The module layout follows the pipeline: [`laurent`] (exact-window Laurent
//! arithmetic), [`measure`] (moments, Verblunsky coefficients, Szegő
//! recurrence), [`paraorth`] (zeros on the circle, mimic-node selection,
//! maximal `m`), [`interp`] (Lagrange– and Hermite–Laurent interpolation),
//! [`regress`] (least squares and the gap-uniformity subpartition search),
//! [`quad`] (quadrature rules, reference oracles, built-in integrands),
//! [`report`]/[`experiments`] (CSV/JSON/SVG output and reproducible
//! experiment drivers used by the `circlequad` binary).

pub mod experiments;
pub mod interp;
pub mod laurent;
pub mod lstsq;
pub mod measure;
pub mod paraorth;
pub mod quad;
pub mod regress;
pub mod report;

use num_complex::Complex64;

/// Shorthand used across the crate for `num_complex::Complex64`.
pub type C64 = Complex64;

/// Crate-wide error type.
///
/// Variants are grouped by how the CLI maps them to exit codes: validation
/// failures (bad arguments, inconsistent configuration, unavailable data)
/// exit with 2, numerical failures (lost brackets, rank collapse, oracle
/// non-convergence) exit with 3.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument violates a precondition (domain error).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two interpolation nodes coincide exactly.
    #[error("duplicate node: {0}")]
    DuplicateNode(String),

    /// Two nodes are so close that the nodal polynomial derivative underflows
    /// the conditioning guard (|ω′(z̃_k)| < 1e-13 · max).
    #[error("near-duplicate node: {0}")]
    NearDuplicateNode(String),

    /// An explicit measure was asked for a moment outside its stored window.
    #[error("moment {k} outside stored window [{lo}, {hi}]")]
    MomentOutOfRange { k: i64, lo: i64, hi: i64 },

    /// Measure data violates an invariant (|δ_n| ≥ 1, μ₀ ≠ 1, …).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// The on-circle zero finder lost a bracket or found the wrong count.
    #[error("zero finding failed: {0}")]
    ZeroFinding(String),

    /// The least-squares design matrix collapsed (duplicate discarded nodes).
    #[error("rank deficiency: {0}")]
    RankDeficiency(String),

    /// A gap-uniformity score was requested for fewer than three nodes.
    #[error("too few nodes: got {got}, need at least {need}")]
    TooFewNodes { got: usize, need: usize },

    /// The reference oracle did not meet the accuracy target at the node cap.
    /// Carries the best estimate and the last successive-refinement gap.
    #[error("oracle did not converge: best estimate {best}, gap {gap:.3e}")]
    NoConvergence { best: C64, gap: f64 },

    /// Hermite data was requested from an integrand with no derivatives.
    #[error("derivative unavailable: {0}")]
    DerivativeUnavailable(String),

    /// A numerical guard tripped (unit-modulus drift, division underflow, …).
    #[error("numerical error: {0}")]
    Numerical(String),
}

impl Error {
    /// True when the error is a validation failure (CLI exit code 2) rather
    /// than a numerical failure (CLI exit code 3).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::DuplicateNode(_)
                | Error::MomentOutOfRange { .. }
                | Error::InvalidMeasure(_)
                | Error::TooFewNodes { .. }
                | Error::DerivativeUnavailable(_)
        )
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
