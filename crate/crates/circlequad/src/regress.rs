//! The mixed interpolation–regression approximant and the gap-ratio
//! machinery for choosing how many regression degrees of freedom a node set
//! supports.
//!
//! Given `m` interpolation nodes `z̃_k` (values matched exactly) and
//! `n − m` regression nodes `ẑ_s` (values matched in least squares), the
//! approximant is
//!
//! ```text
//! L(z) = P(z) + ω(z)·z^{−p}·Q(z),
//! ```
//!
//! where `P` is the Lagrange–Laurent interpolant of `F` at the `z̃_k` (window
//! shift `p̃`), `ω` is the monic nodal polynomial of the `z̃_k`, and
//! `Q(z) = Σ_{l<r−m} c_l z^l` holds the regression coefficients. Because `ω`
//! vanishes at every interpolation node, `L` interpolates there regardless
//! of `Q`; the least squares problem over the regression nodes only spends
//! the remaining `r − m` degrees of freedom.
//!
//! # Two least-squares variants
//!
//! * [`LsWeighting::TrueResidual`] minimizes `Σ_s |F(ẑ_s) − L(ẑ_s)|²`, the
//!   quantity the error estimates are stated in. Matrix rows are
//!   `w_s·ẑ_s^l` with `w_s = ω(ẑ_s)/ẑ_s^p` and right side `w_s·G_s`.
//! * [`LsWeighting::Transformed`] minimizes `Σ_s |G_s − Q(ẑ_s)|²` for the
//!   transformed values `G_s = (F(ẑ_s) − P(ẑ_s))·ẑ_s^p/ω(ẑ_s)` — the plain
//!   Vandermonde problem obtained by dividing the weights out.
//!
//! The variants solve genuinely different minimizations (they differ by the
//! row weighting `|w_s|`) and both are preserved: the true-residual form is
//! the default because monotonicity and the Pythagoras identity hold for it
//! exactly, while the transformed form reproduces an established body of
//! reference computations. Do not merge them.
//!
//! Every least-squares solve runs the Householder QR route and, when the
//! independent normal-equations route also succeeds, cross-checks the two
//! to 1e−6; disagreement means one of two structurally unrelated solvers is
//! broken and surfaces as a `Numerical` error rather than a silent result.

use crate::interp::lagrange_laurent;
use crate::laurent::{nodal_poly, LaurentPoly, Poly};
use crate::lstsq::{solve_least_squares, solve_normal_equations};
use crate::{C64, Error, Result};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Absolute floor on `|ω(ẑ_s)|` at regression nodes. Below it a regression
/// node effectively coincides with an interpolation node, the transformed
/// values `G_s` divide by ~0, and the configuration is rejected as a domain
/// error instead of producing garbage coefficients.
const OMEGA_FLOOR: f64 = 1e-13;

/// Agreement demanded between the QR and normal-equations solutions
/// (relative to the coefficient scale) whenever both routes succeed.
const ROUTE_AGREEMENT_TOL: f64 = 1e-6;

/// Default exhaustive-search budget for [`best_subpartition`]: up to 2²⁰
/// candidate subsets are enumerated before falling back to greedy growth.
pub const SUBPARTITION_BUDGET: u64 = 1 << 20;

/// Which least-squares functional the regression step minimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LsWeighting {
    /// Minimize the true residual `Σ|F − L|²` over regression nodes
    /// (weighted rows). Default.
    #[default]
    TrueResidual,
    /// Minimize `Σ|G − Q|²` on the transformed values (plain Vandermonde
    /// rows).
    Transformed,
}

/// The assembled mixed approximant.
#[derive(Clone, Debug)]
pub struct MixedApproximant {
    /// Interpolatory part `P` in `span{z^{−p̃}, …, z^{m−1−p̃}}`.
    pub p_part: LaurentPoly,
    /// Monic nodal polynomial `ω` of the interpolation nodes.
    pub omega: Poly,
    /// Regression coefficients `c_0 … c_{r−m−1}` of `Q` (empty when `r = m`).
    pub q_coeffs: Vec<C64>,
    /// Window shift of the regression term.
    pub p: i64,
    /// Window shift of the interpolatory part.
    pub p_tilde: i64,
    /// Total order `r = m + len(q_coeffs)`.
    pub r: usize,
    /// Number of interpolation nodes.
    pub m: usize,
}

impl MixedApproximant {
    /// Value `L(z) = P(z) + ω(z)·z^{−p}·Q(z)`.
    pub fn eval(&self, z: C64) -> Result<C64> {
        let mut v = self.p_part.eval(z)?;
        if !self.q_coeffs.is_empty() {
            let q = Poly::from_coeffs(self.q_coeffs.clone()).eval(z);
            if z.norm() == 0.0 && self.p > 0 {
                return Err(Error::Domain(
                    "Laurent polynomial with negative powers evaluated at z = 0".into(),
                ));
            }
            v += self.omega.eval(z) * z.powi(-(self.p as i32)) * q;
        }
        Ok(v)
    }

    /// The approximant as a single Laurent polynomial,
    /// `P + z^{−p}·ω·Q ∈ span{z^{−p}, …, z^{r−1−p}}` (for the standard
    /// shifts with `p̃ ≤ p` and `m − p̃ ≤ r − p`).
    pub fn as_laurent(&self) -> LaurentPoly {
        if self.q_coeffs.is_empty() {
            return self.p_part.clone();
        }
        let wq = self.omega.mul(&Poly::from_coeffs(self.q_coeffs.clone()));
        self.p_part
            .add(&LaurentPoly::from_poly_shifted(-self.p, &wq))
    }
}

/// Transformed regression targets `G_s = (F(ẑ_s) − P(ẑ_s))·ẑ_s^p / ω(ẑ_s)`.
///
/// # Errors
///
/// `Domain` when `|ω(ẑ_s)|` falls under [`OMEGA_FLOOR`] (regression node
/// collides with an interpolation node).
pub fn transformed_residual_target(
    discarded: &[C64],
    f_discarded: &[C64],
    p_part: &LaurentPoly,
    omega: &Poly,
    p: i64,
) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(discarded.len());
    for (&zs, &fs) in discarded.iter().zip(f_discarded) {
        let w = omega.eval(zs);
        if w.norm() < OMEGA_FLOOR {
            return Err(Error::Domain(format!(
                "regression node {zs} lies on (or within {OMEGA_FLOOR:.0e} of) an interpolation node"
            )));
        }
        out.push((fs - p_part.eval(zs)?) * zs.powi(p as i32) / w);
    }
    Ok(out)
}

/// Builds the mixed approximant from values of `F` on the interpolation and
/// regression nodes.
///
/// `r` is the total order (`r = m` means no regression term); `p` and
/// `p_tilde` are the window shifts of the regression and interpolatory
/// parts.
///
/// # Errors
///
/// `Domain` for `r < m` or colliding node sets; `TooFewNodes` when fewer
/// than `r − m` regression nodes are supplied; `RankDeficiency` /
/// `Numerical` from the solve and its cross-check.
#[allow(clippy::too_many_arguments)]
pub fn build_mixed(
    selected: &[C64],
    f_selected: &[C64],
    discarded: &[C64],
    f_discarded: &[C64],
    r: usize,
    p: i64,
    p_tilde: i64,
    weighting: LsWeighting,
) -> Result<MixedApproximant> {
    let m = selected.len();
    if f_selected.len() != m {
        return Err(Error::Domain(format!(
            "{m} interpolation nodes but {} values",
            f_selected.len()
        )));
    }
    if f_discarded.len() != discarded.len() {
        return Err(Error::Domain(format!(
            "{} regression nodes but {} values",
            discarded.len(),
            f_discarded.len()
        )));
    }
    if r < m {
        return Err(Error::Domain(format!(
            "total order r = {r} cannot be below the interpolation order m = {m}"
        )));
    }
    let extra = r - m;
    if discarded.len() < extra {
        return Err(Error::TooFewNodes {
            got: discarded.len(),
            need: extra,
        });
    }

    let p_part = lagrange_laurent(selected, f_selected, p_tilde)?;
    let omega = nodal_poly(selected)?;

    let q_coeffs = if extra == 0 {
        Vec::new()
    } else {
        let g = transformed_residual_target(discarded, f_discarded, &p_part, &omega, p)?;
        let mut a = Vec::with_capacity(discarded.len());
        let mut rhs = Vec::with_capacity(discarded.len());
        for (s, &zs) in discarded.iter().enumerate() {
            let w = match weighting {
                LsWeighting::TrueResidual => omega.eval(zs) * zs.powi(-(p as i32)),
                LsWeighting::Transformed => C64::new(1.0, 0.0),
            };
            let mut row = Vec::with_capacity(extra);
            let mut zp = C64::new(1.0, 0.0);
            for _ in 0..extra {
                row.push(w * zp);
                zp *= zs;
            }
            a.push(row);
            rhs.push(w * g[s]);
        }
        let x = solve_least_squares(&a, &rhs)?;
        // Cross-check through the structurally independent route whenever it
        // is numerically viable; between the two rank thresholds the oracle
        // is uninformative and skipped.
        match solve_normal_equations(&a, &rhs) {
            Ok(x2) => {
                let scale = x.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
                let d = x
                    .iter()
                    .zip(&x2)
                    .map(|(u, v)| (u - v).norm())
                    .fold(0.0_f64, f64::max);
                if d > ROUTE_AGREEMENT_TOL * scale {
                    return Err(Error::Numerical(format!(
                        "least-squares routes disagree by {d:.3e} (scale {scale:.3e})"
                    )));
                }
            }
            Err(Error::RankDeficiency(_)) => {}
            Err(e) => return Err(e),
        }
        x
    };

    Ok(MixedApproximant {
        p_part,
        omega,
        q_coeffs,
        p,
        p_tilde,
        r,
        m,
    })
}

/// Gap-ratio score of a set of angles on the circle:
/// `K = max gap / min gap`, gaps taken between circularly adjacent angles
/// including the wrap-around gap. `K = 1` for perfectly uniform sets, larger
/// otherwise. Input order is irrelevant (sorted internally after reduction
/// to `[0, 2π)`).
///
/// # Errors
///
/// `Domain` for fewer than 2 angles or non-finite input.
pub fn uniformity_score(angles: &[f64]) -> Result<f64> {
    if angles.len() < 2 {
        return Err(Error::Domain(format!(
            "gap ratio needs at least 2 angles, got {}",
            angles.len()
        )));
    }
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain("non-finite angle".into()));
    }
    let mut a: Vec<f64> = angles.iter().map(|x| x.rem_euclid(2.0 * PI)).collect();
    a.sort_by(f64::total_cmp);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..a.len() {
        let gap = if i + 1 < a.len() {
            a[i + 1] - a[i]
        } else {
            a[0] + 2.0 * PI - a[i]
        };
        lo = lo.min(gap);
        hi = hi.max(gap);
    }
    if lo <= 0.0 {
        return Err(Error::DuplicateNode(
            "coincident angles give a zero gap".into(),
        ));
    }
    Ok(hi / lo)
}

/// Result of the minimal-gap-ratio subset search.
#[derive(Clone, Debug)]
pub struct Subpartition {
    /// Indices into the *input* angle slice, listed in circular order.
    pub indices: Vec<usize>,
    /// Gap ratio of the chosen subset.
    pub k_value: f64,
    /// Subset size.
    pub cardinality: usize,
    /// Whether every subset within budget was enumerated (`false` means the
    /// greedy fallback produced the result and optimality is not guaranteed).
    pub exhaustive: bool,
}

/// Finds the subset of ≥ 3 angles minimizing the gap ratio `K`, preferring
/// larger subsets and then lexicographically earlier index combinations on
/// *exact* `K` ties.
///
/// Tie comparison is deliberately exact f64 equality, not tolerance-based:
/// mod-reduced angles carry gap noise at the 1e−16 level that consistently
/// breaks "mathematical" ties (a regular 10-gon scores K fractionally above
/// an exact sub-pentagon's), and reproducing reference cardinalities
/// requires resolving those ties the same way every time. A tolerance here
/// would make the winner depend on enumeration order in an uncontrolled
/// fashion.
///
/// Subsets are enumerated by ascending cardinality and lexicographic index
/// order within each cardinality (indices in sorted-angle space). If the
/// total count exceeds `budget`, a greedy fallback seeds with the best
/// 3-subset and grows one best-scoring point at a time, keeping the best
/// intermediate; `exhaustive = false` marks that path.
///
/// # Errors
///
/// `Domain` for fewer than 3 angles; `DuplicateNode` for coincident angles.
pub fn best_subpartition(angles: &[f64], budget: u64) -> Result<Subpartition> {
    let n = angles.len();
    if n < 3 {
        return Err(Error::Domain(format!(
            "subpartition search needs ≥ 3 angles, got {n}"
        )));
    }
    // Sort once; combinations index sorted-angle space, output maps back.
    let mut order: Vec<usize> = (0..n).collect();
    let reduced: Vec<f64> = angles.iter().map(|a| a.rem_euclid(2.0 * PI)).collect();
    if reduced.iter().any(|a| !a.is_finite()) {
        return Err(Error::Domain("non-finite angle".into()));
    }
    order.sort_by(|&i, &j| reduced[i].total_cmp(&reduced[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| reduced[i]).collect();
    for w in sorted.windows(2) {
        if w[1] == w[0] {
            return Err(Error::DuplicateNode(
                "coincident angles in subpartition candidates".into(),
            ));
        }
    }

    // Gap ratio of a sorted-index subset (angles ascending by construction).
    let k_of = |comb: &[usize]| -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..comb.len() {
            let gap = if i + 1 < comb.len() {
                sorted[comb[i + 1]] - sorted[comb[i]]
            } else {
                sorted[comb[0]] + 2.0 * PI - sorted[comb[i]]
            };
            lo = lo.min(gap);
            hi = hi.max(gap);
        }
        hi / lo
    };

    // Exact-K key ordering: K ascending, then cardinality descending, then
    // lexicographic combination.
    let better = |k_new: f64, comb_new: &[usize], k_old: f64, comb_old: &[usize]| -> bool {
        if k_new != k_old {
            return k_new < k_old;
        }
        if comb_new.len() != comb_old.len() {
            return comb_new.len() > comb_old.len();
        }
        comb_new < comb_old
    };

    let total: u64 = (3..=n).map(|k| binomial(n as u64, k as u64)).sum();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let exhaustive = total <= budget;
    if exhaustive {
        for k in 3..=n {
            for comb in (0..n).combinations(k) {
                let kv = k_of(&comb);
                if best
                    .as_ref()
                    .map_or(true, |(bk, bc)| better(kv, &comb, *bk, bc))
                {
                    best = Some((kv, comb));
                }
            }
        }
    } else {
        // Greedy fallback: exhaustive over 3-subsets, then grow one point at
        // a time, keeping the best intermediate seen.
        for comb in (0..n).combinations(3) {
            let kv = k_of(&comb);
            if best
                .as_ref()
                .map_or(true, |(bk, bc)| better(kv, &comb, *bk, bc))
            {
                best = Some((kv, comb));
            }
        }
        let mut cur = best.as_ref().unwrap().1.clone();
        while cur.len() < n {
            let mut step: Option<(f64, Vec<usize>)> = None;
            for cand in 0..n {
                if cur.contains(&cand) {
                    continue;
                }
                let mut trial = cur.clone();
                trial.push(cand);
                trial.sort_unstable();
                let kv = k_of(&trial);
                if step
                    .as_ref()
                    .map_or(true, |(bk, bc)| better(kv, &trial, *bk, bc))
                {
                    step = Some((kv, trial));
                }
            }
            let (kv, trial) = step.unwrap();
            if best
                .as_ref()
                .map_or(true, |(bk, bc)| better(kv, &trial, *bk, bc))
            {
                best = Some((kv, trial.clone()));
            }
            cur = trial;
        }
    }

    let (k_value, comb) = best.unwrap();
    Ok(Subpartition {
        indices: comb.iter().map(|&i| order[i]).collect(),
        k_value,
        cardinality: comb.len(),
        exhaustive,
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}
