//! Para-orthogonal polynomials, their zeros on the unit circle, and the
//! node configuration used by the mixed rule: a uniform grid of `N` angles
//! together with the `m` grid nodes nearest the zeros of an anchored
//! para-orthogonal polynomial.
//!
//! `B_m(z, τ) = ρ_m(z) + τ·ρ*_m(z)` with `|τ| = 1` has `m` simple zeros on
//! `|z| = 1`. Choosing `τ = −ρ_m(z₀)/ρ*_m(z₀)` *anchors* one zero at
//! `z₀ = e^{iθ₀}`, aligning the zero set with a uniform grid started at the
//! same angle.
//!
//! # Zero finding
//!
//! Zeros are located through the real *phase function*
//!
//! ```text
//! g(θ) = 2·Re[ e^{−i(mθ+φ)/2} · ρ_m(e^{iθ}) ],   φ = arg τ,
//! ```
//!
//! which on the circle equals `e^{−i(mθ+φ)/2}·B_m(e^{iθ})` (using
//! `ρ*_m(e^{iθ}) = e^{imθ}·conj(ρ_m(e^{iθ}))`) and therefore has exactly the
//! zeros of `B_m`, but is real-valued and amenable to sign-change bracketing
//! plus bisection. Evaluating `ρ_m` by the value recurrence keeps this route
//! stable where coefficient-based root finding (companion matrix, Horner on
//! the monomial basis) loses the zeros entirely: near `q = 0.95, m ≈ 60` the
//! coefficient dynamic range pushes companion-matrix roots ~1e−2 off the
//! circle, while the phase function still brackets every zero to ~1e−15.
//!
//! The scan samples at half-cell offsets `θ₀ + 2π(j+½)/M` so that the
//! anchored zero at `θ₀` is interior to exactly one interval rather than
//! sitting on both period endpoints, and doubles `M` until exactly `m` sign
//! changes appear.

use crate::laurent::Poly;
use crate::measure::MeasureSpec;
use crate::{C64, Error, Result};
use std::f64::consts::PI;

/// Number of scan-resolution doublings before zero bracketing gives up.
///
/// The initial resolution `M = max(64, 32m)` already places ~32 samples per
/// zero; 12 doublings (a 4096× refinement) exceeds any clustering observed
/// across the validated `(q, m)` range, so exhausting them indicates a
/// genuine breakdown and is reported as `ZeroFinding`.
const MAX_SCAN_DOUBLINGS: u32 = 12;

/// Bisection iterations per bracketed zero: 60 halvings of a `2π/M` cell
/// reduce the bracket below 1e−16 absolute, i.e. to f64 resolution.
const BISECT_ITERS: u32 = 60;

/// Chordal-distance slack under which nearest-node candidates are treated
/// as tied and resolved by counterclockwise proximity instead. Ties occur
/// when a zero falls (up to roundoff) midway between two grid nodes.
const SELECT_TIE_TOL: f64 = 1e-12;

/// A point on the unit circle carried in both forms used downstream:
/// `z = e^{iθ}` for arithmetic and `θ ∈ [0, 2π)` for ordering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitNode {
    /// Position `e^{iθ}`.
    pub z: C64,
    /// Angle in `[0, 2π)`.
    pub theta: f64,
}

impl UnitNode {
    /// Node at angle `theta` (reduced to `[0, 2π)`).
    pub fn from_angle(theta: f64) -> Self {
        let t = theta.rem_euclid(2.0 * PI);
        UnitNode {
            z: C64::from_polar(1.0, t),
            theta: t,
        }
    }
}

/// Uniform grid `z_j = e^{i(θ₀ + 2πj/N)}`, `j = 0..N−1`, angles reduced to
/// `[0, 2π)`.
///
/// The angle of node `j` is computed as `(θ₀ + (2π·j)/N).rem_euclid(2π)` —
/// this exact operation order is part of the contract, because downstream
/// gap-ratio comparisons resolve exact floating-point ties and must see the
/// same representable values on every run.
///
/// # Errors
///
/// `Domain` if `n = 0` or `θ₀` is not finite.
pub fn uniform_grid(n: usize, theta0: f64) -> Result<Vec<UnitNode>> {
    if n == 0 {
        return Err(Error::Domain("uniform grid needs n ≥ 1".into()));
    }
    if !theta0.is_finite() {
        return Err(Error::Domain(format!("θ₀ must be finite, got {theta0}")));
    }
    Ok((0..n)
        .map(|j| {
            let t = (theta0 + (2.0 * PI * j as f64) / n as f64).rem_euclid(2.0 * PI);
            UnitNode {
                z: C64::from_polar(1.0, t),
                theta: t,
            }
        })
        .collect())
}

/// Para-orthogonal polynomial `B_m(z, τ) = ρ_m(z) + τ·ρ*_m(z)` as a
/// coefficient object.
///
/// Useful for inspection and low-order checks; zero finding goes through
/// [`zeros_on_circle`] instead, which never materializes these coefficients.
///
/// # Errors
///
/// `Domain` if `|τ|` deviates from 1 by more than 1e−6 (the construction is
/// only circle-preserving for unimodular `τ`).
pub fn para_orthogonal(mu: &MeasureSpec, m: usize, tau: C64) -> Result<Poly> {
    check_unimodular(tau)?;
    let pair = mu.szego_poly(m)?;
    Ok(pair.rho.add(&pair.rho_star.scale(tau)))
}

/// Anchoring parameter `τ = −ρ_m(z₀)/ρ*_m(z₀)` with `z₀ = e^{iθ₀}`, so that
/// `B_m(z₀, τ) = 0` exactly.
///
/// `|τ| = 1` automatically since `|ρ*_m| = |ρ_m|` on the circle. Evaluated
/// through the value recurrence.
pub fn anchored_tau(mu: &MeasureSpec, m: usize, theta0: f64) -> Result<C64> {
    if !theta0.is_finite() {
        return Err(Error::Domain(format!("θ₀ must be finite, got {theta0}")));
    }
    let z0 = C64::from_polar(1.0, theta0);
    let (rho, star) = mu.szego_values(m, z0)?;
    if star.norm() == 0.0 {
        return Err(Error::ZeroFinding(
            "ρ*_m vanished on the circle; cannot anchor τ".into(),
        ));
    }
    Ok(-rho / star)
}

/// The `m` zeros of `B_m(z, τ)` on the unit circle, sorted counterclockwise
/// starting from `θ₀` (the anchored zero, when `τ` is anchored at `θ₀`,
/// comes first).
///
/// `theta0` serves as the scan origin and sort base point; it need not be a
/// zero for the bracketing to work, but the half-cell sampling assumes the
/// standard anchored use where it is.
///
/// # Errors
///
/// `Domain` for `m = 0` or non-unimodular `τ`; `ZeroFinding` if repeated
/// scan refinement cannot isolate exactly `m` sign changes.
pub fn zeros_on_circle(
    mu: &MeasureSpec,
    m: usize,
    tau: C64,
    theta0: f64,
) -> Result<Vec<UnitNode>> {
    if m == 0 {
        return Err(Error::Domain("para-orthogonal degree must be ≥ 1".into()));
    }
    if !theta0.is_finite() {
        return Err(Error::Domain(format!("θ₀ must be finite, got {theta0}")));
    }
    check_unimodular(tau)?;
    let phi = tau.arg();
    let g = |th: f64| -> Result<f64> {
        let (rho, _) = mu.szego_values(m, C64::from_polar(1.0, th))?;
        let twist = C64::from_polar(1.0, -(m as f64 * th + phi) / 2.0);
        Ok(2.0 * (twist * rho).re)
    };

    let mut big_m = 64usize.max(32 * m);
    let mut brackets: Vec<(f64, f64, f64)> = Vec::new();
    let mut found = 0usize;
    for _ in 0..=MAX_SCAN_DOUBLINGS {
        // Half-cell shift: every zero is interior to exactly one interval
        // and the anchored zero is not double-counted at both period ends.
        let mut th: Vec<f64> = (0..=big_m)
            .map(|j| theta0 + 2.0 * PI * (j as f64 + 0.5) / big_m as f64)
            .collect();
        let mut gv: Vec<f64> = th.iter().map(|&t| g(t)).collect::<Result<_>>()?;
        if gv.iter().any(|&v| v == 0.0) {
            // A sample landed exactly on a zero; nudge the whole scan so
            // sign changes are unambiguous.
            for t in th.iter_mut() {
                *t += (PI / big_m as f64) * 1e-3;
            }
            gv = th.iter().map(|&t| g(t)).collect::<Result<_>>()?;
        }
        brackets.clear();
        for i in 0..big_m {
            if gv[i] * gv[i + 1] < 0.0 {
                brackets.push((th[i], th[i + 1], gv[i]));
            }
        }
        found = brackets.len();
        if found == m {
            break;
        }
        big_m *= 2;
    }
    if found != m {
        return Err(Error::ZeroFinding(format!(
            "bracketed {found} of {m} circle zeros at scan resolution {big_m}"
        )));
    }

    let mut angles = Vec::with_capacity(m);
    for &(mut a, mut b, mut ga) in &brackets {
        for _ in 0..BISECT_ITERS {
            let c = 0.5 * (a + b);
            let gc = g(c)?;
            if gc == 0.0 {
                a = c;
                b = c;
                break;
            }
            if (ga < 0.0) == (gc < 0.0) {
                a = c;
                ga = gc;
            } else {
                b = c;
            }
        }
        angles.push((0.5 * (a + b)).rem_euclid(2.0 * PI));
    }

    // Counterclockwise order from θ₀. A zero computed a hair *below* θ₀
    // (wrap offset within 1e−9 of 2π) is the anchored zero seen through
    // bisection roundoff; snap it to the front rather than the back.
    let base = theta0.rem_euclid(2.0 * PI);
    let mut keyed: Vec<(f64, f64)> = angles
        .into_iter()
        .map(|ang| {
            let mut rel = (ang - base).rem_euclid(2.0 * PI);
            if rel > 2.0 * PI - 1e-9 {
                rel -= 2.0 * PI;
            }
            (rel, ang)
        })
        .collect();
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(keyed
        .into_iter()
        .map(|(_, ang)| UnitNode::from_angle(ang))
        .collect())
}

/// Nearest-grid-node selection: zero `k` claims the grid node minimizing
/// chordal distance `|ξ_k − z_j|`, except zero 0 which is pinned to grid
/// node 0 (both sit at `θ₀` in the anchored construction).
///
/// Chordal ties within [`SELECT_TIE_TOL`] are resolved toward the node
/// counterclockwise-closest to the zero. Returns `None` when two zeros
/// claim the same grid node — the configuration is then infeasible and the
/// caller must lower `m`.
pub fn select_mimic_nodes(grid: &[UnitNode], zeros: &[UnitNode]) -> Option<Vec<usize>> {
    if zeros.is_empty() || grid.is_empty() || zeros.len() > grid.len() {
        return None;
    }
    let mut sel = Vec::with_capacity(zeros.len());
    sel.push(0usize);
    for zk in &zeros[1..] {
        let d: Vec<f64> = grid.iter().map(|g| (zk.z - g.z).norm()).collect();
        let mut jbest = 0usize;
        let mut best = f64::INFINITY;
        for (j, &dj) in d.iter().enumerate() {
            if dj < best {
                best = dj;
                jbest = j;
            }
        }
        let ties: Vec<usize> = (0..grid.len())
            .filter(|&j| (d[j] - best).abs() < SELECT_TIE_TOL)
            .collect();
        if ties.len() > 1 {
            let zang = zk.z.arg();
            jbest = *ties
                .iter()
                .min_by(|&&a, &&b| {
                    let da = (grid[a].z.arg() - zang).rem_euclid(2.0 * PI);
                    let db = (grid[b].z.arg() - zang).rem_euclid(2.0 * PI);
                    da.total_cmp(&db)
                })
                .unwrap();
        }
        if sel.contains(&jbest) {
            return None;
        }
        sel.push(jbest);
    }
    Some(sel)
}

/// A complete node configuration for the mixed rule: the uniform grid, the
/// anchored para-orthogonal zeros, and the injective map from zeros to their
/// mimicking grid nodes.
#[derive(Clone, Debug)]
pub struct NodeConfiguration {
    /// Grid size `N`.
    pub n: usize,
    /// Para-orthogonal degree `m` (number of selected nodes).
    pub m: usize,
    /// Grid/anchor base angle.
    pub theta0: f64,
    /// Anchoring parameter `τ` (unimodular).
    pub tau: C64,
    /// The `N` uniform grid nodes in index order.
    pub grid: Vec<UnitNode>,
    /// The `m` zeros of `B_m(·, τ)`, counterclockwise from `θ₀`.
    pub zeros: Vec<UnitNode>,
    /// `selected_indices[k]` = grid index mimicking zero `k`.
    pub selected_indices: Vec<usize>,
}

impl NodeConfiguration {
    /// Selected grid nodes in zero order (node `k` mimics zero `k`).
    pub fn selected_nodes(&self) -> Vec<UnitNode> {
        self.selected_indices.iter().map(|&j| self.grid[j]).collect()
    }

    /// Grid indices not claimed by any zero, ascending.
    pub fn discarded_indices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|j| !self.selected_indices.contains(j))
            .collect()
    }

    /// Grid nodes not claimed by any zero, in ascending index order.
    pub fn discarded_nodes(&self) -> Vec<UnitNode> {
        self.discarded_indices()
            .into_iter()
            .map(|j| self.grid[j])
            .collect()
    }
}

/// Builds the full anchored configuration for given `(N, m, θ₀)`.
///
/// # Errors
///
/// `Domain` if `m = 0`, `m > N`, or the nearest-node selection collides
/// (i.e. this `m` is infeasible on this grid — try [`max_m`]); `ZeroFinding`
/// if the circle zeros cannot be isolated.
pub fn configuration(
    mu: &MeasureSpec,
    n: usize,
    m: usize,
    theta0: f64,
) -> Result<NodeConfiguration> {
    if m == 0 || m > n {
        return Err(Error::Domain(format!(
            "need 1 ≤ m ≤ N for a node configuration, got m = {m}, N = {n}"
        )));
    }
    let grid = uniform_grid(n, theta0)?;
    let tau = anchored_tau(mu, m, theta0)?;
    let zeros = zeros_on_circle(mu, m, tau, theta0)?;
    let selected_indices = select_mimic_nodes(&grid, &zeros).ok_or_else(|| {
        Error::Domain(format!(
            "nearest-node selection collides at m = {m}, N = {n}: two zeros claim one grid node"
        ))
    })?;
    Ok(NodeConfiguration {
        n,
        m,
        theta0,
        tau,
        grid,
        zeros,
        selected_indices,
    })
}

/// Largest `m ≤ N` whose anchored zeros select `m` *distinct* nearest grid
/// nodes, with its full configuration. Scans `m = N` downward and returns
/// the first feasible configuration.
///
/// # Errors
///
/// `Domain` if no `m ≥ 1` is feasible (does not occur for the built-in
/// family: `m = 1` always succeeds); propagates `ZeroFinding`.
pub fn max_m(mu: &MeasureSpec, n: usize, theta0: f64) -> Result<NodeConfiguration> {
    for m in (1..=n).rev() {
        match configuration(mu, n, m, theta0) {
            Ok(cfg) => return Ok(cfg),
            Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Domain(format!(
        "no feasible para-orthogonal degree for N = {n}"
    )))
}

fn check_unimodular(tau: C64) -> Result<()> {
    if (tau.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "para-orthogonal parameter must lie on the unit circle, |τ| = {}",
            tau.norm()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(q: f64) -> MeasureSpec {
        MeasureSpec::rogers_szego(q).unwrap()
    }

    #[test]
    fn grid_angles_exact_op_order() {
        let g = uniform_grid(7, PI / 6.0).unwrap();
        assert_eq!(g.len(), 7);
        for (j, node) in g.iter().enumerate() {
            let expect = (PI / 6.0 + (2.0 * PI * j as f64) / 7.0).rem_euclid(2.0 * PI);
            assert_eq!(node.theta, expect, "grid angle must be bit-identical");
            assert!((node.z - C64::from_polar(1.0, expect)).norm() == 0.0);
        }
        assert!(uniform_grid(0, 0.0).is_err());
    }

    #[test]
    fn grid_wraps_into_standard_interval() {
        let g = uniform_grid(4, 5.0).unwrap();
        for node in &g {
            assert!((0.0..2.0 * PI).contains(&node.theta));
        }
        // θ₀ = 5, so 5 + π/2 exceeds 2π and must wrap below θ₀.
        assert!(g[1].theta < g[0].theta);
    }

    #[test]
    fn anchored_tau_is_unimodular_and_anchors() {
        for &(q, m, th0) in &[
            (0.5, 8usize, 0.0),
            (0.9, 14, 5.0 * PI / 6.0),
            (0.97, 20, PI / 12.0),
            (0.95, 59, PI / 6.0),
        ] {
            let mu = rs(q);
            let tau = anchored_tau(&mu, m, th0).unwrap();
            assert!((tau.norm() - 1.0).abs() < 1e-12, "|τ| drifted: {}", tau.norm());
            // B(z₀) = ρ(z₀) + τρ*(z₀) = 0 by construction.
            let (rho, star) = mu.szego_values(m, C64::from_polar(1.0, th0)).unwrap();
            let b = rho + tau * star;
            assert!(b.norm() < 1e-12 * rho.norm().max(1.0));
        }
    }

    #[test]
    fn zero_count_anchoring_and_ccw_order() {
        for &(q, m, th0) in &[(0.7, 6usize, 0.0), (0.9, 14, 5.0 * PI / 6.0), (0.5, 20, 0.0)] {
            let mu = rs(q);
            let tau = anchored_tau(&mu, m, th0).unwrap();
            let zs = zeros_on_circle(&mu, m, tau, th0).unwrap();
            assert_eq!(zs.len(), m);
            // First zero is the anchor.
            let d0 = (zs[0].z - C64::from_polar(1.0, th0)).norm();
            assert!(d0 < 1e-12, "anchor missed by {d0:.2e}");
            // Counterclockwise from θ₀, all distinct.
            let rels: Vec<f64> = zs
                .iter()
                .map(|nd| (nd.theta - th0).rem_euclid(2.0 * PI))
                .map(|r| if r > 2.0 * PI - 1e-9 { r - 2.0 * PI } else { r })
                .collect();
            for w in rels.windows(2) {
                assert!(w[1] > w[0] + 1e-10, "zeros out of order or coincident");
            }
            // Every zero actually annihilates B (relative to |ρ|, which is
            // the natural scale of B on the circle).
            for nd in &zs {
                let (rho, star) = mu.szego_values(m, nd.z).unwrap();
                let b = rho + tau * star;
                assert!(b.norm() < 1e-9 * rho.norm(), "|B| = {:.2e}", b.norm());
            }
        }
    }

    #[test]
    fn zeros_survive_coefficient_breakdown_regime() {
        // q = 0.95, m = 59 is the regime where companion-matrix root finding
        // is ~1e−2 off the circle; the phase route must still isolate all m.
        let mu = rs(0.95);
        let th0 = PI / 6.0;
        let tau = anchored_tau(&mu, 59, th0).unwrap();
        let zs = zeros_on_circle(&mu, 59, tau, th0).unwrap();
        assert_eq!(zs.len(), 59);
        for nd in &zs {
            let (rho, star) = mu.szego_values(59, nd.z).unwrap();
            assert!((rho + tau * star).norm() < 1e-8 * rho.norm());
        }
    }

    #[test]
    fn para_orthogonal_coefficients_match_values_low_order() {
        let mu = rs(0.5);
        let tau = anchored_tau(&mu, 4, 0.3).unwrap();
        let b = para_orthogonal(&mu, 4, tau).unwrap();
        for k in 0..9 {
            let z = C64::from_polar(1.0, 0.7 * k as f64);
            let (rho, star) = mu.szego_values(4, z).unwrap();
            assert!((b.eval(z) - (rho + tau * star)).norm() < 1e-12);
        }
        assert!(para_orthogonal(&mu, 4, C64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn selection_identity_when_zeros_sit_on_grid() {
        let grid = uniform_grid(6, 0.2).unwrap();
        let zeros: Vec<UnitNode> = [0usize, 2, 4].iter().map(|&j| grid[j]).collect();
        assert_eq!(select_mimic_nodes(&grid, &zeros), Some(vec![0, 2, 4]));
    }

    #[test]
    fn selection_tie_breaks_counterclockwise() {
        // Zero exactly midway between grid nodes 1 and 2: the tie resolves
        // to the node counterclockwise of the zero (node 2).
        let grid = uniform_grid(4, 0.0).unwrap();
        let zeros = vec![grid[0], UnitNode::from_angle(3.0 * PI / 4.0)];
        assert_eq!(select_mimic_nodes(&grid, &zeros), Some(vec![0, 2]));
    }

    #[test]
    fn selection_collision_returns_none() {
        let grid = uniform_grid(4, 0.0).unwrap();
        // Both zeros nearest to grid node 1.
        let zeros = vec![
            grid[0],
            UnitNode::from_angle(PI / 2.0 - 0.05),
            UnitNode::from_angle(PI / 2.0 + 0.05),
        ];
        assert_eq!(select_mimic_nodes(&grid, &zeros), None);
    }

    #[test]
    fn configuration_and_max_m_agree() {
        let mu = rs(0.3);
        let cfg = max_m(&mu, 8, 0.0).unwrap();
        assert!(cfg.m >= 1 && cfg.m <= 8);
        assert_eq!(cfg.selected_indices.len(), cfg.m);
        assert_eq!(cfg.selected_indices[0], 0);
        // Injective selection.
        let mut s = cfg.selected_indices.clone();
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), cfg.m);
        // Discarded = complement.
        assert_eq!(cfg.discarded_indices().len(), cfg.n - cfg.m);
        // m + 1 must be infeasible (that is what max_m means), unless m = N.
        if cfg.m < cfg.n {
            assert!(configuration(&mu, 8, cfg.m + 1, 0.0).is_err());
        }
        // Rebuilding at the same m reproduces the same selection.
        let again = configuration(&mu, 8, cfg.m, 0.0).unwrap();
        assert_eq!(again.selected_indices, cfg.selected_indices);
    }

    #[test]
    fn degenerate_inputs_are_domain_errors() {
        let mu = rs(0.5);
        assert!(configuration(&mu, 5, 0, 0.0).is_err());
        assert!(configuration(&mu, 5, 6, 0.0).is_err());
        assert!(zeros_on_circle(&mu, 0, C64::new(1.0, 0.0), 0.0).is_err());
    }
}
