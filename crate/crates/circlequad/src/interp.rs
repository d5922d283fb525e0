//! Lagrange and Hermite interpolation in Laurent-polynomial spaces
//! `span{z^{−p}, …, z^{r−1−p}}`.
//!
//! Given distinct nonzero nodes `z̃_1 … z̃_m` with multiplicities `ν_k`
//! (`r = Σν_k`) and jet values `ζ_k^{(l)}`, the unique interpolant in the
//! `r`-dimensional window satisfying `L^{(l)}(z̃_k) = ζ_k^{(l)}` for
//! `0 ≤ l < ν_k` is assembled from *fundamental* Laurent polynomials
//! `L_{k,l}` with the duality property `L_{k,l}^{(σ)}(z̃_j) = δ_{jk}δ_{lσ}`.
//!
//! Each fundamental is built from the elementary functions
//!
//! ```text
//! ℓ_{k,l}(z) = (z − z̃_k)^l / l! · (z̃_k/z)^p · ∏_{j≠k} ((z − z̃_j)/(z̃_k − z̃_j))^{ν_j}
//! ```
//!
//! which already satisfy the duality relations for `σ ≤ l`; the residual
//! coupling to higher derivative orders is removed by the backward recursion
//!
//! ```text
//! L_{k,ν_k−1} = ℓ_{k,ν_k−1},
//! L_{k,l}     = ℓ_{k,l} − Σ_{s=l+1}^{ν_k−1} ℓ_{k,l}^{(s)}(z̃_k) · L_{k,s}.
//! ```
//!
//! With all multiplicities one this degenerates to classical Lagrange
//! interpolation multiplied by the window shift `(z̃_k/z)^p`, for which a
//! cheaper deflation-based construction is provided.

use crate::laurent::{nodal_poly, LaurentPoly, Poly};
use crate::{C64, Error, Result};

/// Pairwise node separation below which the construction is refused.
///
/// Fundamental denominators carry `(z̃_k − z̃_j)^{ν_j}`; separations near
/// f64 resolution make those blow up past any useful conditioning while not
/// being exact duplicates, so they get their own error distinct from
/// `DuplicateNode`.
const NEAR_DUPLICATE_TOL: f64 = 1e-13;

/// Default denominator exponent for an `m`-point interpolant:
/// `p̃ = ⌊(m−1)/2⌋`, the balanced window `span{z^{−⌊(m−1)/2⌋}, …, z^{⌈(m−1)/2⌉}}`.
pub fn default_p_tilde(m: usize) -> i64 {
    (m.saturating_sub(1) / 2) as i64
}

/// A Hermite interpolation problem: distinct nonzero nodes, a multiplicity
/// per node, the jet `values[k][l] = ζ_k^{(l)}` (`0 ≤ l < ν_k`), and the
/// window shift `p`.
#[derive(Clone, Debug)]
pub struct HermiteData {
    nodes: Vec<C64>,
    multiplicities: Vec<u32>,
    values: Vec<Vec<C64>>,
    p: i64,
}

impl HermiteData {
    /// Validates shapes: equal lengths, every `ν_k ≥ 1`, `values[k]` of
    /// length `ν_k`, nodes distinct, nonzero, and not pathologically close.
    pub fn new(
        nodes: Vec<C64>,
        multiplicities: Vec<u32>,
        values: Vec<Vec<C64>>,
        p: i64,
    ) -> Result<Self> {
        if nodes.len() != multiplicities.len() || nodes.len() != values.len() {
            return Err(Error::Domain(format!(
                "inconsistent Hermite data: {} nodes, {} multiplicities, {} jet lists",
                nodes.len(),
                multiplicities.len(),
                values.len()
            )));
        }
        for (k, (&nu, vals)) in multiplicities.iter().zip(&values).enumerate() {
            if nu == 0 {
                return Err(Error::Domain(format!("multiplicity ν_{k} must be ≥ 1")));
            }
            if vals.len() != nu as usize {
                return Err(Error::Domain(format!(
                    "jet at node {k} has {} entries, multiplicity is {nu}",
                    vals.len()
                )));
            }
        }
        check_nodes(&nodes)?;
        Ok(HermiteData {
            nodes,
            multiplicities,
            values,
            p,
        })
    }

    /// Total interpolation order `r = Σ ν_k`.
    pub fn r(&self) -> usize {
        self.multiplicities.iter().map(|&n| n as usize).sum()
    }

    /// Window shift.
    pub fn p(&self) -> i64 {
        self.p
    }
}

/// The fundamental Laurent polynomials of a Hermite problem, exposing the
/// duality structure for direct inspection.
#[derive(Clone, Debug)]
pub struct FundamentalSet {
    /// `fundamentals[k][l] = L_{k,l}`.
    pub fundamentals: Vec<Vec<LaurentPoly>>,
    /// Nodes the set was built on.
    pub nodes: Vec<C64>,
    /// Multiplicities per node.
    pub multiplicities: Vec<u32>,
    /// Window shift: every fundamental lives in `span{z^{−p}, …, z^{r−1−p}}`.
    pub p: i64,
    /// Total order `r`.
    pub r: usize,
}

impl FundamentalSet {
    /// Largest deviation of `L_{k,l}^{(σ)}(z̃_j)` from the Kronecker target
    /// `δ_{jk}δ_{lσ}` over all index pairs. Identity up to roundoff by
    /// construction; exposed so callers (and tests) can measure the actual
    /// conditioning of a concrete node set.
    pub fn duality_deviation(&self) -> Result<f64> {
        let mut worst = 0.0_f64;
        for (k, lk) in self.fundamentals.iter().enumerate() {
            for (l, fun) in lk.iter().enumerate() {
                for (j, &zj) in self.nodes.iter().enumerate() {
                    for sigma in 0..self.multiplicities[j] {
                        let got = fun.derivative_at(zj, sigma)?;
                        let want = if j == k && sigma as usize == l {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        };
                        worst = worst.max((got - want).norm());
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// Builds all Hermite fundamental Laurent polynomials `L_{k,l}` by the
/// backward recursion.
///
/// # Errors
///
/// `Domain` for empty/ill-shaped input or a zero node; `DuplicateNode` /
/// `NearDuplicateNode` for coincident or nearly coincident nodes.
pub fn hermite_fundamentals(
    nodes: &[C64],
    multiplicities: &[u32],
    p: i64,
) -> Result<FundamentalSet> {
    if nodes.is_empty() {
        return Err(Error::Domain("need at least one interpolation node".into()));
    }
    if nodes.len() != multiplicities.len() {
        return Err(Error::Domain(format!(
            "{} nodes but {} multiplicities",
            nodes.len(),
            multiplicities.len()
        )));
    }
    if multiplicities.iter().any(|&nu| nu == 0) {
        return Err(Error::Domain("multiplicities must be ≥ 1".into()));
    }
    check_nodes(nodes)?;
    let r: usize = multiplicities.iter().map(|&n| n as usize).sum();

    let mut all = Vec::with_capacity(nodes.len());
    for (k, &zk) in nodes.iter().enumerate() {
        let nu_k = multiplicities[k] as usize;

        // ∏_{j≠k} (z − z̃_j)^{ν_j} and its value-denominator ∏ (z̃_k − z̃_j)^{ν_j}.
        let mut base = Poly::one();
        let mut denom = C64::new(1.0, 0.0);
        for (j, &zj) in nodes.iter().enumerate() {
            if j == k {
                continue;
            }
            let lin = Poly::from_coeffs(vec![-zj, C64::new(1.0, 0.0)]);
            for _ in 0..multiplicities[j] {
                base = base.mul(&lin);
                denom *= zk - zj;
            }
        }
        base = base.scale(zk.powi(p as i32) / denom);

        // ℓ_{k,l} = (z − z̃_k)^l / l! · base · z^{−p}.
        let lin_k = Poly::from_coeffs(vec![-zk, C64::new(1.0, 0.0)]);
        let mut shift = Poly::one();
        let mut factorial = 1.0_f64;
        let mut ells = Vec::with_capacity(nu_k);
        for l in 0..nu_k {
            if l > 0 {
                factorial *= l as f64;
            }
            let poly = base.mul(&shift).scale(C64::new(1.0 / factorial, 0.0));
            ells.push(LaurentPoly::from_poly_shifted(-p, &poly));
            shift = shift.mul(&lin_k);
        }

        // Backward recursion removing higher-order coupling at z̃_k.
        let mut lk: Vec<Option<LaurentPoly>> = vec![None; nu_k];
        lk[nu_k - 1] = Some(ells[nu_k - 1].clone());
        for l in (0..nu_k.saturating_sub(1)).rev() {
            let mut acc = ells[l].clone();
            for s in (l + 1)..nu_k {
                let d = ells[l].derivative_at(zk, s as u32)?;
                acc = acc.add(&lk[s].as_ref().unwrap().scale(-d));
            }
            lk[l] = Some(acc);
        }
        all.push(lk.into_iter().map(Option::unwrap).collect());
    }
    Ok(FundamentalSet {
        fundamentals: all,
        nodes: nodes.to_vec(),
        multiplicities: multiplicities.to_vec(),
        p,
        r,
    })
}

/// The Hermite–Laurent interpolant `Σ_k Σ_l ζ_k^{(l)} L_{k,l}` of a jet
/// data set, in `span{z^{−p}, …, z^{r−1−p}}`.
pub fn hermite_laurent(data: &HermiteData) -> Result<LaurentPoly> {
    let set = hermite_fundamentals(&data.nodes, &data.multiplicities, data.p)?;
    let mut acc = LaurentPoly::zero();
    for (k, jets) in data.values.iter().enumerate() {
        for (l, &v) in jets.iter().enumerate() {
            acc = acc.add(&set.fundamentals[k][l].scale(v));
        }
    }
    Ok(acc)
}

/// Lagrange fundamental Laurent polynomials
/// `ℓ_k(z) = (z̃_k/z)^p · ω(z) / (ω′(z̃_k)(z − z̃_k))` via deflation of the
/// nodal polynomial — the multiplicity-one case of [`hermite_fundamentals`]
/// at a fraction of the cost.
pub fn lagrange_fundamentals(nodes: &[C64], p: i64) -> Result<Vec<LaurentPoly>> {
    if nodes.is_empty() {
        return Err(Error::Domain("need at least one interpolation node".into()));
    }
    check_nodes(nodes)?;
    let omega = nodal_poly(nodes)?;
    let omega_prime = omega.derivative();
    let mut out = Vec::with_capacity(nodes.len());
    for &zk in nodes {
        let dk = omega_prime.eval(zk);
        if dk.norm() == 0.0 {
            return Err(Error::Numerical(format!(
                "ω′ vanished at node {zk}; nodes are effectively coincident"
            )));
        }
        let poly = omega.deflate(zk).scale(zk.powi(p as i32) / dk);
        out.push(LaurentPoly::from_poly_shifted(-p, &poly));
    }
    Ok(out)
}

/// Lagrange–Laurent interpolant of values at distinct nodes in
/// `span{z^{−p}, …, z^{m−1−p}}`.
pub fn lagrange_laurent(nodes: &[C64], values: &[C64], p: i64) -> Result<LaurentPoly> {
    if nodes.len() != values.len() {
        return Err(Error::Domain(format!(
            "{} nodes but {} values",
            nodes.len(),
            values.len()
        )));
    }
    let fundamentals = lagrange_fundamentals(nodes, p)?;
    let mut acc = LaurentPoly::zero();
    for (fun, &v) in fundamentals.iter().zip(values) {
        acc = acc.add(&fun.scale(v));
    }
    Ok(acc)
}

fn check_nodes(nodes: &[C64]) -> Result<()> {
    for (k, z) in nodes.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("node {k} is not finite: {z}")));
        }
        if z.norm() == 0.0 {
            return Err(Error::Domain(
                "node at z = 0 is outside every Laurent window".into(),
            ));
        }
    }
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let d = (nodes[i] - nodes[j]).norm();
            if d == 0.0 {
                return Err(Error::DuplicateNode(format!(
                    "nodes {i} and {j} coincide at {}",
                    nodes[i]
                )));
            }
            if d < NEAR_DUPLICATE_TOL {
                return Err(Error::NearDuplicateNode(format!(
                    "nodes {i} and {j} are only {d:.3e} apart"
                )));
            }
        }
    }
    Ok(())
}
