//! Measures on the unit circle: trigonometric moments, Verblunsky
//! coefficients, and monic Szegő polynomials via the forward recurrence.
//!
//! The canonical internal representation is the Verblunsky sequence
//! `δ_n = ρ_n(0)`: the forward recurrence
//!
//! ```text
//! ρ_n(z)  = z·ρ_{n−1}(z) + δ_n·ρ*_{n−1}(z)
//! ρ*_n(z) = δ̄_n·z·ρ_{n−1}(z) + ρ*_{n−1}(z)
//! ```
//!
//! is numerically stable and the para-orthogonal construction consumes
//! `ρ_n`, `ρ*_n` directly. Moments are closed-form for the built-in family.
//!
//! The Rogers–Szegő measure (the wrapped Gaussian on the circle) is carried
//! in closed form: moments `μ_k = q^{k²/2}`, Verblunsky coefficients
//! `δ_n = (−1)^n q^{n/2}`, and an explicit monic-polynomial formula in terms
//! of q-binomial coefficients that serves as an oracle for the recurrence.
//!
//! Two evaluation routes for the Szegő pair are exposed deliberately:
//! [`MeasureSpec::szego_poly`] builds coefficient vectors (needed when a
//! polynomial object is required), while [`MeasureSpec::szego_values`] runs
//! the same recurrence directly on values at a point. The value route is the
//! only numerically sound one near `q → 1`, where the coefficient dynamic
//! range destroys evaluation through the monomial basis; everything
//! downstream that touches zeros or anchoring uses it.

use crate::laurent::{reciprocal, Poly};
use crate::{C64, Error, Result};
use serde::{Deserialize, Serialize};

/// A measure on the unit circle.
///
/// `RogersSzego` carries the family parameter `q ∈ (0,1)`; `Explicit`
/// carries a finite moment window `μ_0 … μ_K` (negative moments follow from
/// `μ_{−k} = conj(μ_k)`) together with Verblunsky coefficients `δ_1, δ_2, …`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "measure", rename_all = "kebab-case")]
pub enum MeasureSpec {
    /// Rogers–Szegő weight with parameter `q ∈ (0, 1)`; `μ_k = q^{k²/2}`,
    /// `δ_n = (−1)^n q^{n/2}`, normalized so `μ_0 = 1`.
    RogersSzego { q: f64 },
    /// User-supplied moments (indices `0..=K`, negatives by conjugation) and
    /// Verblunsky coefficients (`verblunsky[n-1]` holds `δ_n`); `δ_0 = 1` by
    /// convention and is not stored. Consistency between the two lists is
    /// the caller's responsibility; `|δ_n| < 1` is enforced.
    Explicit {
        moments: Vec<(f64, f64)>,
        verblunsky: Vec<(f64, f64)>,
    },
}

impl MeasureSpec {
    /// Rogers–Szegő measure with parameter `q`.
    ///
    /// # Errors
    ///
    /// `InvalidMeasure` unless `0 < q < 1`.
    pub fn rogers_szego(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) || !q.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "Rogers-Szegő parameter must satisfy 0 < q < 1, got {q}"
            )));
        }
        Ok(MeasureSpec::RogersSzego { q })
    }

    /// Explicit measure from a nonneg-index moment list and Verblunsky list.
    ///
    /// # Errors
    ///
    /// `InvalidMeasure` if the moment window is empty, `μ_0` is not real, or
    /// any `|δ_n| ≥ 1`.
    pub fn explicit(moments: Vec<C64>, verblunsky: Vec<C64>) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InvalidMeasure("explicit measure needs μ_0".into()));
        }
        if moments[0].im != 0.0 {
            return Err(Error::InvalidMeasure(format!(
                "μ_0 must be real, got {}",
                moments[0]
            )));
        }
        for (i, d) in verblunsky.iter().enumerate() {
            if d.norm() >= 1.0 {
                return Err(Error::InvalidMeasure(format!(
                    "Verblunsky coefficient δ_{} = {} is not inside the unit disk",
                    i + 1,
                    d
                )));
            }
        }
        Ok(MeasureSpec::Explicit {
            moments: moments.iter().map(|c| (c.re, c.im)).collect(),
            verblunsky: verblunsky.iter().map(|c| (c.re, c.im)).collect(),
        })
    }

    /// The Rogers–Szegő parameter, if this is that family.
    pub fn q(&self) -> Option<f64> {
        match self {
            MeasureSpec::RogersSzego { q } => Some(*q),
            MeasureSpec::Explicit { .. } => None,
        }
    }

    /// Trigonometric moment `μ_k = ∫ e^{−ikθ} dμ(θ)`.
    ///
    /// Conjugate-symmetric in `k`; real-valued `q^{k²/2}` for Rogers–Szegő.
    ///
    /// # Errors
    ///
    /// `MomentOutOfRange` for an explicit measure beyond its stored window.
    pub fn moment(&self, k: i64) -> Result<C64> {
        match self {
            MeasureSpec::RogersSzego { q } => {
                let kk = k as f64;
                Ok(C64::new(q.powf(kk * kk / 2.0), 0.0))
            }
            MeasureSpec::Explicit { moments, .. } => {
                let idx = k.unsigned_abs() as usize;
                let hi = moments.len() as i64 - 1;
                let (re, im) = *moments.get(idx).ok_or(Error::MomentOutOfRange {
                    k,
                    lo: -hi,
                    hi,
                })?;
                Ok(if k < 0 {
                    C64::new(re, -im)
                } else {
                    C64::new(re, im)
                })
            }
        }
    }

    /// Verblunsky coefficient `δ_n = ρ_n(0)`, `n ≥ 1`.
    ///
    /// Rogers–Szegő closed form: `δ_n = (−1)^n q^{n/2}`.
    ///
    /// # Errors
    ///
    /// `Domain` for `n = 0`; `InvalidMeasure` if a stored coefficient is
    /// missing or sits outside the open unit disk.
    pub fn verblunsky(&self, n: usize) -> Result<C64> {
        if n == 0 {
            return Err(Error::Domain("Verblunsky index must be ≥ 1".into()));
        }
        match self {
            MeasureSpec::RogersSzego { q } => {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                Ok(C64::new(sign * q.powf(n as f64 / 2.0), 0.0))
            }
            MeasureSpec::Explicit { verblunsky, .. } => {
                let (re, im) = *verblunsky.get(n - 1).ok_or_else(|| {
                    Error::InvalidMeasure(format!(
                        "Verblunsky coefficient δ_{n} not stored (have {})",
                        verblunsky.len()
                    ))
                })?;
                let d = C64::new(re, im);
                if d.norm() >= 1.0 {
                    return Err(Error::InvalidMeasure(format!("|δ_{n}| ≥ 1: {d}")));
                }
                Ok(d)
            }
        }
    }

    /// Monic Szegő polynomial `ρ_n` with its reciprocal `ρ*_n`, built by the
    /// forward recurrence from `ρ_0 = ρ*_0 ≡ 1`.
    pub fn szego_poly(&self, n: usize) -> Result<SzegoPair> {
        let mut rho = Poly::one();
        let mut rho_star = Poly::one();
        let z = Poly::from_coeffs(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        for step in 1..=n {
            let d = self.verblunsky(step)?;
            let z_rho = z.mul(&rho);
            let new_rho = z_rho.add(&rho_star.scale(d));
            let new_star = z_rho.scale(d.conj()).add(&rho_star);
            rho = new_rho;
            rho_star = new_star;
        }
        Ok(SzegoPair { rho, rho_star, n })
    }

    /// Values `(ρ_m(z), ρ*_m(z))` by running the forward recurrence on
    /// values instead of coefficients.
    ///
    /// This is the numerically stable evaluation route: coefficient vectors
    /// of `ρ_m` span a dynamic range of order `q^{−m²/4}`, which destroys
    /// Horner evaluation on the circle as `q → 1`, while the value
    /// recurrence stays conditioned for every tested `(q, m)`.
    pub fn szego_values(&self, m: usize, z: C64) -> Result<(C64, C64)> {
        let mut rho = C64::new(1.0, 0.0);
        let mut star = C64::new(1.0, 0.0);
        for n in 1..=m {
            let d = self.verblunsky(n)?;
            let zr = z * rho;
            let new_rho = zr + d * star;
            let new_star = d.conj() * zr + star;
            rho = new_rho;
            star = new_star;
        }
        Ok((rho, star))
    }
}

/// A monic Szegő polynomial together with its reciprocal.
#[derive(Clone, Debug)]
pub struct SzegoPair {
    /// Monic `ρ_n` (degree `n`, zeros strictly inside the unit disk).
    pub rho: Poly,
    /// Reciprocal `ρ*_n(z) = z^n · conj(ρ_n(1/z̄))`.
    pub rho_star: Poly,
    /// Degree.
    pub n: usize,
}

impl SzegoPair {
    /// Checks the defining relation `ρ* = reciprocal(ρ, n)` (exact up to
    /// construction roundoff; used in tests).
    pub fn star_matches_reciprocal(&self) -> Result<f64> {
        let r = reciprocal(&self.rho, self.n)?;
        let worst = (0..=self.n)
            .map(|j| (r.coeff(j) - self.rho_star.coeff(j)).norm())
            .fold(0.0_f64, f64::max);
        Ok(worst)
    }
}

/// q-binomial coefficient `[n, j]_q` in log-free running-product form:
/// `∏_{i=0}^{j−1} (1 − q^{n−i}) / (1 − q^{i+1})`.
///
/// For `q < 1` every factor lies in `(0, 1]`-ish ranges, so there is no
/// overflow risk at the orders used here (`n ≤ ~200`).
///
/// # Errors
///
/// `Domain` unless `0 ≤ j ≤ n` and `0 < q < 1`.
pub fn q_binomial(n: u32, j: u32, q: f64) -> Result<f64> {
    if j > n {
        return Err(Error::Domain(format!("q-binomial needs 0 ≤ j ≤ n, got ({n}, {j})")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!("q-binomial needs 0 < q < 1, got {q}")));
    }
    // Symmetry [n,j] = [n,n−j]: the smaller index gives fewer factors and
    // makes the boundary cases j ∈ {0, n} exact empty products.
    let j = j.min(n - j);
    let mut prod = 1.0;
    for i in 0..j {
        prod *= (1.0 - q.powi((n - i) as i32)) / (1.0 - q.powi((i + 1) as i32));
    }
    Ok(prod)
}

/// Closed-form monic Rogers–Szegő polynomial
/// `ρ_n(z) = Σ_j (−1)^{n−j} [n,j]_q q^{(n−j)/2} z^j`.
///
/// Serves as an independent oracle for the recurrence-built
/// [`MeasureSpec::szego_poly`].
pub fn rogers_szego_poly_closed(n: u32, q: f64) -> Result<Poly> {
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for j in 0..=n {
        let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * q_binomial(n, j, q)? * q.powf((n - j) as f64 / 2.0);
        coeffs.push(C64::new(c, 0.0));
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Rogers–Szegő weight density: the wrapped Gaussian
/// `ω(θ, q) = Σ_{|j| ≤ terms} exp(−(θ−2πj)² / (2 ln(1/q))) / √(2π ln(1/q))`.
///
/// Normalized so `∫₀^{2π} ω dθ = 1` and symmetric, `ω(θ) = ω(−θ)`.
pub fn weight_density(q: f64, theta: f64, terms: u32) -> f64 {
    let two_l = 2.0 * (1.0 / q).ln();
    let norm = (std::f64::consts::PI * two_l).sqrt();
    let mut s = 0.0;
    let t = terms as i64;
    for j in -t..=t {
        let d = theta - 2.0 * std::f64::consts::PI * j as f64;
        s += (-d * d / two_l).exp();
    }
    s / norm
}

/// Truncation order for [`weight_density`] that keeps the dropped tail below
/// 1e−16 of the peak for `θ ∈ [0, 2π]`.
///
/// The `j`-th dropped term is at most `exp(−(2π(|j|−1))²/(2 ln 1/q))`, so
/// `|j| ≥ 2 + √(2·ln(1/q)·ln(1e16))/(2π)` suffices.
pub fn weight_density_terms(q: f64) -> u32 {
    let l = (1.0 / q).ln();
    (2.0 + (2.0 * l * 36.9_f64).sqrt() / (2.0 * std::f64::consts::PI)).ceil() as u32
}
