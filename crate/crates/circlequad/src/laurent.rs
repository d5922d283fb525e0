//! Exact-window complex polynomial and Laurent-polynomial arithmetic.
//!
//! A [`Poly`] is a dense list of complex coefficients in ascending order
//! (index `j` holds the coefficient of `z^j`). A [`LaurentPoly`] adds an
//! integer `low` so the stored coefficients cover the exponent window
//! `low … low+len−1`; it is the universal function representation of the
//! crate — interpolants, fundamental polynomials, and approximants all live
//! in some `Λ_{p,q} = span{z^p, …, z^q}`.
//!
//! Two representation rules matter for correctness downstream:
//!
//! * **Exact-zero trimming only.** Coefficients are dropped from the ends of
//!   the window only when they are exactly `0.0 + 0.0i`. Floating-point
//!   near-zeros are kept; silently shrinking the window would corrupt the
//!   containment checks (`in_window`) that the interpolation theorems are
//!   tested against.
//! * **Horner evaluation in the monomial basis.** Windows here stay below a
//!   couple hundred exponents and evaluation points sit on `|z| = 1`, where
//!   monomial conditioning is benign, so no barycentric or FFT forms are
//!   used.

use crate::{C64, Error, Result};

/// Complex polynomial with dense ascending coefficients.
///
/// The zero polynomial is the empty coefficient list (degree −1); otherwise
/// the leading stored coefficient is nonzero (exact-zero trimming).
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Poly { coeffs: vec![C64::new(1.0, 0.0)] }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: C64) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// Builds from ascending coefficients, trimming exact trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Ascending coefficient slice (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Degree; −1 encodes the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^j` (zero beyond the stored window).
    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Evaluates by Horner's scheme.
    pub fn eval(&self, z: C64) -> C64 {
        let mut v = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            v = v * z + c;
        }
        v
    }

    /// First derivative (exact term-by-term rule).
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * ((i + 1) as f64))
                .collect(),
        )
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::from_coeffs(out)
    }

    /// Product by exact coefficient convolution.
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Synthetic division by the monic linear factor `(z − root)`.
    ///
    /// Returns the degree-(n−1) quotient; the remainder (the value at the
    /// root) is discarded. Used to peel single factors off nodal polynomials
    /// when assembling fundamental Lagrange polynomials.
    pub fn deflate(&self, root: C64) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); n - 1];
        let mut acc = self.coeffs[n - 1];
        for j in (0..n - 1).rev() {
            out[j] = acc;
            acc = self.coeffs[j] + acc * root;
        }
        Poly::from_coeffs(out)
    }
}

/// Reciprocal (reversed) polynomial: `p*(z) = z^n · conj(p(1/z̄))`.
///
/// Coefficient `j` of the result is the conjugate of coefficient `n−j` of
/// `p` (zero-padded up to degree `n`).
///
/// # Errors
///
/// `Domain` if `deg(p) > n`.
pub fn reciprocal(p: &Poly, n: usize) -> Result<Poly> {
    if p.degree() > n as i64 {
        return Err(Error::Domain(format!(
            "reciprocal: degree {} exceeds reversal order {}",
            p.degree(),
            n
        )));
    }
    let out = (0..=n).map(|j| p.coeff(n - j).conj()).collect();
    Ok(Poly::from_coeffs(out))
}

/// Monic nodal polynomial `ω(z) = ∏_k (z − nodes[k])`.
///
/// # Errors
///
/// `DuplicateNode` if two nodes coincide exactly.
pub fn nodal_poly(nodes: &[C64]) -> Result<Poly> {
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            if a == b {
                return Err(Error::DuplicateNode(format!("repeated node {a}")));
            }
        }
    }
    let mut p = Poly::one();
    for t in nodes {
        p = p.mul(&Poly::from_coeffs(vec![-t, C64::new(1.0, 0.0)]));
    }
    Ok(p)
}

/// Laurent polynomial: coefficients for exponents `low … low+len−1`.
///
/// Trimmed at both window ends (exact zeros only). The zero element is the
/// empty coefficient list with `low = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<C64>,
}

impl LaurentPoly {
    /// The zero element.
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    /// Builds from a window start and ascending coefficients, trimming exact
    /// zeros from both ends.
    pub fn from_parts(mut low: i64, mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        let lead_zeros = coeffs
            .iter()
            .take_while(|c| c.re == 0.0 && c.im == 0.0)
            .count();
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            low += lead_zeros as i64;
        }
        if coeffs.is_empty() {
            low = 0;
        }
        LaurentPoly { low, coeffs }
    }

    /// Embeds an ordinary polynomial (window starting at exponent 0).
    pub fn from_poly(p: &Poly) -> Self {
        LaurentPoly::from_parts(0, p.coeffs().to_vec())
    }

    /// A polynomial shifted to start at exponent `low` (i.e. `z^low · p(z)`).
    pub fn from_poly_shifted(low: i64, p: &Poly) -> Self {
        LaurentPoly::from_parts(low, p.coeffs().to_vec())
    }

    /// Lowest stored exponent (0 for the zero element).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest stored exponent; one below `low` for the zero element.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Ascending coefficient slice for exponents `low() … high()`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^j` (zero outside the stored window).
    pub fn coeff(&self, j: i64) -> C64 {
        if j < self.low {
            return C64::new(0.0, 0.0);
        }
        self.coeffs
            .get((j - self.low) as usize)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// True when every nonzero exponent lies in `[a, b]` (vacuously true for
    /// the zero element).
    pub fn in_window(&self, a: i64, b: i64) -> bool {
        self.is_zero() || (self.low >= a && self.high() <= b)
    }

    /// Evaluates `Σ c_j z^j` by Horner on the polynomial part times `z^low`.
    ///
    /// # Errors
    ///
    /// `Domain` if `z = 0` while negative exponents are present.
    pub fn eval(&self, z: C64) -> Result<C64> {
        if self.low < 0 && z.re == 0.0 && z.im == 0.0 {
            return Err(Error::Domain(
                "Laurent evaluation at z = 0 with negative exponents".into(),
            ));
        }
        let mut v = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            v = v * z + c;
        }
        if self.low != 0 && !self.is_zero() {
            v *= z.powi(self.low as i32);
        }
        Ok(v)
    }

    /// Exact symbolic derivative of the given order.
    ///
    /// Each application maps `c_j z^j ↦ j·c_j z^{j−1}`, so the window shifts
    /// down by `order`.
    pub fn derivative(&self, order: u32) -> LaurentPoly {
        let mut low = self.low;
        let mut coeffs = self.coeffs.clone();
        for _ in 0..order {
            for (i, c) in coeffs.iter_mut().enumerate() {
                *c *= (low + i as i64) as f64;
            }
            low -= 1;
        }
        LaurentPoly::from_parts(low, coeffs)
    }

    /// Value of the `order`-th derivative at `z` (symbolic, then Horner).
    pub fn derivative_at(&self, z: C64, order: u32) -> Result<C64> {
        if order == 0 {
            return self.eval(z);
        }
        self.derivative(order).eval(z)
    }

    /// Sum, over the union window.
    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut out = vec![C64::new(0.0, 0.0); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.low - low) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[(other.low - low) as usize + i] += c;
        }
        LaurentPoly::from_parts(low, out)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: C64) -> LaurentPoly {
        LaurentPoly::from_parts(self.low, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Product by exact coefficient convolution (windows add).
    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentPoly::from_parts(self.low + other.low, out)
    }
}
