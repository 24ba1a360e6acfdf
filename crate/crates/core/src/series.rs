//! The rational basis on the real line: finite expansions, FFT-based
//! approximation, multiplication, Cauchy projections, principal-value
//! integration, quadrature and inner products.
//!
//! The basis element of index `j != 0` is `R_j(z) = M_beta(z)^j - 1`, where
//! `M_beta` is the Möbius map of [`crate::point::mobius`]. `R_0` vanishes
//! identically and is never stored. Every element is square integrable and
//! decays like `1/z` at infinity.

use crate::error::{CoreError, Result};
use crate::point::{circle_preimage, AxisPoint, Point};
use num_complex::Complex64;
use num_traits::Zero;
use rustfft::FftPlanner;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Default magnitude threshold below which coefficients are dropped when an
/// expansion or operator application is truncated. Sits well below the
/// default GMRES tolerance of `1e-8`.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-12;

/// Tolerance on `|f(infinity)|` beyond which a sampled function is rejected
/// as non-decaying.
pub const DECAY_TOL: f64 = 1e-10;

/// A finite expansion `sum_j a_j R_j` with sparse complex coefficients.
///
/// Index 0 is never stored; arithmetic producing it discards it, since
/// `R_0` is identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSeries {
    beta: f64,
    coeffs: BTreeMap<i64, Complex64>,
}

fn check_beta(beta: f64) -> Result<f64> {
    if beta.is_finite() && beta > 0.0 {
        Ok(beta)
    } else {
        Err(CoreError::InvalidParameter(format!(
            "beta must be a positive finite number, got {beta}"
        )))
    }
}

impl RationalSeries {
    /// The zero series.
    pub fn new(beta: f64) -> Result<Self> {
        Ok(RationalSeries {
            beta: check_beta(beta)?,
            coeffs: BTreeMap::new(),
        })
    }

    /// The single basis element `R_j` (the zero series when `j = 0`).
    pub fn basis_element(beta: f64, j: i64) -> Result<Self> {
        let mut s = Self::new(beta)?;
        s.add_term(j, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    /// Build a series from `(index, coefficient)` pairs. Repeated indices
    /// accumulate; index 0 is discarded.
    pub fn from_terms<I>(beta: f64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut s = Self::new(beta)?;
        for (j, c) in terms {
            s.add_term(j, c);
        }
        Ok(s)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn coeff(&self, j: i64) -> Complex64 {
        self.coeffs.get(&j).copied().unwrap_or_else(Complex64::zero)
    }

    /// Iterator over stored `(index, coefficient)` pairs in index order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&j, &c)| (j, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|j|` among stored indices (0 for the empty series).
    pub fn max_index(&self) -> i64 {
        self.coeffs.keys().map(|j| j.abs()).max().unwrap_or(0)
    }

    /// Accumulate `c` onto the coefficient of `R_j`; `j = 0` is a no-op.
    pub fn add_term(&mut self, j: i64, c: Complex64) {
        if j == 0 || c == Complex64::zero() {
            return;
        }
        let entry = self.coeffs.entry(j).or_insert_with(Complex64::zero);
        *entry += c;
        if *entry == Complex64::zero() {
            self.coeffs.remove(&j);
        }
    }

    fn check_same_beta(&self, other: &Self) -> Result<()> {
        if self.beta == other.beta {
            Ok(())
        } else {
            Err(CoreError::BetaMismatch(self.beta, other.beta))
        }
    }

    /// `self + other` (equal beta required).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_beta(other)?;
        let mut out = self.clone();
        for (j, c) in other.terms() {
            out.add_term(j, c);
        }
        Ok(out)
    }

    /// `self - other` (equal beta required).
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_beta(other)?;
        let mut out = self.clone();
        for (j, c) in other.terms() {
            out.add_term(j, -c);
        }
        Ok(out)
    }

    /// Scale every coefficient by `c`.
    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self {
            beta: self.beta,
            coeffs: BTreeMap::new(),
        };
        if c == Complex64::zero() {
            return out;
        }
        for (j, a) in self.terms() {
            out.coeffs.insert(j, a * c);
        }
        out
    }

    /// Drop coefficients with magnitude below `tol`.
    pub fn truncate(&mut self, tol: f64) {
        self.coeffs.retain(|_, c| c.norm() >= tol);
    }

    fn coeff_sum(&self) -> Complex64 {
        self.terms().map(|(_, c)| c).sum()
    }

    /// Exact product via `R_j R_k = R_{j+k} - R_j - R_k`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_beta(other)?;
        let mut out = Self::new(self.beta)?;
        let sum_other = other.coeff_sum();
        let sum_self = self.coeff_sum();
        for (j, a) in self.terms() {
            for (k, b) in other.terms() {
                out.add_term(j + k, a * b);
            }
        }
        for (j, a) in self.terms() {
            out.add_term(j, -a * sum_other);
        }
        for (k, b) in other.terms() {
            out.add_term(k, -b * sum_self);
        }
        Ok(out)
    }

    /// Boundary value from above of the Cauchy transform: keeps positive
    /// indices, annihilates negative ones.
    pub fn cauchy_plus(&self) -> Self {
        Self {
            beta: self.beta,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&j, _)| j > 0)
                .map(|(&j, &c)| (j, c))
                .collect(),
        }
    }

    /// Boundary value from below of the Cauchy transform: negates negative
    /// indices, annihilates positive ones.
    pub fn cauchy_minus(&self) -> Self {
        Self {
            beta: self.beta,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&j, _)| j < 0)
                .map(|(&j, &c)| (j, -c))
                .collect(),
        }
    }

    /// Complex conjugate of the represented function on the real axis:
    /// `conj(R_j) = R_{-j}` with conjugated coefficients.
    pub fn conjugate(&self) -> Self {
        Self {
            beta: self.beta,
            coeffs: self.coeffs.iter().map(|(&j, &c)| (-j, c.conj())).collect(),
        }
    }

    /// Pointwise evaluation at a finite complex point.
    ///
    /// Evaluation exactly at `z = -i beta` with positive indices present (or
    /// `z = +i beta` with negative indices) is a pole error; at those points
    /// with only the opposite-sign indices the finite limit is returned.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let ib = Complex64::new(0.0, self.beta);
        if z == -ib {
            if self.coeffs.keys().any(|&j| j > 0) {
                return Err(CoreError::PoleEvaluation);
            }
            // M = infinity: R_j -> -1 for j < 0
            return Ok(-self.coeff_sum());
        }
        if z == ib {
            if self.coeffs.keys().any(|&j| j < 0) {
                return Err(CoreError::PoleEvaluation);
            }
            // M = 0: R_j -> -1 for j > 0
            return Ok(-self.coeff_sum());
        }
        // d = M - 1 = -2 i beta / (z + i beta), free of cancellation even
        // when M rounds to 1 far from the origin
        let d = Complex64::new(0.0, -2.0 * self.beta) / (z + ib);
        let mut acc = Complex64::zero();
        for (j, a) in self.terms() {
            acc += a * basis_value(d, j);
        }
        Ok(acc)
    }

    /// Evaluation on the extended plane; the value at infinity is 0.
    pub fn eval_point(&self, z: Point) -> Result<Complex64> {
        match z {
            Point::Infinity => Ok(Complex64::zero()),
            Point::Finite(z) => self.eval(z),
        }
    }

    /// Cauchy transform off the real axis.
    ///
    /// For `Im z > 0` this is `sum_{j>0} a_j R_j(z)`; for `Im z < 0` it is
    /// `-sum_{j<0} a_j R_j(z)`. Boundary limits agree with
    /// [`RationalSeries::cauchy_plus`] / [`RationalSeries::cauchy_minus`].
    pub fn cauchy_offaxis(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Err(CoreError::OffAxisRequired);
        }
        let ib = Complex64::new(0.0, self.beta);
        let d = Complex64::new(0.0, -2.0 * self.beta) / (z + ib);
        let mut acc = Complex64::zero();
        if z.im > 0.0 {
            for (j, a) in self.terms() {
                if j > 0 {
                    acc += a * basis_value(d, j);
                }
            }
        } else {
            for (j, a) in self.terms() {
                if j < 0 {
                    acc -= a * basis_value(d, j);
                }
            }
        }
        Ok(acc)
    }

    /// Principal-value integral over the real axis, `-2 pi beta sum |j| a_j`.
    pub fn pv_integral(&self) -> Complex64 {
        self.pv_integral_detailed().symmetric
    }

    /// Principal-value integral with the two one-sided forms.
    ///
    /// The three expressions agree exactly for integrable functions; for a
    /// truncated expansion their discrepancy measures how far the
    /// represented function is from integrable.
    pub fn pv_integral_detailed(&self) -> PvIntegral {
        let mut sym = Complex64::zero();
        let mut pos = Complex64::zero();
        let mut neg = Complex64::zero();
        for (j, a) in self.terms() {
            sym += a * (j.abs() as f64);
            if j > 0 {
                pos += a * (j as f64);
            } else {
                neg += a * (j as f64);
            }
        }
        let c = 2.0 * PI * self.beta;
        let positive_side = -2.0 * c * pos;
        let negative_side = 2.0 * c * neg;
        PvIntegral {
            symmetric: -c * sym,
            positive_side,
            negative_side,
            discrepancy: (positive_side - negative_side).norm(),
        }
    }

    /// Inner product `integral of self * conj(other)`.
    ///
    /// Uses the closed form `integral R_j conj(R_k) = 4 pi beta min(|j|,|k|)`
    /// for same-sign index pairs; opposite-sign pairs are orthogonal.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_beta(other)?;
        let mut acc = Complex64::zero();
        for (j, a) in self.terms() {
            for (k, b) in other.terms() {
                if (j > 0) == (k > 0) {
                    let w = j.abs().min(k.abs()) as f64;
                    acc += a * b.conj() * w;
                }
            }
        }
        Ok(4.0 * PI * self.beta * acc)
    }

    /// Norm induced by [`RationalSeries::inner`].
    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same series").re.max(0.0).sqrt()
    }

    /// Interpolatory expansion of a sampled function through the fast
    /// Fourier transform on the mapped grid.
    ///
    /// `f` is sampled at the `2n + 1` preimages of the roots of unity, the
    /// point at infinity included; it must vanish there (within
    /// [`DECAY_TOL`]). Output coefficients below `trunc_tol` are dropped.
    pub fn expand<F>(f: F, n: usize, beta: f64, trunc_tol: f64) -> Result<Self>
    where
        F: Fn(AxisPoint) -> Complex64,
    {
        let beta = check_beta(beta)?;
        if n == 0 {
            return Err(CoreError::InvalidParameter(
                "expansion half-order n must be at least 1".into(),
            ));
        }
        let len = 2 * n + 1;
        let mut samples = Vec::with_capacity(len);
        for l in 0..len {
            let theta = 2.0 * PI * l as f64 / len as f64;
            let x = circle_preimage(theta, beta);
            let v = f(x);
            if l == 0 {
                let mag = v.norm();
                if mag > DECAY_TOL {
                    return Err(CoreError::NonDecaying(mag));
                }
            }
            samples.push(v);
        }
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(len);
        fft.process(&mut samples);
        let scale = 1.0 / len as f64;
        let mut out = Self::new(beta)?;
        for j in 1..=n as i64 {
            let a = samples[j as usize] * scale;
            if a.norm() >= trunc_tol {
                out.coeffs.insert(j, a);
            }
            let a = samples[len - j as usize] * scale;
            if a.norm() >= trunc_tol {
                out.coeffs.insert(-j, a);
            }
        }
        Ok(out)
    }
}

/// `(1 + d)^j - 1` for integer `j`, where `d = M - 1`.
///
/// When `|j d|` is small the direct power loses the value to cancellation
/// against the subtracted 1, so the generalized binomial series in `d` is
/// summed instead; it converges geometrically in that regime and keeps the
/// basis accurate arbitrarily far out on the axis.
fn basis_value(d: Complex64, j: i64) -> Complex64 {
    if j.unsigned_abs() as f64 * d.norm() < 0.1 {
        let mut term = (j as f64) * d;
        let mut acc = term;
        let mut k = 1i64;
        while term.norm() > 1e-18 * acc.norm().max(f64::MIN_POSITIVE) && k < 64 {
            term *= d * ((j - k) as f64 / (k + 1) as f64);
            acc += term;
            k += 1;
        }
        acc
    } else {
        (d + 1.0).powi(j as i32) - 1.0
    }
}

/// Result of [`RationalSeries::pv_integral_detailed`].
#[derive(Clone, Copy, Debug)]
pub struct PvIntegral {
    /// The symmetric form `-2 pi beta sum |j| a_j`.
    pub symmetric: Complex64,
    /// One-sided form over positive indices, `-4 pi beta sum_{j>=1} j a_j`.
    pub positive_side: Complex64,
    /// One-sided form over negative indices, `4 pi beta sum_{j<=-1} j a_j`.
    pub negative_side: Complex64,
    /// `|positive_side - negative_side|`; zero for integrable functions.
    pub discrepancy: f64,
}

/// Quadrature rule on the compactified real axis derived from the
/// integration formula for the basis.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    nodes: Vec<AxisPoint>,
    weights: Vec<f64>,
    n: usize,
}

impl QuadratureRule {
    /// Rule with `2n + 1` nodes at the preimages of the roots of unity.
    ///
    /// The node for `theta = 0` is the point at infinity, where admissible
    /// integrands vanish. The weights
    /// `omega_l = -(4 pi beta / (2n+1)) sum_{j=1}^{n} j cos(j theta_l)`
    /// are evaluated in one FFT pass, so that applying the rule to `f`
    /// reproduces the principal-value integral of the order-`n` expansion
    /// of `f` to rounding.
    pub fn new(n: usize, beta: f64) -> Result<Self> {
        let beta = check_beta(beta)?;
        if n == 0 {
            return Err(CoreError::InvalidParameter(
                "quadrature half-order n must be at least 1".into(),
            ));
        }
        let len = 2 * n + 1;
        let mut nodes = Vec::with_capacity(len);
        for l in 0..len {
            let theta = 2.0 * PI * l as f64 / len as f64;
            nodes.push(circle_preimage(theta, beta));
        }
        // omega_l = -(2 pi beta / len) sum_{j=-n}^{n} |j| e^{-i j theta_l},
        // the forward transform of the |j| sequence
        let mut spectrum = vec![Complex64::zero(); len];
        for j in 1..=n {
            spectrum[j] = Complex64::new(j as f64, 0.0);
            spectrum[len - j] = Complex64::new(j as f64, 0.0);
        }
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(len).process(&mut spectrum);
        let scale = -2.0 * PI * beta / len as f64;
        let weights = spectrum.iter().map(|w| scale * w.re).collect();
        Ok(QuadratureRule { nodes, weights, n })
    }

    pub fn half_order(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[AxisPoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Apply the rule to a sampled function (which must vanish at infinity).
    pub fn apply<F>(&self, f: F) -> Complex64
    where
        F: Fn(AxisPoint) -> Complex64,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}
