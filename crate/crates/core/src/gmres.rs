//! GMRES over an inner-product space of series.
//!
//! The solver is generic over the element type: plain series, oscillatory
//! series and matrix series all drive the same code path through the
//! [`Element`] interface. Operator applications are exact on basis
//! expansions up to the configured truncation, so no finite-dimensional
//! discretization of the operator is ever formed.

use crate::error::{CoreError, Result};
use crate::matrix::MatrixOscSeries;
use crate::osc::OscSeries;
use crate::series::RationalSeries;
use num_complex::Complex64;
use num_traits::Zero;

/// An element of an inner-product space with the operations GMRES needs.
pub trait Element: Clone {
    /// Sesquilinear inner product, linear in `self`.
    fn inner(&self, other: &Self) -> Result<Complex64>;
    /// `self += c * other`.
    fn axpy(&mut self, c: Complex64, other: &Self);
    /// `self *= c`.
    fn scale_mut(&mut self, c: Complex64);
    /// Drop negligible parts.
    fn truncate_mut(&mut self, tol: f64);

    fn norm(&self) -> Result<f64> {
        Ok(self.inner(self)?.re.max(0.0).sqrt())
    }
}

impl Element for RationalSeries {
    fn inner(&self, other: &Self) -> Result<Complex64> {
        RationalSeries::inner(self, other)
    }
    fn axpy(&mut self, c: Complex64, other: &Self) {
        for (j, a) in other.terms() {
            self.add_term(j, c * a);
        }
    }
    fn scale_mut(&mut self, c: Complex64) {
        *self = self.scale(c);
    }
    fn truncate_mut(&mut self, tol: f64) {
        self.truncate(tol);
    }
}

impl Element for OscSeries {
    fn inner(&self, other: &Self) -> Result<Complex64> {
        OscSeries::inner(self, other)
    }
    fn axpy(&mut self, c: Complex64, other: &Self) {
        for (alpha, g) in other.groups() {
            for (j, a) in g.terms() {
                self.add_term(alpha, j, c * a);
            }
        }
    }
    fn scale_mut(&mut self, c: Complex64) {
        *self = self.scale(c);
    }
    fn truncate_mut(&mut self, tol: f64) {
        self.truncate(tol);
    }
}

impl Element for MatrixOscSeries {
    fn inner(&self, other: &Self) -> Result<Complex64> {
        MatrixOscSeries::inner(self, other)
    }
    fn axpy(&mut self, c: Complex64, other: &Self) {
        for r in 0..self.dim() {
            for col in 0..self.dim() {
                let scaled_ref = other.entry(r, col);
                let target = self.entry_mut(r, col);
                for (alpha, g) in scaled_ref.groups() {
                    for (j, a) in g.terms() {
                        target.add_term(alpha, j, c * a);
                    }
                }
            }
        }
    }
    fn scale_mut(&mut self, c: Complex64) {
        *self = self.scale(c);
    }
    fn truncate_mut(&mut self, tol: f64) {
        self.truncate(tol);
    }
}

/// A linear operator on elements. Applications may fail, e.g. when a
/// residue table does not stabilize below the precision cap.
pub trait Operator<E: Element> {
    fn apply(&self, u: &E) -> Result<E>;
}

impl<E: Element, F> Operator<E> for F
where
    F: Fn(&E) -> Result<E>,
{
    fn apply(&self, u: &E) -> Result<E> {
        self(u)
    }
}

/// Solver options.
#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    /// Relative-residual stopping tolerance.
    pub tol: f64,
    /// Coefficient truncation applied after each operator application;
    /// must sit strictly below `tol`.
    pub trunc_tol: f64,
    /// Maximum Krylov dimension (no restarts).
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            tol: 1e-8,
            trunc_tol: crate::series::DEFAULT_TRUNC_TOL,
            max_iter: 200,
        }
    }
}

/// Outcome of a solve.
#[derive(Clone, Debug)]
pub struct GmresOutcome<E> {
    pub solution: E,
    /// Relative least-squares residual after each iteration.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the Arnoldi recurrence broke down before the tolerance was
    /// met and the trailing residual was not small enough to accept.
    pub stagnated: bool,
    /// True relative residual `|A x - f| / |f|` of the returned solution.
    pub true_residual: f64,
}

/// What an Arnoldi step produced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ArnoldiEvent {
    /// A new orthonormal basis element was appended.
    Extended,
    /// The new direction vanished: the Krylov space is invariant.
    Breakdown,
}

/// Workspace of the iteration: orthonormal basis, Hessenberg entries,
/// accumulated Givens rotations and the rotated right-hand side.
pub struct KrylovState<E> {
    basis: Vec<E>,
    /// Hessenberg columns as produced by Arnoldi (column k has k+2 entries).
    hess: Vec<Vec<Complex64>>,
    /// Hessenberg columns after the accumulated rotations (upper triangular).
    tri: Vec<Vec<Complex64>>,
    /// Givens rotation pairs (c, s).
    givens: Vec<(Complex64, Complex64)>,
    /// Rotated right-hand side `|f| e_1`.
    g: Vec<Complex64>,
    residuals: Vec<f64>,
    rhs_norm: f64,
    breakdown: bool,
}

impl<E: Element> KrylovState<E> {
    /// Start the iteration from a nonzero right-hand side.
    pub fn new(rhs: &E) -> Result<Self> {
        let rhs_norm = rhs.norm()?;
        if rhs_norm == 0.0 || !rhs_norm.is_finite() {
            return Err(CoreError::InvalidParameter(
                "GMRES right-hand side must be nonzero and finite".into(),
            ));
        }
        let mut v0 = rhs.clone();
        v0.scale_mut(Complex64::new(1.0 / rhs_norm, 0.0));
        Ok(KrylovState {
            basis: vec![v0],
            hess: Vec::new(),
            tri: Vec::new(),
            givens: Vec::new(),
            g: vec![Complex64::new(rhs_norm, 0.0)],
            residuals: Vec::new(),
            rhs_norm,
            breakdown: false,
        })
    }

    pub fn dimension(&self) -> usize {
        self.hess.len()
    }

    pub fn basis(&self) -> &[E] {
        &self.basis
    }

    /// Raw Hessenberg column `k` (length `k + 2`).
    pub fn hessenberg_column(&self, k: usize) -> &[Complex64] {
        &self.hess[k]
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn rhs_norm(&self) -> f64 {
        self.rhs_norm
    }

    pub fn broke_down(&self) -> bool {
        self.breakdown
    }

    /// One Arnoldi step: apply the operator to the newest basis element,
    /// orthogonalize by modified Gram-Schmidt with one conditional
    /// reorthogonalization pass, and append the Hessenberg column.
    ///
    /// The operator output is truncated at `trunc_tol` before
    /// orthogonalization. The subdiagonal entry is real and nonnegative by
    /// the normalization convention.
    pub fn arnoldi_step<Op>(&mut self, op: &Op, trunc_tol: f64) -> Result<ArnoldiEvent>
    where
        Op: Operator<E> + ?Sized,
    {
        const BREAKDOWN_TOL: f64 = 1e-14;
        let k = self.hess.len();
        let mut w = op.apply(&self.basis[k])?;
        w.truncate_mut(trunc_tol);
        let norm_before = w.norm()?;
        let mut h = vec![Complex64::zero(); k + 2];
        for i in 0..=k {
            let hi = w.inner(&self.basis[i])?;
            h[i] = hi;
            w.axpy(-hi, &self.basis[i]);
        }
        let mut norm_after = w.norm()?;
        // one reorthogonalization pass when cancellation ate the vector
        if norm_after < norm_before / std::f64::consts::SQRT_2 {
            for i in 0..=k {
                let hi = w.inner(&self.basis[i])?;
                h[i] += hi;
                w.axpy(-hi, &self.basis[i]);
            }
            norm_after = w.norm()?;
        }
        h[k + 1] = Complex64::new(norm_after, 0.0);
        self.hess.push(h.clone());
        let event = if norm_after <= BREAKDOWN_TOL {
            self.breakdown = true;
            ArnoldiEvent::Breakdown
        } else {
            w.scale_mut(Complex64::new(1.0 / norm_after, 0.0));
            self.basis.push(w);
            ArnoldiEvent::Extended
        };
        Ok(event)
    }

    /// Fold the newest Hessenberg column into the QR factorization with the
    /// accumulated Givens rotations plus one new rotation; returns the
    /// updated least-squares residual (absolute).
    pub fn givens_update(&mut self) -> f64 {
        let k = self.tri.len();
        debug_assert!(k < self.hess.len(), "no fresh Hessenberg column");
        let mut col = self.hess[k].clone();
        for (i, &(c, s)) in self.givens.iter().enumerate() {
            let a = col[i];
            let b = col[i + 1];
            col[i] = c.conj() * a + s.conj() * b;
            col[i + 1] = -s * a + c * b;
        }
        let a = col[k];
        let b = col[k + 1];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::zero())
        } else {
            (a / r, b / r)
        };
        col[k] = Complex64::new(r, 0.0);
        col[k + 1] = Complex64::zero();
        self.givens.push((c, s));
        self.g.push(Complex64::zero());
        let ga = self.g[k];
        let gb = self.g[k + 1];
        self.g[k] = c.conj() * ga + s.conj() * gb;
        self.g[k + 1] = -s * ga + c * gb;
        self.tri.push(col);
        let res = self.g[k + 1].norm();
        self.residuals.push(res / self.rhs_norm);
        res
    }

    /// Least-squares coefficients by back substitution on the triangular
    /// factor.
    fn solve_y(&self) -> Vec<Complex64> {
        let k = self.tri.len();
        let mut y = vec![Complex64::zero(); k];
        for i in (0..k).rev() {
            let mut sum = self.g[i];
            for j in (i + 1)..k {
                sum -= self.tri[j][i] * y[j];
            }
            let d = self.tri[i][i];
            y[i] = if d.norm() > 0.0 { sum / d } else { Complex64::zero() };
        }
        y
    }

    /// Current minimizer `x = Q y` over the Krylov space built so far.
    pub fn current_solution(&self) -> Result<E> {
        let y = self.solve_y();
        let mut x = self.basis[0].clone();
        x.scale_mut(y.first().copied().unwrap_or_else(Complex64::zero));
        for (i, yi) in y.iter().enumerate().skip(1) {
            x.axpy(*yi, &self.basis[i]);
        }
        Ok(x)
    }
}

/// Full (unrestarted) GMRES for `A x = f`.
///
/// Iterates until the relative least-squares residual drops below
/// `opts.tol` or `opts.max_iter` Krylov vectors have been built. A
/// breakdown of the Arnoldi recurrence is accepted as convergence when the
/// trailing residual is within `10 * tol`, and reported as stagnation
/// otherwise.
pub fn gmres<E, Op>(op: &Op, rhs: &E, opts: &GmresOptions) -> Result<GmresOutcome<E>>
where
    E: Element,
    Op: Operator<E> + ?Sized,
{
    if !(opts.tol > opts.trunc_tol) {
        return Err(CoreError::InvalidParameter(format!(
            "GMRES tolerance {} must exceed the truncation tolerance {}",
            opts.tol, opts.trunc_tol
        )));
    }
    if opts.max_iter == 0 {
        return Err(CoreError::InvalidParameter(
            "GMRES needs at least one iteration".into(),
        ));
    }
    let mut state = KrylovState::new(rhs)?;
    let mut converged = false;
    let mut stagnated = false;
    for _ in 0..opts.max_iter {
        let event = state.arnoldi_step(op, opts.trunc_tol)?;
        let res = state.givens_update() / state.rhs_norm();
        if res <= opts.tol {
            converged = true;
            break;
        }
        if event == ArnoldiEvent::Breakdown {
            if res <= 10.0 * opts.tol {
                converged = true;
            } else {
                stagnated = true;
            }
            break;
        }
    }
    let solution = state.current_solution()?;
    let mut residual_elem = op.apply(&solution)?;
    residual_elem.scale_mut(Complex64::new(-1.0, 0.0));
    residual_elem.axpy(Complex64::new(1.0, 0.0), rhs);
    let true_residual = residual_elem.norm()? / state.rhs_norm();
    Ok(GmresOutcome {
        solution,
        iterations: state.dimension(),
        residuals: state.residuals().to_vec(),
        converged,
        stagnated,
        true_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RationalSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn series(terms: &[(i64, Complex64)]) -> RationalSeries {
        RationalSeries::from_terms(1.0, terms.iter().copied()).unwrap()
    }

    struct Identity;
    impl Operator<RationalSeries> for Identity {
        fn apply(&self, u: &RationalSeries) -> Result<RationalSeries> {
            Ok(u.clone())
        }
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let rhs = series(&[(1, c(1.0, 0.5)), (-3, c(0.2, 0.0))]);
        let out = gmres(&Identity, &rhs, &GmresOptions::default()).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        let diff = out.solution.sub(&rhs).unwrap();
        assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn first_basis_element_is_normalized_rhs() {
        let rhs = series(&[(2, c(3.0, 0.0))]);
        let state = KrylovState::new(&rhs).unwrap();
        let v0 = &state.basis()[0];
        assert!((Element::inner(v0, v0).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rank_one_perturbation_two_iterations() {
        // u -> u + <u, w> v converges within two iterations
        let w = series(&[(1, c(1.0, 0.0))]);
        let v = series(&[(2, c(0.0, 1.0)), (-1, c(0.5, 0.0))]);
        let op = move |u: &RationalSeries| -> Result<RationalSeries> {
            let mut out = u.clone();
            let coef = Element::inner(u, &w)?;
            out.axpy(coef, &v);
            Ok(out)
        };
        let rhs = series(&[(1, c(1.0, 0.0)), (3, c(0.0, -2.0))]);
        let opts = GmresOptions {
            tol: 1e-12,
            trunc_tol: 1e-15,
            max_iter: 50,
        };
        let out = gmres(&op, &rhs, &opts).unwrap();
        assert!(out.converged);
        assert!(out.iterations <= 2, "took {} iterations", out.iterations);
        assert!(out.true_residual < 1e-11);
    }

    #[test]
    fn subdiagonal_entries_real_nonnegative() {
        let w = series(&[(1, c(0.3, 0.4))]);
        let v = series(&[(-2, c(1.0, -1.0))]);
        let op = move |u: &RationalSeries| -> Result<RationalSeries> {
            let mut out = u.clone();
            out.axpy(Element::inner(u, &w)?, &v);
            Ok(out)
        };
        let rhs = series(&[(1, c(1.0, 0.0)), (2, c(0.5, 0.5))]);
        let mut state = KrylovState::new(&rhs).unwrap();
        for _ in 0..3 {
            if state.arnoldi_step(&op, 1e-15).unwrap() == ArnoldiEvent::Breakdown {
                break;
            }
            state.givens_update();
        }
        for k in 0..state.dimension() {
            let h = state.hessenberg_column(k);
            let sub = h[k + 1];
            assert_eq!(sub.im, 0.0);
            assert!(sub.re >= 0.0);
        }
    }

    #[test]
    fn residuals_non_increasing() {
        // a generic finite-rank perturbation with several directions
        let dirs: Vec<(RationalSeries, RationalSeries)> = vec![
            (series(&[(1, c(1.0, 0.0))]), series(&[(2, c(0.7, 0.1))])),
            (series(&[(-1, c(0.0, 1.0))]), series(&[(-3, c(0.2, 0.2))])),
            (series(&[(4, c(0.5, 0.0))]), series(&[(1, c(0.0, 0.9))])),
        ];
        let op = move |u: &RationalSeries| -> Result<RationalSeries> {
            let mut out = u.clone();
            for (w, v) in &dirs {
                out.axpy(Element::inner(u, w)?, v);
            }
            Ok(out)
        };
        let rhs = series(&[(1, c(1.0, 0.0)), (-1, c(0.0, 1.0)), (5, c(0.3, 0.0))]);
        let opts = GmresOptions {
            tol: 1e-13,
            trunc_tol: 1e-16,
            max_iter: 30,
        };
        let out = gmres(&op, &rhs, &opts).unwrap();
        for pair in out.residuals.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-12));
        }
        assert!(out.converged);
    }

    #[test]
    fn zero_rhs_rejected() {
        let rhs = RationalSeries::new(1.0).unwrap();
        assert!(matches!(
            gmres(&Identity, &rhs, &GmresOptions::default()),
            Err(CoreError::InvalidParameter(_))
        ));
    }

    #[test]
    fn tolerance_ordering_enforced() {
        let rhs = series(&[(1, c(1.0, 0.0))]);
        let opts = GmresOptions {
            tol: 1e-12,
            trunc_tol: 1e-10,
            max_iter: 10,
        };
        assert!(matches!(
            gmres(&Identity, &rhs, &opts),
            Err(CoreError::InvalidParameter(_))
        ));
    }

    #[test]
    fn single_column_least_squares_is_exact() {
        // operator = 2 * identity: one Hessenberg column, residual 0
        let op = |u: &RationalSeries| -> Result<RationalSeries> { Ok(u.scale(c(2.0, 0.0))) };
        let rhs = series(&[(1, c(1.0, 0.0))]);
        let mut state = KrylovState::new(&rhs).unwrap();
        state.arnoldi_step(&op, 1e-15).unwrap();
        let res = state.givens_update();
        // H = [2; 0], g = (|f|, 0): exact solve, residual 0
        assert!(res < 1e-13);
        let x = state.current_solution().unwrap();
        let diff = x.sub(&rhs.scale(c(0.5, 0.0))).unwrap();
        assert!(diff.norm() < 1e-13);
    }

    #[test]
    fn reported_residual_close_to_true_residual() {
        let w = series(&[(2, c(1.0, 0.0))]);
        let v = series(&[(1, c(0.4, -0.3))]);
        let op = move |u: &RationalSeries| -> Result<RationalSeries> {
            let mut out = u.clone();
            out.axpy(Element::inner(u, &w)?, &v);
            Ok(out)
        };
        let rhs = series(&[(2, c(1.0, 1.0)), (-4, c(0.1, 0.0))]);
        let opts = GmresOptions {
            tol: 1e-10,
            trunc_tol: 1e-14,
            max_iter: 20,
        };
        let out = gmres(&op, &rhs, &opts).unwrap();
        assert!(out.converged);
        // the true residual bottoms out at the rounding/truncation floor
        let reported = *out.residuals.last().unwrap();
        assert!(out.true_residual <= 10.0 * reported.max(1e-14));
    }
}
