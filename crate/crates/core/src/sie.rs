//! Singular integral equations of Riemann-Hilbert type on the real axis.
//!
//! A sectionally analytic `Phi` with `Phi+ = Phi- G` on the axis and
//! `Phi(inf) = I` is represented as `Phi = I + C u`; the jump condition then
//! reads `u - C^- u (G - I) = G - I`, which is solved by GMRES. This module
//! builds the jump matrices, the operator applications, the Fredholm
//! regulator, and the two triangular factorizations that precondition the
//! oscillatory problems for large positive and negative `x`.

use crate::error::{CoreError, Result};
use crate::freq::Frequency;
use crate::gmres::{gmres, GmresOptions, Operator};
use crate::matrix::{matmul_values, MatrixOscSeries};
use crate::osc::OscSeries;
use crate::point::AxisPoint;
use crate::series::RationalSeries;
use num_complex::Complex64;
use num_traits::Zero;

/// Problem description: which jump matrix to build.
#[derive(Clone, Debug)]
pub enum JumpSpec {
    /// The scalar jump `1 + sech(x)`.
    ScalarSech,
    /// The 2x2 jump of defocusing-NLS inverse scattering with reflection
    /// data `rho` at position `x` and time `t`.
    ///
    /// For `t != 0` the quadratic phase `e^{4 i z^2 t}` must already be
    /// absorbed into `rho` (small-time regime); only the linear phase
    /// `e^{2 i x z}` is carried symbolically, as the frequency `2x`.
    Nls { rho: OscSeries, x: f64, t: f64 },
    /// A caller-supplied `G - I`.
    Custom(MatrixOscSeries),
}

/// Preconditioner selection for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precondition {
    None,
    /// Compose with the regulator `C[G^{-1}]`, making the operator a
    /// finite-rank perturbation of the identity.
    Fredholm,
    /// The lower/upper factorization `G = M P`, effective for `x > 0`.
    Mp,
    /// The conjugated `L D U` factorization, effective for `x < 0`.
    Ldu,
    /// `Mp` for `x > 0`, `Ldu` for `x < 0`, `Fredholm` at `x = 0`.
    Auto,
}

impl Precondition {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Precondition::None),
            "fredholm" => Ok(Precondition::Fredholm),
            "mp" => Ok(Precondition::Mp),
            "ldu" => Ok(Precondition::Ldu),
            "auto" => Ok(Precondition::Auto),
            other => Err(CoreError::InvalidParameter(format!(
                "unknown preconditioner {other:?}"
            ))),
        }
    }
}

/// Options shared by the solve drivers.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Half-order of FFT expansions (scalar jump, delta factors).
    pub expansion_n: usize,
    pub beta: f64,
    pub gmres: GmresOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            expansion_n: 250,
            beta: 1.0,
            gmres: GmresOptions::default(),
        }
    }
}

/// Result of a solve: the density `u`, the convergence history, and the
/// reconstructed potential value for 2x2 problems.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub u: MatrixOscSeries,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub true_residual: f64,
    /// `(1/pi) integral u_21` for 2x2 problems.
    pub q: Option<Complex64>,
    /// Number of active coefficients in `u`.
    pub basis_size: usize,
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn expand_real<F>(f: F, n: usize, beta: f64, trunc: f64) -> Result<RationalSeries>
where
    F: Fn(f64) -> Complex64,
{
    RationalSeries::expand(
        move |p| match p {
            AxisPoint::Finite(x) => f(x),
            AxisPoint::Infinity => Complex64::zero(),
        },
        n,
        beta,
        trunc,
    )
}

/// Largest modulus of `rho` on the mapped evaluation grid (infinity
/// included, where it vanishes).
fn sup_abs_on_grid(rho: &OscSeries, n: usize) -> Result<f64> {
    let mut sup: f64 = 0.0;
    let len = 2 * n + 1;
    for l in 1..len {
        let theta = 2.0 * std::f64::consts::PI * l as f64 / len as f64;
        if let AxisPoint::Finite(x) = crate::point::circle_preimage(theta, rho.beta()) {
            sup = sup.max(rho.eval(Complex64::new(x, 0.0))?.norm());
        }
    }
    Ok(sup)
}

fn reflection_check(rho: &OscSeries, n: usize) -> Result<()> {
    let sup = sup_abs_on_grid(rho, n)?;
    if sup >= 1.0 {
        return Err(CoreError::ReflectionBound { max_abs: sup });
    }
    Ok(())
}

/// Build `G - I` for the given problem.
///
/// Scalar: the 1x1 expansion of `sech`. NLS: off-diagonal entries
/// `rho e^{2ixz}` and `-conj(rho) e^{-2ixz}`, diagonal `-|rho|^2` and `0`.
pub fn build_jump(spec: &JumpSpec, opts: &SolveOptions) -> Result<MatrixOscSeries> {
    match spec {
        JumpSpec::ScalarSech => {
            let s = expand_real(
                |x| Complex64::new(sech(x), 0.0),
                opts.expansion_n,
                opts.beta,
                opts.gmres.trunc_tol,
            )?;
            Ok(MatrixOscSeries::scalar(OscSeries::from_plain(s)))
        }
        JumpSpec::Nls { rho, x, .. } => {
            reflection_check(rho, opts.expansion_n.max(200))?;
            let two_x = Frequency::from_f64_exact(2.0 * x)?;
            let rho_conj = rho.conjugate();
            let mut g = MatrixOscSeries::zero(2, rho.beta())?;
            // (1,1) = -|rho|^2, phases cancel on the diagonal
            g.set_entry(0, 0, rho.multiply(&rho_conj)?.scale(Complex64::new(-1.0, 0.0)))?;
            g.set_entry(0, 1, rho_conj.shift_frequency(-two_x).scale(Complex64::new(-1.0, 0.0)))?;
            g.set_entry(1, 0, rho.shift_frequency(two_x))?;
            Ok(g)
        }
        JumpSpec::Custom(gm) => Ok(gm.clone()),
    }
}

/// Apply the singular integral operator `u -> u - C^- u (G - I)`,
/// truncating the result.
pub fn apply_c_g(
    u: &MatrixOscSeries,
    g_minus_i: &MatrixOscSeries,
    trunc: f64,
) -> Result<MatrixOscSeries> {
    let prod = u.cauchy_minus()?.matmul(g_minus_i)?;
    let mut out = u.sub(&prod)?;
    out.truncate(trunc);
    Ok(out)
}

/// Build `G^{-1} - I`, the jump of the Fredholm regulator `C[G^{-1}]`.
///
/// Scalar: the expansion of `1/(1 + sech) - 1`. NLS: the closed-form
/// inverse (the jump has unit determinant). Custom jumps are only

/// supported when purely non-oscillatory, by pointwise inversion.
pub fn fredholm_regulator(spec: &JumpSpec, opts: &SolveOptions) -> Result<MatrixOscSeries> {
    match spec {
        JumpSpec::ScalarSech => {
            let s = expand_real(
                |x| Complex64::new(1.0 / (1.0 + sech(x)) - 1.0, 0.0),
                opts.expansion_n,
                opts.beta,
                opts.gmres.trunc_tol,
            )?;
            Ok(MatrixOscSeries::scalar(OscSeries::from_plain(s)))
        }
        JumpSpec::Nls { rho, x, .. } => {
            reflection_check(rho, opts.expansion_n.max(200))?;
            let two_x = Frequency::from_f64_exact(2.0 * x)?;
            let rho_conj = rho.conjugate();
            let mut g = MatrixOscSeries::zero(2, rho.beta())?;
            g.set_entry(0, 1, rho_conj.shift_frequency(-two_x))?;
            g.set_entry(1, 0, rho.shift_frequency(two_x).scale(Complex64::new(-1.0, 0.0)))?;
            g.set_entry(1, 1, rho.multiply(&rho_conj)?.scale(Complex64::new(-1.0, 0.0)))?;
            Ok(g)
        }
        JumpSpec::Custom(gm) => custom_inverse_minus_i(gm, opts),
    }
}

/// Pointwise inverse of `I + gm`, re-expanded. Requires every entry to sit
/// at frequency zero.
fn custom_inverse_minus_i(gm: &MatrixOscSeries, opts: &SolveOptions) -> Result<MatrixOscSeries> {
    let dim = gm.dim();
    for r in 0..dim {
        for c in 0..dim {
            let e = gm.entry(r, c);
            if !e.is_empty() && e.as_plain().is_none() {
                return Err(CoreError::Unsupported(
                    "regulator for custom oscillatory jumps is not available; \
                     use the triangular factorizations instead"
                        .into(),
                ));
            }
        }
    }
    let n = opts.expansion_n;
    let beta = gm.beta();
    let eval_inv_entry = |r: usize, c: usize, x: f64| -> Result<Complex64> {
        let z = Complex64::new(x, 0.0);
        let g = gm.eval_plus_identity(z)?;
        match dim {
            1 => {
                if g[0].norm() == 0.0 {
                    return Err(CoreError::SingularJump);
                }
                Ok(1.0 / g[0] - if r == c { 1.0 } else { 0.0 })
            }
            _ => {
                let det = g[0] * g[3] - g[1] * g[2];
                if det.norm() == 0.0 {
                    return Err(CoreError::SingularJump);
                }
                let inv = [g[3] / det, -g[1] / det, -g[2] / det, g[0] / det];
                Ok(inv[r * dim + c] - if r == c { 1.0 } else { 0.0 })
            }
        }
    };
    let mut out = MatrixOscSeries::zero(dim, beta)?;
    for r in 0..dim {
        for c in 0..dim {
            let s = expand_real(
                |x| eval_inv_entry(r, c, x).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                n,
                beta,
                opts.gmres.trunc_tol,
            )?;
            out.set_entry(r, c, OscSeries::from_plain(s))?;
        }
    }
    Ok(out)
}

/// The factorization `G = M P` into unipotent triangular factors.
#[derive(Clone, Debug)]
pub struct MpFactors {
    pub m_minus_i: MatrixOscSeries,
    pub p_minus_i: MatrixOscSeries,
    pub p_inv_minus_i: MatrixOscSeries,
}

impl MpFactors {
    /// Right-hand side `M - P^{-1}` of the factored equation.
    pub fn rhs(&self) -> Result<MatrixOscSeries> {
        self.m_minus_i.sub(&self.p_inv_minus_i)
    }
}

/// Factor the NLS jump as `G = M P` with `P` lower and `M` upper unipotent.
pub fn mp_factor(spec: &JumpSpec) -> Result<MpFactors> {
    let JumpSpec::Nls { rho, x, .. } = spec else {
        return Err(CoreError::InvalidParameter(
            "the MP factorization applies to the NLS jump".into(),
        ));
    };
    let two_x = Frequency::from_f64_exact(2.0 * x)?;
    let beta = rho.beta();
    let r = rho.shift_frequency(two_x);
    let c_entry = rho.conjugate().shift_frequency(-two_x);
    let mut p = MatrixOscSeries::zero(2, beta)?;
    p.set_entry(1, 0, r.clone())?;
    let mut p_inv = MatrixOscSeries::zero(2, beta)?;
    p_inv.set_entry(1, 0, r.scale(Complex64::new(-1.0, 0.0)))?;
    let mut m = MatrixOscSeries::zero(2, beta)?;
    m.set_entry(0, 1, c_entry.scale(Complex64::new(-1.0, 0.0)))?;
    Ok(MpFactors {
        m_minus_i: m,
        p_minus_i: p,
        p_inv_minus_i: p_inv,
    })
}

/// Apply `u -> u P^{-1} - C^- u (M - P^{-1})`, the jump equation
/// right-multiplied by `P^{-1}`; it has the same solution `u`.
pub fn apply_mp_operator(
    u: &MatrixOscSeries,
    factors: &MpFactors,
    trunc: f64,
) -> Result<MatrixOscSeries> {
    apply_factored(u, &factors.p_inv_minus_i, &factors.rhs()?, trunc)
}

fn apply_factored(
    u: &MatrixOscSeries,
    right_inv_minus_i: &MatrixOscSeries,
    rhs: &MatrixOscSeries,
    trunc: f64,
) -> Result<MatrixOscSeries> {
    let mut out = u.add(&u.matmul(right_inv_minus_i)?)?;
    out = out.sub(&u.cauchy_minus()?.matmul(rhs)?)?;
    out.truncate(trunc);
    Ok(out)
}

/// The scalar factors of the diagonal Riemann-Hilbert problem for
/// `1 - |rho|^2`: returns the expansions of `(delta^+)^2 - 1` and
/// `(delta^-)^{-2} - 1`, where
/// `delta = exp(C log(1 - |rho|^2))` and `delta(inf) = 1`.
pub fn delta_series(
    rho: &OscSeries,
    n: usize,
    trunc: f64,
) -> Result<(RationalSeries, RationalSeries)> {
    let beta = rho.beta();
    // guard the logarithm on the sampling grid
    let sup = sup_abs_on_grid(rho, n)?;
    if sup >= 1.0 {
        return Err(CoreError::ReflectionBound { max_abs: sup });
    }
    let log_term = |x: f64| -> Complex64 {
        let v = rho.eval(Complex64::new(x, 0.0)).unwrap_or_else(|_| {
            Complex64::new(f64::NAN, 0.0)
        });
        Complex64::new((1.0 - v.norm_sqr()).ln(), 0.0)
    };
    let g = expand_real(log_term, n, beta, trunc)?;
    let g_plus = g.cauchy_plus();
    let g_minus = g.cauchy_minus();
    let dp2 = expand_real(
        |x| {
            let v = g_plus.eval(Complex64::new(x, 0.0)).unwrap();
            (2.0 * v).exp() - 1.0
        },
        n,
        beta,
        trunc,
    )?;
    let dm_inv2 = expand_real(
        |x| {
            let v = g_minus.eval(Complex64::new(x, 0.0)).unwrap();
            (-2.0 * v).exp() - 1.0
        },
        n,
        beta,
        trunc,
    )?;
    Ok((dp2, dm_inv2))
}

/// The conjugated triangular factorization for `x < 0`.
#[derive(Clone, Debug)]
pub struct LduFactors {
    pub l_minus_i: MatrixOscSeries,
    pub u_minus_i: MatrixOscSeries,
    pub u_inv_minus_i: MatrixOscSeries,
    /// `(delta^+)^2 - 1`.
    pub delta_plus_sq: RationalSeries,
    /// `(delta^-)^{-2} - 1`.
    pub delta_minus_inv_sq: RationalSeries,
}

impl LduFactors {
    /// Right-hand side `L~ - U~^{-1}` of the factored equation.
    pub fn rhs(&self) -> Result<MatrixOscSeries> {
        self.l_minus_i.sub(&self.u_inv_minus_i)
    }

    /// The conjugated jump `G~ - I = L~ U~ - I`.
    pub fn g_tilde_minus_i(&self) -> Result<MatrixOscSeries> {
        let cross = self.l_minus_i.matmul(&self.u_minus_i)?;
        self.l_minus_i.add(&self.u_minus_i)?.add(&cross)
    }
}

/// Factor the conjugated NLS jump as `G~ = L~ U~` where
/// `L~` has `(2,1)` entry `[rho/(1-|rho|^2)] (delta^-)^{-2} e^{2ixz}` and
/// `U~` has `(1,2)` entry `-[conj(rho)/(1-|rho|^2)] (delta^+)^2 e^{-2ixz}`.
///
/// The scalar prefactors are built by pointwise evaluation and
/// re-expansion; the exponential phases are attached symbolically. The
/// reflection data must be non-oscillatory (any quadratic phase already
/// absorbed numerically).
pub fn ldu_factor(spec: &JumpSpec, opts: &SolveOptions) -> Result<LduFactors> {
    let JumpSpec::Nls { rho, x, .. } = spec else {
        return Err(CoreError::InvalidParameter(
            "the LDU factorization applies to the NLS jump".into(),
        ));
    };
    for (alpha, _) in rho.groups() {
        if !alpha.is_zero() {
            return Err(CoreError::Unsupported(
                "LDU factorization requires non-oscillatory reflection data".into(),
            ));
        }
    }
    let n = opts.expansion_n;
    let trunc = opts.gmres.trunc_tol;
    let beta = rho.beta();
    let (dp2, dm_inv2) = delta_series(rho, n, trunc)?;
    let two_x = Frequency::from_f64_exact(2.0 * x)?;
    let lower = expand_real(
        |t| {
            let z = Complex64::new(t, 0.0);
            let r = rho.eval(z).unwrap();
            let dm = 1.0 + dm_inv2.eval(z).unwrap();
            r / (1.0 - r.norm_sqr()) * dm
        },
        n,
        beta,
        trunc,
    )?;
    let upper = expand_real(
        |t| {
            let z = Complex64::new(t, 0.0);
            let r = rho.eval(z).unwrap();
            let dp = 1.0 + dp2.eval(z).unwrap();
            -r.conj() / (1.0 - r.norm_sqr()) * dp
        },
        n,
        beta,
        trunc,
    )?;
    let mut l = MatrixOscSeries::zero(2, beta)?;
    l.set_entry(1, 0, OscSeries::from_plain(lower).shift_frequency(two_x))?;
    let upper_osc = OscSeries::from_plain(upper).shift_frequency(-two_x);
    let mut u = MatrixOscSeries::zero(2, beta)?;
    u.set_entry(0, 1, upper_osc.clone())?;
    let mut u_inv = MatrixOscSeries::zero(2, beta)?;
    u_inv.set_entry(0, 1, upper_osc.scale(Complex64::new(-1.0, 0.0)))?;
    Ok(LduFactors {
        l_minus_i: l,
        u_minus_i: u,
        u_inv_minus_i: u_inv,
        delta_plus_sq: dp2,
        delta_minus_inv_sq: dm_inv2,
    })
}

/// Apply `u -> u U~^{-1} - C^- u (L~ - U~^{-1})`.
///
/// The `(2,1)` reconstruction is unchanged by the diagonal conjugation
/// because `delta(inf) = 1`.
pub fn apply_ldu_operator(
    u: &MatrixOscSeries,
    factors: &LduFactors,
    trunc: f64,
) -> Result<MatrixOscSeries> {
    apply_factored(u, &factors.u_inv_minus_i, &factors.rhs()?, trunc)
}

/// Reconstruct the potential from the solved density:
/// `q = (1/pi) integral u_21`.
pub fn reconstruct_q(u: &MatrixOscSeries) -> Result<Complex64> {
    if u.dim() != 2 {
        return Err(CoreError::DimMismatch(u.dim(), 2));
    }
    Ok(u.entry(1, 0).pv_integral()? / std::f64::consts::PI)
}

/// Explicit solution of the scalar problem,
/// `Phi(z) = exp(C log(1 + sech)(z))`; the boundary values satisfy
/// `Phi+ = Phi- (1 + sech)` and `1 + C^{+-} u = Phi^{+-}`.
#[derive(Clone, Debug)]
pub struct ScalarExplicit {
    log_series: RationalSeries,
}

impl ScalarExplicit {
    pub fn new(n: usize, beta: f64, trunc: f64) -> Result<Self> {
        let log_series = expand_real(
            |x| Complex64::new((1.0 + sech(x)).ln(), 0.0),
            n,
            beta,
            trunc,
        )?;
        Ok(ScalarExplicit { log_series })
    }

    /// `Phi(z)` off the axis.
    pub fn phi(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_series.cauchy_offaxis(z)?.exp())
    }

    /// Boundary value from above.
    pub fn phi_plus(&self, x: f64) -> Result<Complex64> {
        Ok(self
            .log_series
            .cauchy_plus()
            .eval(Complex64::new(x, 0.0))?
            .exp())
    }

    /// Boundary value from below.
    pub fn phi_minus(&self, x: f64) -> Result<Complex64> {
        Ok(self
            .log_series
            .cauchy_minus()
            .eval(Complex64::new(x, 0.0))?
            .exp())
    }
}

/// Largest entrywise deviation of `Phi+ - Phi- G` over the grid, where
/// `Phi^{+-} = I + C^{+-} u` and `G = I + g_minus_i`, all evaluated
/// pointwise.
pub fn jump_condition_residual(
    u: &MatrixOscSeries,
    g_minus_i: &MatrixOscSeries,
    xs: &[f64],
) -> Result<f64> {
    let dim = u.dim();
    let u_plus = u.cauchy_plus()?;
    let u_minus = u.cauchy_minus()?;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let z = Complex64::new(x, 0.0);
        let phi_p = u_plus.eval_plus_identity(z)?;
        let phi_m = u_minus.eval_plus_identity(z)?;
        let g = g_minus_i.eval_plus_identity(z)?;
        let prod = matmul_values(&phi_m, &g, dim);
        for (a, b) in phi_p.iter().zip(&prod) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

struct PlainOp {
    gm: MatrixOscSeries,
    trunc: f64,
}

impl Operator<MatrixOscSeries> for PlainOp {
    fn apply(&self, u: &MatrixOscSeries) -> Result<MatrixOscSeries> {
        apply_c_g(u, &self.gm, self.trunc)
    }
}

struct RegulatedOp {
    gm: MatrixOscSeries,
    reg: MatrixOscSeries,
    trunc: f64,
}

impl Operator<MatrixOscSeries> for RegulatedOp {
    fn apply(&self, u: &MatrixOscSeries) -> Result<MatrixOscSeries> {
        apply_c_g(&apply_c_g(u, &self.gm, self.trunc)?, &self.reg, self.trunc)
    }
}

struct FactoredOp {
    right_inv_minus_i: MatrixOscSeries,
    rhs: MatrixOscSeries,
    trunc: f64,
}

impl Operator<MatrixOscSeries> for FactoredOp {
    fn apply(&self, u: &MatrixOscSeries) -> Result<MatrixOscSeries> {
        apply_factored(u, &self.right_inv_minus_i, &self.rhs, self.trunc)
    }
}

/// Solve the singular integral equation for the given jump and
/// preconditioner; reconstructs `q` for 2x2 problems.
pub fn solve(spec: &JumpSpec, precond: Precondition, opts: &SolveOptions) -> Result<SolveOutcome> {
    let trunc = opts.gmres.trunc_tol;
    let resolved = match (precond, spec) {
        (Precondition::Auto, JumpSpec::Nls { x, .. }) => {
            if *x > 0.0 {
                Precondition::Mp
            } else if *x < 0.0 {
                Precondition::Ldu
            } else {
                Precondition::Fredholm
            }
        }
        (Precondition::Auto, _) => Precondition::Fredholm,
        (p, _) => p,
    };
    let gm = build_jump(spec, opts)?;
    let outcome = match resolved {
        Precondition::None => {
            let op = PlainOp {
                gm: gm.clone(),
                trunc,
            };
            gmres(&op, &gm, &opts.gmres)?
        }
        Precondition::Fredholm => {
            let reg = fredholm_regulator(spec, opts)?;
            let rhs = apply_c_g(&gm, &reg, trunc)?;
            let op = RegulatedOp {
                gm: gm.clone(),
                reg,
                trunc,
            };
            gmres(&op, &rhs, &opts.gmres)?
        }
        Precondition::Mp => {
            let factors = mp_factor(spec)?;
            let rhs = factors.rhs()?;
            let op = FactoredOp {
                right_inv_minus_i: factors.p_inv_minus_i.clone(),
                rhs: rhs.clone(),
                trunc,
            };
            gmres(&op, &rhs, &opts.gmres)?
        }
        Precondition::Ldu => {
            let factors = ldu_factor(spec, opts)?;
            let rhs = factors.rhs()?;
            let op = FactoredOp {
                right_inv_minus_i: factors.u_inv_minus_i.clone(),
                rhs: rhs.clone(),
                trunc,
            };
            gmres(&op, &rhs, &opts.gmres)?
        }
        Precondition::Auto => unreachable!("resolved above"),
    };
    let q = if outcome.solution.dim() == 2 {
        Some(reconstruct_q(&outcome.solution)?)
    } else {
        None
    };
    Ok(SolveOutcome {
        basis_size: outcome.solution.n_coeffs(),
        residuals: outcome.residuals,
        iterations: outcome.iterations,
        converged: outcome.converged,
        true_residual: outcome.true_residual,
        q,
        u: outcome.solution,
    })
}
