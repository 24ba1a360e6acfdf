//! Residue coefficients of the oscillatory basis under the Cauchy
//! projections, the confluent hypergeometric / generalized Laguerre
//! evaluations behind the oscillatory integral, and their caches.
//!
//! The eta coefficients are alternating sums of alternating sums; double
//! precision loses most of their digits already for moderate indices. They
//! are therefore computed with arbitrary-precision floats, doubling the
//! working precision until two successive levels agree, and memoized per
//! `(j, alpha, beta)`.

use crate::error::{CoreError, Result};
use crate::freq::Frequency;
use astro_float::{BigFloat, Consts, RoundingMode};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

/// Starting precision of the adaptive schedule, in bits.
pub const PRECISION_START_BITS: usize = 128;

/// Default precision cap, in bits.
pub const PRECISION_CAP_BITS: usize = 4096;

/// Relative agreement required between two successive precision levels.
const PRECISION_AGREE_REL: f64 = 1e-16;

static PRECISION_CAP: AtomicUsize = AtomicUsize::new(PRECISION_CAP_BITS);

/// Set the process-wide precision cap for the adaptive schedule.
pub fn set_precision_cap(bits: usize) {
    PRECISION_CAP.store(bits.max(2 * PRECISION_START_BITS), Ordering::Relaxed);
}

/// Current process-wide precision cap in bits.
pub fn precision_cap() -> usize {
    PRECISION_CAP.load(Ordering::Relaxed)
}

const RM: RoundingMode = RoundingMode::ToEven;

/// Convert a `BigFloat` to `f64` through its raw mantissa and exponent.
fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((words, _, sign, e, _)) => {
            let nw = words.len();
            let hi = words[nw - 1] as u128;
            let lo = if nw >= 2 { words[nw - 2] as u128 } else { 0 };
            let m = ((hi << 64) | lo) as f64;
            let v = m * 2f64.powi(e - 128);
            if sign.is_negative() {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

fn bf(v: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(v, p)
}

fn bf_i(v: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(v, p)
}

/// Pascal triangle of binomial coefficients up to row `m`, at precision `p`.
fn binomials(m: usize, p: usize) -> Vec<Vec<BigFloat>> {
    let mut rows: Vec<Vec<BigFloat>> = Vec::with_capacity(m + 1);
    for r in 0..=m {
        let mut row = Vec::with_capacity(r + 1);
        row.push(bf(1.0, p));
        for c in 1..r {
            row.push(rows[r - 1][c - 1].add(&rows[r - 1][c], p, RM));
        }
        if r > 0 {
            row.push(bf(1.0, p));
        }
        rows.push(row);
    }
    rows
}

/// The residue-expansion coefficients `gamma_n` for `n = 1..=m` at working
/// precision `p`, as `-m e^{sigma alpha beta}` times the inner double sum:
///
/// `gamma_n = -m e^{sigma a b} sum_k C(m-n,k) C(m-1,m-n) (n-1)!/(n+k)! (2 sigma b a)^k`.
fn gamma_vec_mp(m: usize, sigma: i32, alpha: f64, beta: f64, p: usize) -> Vec<BigFloat> {
    let mut cc = Consts::new().expect("constants cache");
    let x = bf(2.0 * sigma as f64 * beta * alpha, p);
    let expf = bf(sigma as f64, p)
        .mul(&bf(alpha, p), p, RM)
        .mul(&bf(beta, p), p, RM)
        .exp(p, RM, &mut cc);
    let scale = expf.mul(&bf_i(-(m as i64), p), p, RM);
    let binom = binomials(m, p);
    let mut out = Vec::with_capacity(m);
    for n in 1..=m {
        // leading term C(m-1, n-1) / n, then the ratio recurrence
        // t_{k+1} = t_k (m-n-k) x / ((k+1)(n+k+1))
        let mut term = binom[m - 1][n - 1].div(&bf_i(n as i64, p), p, RM);
        let mut sum = term.clone();
        for k in 0..(m - n) {
            term = term
                .mul(&bf_i((m - n - k) as i64, p), p, RM)
                .mul(&x, p, RM)
                .div(&bf_i(((k + 1) * (n + k + 1)) as i64, p), p, RM);
            sum = sum.add(&term, p, RM);
        }
        out.push(sum.mul(&scale, p, RM));
    }
    out
}

/// The eta coefficients for `n = 1..=m` at working precision `p`:
/// `eta_n = sum_{k=n}^{m} (-1)^{n+k} C(k,n) gamma_k`.
fn eta_vec_mp(m: usize, sigma: i32, alpha: f64, beta: f64, p: usize) -> Vec<f64> {
    let gammas = gamma_vec_mp(m, sigma, alpha, beta, p);
    let binom = binomials(m, p);
    let mut out = Vec::with_capacity(m);
    for n in 1..=m {
        let mut acc = bf(0.0, p);
        for k in n..=m {
            let t = binom[k][n].mul(&gammas[k - 1], p, RM);
            if (n + k) % 2 == 0 {
                acc = acc.add(&t, p, RM);
            } else {
                acc = acc.sub(&t, p, RM);
            }
        }
        out.push(to_f64(&acc));
    }
    out
}

fn vectors_agree(a: &[f64], b: &[f64], rel: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(&x, &y)| {
            x.is_finite() && y.is_finite() && (x - y).abs() <= rel * y.abs() + f64::MIN_POSITIVE
        })
}

/// Run `compute` at doubling precision until two successive levels agree to
/// [`PRECISION_AGREE_REL`] relative, or the cap is exhausted.
fn stabilize<F>(compute: F) -> Result<(Vec<f64>, usize)>
where
    F: Fn(usize) -> Vec<f64>,
{
    let cap = precision_cap();
    let mut p = PRECISION_START_BITS;
    let mut prev = compute(p);
    loop {
        let next = p * 2;
        if next > cap {
            return Err(CoreError::PrecisionExhausted { cap });
        }
        let cur = compute(next);
        if vectors_agree(&prev, &cur, PRECISION_AGREE_REL) {
            return Ok((cur, next));
        }
        p = next;
        prev = cur;
    }
}

/// Residue-expansion table mapping one oscillatory basis element to
/// zero-frequency elements under the Cauchy projections.
///
/// Populated only in the decaying regime `sign(j) * alpha < 0`; the entries
/// are real by construction.
#[derive(Clone, Debug)]
pub struct EtaTable {
    pub j: i64,
    pub alpha: Frequency,
    pub beta: f64,
    /// `eta[n - 1]` holds the coefficient of `R_{sigma n, 0}`, `n = 1..=|j|`.
    pub eta: Vec<f64>,
    pub precision_bits_used: usize,
}

impl EtaTable {
    pub fn value(&self, n: usize) -> f64 {
        self.eta[n - 1]
    }
}

#[derive(PartialEq, Eq, Hash)]
struct EtaKey {
    j: i64,
    alpha: Frequency,
    beta_bits: u64,
}

fn eta_cache() -> &'static RwLock<HashMap<EtaKey, Arc<EtaTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<EtaKey, Arc<EtaTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn check_regime(j: i64, alpha: f64) -> Result<()> {
    if j == 0 {
        return Err(CoreError::InvalidParameter(
            "index j must be nonzero".into(),
        ));
    }
    if (j.signum() as f64) * alpha >= 0.0 {
        return Err(CoreError::NonDecayingRegime { j, alpha });
    }
    Ok(())
}

/// The full eta table for `(j, alpha, beta)`, computed with the adaptive
/// precision schedule and cached process-wide.
pub fn eta_table(j: i64, alpha: Frequency, beta: f64) -> Result<Arc<EtaTable>> {
    check_regime(j, alpha.to_f64())?;
    let key = EtaKey {
        j,
        alpha,
        beta_bits: beta.to_bits(),
    };
    if let Some(hit) = eta_cache().read().expect("eta cache").get(&key) {
        return Ok(hit.clone());
    }
    let m = j.unsigned_abs() as usize;
    let sigma = j.signum() as i32;
    let af = alpha.to_f64();
    let (eta, bits) = stabilize(|p| eta_vec_mp(m, sigma, af, beta, p))?;
    let table = Arc::new(EtaTable {
        j,
        alpha,
        beta,
        eta,
        precision_bits_used: bits,
    });
    eta_cache()
        .write()
        .expect("eta cache")
        .insert(key, table.clone());
    Ok(table)
}

/// Single residue coefficient `gamma_n` for `(j, alpha, beta)` evaluated at
/// the given precision and rounded to double.
///
/// Defined in the decaying regime `sign(j) * alpha < 0` for `1 <= n <= |j|`.
pub fn gamma_coeff(j: i64, n: usize, alpha: f64, beta: f64, precision_bits: usize) -> Result<f64> {
    check_regime(j, alpha)?;
    let m = j.unsigned_abs() as usize;
    if n == 0 || n > m {
        return Err(CoreError::InvalidParameter(format!(
            "gamma order n = {n} out of range 1..={m}"
        )));
    }
    let p = precision_bits.max(64);
    let v = gamma_vec_mp(m, j.signum() as i32, alpha, beta, p);
    Ok(to_f64(&v[n - 1]))
}

/// The same coefficient through the closed confluent-hypergeometric form
/// `gamma_n = -(m/n) e^{sigma a b} C(m-1, n-1) 1F1(n - m, 1 + n, -2 sigma a b)`.
///
/// Kept as an independent route; it must agree with [`gamma_coeff`].
pub fn gamma_coeff_1f1(
    j: i64,
    n: usize,
    alpha: f64,
    beta: f64,
    precision_bits: usize,
) -> Result<f64> {
    check_regime(j, alpha)?;
    let m = j.unsigned_abs() as usize;
    if n == 0 || n > m {
        return Err(CoreError::InvalidParameter(format!(
            "gamma order n = {n} out of range 1..={m}"
        )));
    }
    let sigma = j.signum() as f64;
    let p = precision_bits.max(64);
    let mut cc = Consts::new().expect("constants cache");
    let binom = binomials(m, p);
    let f11 = one_f1_mp(n as i64 - m as i64, 1 + n as i64, -2.0 * sigma * alpha * beta, p);
    let expf = bf(sigma * alpha * beta, p).exp(p, RM, &mut cc);
    let v = bf(-(m as f64) / n as f64, p)
        .mul(&expf, p, RM)
        .mul(&binom[m - 1][n - 1], p, RM)
        .mul(&f11, p, RM);
    Ok(to_f64(&v))
}

/// Kummer's function `1F1(a, b, x)` for nonpositive integer `a` (a finite
/// sum) at working precision `p`.
fn one_f1_mp(a: i64, b: i64, x: f64, p: usize) -> BigFloat {
    debug_assert!(a <= 0 && b > 0);
    let xb = bf(x, p);
    let mut term = bf(1.0, p);
    let mut sum = term.clone();
    let mut k = 0i64;
    while a + k < 0 {
        term = term
            .mul(&bf_i(a + k, p), p, RM)
            .mul(&xb, p, RM)
            .div(&bf_i((b + k) * (k + 1), p), p, RM);
        sum = sum.add(&term, p, RM);
        k += 1;
    }
    sum
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)` by the three-term
/// recurrence, in double precision.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Principal-value integral of the oscillatory basis element
/// `e^{i alpha z} (M_beta(z)^j - 1)` over the real axis.
///
/// Vanishes when `sign(j) = sign(alpha)`; equals `-2 pi |j| beta` at
/// `alpha = 0`; otherwise `-4 pi e^{-|alpha| beta} |j| beta 1F1(1-|j|, 2, 2|alpha| beta)`.
/// As a function of `alpha` this is the Fourier transform of the
/// zero-frequency element of index `j`. Values are memoized.
///
/// Small degrees use `1F1(1-m, 2, x) = L^{(1)}_{m-1}(x) / m` with the
/// double-precision Laguerre recurrence; large degrees or large arguments go
/// through extended precision, which also keeps the exponential damping and
/// the polynomial growth from overflowing separately.
pub fn osc_basis_integral(j: i64, alpha: f64, beta: f64) -> Result<f64> {
    const F64_DEGREE_MAX: usize = 40;
    const F64_ARG_MAX: f64 = 300.0;
    if j == 0 {
        return Ok(0.0);
    }
    if alpha == 0.0 {
        return Ok(-2.0 * PI * j.abs() as f64 * beta);
    }
    if (j > 0) == (alpha > 0.0) {
        return Ok(0.0);
    }
    let key = (j, alpha.to_bits(), beta.to_bits());
    if let Some(&hit) = integral_cache().read().expect("integral cache").get(&key) {
        return Ok(hit);
    }
    let m = j.unsigned_abs() as usize;
    let x = 2.0 * alpha.abs() * beta;
    let damped = if m <= F64_DEGREE_MAX && x <= F64_ARG_MAX {
        (-alpha.abs() * beta).exp() * laguerre(m - 1, 1.0, x) / m as f64
    } else {
        // keep the exponential damping inside extended precision to avoid
        // overflow/underflow of the separate factors
        let (v, _) = stabilize(|p| {
            let mut cc = Consts::new().expect("constants cache");
            let e = bf(-alpha.abs() * beta, p).exp(p, RM, &mut cc);
            let f = one_f1_mp(1 - m as i64, 2, x, p);
            vec![to_f64(&e.mul(&f, p, RM))]
        })?;
        v[0]
    };
    let value = -4.0 * PI * m as f64 * beta * damped;
    integral_cache()
        .write()
        .expect("integral cache")
        .insert(key, value);
    Ok(value)
}

fn integral_cache() -> &'static RwLock<HashMap<(i64, u64, u64), f64>> {
    static CACHE: OnceLock<RwLock<HashMap<(i64, u64, u64), f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}
