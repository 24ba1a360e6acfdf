//! Shared oracle machinery for the integration suites: adaptive quadrature
//! on the real line, an exact complex-rational residue oracle, and small
//! dense solvers. Everything here is independent of the library's closed
//! formulas so it can sit on the other side of a comparison.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

// ---------------------------------------------------------------------------
// adaptive quadrature
// ---------------------------------------------------------------------------

fn simpson(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

fn adaptive_step<F>(
    f: &F,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    fm: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let refined = left + right;
    if depth == 0 || (refined - whole).norm() <= 15.0 * tol {
        refined + (refined - whole) / 15.0
    } else {
        adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature of a complex-valued function on `[a, b]`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&f, a, fa, b, fb, fm, whole, tol, 48)
}

/// Integral over the whole real line of a function decaying at least like
/// `1/t^2`, through the substitution `t = tan(theta)`.
pub fn integrate_line<F>(f: F, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let g = move |theta: f64| {
        let t = theta.tan();
        f(t) * (1.0 + t * t)
    };
    adaptive_simpson(
        g,
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        tol,
    )
}

/// Integral over the real line of an oscillatory integrand, by composite
/// adaptive quadrature over `[-t_max, t_max]` in unit chunks. The caller is
/// responsible for choosing `t_max` so the truncated tails are below the
/// target accuracy (integration by parts bounds them by
/// `O(1 / (|alpha| t_max^2))` for `1/t^2` decay).
pub fn integrate_line_oscillatory<F>(f: F, t_max: f64, tol: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let chunks = 64usize;
    let h = 2.0 * t_max / chunks as f64;
    let mut acc = Complex64::zero();
    for k in 0..chunks {
        let a = -t_max + k as f64 * h;
        acc += adaptive_simpson(&f, a, a + h, tol / chunks as f64);
    }
    acc
}

// ---------------------------------------------------------------------------
// exact complex-rational arithmetic
// ---------------------------------------------------------------------------

/// A complex number with exact rational components.
#[derive(Clone, Debug, PartialEq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn zero() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        CRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn new_int(re: i64, im: i64) -> Self {
        CRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        CRat {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    pub fn sub(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn neg(&self) -> CRat {
        CRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn inv(&self) -> CRat {
        let d = &self.re * &self.re + &self.im * &self.im;
        CRat {
            re: &self.re / &d,
            im: -(&self.im / &d),
        }
    }

    pub fn scale(&self, r: &BigRational) -> CRat {
        CRat {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("finite rational"),
            self.im.to_f64().expect("finite rational"),
        )
    }
}

pub fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn factorial_big(n: usize) -> BigRational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

fn binomial_big(n: usize, k: usize) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    let mut den = BigInt::one();
    for i in 1..=k {
        den *= BigInt::from(i);
    }
    BigRational::new(acc, den)
}

/// Residue of `e^{i alpha s} (M_beta(s)^j - 1) / (s - z)` at the pole
/// `s = -sigma i beta`, `sigma = sign(j)`, computed as the `(|j|-1)`-th
/// Taylor coefficient of `e^{i alpha s} (s - sigma i beta)^{|j|} / (s - z)`
/// about the pole, entirely in exact complex-rational arithmetic; the
/// single transcendental factor `e^{sigma alpha beta}` multiplies the exact
/// result at the end.
///
/// `alpha` and `beta` are exact rationals, `z` has exact rational parts.
pub fn residue_oracle(j: i64, alpha: &BigRational, beta: &BigRational, z: &CRat) -> Complex64 {
    assert!(j != 0);
    let m = j.unsigned_abs() as usize;
    let sigma: i64 = j.signum();
    // pole s0 = -sigma i beta
    let s0 = CRat {
        re: BigRational::zero(),
        im: -(BigRational::from_integer(BigInt::from(sigma)) * beta),
    };
    // E_q = (i alpha)^q / q!  (the global factor e^{i alpha s0} is real)
    let i_alpha = CRat {
        re: BigRational::zero(),
        im: alpha.clone(),
    };
    let mut e_coef = Vec::with_capacity(m);
    let mut pw = CRat::one();
    for q in 0..m {
        if q > 0 {
            pw = pw.mul(&i_alpha);
        }
        e_coef.push(pw.scale(&factorial_big(q).recip()));
    }
    // B_k = C(m, k) (-2 sigma i beta)^{m-k}
    let minus_2sib = CRat {
        re: BigRational::zero(),
        im: -(big_ratio(2 * sigma, 1) * beta),
    };
    let mut b_pow = vec![CRat::one()];
    for _ in 1..=m {
        let last = b_pow.last().unwrap().mul(&minus_2sib);
        b_pow.push(last);
    }
    let b_coef: Vec<CRat> = (0..m)
        .map(|k| b_pow[m - k].scale(&binomial_big(m, k)))
        .collect();
    // D_q = -1 / (z - s0)^{q+1}
    let w_inv = z.sub(&s0).inv();
    let mut d_coef = Vec::with_capacity(m);
    let mut wp = w_inv.clone();
    for _ in 0..m {
        d_coef.push(wp.neg());
        wp = wp.mul(&w_inv);
    }
    // coefficient of t^{m-1} in E * B * D
    let mut total = CRat::zero();
    for (q1, e) in e_coef.iter().enumerate() {
        for (q2, b) in b_coef.iter().enumerate() {
            if q1 + q2 > m - 1 {
                continue;
            }
            let q3 = m - 1 - q1 - q2;
            total = total.add(&e.mul(b).mul(&d_coef[q3]));
        }
    }
    let scale = (BigRational::from_integer(BigInt::from(sigma)) * alpha * beta)
        .to_f64()
        .unwrap()
        .exp();
    total.to_c64() * scale
}

// ---------------------------------------------------------------------------
// dense solvers
// ---------------------------------------------------------------------------

/// Solve `A x = b` for a dense complex matrix by LU with partial pivoting.
/// `a` is row-major `n x n`.
pub fn lu_solve(a: &mut [Complex64], b: &mut [Complex64], n: usize) -> Vec<Complex64> {
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut best = col;
        let mut best_mag = a[perm[col] * n + col].norm();
        for row in (col + 1)..n {
            let mag = a[perm[row] * n + col].norm();
            if mag > best_mag {
                best = row;
                best_mag = mag;
            }
        }
        assert!(best_mag > 0.0, "singular collocation matrix");
        perm.swap(col, best);
        let pc = perm[col];
        for row in (col + 1)..n {
            let pr = perm[row];
            let factor = a[pr * n + col] / a[pc * n + col];
            a[pr * n + col] = factor;
            for c2 in (col + 1)..n {
                let v = a[pc * n + c2];
                a[pr * n + c2] -= factor * v;
            }
            let bv = b[pc];
            b[pr] -= factor * bv;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for row in (0..n).rev() {
        let pr = perm[row];
        let mut sum = b[pr];
        for c2 in (row + 1)..n {
            sum -= a[pr * n + c2] * x[c2];
        }
        x[row] = sum / a[pr * n + row];
    }
    x
}

/// Minimum of `|H y - rhs_norm e_1|` over `y`, for an upper-Hessenberg
/// matrix given by its columns (column `k` has `k + 2` leading entries),
/// via dense Householder QR rebuilt from scratch.
pub fn dense_lsq_residual(cols: &[Vec<Complex64>], rhs_norm: f64) -> f64 {
    let k = cols.len();
    let rows = k + 1;
    // dense row-major (k+1) x k
    let mut a = vec![Complex64::zero(); rows * k];
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            a[r * k + c] = v;
        }
    }
    let mut b = vec![Complex64::zero(); rows];
    b[0] = Complex64::new(rhs_norm, 0.0);
    for col in 0..k {
        // Householder vector for rows col..rows of this column
        let mut norm_sq = 0.0;
        for r in col..rows {
            norm_sq += a[r * k + col].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let pivot = a[col * k + col];
        let phase = if pivot.norm() > 0.0 {
            pivot / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v = vec![Complex64::zero(); rows];
        for r in col..rows {
            v[r] = a[r * k + col];
        }
        v[col] -= alpha;
        let vns: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vns == 0.0 {
            continue;
        }
        // apply I - 2 v v* / |v|^2 to the remaining columns and to b
        for c2 in col..k {
            let mut dot = Complex64::zero();
            for r in col..rows {
                dot += v[r].conj() * a[r * k + c2];
            }
            let s = 2.0 * dot / vns;
            for r in col..rows {
                let vv = v[r];
                a[r * k + c2] -= s * vv;
            }
        }
        let mut dot = Complex64::zero();
        for r in col..rows {
            dot += v[r].conj() * b[r];
        }
        let s = 2.0 * dot / vns;
        for r in col..rows {
            let vv = v[r];
            b[r] -= s * vv;
        }
    }
    // residual = |trailing entry of the rotated rhs|
    b[k].norm()
}

// ---------------------------------------------------------------------------
// deterministic pseudo-random helpers
// ---------------------------------------------------------------------------

/// Small deterministic generator so oracle suites are reproducible without
/// threading RNG state through every helper.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[-1, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 * 2.0 - 1.0
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.unit(), self.unit())
    }
}
