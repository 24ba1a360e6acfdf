//! Reference computations shared by the command-line driver and the test
//! suites: built-in samplers and the Fourier-transform evolution of the
//! linear Schrödinger equation.

use crate::error::Result;
use crate::point::AxisPoint;
use crate::series::RationalSeries;
use crate::special::osc_basis_integral;
use num_complex::Complex64;
use num_traits::Zero;
use std::f64::consts::PI;

/// `e^{-x^2}` on the compactified axis.
pub fn gaussian_sampler(p: AxisPoint) -> Complex64 {
    match p {
        AxisPoint::Finite(x) => Complex64::new((-x * x).exp(), 0.0),
        AxisPoint::Infinity => Complex64::zero(),
    }
}

/// `sech(x)` on the compactified axis.
pub fn sech_sampler(p: AxisPoint) -> Complex64 {
    match p {
        AxisPoint::Finite(x) => Complex64::new(1.0 / x.cosh(), 0.0),
        AxisPoint::Infinity => Complex64::zero(),
    }
}

/// Solution values of `-i q_t + q_xx = 0` with `q(x, 0) = e^{-x^2}` at time
/// `t` on the given positions.
///
/// The transform of the initial profile, `sqrt(pi) e^{-z^2/4}`, is
/// multiplied by the evolution factor `e^{i z^2 t}` and expanded at order
/// `n`; the inverse transform is then a sum of basis integrals, uniformly
/// valid in `x`:
///
/// `q(x, t) = (1/2 pi) sum_j g_j I_{j, x}`.
///
/// Returns the values and an expansion diagnostic (the largest deviation of
/// the expansion from the sampled transform on a dense grid); the
/// approximation degrades as `t` grows, which the diagnostic makes visible.
pub fn schrodinger_gaussian(
    t: f64,
    xs: &[f64],
    n: usize,
    beta: f64,
    trunc_tol: f64,
) -> Result<(Vec<Complex64>, f64)> {
    let transform = move |z: f64| -> Complex64 {
        let sq = Complex64::new(-0.25 * z * z, t * z * z);
        PI.sqrt() * sq.exp()
    };
    let series = RationalSeries::expand(
        move |p| match p {
            AxisPoint::Finite(z) => transform(z),
            AxisPoint::Infinity => Complex64::zero(),
        },
        n,
        beta,
        trunc_tol,
    )?;
    let mut diagnostic: f64 = 0.0;
    for k in 0..=500 {
        let z = -25.0 + 50.0 * k as f64 / 500.0;
        let err = (series.eval(Complex64::new(z, 0.0))? - transform(z)).norm();
        diagnostic = diagnostic.max(err);
    }
    let mut values = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut acc = Complex64::zero();
        for (j, g) in series.terms() {
            acc += g * osc_basis_integral(j, x, beta)?;
        }
        values.push(acc / (2.0 * PI));
    }
    Ok((values, diagnostic))
}

/// Closed-form solution of the same initial-value problem,
/// `q(x, t) = e^{-x^2/(1 - 4 i t)} / sqrt(1 - 4 i t)`.
pub fn schrodinger_gaussian_exact(x: f64, t: f64) -> Complex64 {
    let denom = Complex64::new(1.0, -4.0 * t);
    (Complex64::new(-x * x, 0.0) / denom).exp() / denom.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evolution_at_time_zero_recovers_initial_profile() {
        let xs: Vec<f64> = (0..41).map(|k| -4.0 + 8.0 * k as f64 / 40.0).collect();
        let (vals, diag) = schrodinger_gaussian(0.0, &xs, 200, 1.0, 1e-14).unwrap();
        assert!(diag < 1e-9, "expansion diagnostic {diag:.3e}");
        for (v, &x) in vals.iter().zip(&xs) {
            let q0 = (-x * x).exp();
            assert!((v - Complex64::new(q0, 0.0)).norm() < 1e-8, "x = {x}");
        }
    }

    #[test]
    fn exact_solution_limits() {
        // at t = 0 the closed form is the initial condition
        for &x in &[0.0, 1.0, -2.0] {
            let v = schrodinger_gaussian_exact(x, 0.0);
            assert!((v - Complex64::new((-x * x).exp(), 0.0)).norm() < 1e-15);
        }
        // mass is conserved: |q(0, t)| = (1 + 16 t^2)^{-1/4}
        let t = 0.3;
        let v = schrodinger_gaussian_exact(0.0, t);
        let expect = (1.0 + 16.0 * t * t).powf(-0.25);
        assert!((v.norm() - expect).abs() < 1e-14);
    }
}
