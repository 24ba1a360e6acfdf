//! Quadrature-oracle checks for the plain basis: the closed formulas for
//! Cauchy transforms, integrals and inner products against direct adaptive
//! integration.

mod common;

use common::{integrate_line, SplitMix};
use num_complex::Complex64;
use oscsie_core::{AxisPoint, RationalSeries};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_series(rng: &mut SplitMix, n_terms: usize, max_index: i64) -> RationalSeries {
    let mut s = RationalSeries::new(1.0).unwrap();
    for _ in 0..n_terms {
        let mut j = rng.int(-max_index, max_index);
        if j == 0 {
            j = 1;
        }
        s.add_term(j, rng.complex());
    }
    s
}

#[test]
fn cauchy_offaxis_matches_quadrature_for_gaussian() {
    let gaussian = |x: AxisPoint| match x {
        AxisPoint::Finite(x) => c((-x * x).exp(), 0.0),
        AxisPoint::Infinity => c(0.0, 0.0),
    };
    let s = RationalSeries::expand(gaussian, 160, 1.0, 0.0).unwrap();
    let z = c(0.0, 2.0);
    let fast = s.cauchy_offaxis(z).unwrap();
    let oracle = integrate_line(
        |t| c((-t * t).exp(), 0.0) / (c(t, 0.0) - z),
        1e-12,
    ) / c(0.0, 2.0 * std::f64::consts::PI);
    assert!(
        (fast - oracle).norm() < 1e-8,
        "off-axis transform {fast} vs quadrature {oracle}"
    );
}

#[test]
fn cauchy_offaxis_matches_quadrature_for_random_series() {
    let mut rng = SplitMix(7);
    for trial in 0..12 {
        let s = random_series(&mut rng, 4, 12);
        let z = c(2.0 * rng.unit(), 1.5 * rng.unit().abs().max(0.2) * rng.unit().signum());
        let z = if z.im == 0.0 { z + c(0.0, 0.8) } else { z };
        let fast = s.cauchy_offaxis(z).unwrap();
        let sv = s.clone();
        let oracle = integrate_line(
            move |t| sv.eval(c(t, 0.0)).unwrap() / (c(t, 0.0) - z),
            1e-11,
        ) / c(0.0, 2.0 * std::f64::consts::PI);
        let scale = fast.norm().max(1.0);
        assert!(
            (fast - oracle).norm() < 1e-8 * scale,
            "trial {trial}: {fast} vs {oracle} at z = {z}"
        );
    }
}

#[test]
fn inner_product_matches_quadrature() {
    let mut rng = SplitMix(11);
    for trial in 0..10 {
        let s1 = random_series(&mut rng, 3, 6);
        let s2 = random_series(&mut rng, 3, 6);
        let fast = s1.inner(&s2).unwrap();
        let (a, b) = (s1.clone(), s2.clone());
        let oracle = integrate_line(
            move |t| {
                let z = c(t, 0.0);
                a.eval(z).unwrap() * b.eval(z).unwrap().conj()
            },
            1e-10,
        );
        let scale = fast.norm().max(1.0);
        assert!(
            (fast - oracle).norm() < 1e-8 * scale,
            "trial {trial}: {fast} vs {oracle}"
        );
    }
}

#[test]
fn pv_integral_matches_quadrature_for_integrable_series() {
    // R_1 + R_{-1} has 1/x^2 tails (the 1/x parts cancel), so the
    // principal-value integral is an ordinary one
    let s = RationalSeries::from_terms(1.0, [(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
    let sv = s.clone();
    let oracle = integrate_line(move |t| sv.eval(c(t, 0.0)).unwrap(), 1e-11);
    let fast = s.pv_integral();
    assert!((fast - oracle).norm() < 1e-9, "{fast} vs {oracle}");
    let d = s.pv_integral_detailed();
    assert!(d.discrepancy < 1e-13);
}

#[test]
fn boundary_limits_agree_with_offaxis_limits() {
    // C+ and C- are the vertical limits of the off-axis transform
    let mut rng = SplitMix(23);
    let s = random_series(&mut rng, 5, 9);
    let plus = s.cauchy_plus();
    let minus = s.cauchy_minus();
    for &x in &[-2.3, 0.0, 0.9, 4.1] {
        let above = s.cauchy_offaxis(c(x, 1e-8)).unwrap();
        let below = s.cauchy_offaxis(c(x, -1e-8)).unwrap();
        assert!((above - plus.eval(c(x, 0.0)).unwrap()).norm() < 1e-6);
        assert!((below - minus.eval(c(x, 0.0)).unwrap()).norm() < 1e-6);
    }
}

#[test]
fn gaussian_expansion_error_decreases_by_orders() {
    let gaussian = |x: AxisPoint| match x {
        AxisPoint::Finite(x) => c((-x * x).exp(), 0.0),
        AxisPoint::Infinity => c(0.0, 0.0),
    };
    let max_err = |n: usize| -> f64 {
        let s = RationalSeries::expand(gaussian, n, 1.0, 0.0).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..=600 {
            let x = -12.0 + 24.0 * k as f64 / 600.0;
            worst = worst.max((s.eval(c(x, 0.0)).unwrap() - gaussian(AxisPoint::Finite(x))).norm());
        }
        worst
    };
    let e20 = max_err(20);
    let e40 = max_err(40);
    let e80 = max_err(80);
    assert!(e40 < e20 && e80 < e40, "{e20:.2e} {e40:.2e} {e80:.2e}");
}
