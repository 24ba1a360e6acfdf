//! Points of the extended real axis and extended complex plane, and the
//! Möbius map identifying the real line with the unit circle.

use num_complex::Complex64;

/// A point of the one-point compactification of the real axis.
///
/// The compactified axis is the natural domain of the basis: the point at
/// infinity is a regular interpolation and quadrature node where every
/// admissible function takes the value 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisPoint {
    Finite(f64),
    Infinity,
}

/// A point of the extended complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl Point {
    pub fn finite(re: f64, im: f64) -> Self {
        Point::Finite(Complex64::new(re, im))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<Complex64> {
        match self {
            Point::Finite(z) => Some(*z),
            Point::Infinity => None,
        }
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Finite(z)
    }
}

impl From<AxisPoint> for Point {
    fn from(x: AxisPoint) -> Self {
        match x {
            AxisPoint::Finite(x) => Point::Finite(Complex64::new(x, 0.0)),
            AxisPoint::Infinity => Point::Infinity,
        }
    }
}

/// The Möbius map `(z - i beta) / (z + i beta)`.
///
/// Maps the real axis onto the unit circle, the upper half plane onto the
/// open disk, and infinity to 1. The pole `z = -i beta` maps to infinity.
pub fn mobius(z: Point, beta: f64) -> Point {
    match z {
        Point::Infinity => Point::Finite(Complex64::new(1.0, 0.0)),
        Point::Finite(z) => {
            let ib = Complex64::new(0.0, beta);
            let denom = z + ib;
            if denom == Complex64::new(0.0, 0.0) {
                Point::Infinity
            } else {
                Point::Finite((z - ib) / denom)
            }
        }
    }
}

/// Inverse of [`mobius`]: `(beta / i) (w + 1) / (w - 1)`; `w = 1` maps to infinity.
pub fn mobius_inv(w: Point, beta: f64) -> Point {
    match w {
        Point::Infinity => Point::finite(0.0, -beta),
        Point::Finite(w) => {
            let denom = w - 1.0;
            if denom == Complex64::new(0.0, 0.0) {
                Point::Infinity
            } else {
                // beta / i = -i beta
                Point::Finite(Complex64::new(0.0, -beta) * (w + 1.0) / denom)
            }
        }
    }
}

/// Real-axis preimage of `e^{i theta}` under the Möbius map: `-beta cot(theta/2)`.
///
/// `theta = 0` corresponds to the point at infinity. Computed in real
/// arithmetic so grid nodes carry no spurious imaginary part.
pub fn circle_preimage(theta: f64, beta: f64) -> AxisPoint {
    if theta == 0.0 {
        AxisPoint::Infinity
    } else {
        AxisPoint::Finite(-beta / (0.5 * theta).tan())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-14;

    #[test]
    fn mobius_at_origin() {
        // (0 - i)/(0 + i) = -1
        let w = mobius(Point::finite(0.0, 0.0), 1.0).value().unwrap();
        assert!((w - Complex64::new(-1.0, 0.0)).norm() < TOL);
    }

    #[test]
    fn mobius_at_i_beta_is_zero() {
        for beta in [0.5, 1.0, 2.0] {
            let w = mobius(Point::finite(0.0, beta), beta).value().unwrap();
            assert!(w.norm() < TOL);
        }
    }

    #[test]
    fn mobius_pole_maps_to_infinity() {
        assert!(mobius(Point::finite(0.0, -1.0), 1.0).is_infinity());
        assert!(mobius(Point::Infinity, 1.0).value().unwrap() == Complex64::new(1.0, 0.0));
    }

    #[test]
    fn inverse_on_circle_quarter_turn() {
        // M^{-1}(e^{i pi/2}) = -cot(pi/4) = -1 for beta = 1
        let w = Point::Finite(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2));
        let z = mobius_inv(w, 1.0).value().unwrap();
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < TOL);
        // and composing back recovers the circle point
        let back = mobius(Point::Finite(z), 1.0).value().unwrap();
        assert!((back - w.value().unwrap()).norm() < TOL);
    }

    #[test]
    fn inverse_round_trip_off_axis() {
        let beta = 1.5;
        for &z in &[
            Complex64::new(0.3, 0.7),
            Complex64::new(-2.0, -0.4),
            Complex64::new(10.0, 3.0),
        ] {
            let w = mobius(Point::Finite(z), beta);
            let z2 = mobius_inv(w, beta).value().unwrap();
            assert!((z - z2).norm() < 1e-12 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn circle_preimage_matches_complex_route() {
        let beta = 1.0;
        for k in 1..16 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 17.0;
            let via_real = match circle_preimage(theta, beta) {
                AxisPoint::Finite(x) => x,
                AxisPoint::Infinity => panic!("interior node"),
            };
            let via_complex = mobius_inv(Point::Finite(Complex64::from_polar(1.0, theta)), beta)
                .value()
                .unwrap();
            assert!(via_complex.im.abs() < 1e-9);
            assert!((via_real - via_complex.re).abs() < 1e-9 * (1.0 + via_real.abs()));
        }
        assert_eq!(circle_preimage(0.0, beta), AxisPoint::Infinity);
    }
}
