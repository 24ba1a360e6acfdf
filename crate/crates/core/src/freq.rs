//! Exact rational frequencies for the oscillatory basis.
//!
//! Frequencies are added and subtracted on every operator application, so
//! they are kept as exact rationals: grouping terms by frequency never
//! relies on a floating-point tolerance.

use crate::error::{CoreError, Result};
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An exact rational frequency `alpha` labelling the oscillatory factor `e^{i alpha z}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Frequency(Ratio<i128>);

impl Frequency {
    pub const ZERO: Frequency = Frequency(Ratio::new_raw(0, 1));

    /// Reduced rational `num/den`; `den` must be positive.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(CoreError::InvalidParameter(format!(
                "frequency denominator must be positive, got {den}"
            )));
        }
        Ok(Frequency(Ratio::new(num as i128, den as i128)))
    }

    pub fn integer(num: i64) -> Self {
        Frequency(Ratio::new_raw(num as i128, 1))
    }

    /// Exact conversion from a finite `f64` (every finite double is a dyadic
    /// rational). Fails for values whose dyadic exponent exceeds the `i128`
    /// range of the representation.
    pub fn from_f64_exact(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(CoreError::InvalidParameter(format!(
                "frequency must be finite, got {x}"
            )));
        }
        if x == 0.0 {
            return Ok(Self::ZERO);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i128 } else { 1i128 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mut mant, mut exp) = if exp_bits == 0 {
            (frac as i128, -1074i64)
        } else {
            ((frac | (1 << 52)) as i128, exp_bits - 1075)
        };
        while mant % 2 == 0 && mant != 0 {
            mant /= 2;
            exp += 1;
        }
        let ratio = if exp >= 0 {
            if exp > 70 {
                return Err(CoreError::InvalidParameter(format!(
                    "frequency {x} too large for exact rational representation"
                )));
            }
            Ratio::new(sign * (mant << exp), 1)
        } else {
            if exp < -100 {
                return Err(CoreError::InvalidParameter(format!(
                    "frequency {x} too small for exact rational representation"
                )));
            }
            Ratio::new(sign * mant, 1i128 << (-exp))
        };
        Ok(Frequency(ratio))
    }

    pub fn numerator(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i128 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Sign of the frequency: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }
}

impl Add for Frequency {
    type Output = Frequency;
    fn add(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 + rhs.0)
    }
}

impl Sub for Frequency {
    type Output = Frequency;
    fn sub(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 - rhs.0)
    }
}

impl Neg for Frequency {
    type Output = Frequency;
    fn neg(self) -> Frequency {
        Frequency(-self.0)
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}
