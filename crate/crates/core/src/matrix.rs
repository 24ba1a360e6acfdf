//! Square matrices with oscillatory-series entries.
//!
//! Jump matrices, unknowns and right-hand sides of the singular integral
//! equations are stored entrywise as scalar series; non-commutativity lives
//! at the matrix-product level.

use crate::error::{CoreError, Result};
use crate::osc::OscSeries;
use num_complex::Complex64;
use num_traits::Zero;

/// A `dim x dim` matrix of [`OscSeries`] sharing one `beta`
/// (`dim` is 1 for scalar problems, 2 for the matrix problems here).
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOscSeries {
    dim: usize,
    beta: f64,
    entries: Vec<OscSeries>,
}

impl MatrixOscSeries {
    /// The zero matrix.
    pub fn zero(dim: usize, beta: f64) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(CoreError::InvalidParameter(format!(
                "matrix dimension must be 1 or 2, got {dim}"
            )));
        }
        let entries = (0..dim * dim)
            .map(|_| OscSeries::new(beta))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixOscSeries { dim, beta, entries })
    }

    /// Wrap a scalar series as a 1x1 matrix.
    pub fn scalar(s: OscSeries) -> Self {
        MatrixOscSeries {
            dim: 1,
            beta: s.beta(),
            entries: vec![s],
        }
    }

    /// Build from row-major entries; all must share one beta.
    pub fn from_entries(dim: usize, entries: Vec<OscSeries>) -> Result<Self> {
        if dim == 0 || dim > 2 {
            return Err(CoreError::InvalidParameter(format!(
                "matrix dimension must be 1 or 2, got {dim}"
            )));
        }
        if entries.len() != dim * dim {
            return Err(CoreError::DimMismatch(entries.len(), dim * dim));
        }
        let beta = entries[0].beta();
        for e in &entries {
            if e.beta() != beta {
                return Err(CoreError::BetaMismatch(beta, e.beta()));
            }
        }
        Ok(MatrixOscSeries { dim, beta, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn entry(&self, row: usize, col: usize) -> &OscSeries {
        &self.entries[row * self.dim + col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut OscSeries {
        &mut self.entries[row * self.dim + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, s: OscSeries) -> Result<()> {
        if s.beta() != self.beta {
            return Err(CoreError::BetaMismatch(self.beta, s.beta()));
        }
        self.entries[row * self.dim + col] = s;
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(CoreError::DimMismatch(self.dim, other.dim));
        }
        if self.beta != other.beta {
            return Err(CoreError::BetaMismatch(self.beta, other.beta));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.dim, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.dim, entries)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        MatrixOscSeries {
            dim: self.dim,
            beta: self.beta,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Matrix product; entry series commute, matrix factors do not.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.dim, self.beta)?;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = OscSeries::new(self.beta)?;
                for m in 0..self.dim {
                    acc = acc.add(&self.entry(r, m).multiply(other.entry(m, c))?)?;
                }
                out.set_entry(r, c, acc)?;
            }
        }
        Ok(out)
    }

    /// Entrywise boundary Cauchy projection from below.
    pub fn cauchy_minus(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.cauchy_minus())
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.dim, entries)
    }

    /// Entrywise boundary Cauchy projection from above.
    pub fn cauchy_plus(&self) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.cauchy_plus())
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(self.dim, entries)
    }

    /// Inner product `integral trace(self * other^*)`, the entrywise sum of
    /// scalar inner products.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let mut acc = Complex64::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc += a.inner(b)?;
        }
        Ok(acc)
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.inner(self)?.re.max(0.0).sqrt())
    }

    pub fn truncate(&mut self, tol: f64) {
        for e in &mut self.entries {
            e.truncate(tol);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|e| e.is_empty())
    }

    /// Total number of stored coefficients across entries and frequencies.
    pub fn n_coeffs(&self) -> usize {
        self.entries.iter().map(|e| e.n_coeffs()).sum()
    }

    /// Pointwise evaluation; returns the row-major entry values.
    pub fn eval(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.entries.iter().map(|e| e.eval(z)).collect()
    }

    /// Pointwise evaluation of `I + self`.
    pub fn eval_plus_identity(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let mut vals = self.eval(z)?;
        for r in 0..self.dim {
            vals[r * self.dim + r] += 1.0;
        }
        Ok(vals)
    }
}

/// Multiply two row-major value matrices of dimension `dim`.
pub fn matmul_values(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            for m in 0..dim {
                out[r * dim + c] += a[r * dim + m] * b[m * dim + c];
            }
        }
    }
    out
}
