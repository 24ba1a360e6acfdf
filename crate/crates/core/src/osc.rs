//! The oscillatory basis `e^{i alpha z} (M_beta(z)^j - 1)`: series grouped
//! by exact rational frequency, closed under multiplication and under the
//! Cauchy projections, with explicit inner products.

use crate::error::{CoreError, Result};
use crate::freq::Frequency;
use crate::series::RationalSeries;
use crate::special::{eta_table, osc_basis_integral};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// A finite sum `sum_{j, alpha} a_{j,alpha} e^{i alpha z} R_j(z)`, stored as
/// one [`RationalSeries`] per frequency.
///
/// The zero-frequency group is the plain non-oscillatory series. Groups are
/// keyed by exact rationals, so frequency bookkeeping never merges by
/// floating-point tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct OscSeries {
    beta: f64,
    groups: BTreeMap<Frequency, RationalSeries>,
}

impl OscSeries {
    /// The zero series.
    pub fn new(beta: f64) -> Result<Self> {
        // delegate the beta check
        let _ = RationalSeries::new(beta)?;
        Ok(OscSeries {
            beta,
            groups: BTreeMap::new(),
        })
    }

    /// Wrap a plain series as the zero-frequency group.
    pub fn from_plain(s: RationalSeries) -> Self {
        let beta = s.beta();
        let mut groups = BTreeMap::new();
        if !s.is_empty() {
            groups.insert(Frequency::ZERO, s);
        }
        OscSeries { beta, groups }
    }

    /// The single basis element `e^{i alpha z} R_j`.
    pub fn basis_element(beta: f64, j: i64, alpha: Frequency) -> Result<Self> {
        let mut s = Self::new(beta)?;
        s.add_term(alpha, j, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Iterator over `(frequency, group)` pairs in frequency order.
    pub fn groups(&self) -> impl Iterator<Item = (Frequency, &RationalSeries)> {
        self.groups.iter().map(|(&a, g)| (a, g))
    }

    pub fn group(&self, alpha: Frequency) -> Option<&RationalSeries> {
        self.groups.get(&alpha)
    }

    /// The zero-frequency group, if the series is purely non-oscillatory.
    pub fn as_plain(&self) -> Option<&RationalSeries> {
        if self.groups.len() == 1 {
            self.groups.get(&Frequency::ZERO)
        } else if self.groups.is_empty() {
            None
        } else {
            None
        }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Total number of stored coefficients across all groups.
    pub fn n_coeffs(&self) -> usize {
        self.groups.values().map(|g| g.len()).sum()
    }

    pub fn coeff(&self, alpha: Frequency, j: i64) -> Complex64 {
        self.groups
            .get(&alpha)
            .map(|g| g.coeff(j))
            .unwrap_or_else(Complex64::zero)
    }

    /// Accumulate a term onto the group of frequency `alpha`.
    pub fn add_term(&mut self, alpha: Frequency, j: i64, c: Complex64) {
        if j == 0 || c == Complex64::zero() {
            return;
        }
        let beta = self.beta;
        let group = self
            .groups
            .entry(alpha)
            .or_insert_with(|| RationalSeries::new(beta).expect("validated beta"));
        group.add_term(j, c);
        if group.is_empty() {
            self.groups.remove(&alpha);
        }
    }

    fn add_group(&mut self, alpha: Frequency, s: &RationalSeries, scale: Complex64) {
        for (j, c) in s.terms() {
            self.add_term(alpha, j, c * scale);
        }
    }

    fn check_same_beta(&self, other: &Self) -> Result<()> {
        if self.beta == other.beta {
            Ok(())
        } else {
            Err(CoreError::BetaMismatch(self.beta, other.beta))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_beta(other)?;
        let mut out = self.clone();
        for (alpha, g) in other.groups() {
            out.add_group(alpha, g, Complex64::new(1.0, 0.0));
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_beta(other)?;
        let mut out = self.clone();
        for (alpha, g) in other.groups() {
            out.add_group(alpha, g, Complex64::new(-1.0, 0.0));
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = OscSeries {
            beta: self.beta,
            groups: BTreeMap::new(),
        };
        if c == Complex64::zero() {
            return out;
        }
        for (alpha, g) in self.groups() {
            out.groups.insert(alpha, g.scale(c));
        }
        out
    }

    /// Multiply by the exponential `e^{i delta z}`: shift every frequency.
    pub fn shift_frequency(&self, delta: Frequency) -> Self {
        let mut groups = BTreeMap::new();
        for (alpha, g) in self.groups() {
            groups.insert(alpha + delta, g.clone());
        }
        OscSeries {
            beta: self.beta,
            groups,
        }
    }

    /// Drop coefficients below `tol` and prune empty groups.
    pub fn truncate(&mut self, tol: f64) {
        for g in self.groups.values_mut() {
            g.truncate(tol);
        }
        self.groups.retain(|_, g| !g.is_empty());
    }

    /// Exact product: frequencies add as rationals, indices follow
    /// `R_j R_k = R_{j+k} - R_j - R_k` within each group pair.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_beta(other)?;
        let mut out = Self::new(self.beta)?;
        for (a1, g1) in self.groups() {
            for (a2, g2) in other.groups() {
                let target = a1 + a2;
                let sum1: Complex64 = g1.terms().map(|(_, c)| c).sum();
                let sum2: Complex64 = g2.terms().map(|(_, c)| c).sum();
                for (j, a) in g1.terms() {
                    for (k, b) in g2.terms() {
                        out.add_term(target, j + k, a * b);
                    }
                }
                for (j, a) in g1.terms() {
                    out.add_term(target, j, -a * sum2);
                }
                for (k, b) in g2.terms() {
                    out.add_term(target, k, -b * sum1);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate of the represented function on the real axis:
    /// `conj(R_{k, alpha}) = R_{-k, -alpha}`. An involution.
    pub fn conjugate(&self) -> Self {
        let mut out = OscSeries {
            beta: self.beta,
            groups: BTreeMap::new(),
        };
        for (alpha, g) in self.groups() {
            out.groups.insert(-alpha, g.conjugate());
        }
        out
    }

    /// Pointwise evaluation (finite `z`; series poles propagate as errors).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for (alpha, g) in self.groups() {
            let phase = (Complex64::i() * alpha.to_f64() * z).exp();
            acc += phase * g.eval(z)?;
        }
        Ok(acc)
    }

    /// Boundary value from above of the Cauchy transform.
    pub fn cauchy_plus(&self) -> Result<Self> {
        self.cauchy_boundary(true)
    }

    /// Boundary value from below of the Cauchy transform.
    pub fn cauchy_minus(&self) -> Result<Self> {
        self.cauchy_boundary(false)
    }

    /// Cauchy projections on the oscillatory basis.
    ///
    /// Terms with `alpha * j >= 0` follow the sign projection of the plain
    /// basis within their own frequency group. Terms with `alpha * j < 0`
    /// additionally shed a zero-frequency residue correction with the
    /// cached eta coefficients:
    ///
    /// for `j > 0`, `alpha < 0`:
    ///   `C+ = -sum_n eta_n R_{n,0}`, `C- = -R_{j,alpha} - sum_n eta_n R_{n,0}`;
    /// for `j < 0`, `alpha > 0`:
    ///   `C+ = R_{j,alpha} + sum_n eta_n R_{-n,0}`, `C- = sum_n eta_n R_{-n,0}`.
    fn cauchy_boundary(&self, plus: bool) -> Result<Self> {
        let mut out = Self::new(self.beta)?;
        for (alpha, g) in self.groups() {
            if alpha.is_zero() {
                let proj = if plus { g.cauchy_plus() } else { g.cauchy_minus() };
                out.add_group(Frequency::ZERO, &proj, Complex64::new(1.0, 0.0));
                continue;
            }
            let asign = alpha.signum() as i64;
            for (j, c) in g.terms() {
                if j.signum() * asign > 0 {
                    // plain projection within the group
                    if plus && j > 0 {
                        out.add_term(alpha, j, c);
                    } else if !plus && j < 0 {
                        out.add_term(alpha, j, -c);
                    }
                    continue;
                }
                let table = eta_table(j, alpha, self.beta)?;
                let m = j.unsigned_abs() as usize;
                if j > 0 {
                    if !plus {
                        out.add_term(alpha, j, -c);
                    }
                    for n in 1..=m {
                        out.add_term(Frequency::ZERO, n as i64, -c * table.value(n));
                    }
                } else {
                    if plus {
                        out.add_term(alpha, j, c);
                    }
                    for n in 1..=m {
                        out.add_term(Frequency::ZERO, -(n as i64), c * table.value(n));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Principal-value integral over the real axis.
    pub fn pv_integral(&self) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for (alpha, g) in self.groups() {
            let af = alpha.to_f64();
            for (j, c) in g.terms() {
                acc += c * osc_basis_integral(j, af, self.beta)?;
            }
        }
        Ok(acc)
    }

    /// Inner product `integral of self * conj(other)`.
    ///
    /// Reduces to the plain closed form within equal-frequency group pairs;
    /// across frequencies it uses the oscillatory basis integrals
    /// `L_{j,k} = I_{j-k} - I_j - I_{-k}` at the frequency difference.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_beta(other)?;
        let mut acc = Complex64::zero();
        for (a1, g1) in self.groups() {
            for (a2, g2) in other.groups() {
                if a1 == a2 {
                    acc += g1.inner(g2)?;
                    continue;
                }
                let da = (a1 - a2).to_f64();
                for (j, a) in g1.terms() {
                    for (k, b) in g2.terms() {
                        let l = osc_basis_integral(j - k, da, self.beta)?
                            - osc_basis_integral(j, da, self.beta)?
                            - osc_basis_integral(-k, da, self.beta)?;
                        acc += a * b.conj() * l;
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Norm induced by [`OscSeries::inner`].
    pub fn norm(&self) -> Result<f64> {
        Ok(self.inner(self)?.re.max(0.0).sqrt())
    }
}

/// Fourier transform `integral e^{-i alpha x} f(x) dx` of the function
/// represented by a plain series: `sum_j a_j I_{j, -alpha}`.
pub fn fourier_transform(s: &RationalSeries, alpha: f64) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for (j, a) in s.terms() {
        acc += a * osc_basis_integral(j, -alpha, s.beta())?;
    }
    Ok(acc)
}

/// Inner-product weight between two oscillatory basis elements,
/// `integral R_{j,a1} conj(R_{k,a2})`.
pub fn inner_weight(j: i64, k: i64, a1: Frequency, a2: Frequency, beta: f64) -> Result<f64> {
    if a1 == a2 {
        // closed form: orthogonal across signs, 4 pi beta min(|j|,|k|) otherwise
        if (j > 0) != (k > 0) {
            return Ok(0.0);
        }
        return Ok(4.0 * PI * beta * j.abs().min(k.abs()) as f64);
    }
    let da = (a1 - a2).to_f64();
    Ok(osc_basis_integral(j - k, da, beta)?
        - osc_basis_integral(j, da, beta)?
        - osc_basis_integral(-k, da, beta)?)
}
