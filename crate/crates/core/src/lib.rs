//! Oscillatory rational basis functions on the real line, their closed
//! Cauchy-operator and inner-product calculus, and GMRES in function space
//! for the singular integral equations of Riemann-Hilbert problems.
//!
//! The building blocks:
//!
//! - [`series::RationalSeries`]: finite expansions in `R_j = M_beta^j - 1`,
//!   where `M_beta` maps the real axis onto the unit circle. Closed under
//!   multiplication and under the boundary Cauchy projections; expansions
//!   come from the FFT on the mapped grid; integrals and inner products are
//!   explicit.
//! - [`osc::OscSeries`]: the two-parameter extension `e^{i alpha z} R_j`
//!   with exact rational frequencies. The Cauchy projections stay closed
//!   thanks to residue-expansion tables computed in adaptive extended
//!   precision ([`special`]).
//! - [`matrix::MatrixOscSeries`]: square matrices of such series, carrying
//!   jump matrices and solution densities.
//! - [`gmres`]: infinite-dimensional GMRES over any of these element types.
//! - [`sie`]: the singular integral operators of Riemann-Hilbert problems,
//!   the Fredholm-regulator composition, and the triangular factorizations
//!   that precondition the oscillatory regime.

pub mod apps;
pub mod error;
pub mod freq;
pub mod gmres;
pub mod io;
pub mod matrix;
pub mod osc;
pub mod point;
pub mod series;
pub mod sie;
pub mod special;

pub use error::{CoreError, Result};
pub use freq::Frequency;
pub use gmres::{gmres, Element, GmresOptions, GmresOutcome, KrylovState, Operator};
pub use matrix::MatrixOscSeries;
pub use osc::{fourier_transform, OscSeries};
pub use point::{mobius, mobius_inv, AxisPoint, Point};
pub use series::{QuadratureRule, RationalSeries, DEFAULT_TRUNC_TOL};
pub use sie::{JumpSpec, Precondition, SolveOptions, SolveOutcome};
pub use special::{eta_table, gamma_coeff, osc_basis_integral, EtaTable};
