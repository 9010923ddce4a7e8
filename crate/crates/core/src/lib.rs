//! Numerics for the homogeneous Helmholtz equation `(Δ + k²) p = 0` in an
//! arbitrary spatial dimension `d ≥ 2`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Gamma, real-order Bessel and Neumann functions, Gegenbauer
//!   polynomials and the normalized hyperspherical radial functions
//!   `J_{d,n}`, `N_{d,n}`, `H^{(1,2)}_{d,n}` carrying the `(2π)^{d/2}` factor.
//! * [`sphere`]: polar/Cartesian coordinates on `ℝ^d`, real hyperspherical
//!   harmonics with a deterministic flat `(n, m)` indexing, and product
//!   quadrature rules on `S^{d-1}`.
//! * [`identities`]: numerical checks of the Funk–Hecke formula, Gegenbauer's
//!   integral for `J_{ν+n}`, the plane-wave expansion, the addition theorem,
//!   Helmholtz residuals and the radiation condition.
//! * [`rkhs`]: the band-limited space whose reproducing kernel is
//!   `J_{d,0}(k|r - r'|)`, kernel interpolation of sampled pressure fields and
//!   conversion of a kernel estimate into a spherical-harmonic expansion.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod identities;
pub mod rkhs;
pub mod specfun;
pub mod sphere;

pub use error::{Error, Result};
pub use num_complex::Complex64;
