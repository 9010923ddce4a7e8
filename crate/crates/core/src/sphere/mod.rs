//! Coordinates on `ℝ^d`, real hyperspherical harmonics and product quadrature
//! on the unit sphere `S^{d-1}`.

mod coords;
mod harmonics;
mod quadrature;

pub use coords::{cartesian_to_polar, polar_to_cartesian, CartesianPoint, PolarPoint};
pub use harmonics::{
    enumerate_indices, eval_harmonic, harmonic_dim, HarmonicBasis, HarmonicIndex, Parity,
};
pub use quadrature::{gauss_jacobi, integrate_sphere, quadrature, surface_measure, QuadratureRule};
