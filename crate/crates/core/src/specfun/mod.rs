//! Special functions: Gamma, real-order Bessel/Neumann, Gegenbauer and the
//! normalized hyperspherical radial functions.

mod bessel;
mod dd;
mod gamma;
mod gegenbauer;
mod hyper;

pub use bessel::{bessel_j, bessel_n};
pub use gamma::{gamma, ln_gamma, GAMMA_MAX_ARG};
pub use gegenbauer::{gegenbauer, gegenbauer_all};
pub use hyper::{hyper_h1, hyper_h2, hyper_j, hyper_j_at_origin, hyper_n, RadialOrder, SMALL_Z};
