//! Hyperspherical radial functions
//!
//! ```text
//! J_{d,n}(z) = (2π)^{d/2} J_{n+d/2-1}(z) / z^{d/2-1}
//! N_{d,n}(z) = (2π)^{d/2} N_{n+d/2-1}(z) / z^{d/2-1}
//! H^{(1,2)}_{d,n}(z) = J_{d,n}(z) ± i N_{d,n}(z)
//! ```
//!
//! For `d = 3` these are `4π` times the spherical Bessel family; for `d = 2`
//! they are `2π` times the cylindrical one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j, bessel_n, series_tail};
use super::gamma::gamma;
use crate::error::{domain, finite_or_overflow, Error, Result};

/// Below this argument `J_{d,n}` is evaluated from its series, which removes
/// the `0/0` at the origin. The next omitted term is below `1e-14` relative.
pub const SMALL_Z: f64 = 1e-4;

/// Spatial dimension `d ≥ 2` together with a harmonic order `n ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RadialOrder {
    d: usize,
    n: usize,
}

impl RadialOrder {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        Ok(Self { d, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cylindrical order `ν = n + d/2 − 1`.
    pub fn nu(&self) -> f64 {
        self.n as f64 + 0.5 * self.d as f64 - 1.0
    }

    fn exponent(&self) -> f64 {
        0.5 * self.d as f64 - 1.0
    }

    fn prefactor(&self) -> f64 {
        (2.0 * std::f64::consts::PI).powf(0.5 * self.d as f64)
    }
}

/// `J_{d,n}(z)` for `z ≥ 0`, including the analytic limit at `z = 0`.
pub fn hyper_j(ord: RadialOrder, z: f64) -> Result<f64> {
    if !z.is_finite() || z < 0.0 {
        return domain(format!("hyper_j requires finite z ≥ 0, got {z}"));
    }
    let nu = ord.nu();
    if z < SMALL_Z {
        // z^{-(d/2-1)} J_ν(z) = 2^{-ν} z^n Σ_j (−z²/4)^j / (j! Γ(j+ν+1))
        let lead = 0.5f64.powf(nu) / gamma(nu + 1.0)?;
        let value = ord.prefactor() * lead * z.powi(ord.n as i32) * series_tail(nu, z);
        return finite_or_overflow(value, "hyper_j");
    }
    let j = bessel_j(nu, z)?;
    finite_or_overflow(ord.prefactor() * j / z.powf(ord.exponent()), "hyper_j")
}

/// `N_{d,n}(z)` for `z > 0`.
pub fn hyper_n(ord: RadialOrder, z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return domain(format!(
            "hyper_n is singular at z = 0 and requires z > 0, got {z}"
        ));
    }
    let y = bessel_n(ord.nu(), z)?;
    finite_or_overflow(ord.prefactor() * y / z.powf(ord.exponent()), "hyper_n")
}

/// Outgoing hyperspherical Hankel function `H^{(1)}_{d,n}(z)`, `z > 0`.
pub fn hyper_h1(ord: RadialOrder, z: f64) -> Result<Complex64> {
    let im = hyper_n(ord, z)?;
    Ok(Complex64::new(hyper_j(ord, z)?, im))
}

/// Incoming hyperspherical Hankel function `H^{(2)}_{d,n}(z)`, `z > 0`.
pub fn hyper_h2(ord: RadialOrder, z: f64) -> Result<Complex64> {
    hyper_h1(ord, z).map(|h| h.conj())
}

/// `ω_{d-1} = J_{d,0}(0) = 2π^{d/2}/Γ(d/2)`: the value of the band-limited
/// reproducing kernel on the diagonal.
pub fn hyper_j_at_origin(d: usize) -> Result<f64> {
    hyper_j(RadialOrder::new(d, 0)?, 0.0)
}
