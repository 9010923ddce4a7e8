use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A point of `ℝ^d` in polar form `(r, θ_1, …, θ_{d-1})`.
///
/// `θ_1 ∈ [0, 2π)` is the azimuth in the `(x_2, x_1)` plane; the remaining
/// angles lie in `[0, π]` and `θ_{d-1}` is measured from the `x_d` axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    r: f64,
    theta: Vec<f64>,
}

/// A point of `ℝ^d`, `d ≥ 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartesianPoint {
    x: Vec<f64>,
}

impl PolarPoint {
    pub fn new(r: f64, theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::Invalid(
                "a polar point needs at least one angle (d ≥ 2)".into(),
            ));
        }
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Invalid(format!(
                "radius must be finite and ≥ 0, got {r}"
            )));
        }
        if !(0.0..2.0 * PI).contains(&theta[0]) {
            return Err(Error::Invalid(format!(
                "θ_1 must lie in [0, 2π), got {}",
                theta[0]
            )));
        }
        for (i, t) in theta.iter().enumerate().skip(1) {
            if !(0.0..=PI).contains(t) {
                return Err(Error::Invalid(format!(
                    "θ_{} must lie in [0, π], got {t}",
                    i + 1
                )));
            }
        }
        Ok(Self { r, theta })
    }

    /// A point on the unit sphere.
    pub fn unit(theta: Vec<f64>) -> Result<Self> {
        Self::new(1.0, theta)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }

    pub fn to_cartesian(&self) -> CartesianPoint {
        polar_to_cartesian(self)
    }
}

impl CartesianPoint {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::Invalid(format!(
                "dimension must be at least 2, got {}",
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("coordinates must be finite".into()));
        }
        Ok(Self { x })
    }

    pub fn origin(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d])
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn norm(&self) -> f64 {
        self.x.iter().fold(0.0, |acc: f64, v| acc.hypot(*v))
    }

    pub fn dot(&self, other: &CartesianPoint) -> f64 {
        self.x.iter().zip(&other.x).map(|(a, b)| a * b).sum()
    }

    /// Euclidean distance `|self − other|`.
    pub fn distance(&self, other: &CartesianPoint) -> f64 {
        self.x
            .iter()
            .zip(&other.x)
            .fold(0.0, |acc: f64, (a, b)| acc.hypot(a - b))
    }

    pub fn to_polar(&self) -> PolarPoint {
        cartesian_to_polar(self)
    }
}

/// Product-of-sines map from polar to Cartesian coordinates.
pub fn polar_to_cartesian(p: &PolarPoint) -> CartesianPoint {
    let d = p.dim();
    let mut x = vec![0.0; d];
    let mut s = p.r;
    for i in (1..d).rev() {
        let (sin, cos) = p.theta[i - 1].sin_cos();
        x[i] = s * cos;
        s *= sin;
    }
    x[0] = s;
    CartesianPoint { x }
}

/// Inverse of [`polar_to_cartesian`].
///
/// Once every coordinate below some level vanishes, all lower angles are set
/// to 0; in particular the origin maps to `r = 0` with all angles 0.
pub fn cartesian_to_polar(p: &CartesianPoint) -> PolarPoint {
    let x = &p.x;
    let d = x.len();
    // partial[i] = |(x_1, ..., x_{i+1})|
    let mut partial = vec![0.0; d];
    let mut acc: f64 = 0.0;
    for i in 0..d {
        acc = acc.hypot(x[i]);
        partial[i] = acc;
    }
    let mut theta = vec![0.0; d - 1];
    for i in (2..d).rev() {
        // θ_i from x_{i+1} and the norm of x_1..x_i
        let rho = partial[i - 1];
        if rho == 0.0 {
            if x[i] < 0.0 {
                theta[i - 1] = PI;
            }
            // everything below is zero: canonical angles stay 0
            return PolarPoint {
                r: partial[d - 1],
                theta,
            };
        }
        theta[i - 1] = rho.atan2(x[i]);
    }
    if partial[1] > 0.0 {
        let mut t1 = x[0].atan2(x[1]);
        if t1 < 0.0 {
            t1 += 2.0 * PI;
        }
        if t1 >= 2.0 * PI {
            t1 = 0.0;
        }
        theta[0] = t1;
    }
    PolarPoint {
        r: partial[d - 1],
        theta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cart(v: &[f64]) -> CartesianPoint {
        CartesianPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn forward_examples() {
        let p = PolarPoint::new(1.0, vec![0.0, PI / 2.0]).unwrap();
        let x = p.to_cartesian();
        assert!(
            (x.x()[0]).abs() < 1e-16 && (x.x()[1] - 1.0).abs() < 1e-16 && x.x()[2].abs() < 1e-16
        );

        for d in 2..7 {
            let x = PolarPoint::new(1.0, vec![0.0; d - 1])
                .unwrap()
                .to_cartesian();
            let mut want = vec![0.0; d];
            want[d - 1] = 1.0;
            assert_eq!(x.x(), &want[..]);
        }

        let x = PolarPoint::new(2.0, vec![PI / 2.0]).unwrap().to_cartesian();
        assert!((x.x()[0] - 2.0).abs() < 1e-15 && x.x()[1].abs() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let p = cart(&[0.0, 0.0, 0.0, 0.0]).to_polar();
        assert_eq!(p.r(), 0.0);
        assert!(p.theta().iter().all(|t| *t == 0.0));

        let p = cart(&[0.0, 1.0, 0.0]).to_polar();
        assert_eq!(p.r(), 1.0);
        assert_eq!(p.theta()[0], 0.0);
        assert!((p.theta()[1] - PI / 2.0).abs() < 1e-16);

        // -x_d axis: θ_{d-1} = π, lower angles canonical
        let p = cart(&[0.0, 0.0, -3.0]).to_polar();
        assert_eq!(p.theta(), &[0.0, PI]);
        // negative zero does not leak into θ_1 = π
        let p = cart(&[0.0, -0.0, 1.0]).to_polar();
        assert_eq!(p.theta(), &[0.0, 0.0]);
    }

    #[test]
    fn angle_domain_is_validated() {
        assert!(PolarPoint::new(1.0, vec![2.0 * PI]).is_err());
        assert!(PolarPoint::new(1.0, vec![0.0, -0.1]).is_err());
        assert!(PolarPoint::new(1.0, vec![0.0, PI]).is_ok());
        assert!(PolarPoint::new(-1.0, vec![0.0]).is_err());
        assert!(CartesianPoint::new(vec![1.0]).is_err());
        assert!(CartesianPoint::new(vec![1.0, f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn cartesian_round_trip(v in prop::collection::vec(-10.0f64..10.0, 2..8)) {
            let x = cart(&v);
            prop_assume!(x.norm() > 1e-6);
            let back = x.to_polar().to_cartesian();
            let scale = x.norm();
            for (a, b) in x.x().iter().zip(back.x()) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn polar_round_trip(
            r in 0.01f64..5.0,
            t1 in 0.0f64..(2.0 * PI),
            rest in prop::collection::vec(0.001f64..(PI - 0.001), 0..6),
        ) {
            let mut theta = vec![t1];
            theta.extend(rest);
            let p = PolarPoint::new(r, theta).unwrap();
            let back = p.to_cartesian().to_polar();
            prop_assert!((back.r() - r).abs() <= 1e-12 * r);
            for (a, b) in p.theta().iter().zip(back.theta()) {
                let diff = (a - b).abs();
                prop_assert!(diff <= 1e-12 || (2.0 * PI - diff) <= 1e-12, "{a} vs {b}");
            }
        }
    }
}
