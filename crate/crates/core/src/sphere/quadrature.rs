use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

use super::coords::PolarPoint;
use crate::error::{Error, Result};
use crate::specfun::{gamma, ln_gamma};

/// `ω_{ℓ-1} = 2π^{ℓ/2}/Γ(ℓ/2)`, the measure of the unit sphere `S^{ℓ-1} ⊂ ℝ^ℓ`.
pub fn surface_measure(ell: usize) -> Result<f64> {
    if ell == 0 {
        return Err(Error::Invalid("surface_measure needs ℓ ≥ 1".into()));
    }
    let half = 0.5 * ell as f64;
    Ok(2.0 * PI.powf(half) / gamma(half)?)
}

/// Gauss–Jacobi rule with `n` nodes for `∫_{-1}^{1} (1−t)^α (1+t)^β f(t) dt`,
/// exact for polynomials of degree `2n − 1`. Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Invalid(
            "Gauss–Jacobi rule needs at least one node".into(),
        ));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Invalid(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let ab = alpha + beta;
    let mu0 =
        ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)? + ln_gamma(beta + 1.0)?
            - ln_gamma(ab + 2.0)?)
        .exp();

    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        jac[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
    }
    for k in 1..n {
        let kf = k as f64;
        let b2 = if k == 1 {
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * kf + ab;
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        let b = b2.sqrt();
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i].clamp(-1.0, 1.0), mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs.into_iter().unzip())
}

/// Tensor-product rule on the unit sphere `S^{d-1}`.
///
/// `θ_1` uses `2·order + 2` equispaced nodes; each `θ_j`, `j ≥ 2`, uses an
/// `(order + 1)`-point Gauss–Jacobi rule in `cos θ_j` with `α = β = (j−2)/2`,
/// which matches the measure `sin^{j-1}θ_j dθ_j`. Products of two harmonics of
/// degree `≤ order` are integrated exactly.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    d: usize,
    order: usize,
    nodes: Vec<PolarPoint>,
    directions: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Largest total polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.order
    }

    pub fn nodes(&self) -> &[PolarPoint] {
        &self.nodes
    }

    /// Unit vectors of the nodes in Cartesian coordinates.
    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Builds the product rule for `S^{d-1}`; see [`QuadratureRule`].
pub fn quadrature(d: usize, order: usize) -> Result<QuadratureRule> {
    if d < 2 {
        return Err(Error::Invalid(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    let m = 2 * order + 2;
    let azimuth: Vec<(f64, f64)> = (0..m)
        .map(|i| (2.0 * PI * i as f64 / m as f64, 2.0 * PI / m as f64))
        .collect();
    let mut factors: Vec<Vec<(f64, f64)>> = vec![azimuth];
    for j in 2..d {
        let a = 0.5 * (j as f64 - 2.0);
        let (t, w) = gauss_jacobi(order + 1, a, a)?;
        factors.push(t.into_iter().map(f64::acos).zip(w).collect());
    }

    let total: usize = factors.iter().map(Vec::len).product();
    let mut nodes = Vec::with_capacity(total);
    let mut directions = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut counter = vec![0usize; factors.len()];
    for _ in 0..total {
        let theta: Vec<f64> = counter.iter().zip(&factors).map(|(&i, f)| f[i].0).collect();
        let w: f64 = counter.iter().zip(&factors).map(|(&i, f)| f[i].1).product();
        let p = PolarPoint::unit(theta)?;
        directions.push(p.to_cartesian().x().to_vec());
        nodes.push(p);
        weights.push(w);
        for (c, f) in counter.iter_mut().zip(&factors) {
            *c += 1;
            if *c < f.len() {
                break;
            }
            *c = 0;
        }
    }
    Ok(QuadratureRule {
        d,
        order,
        nodes,
        directions,
        weights,
    })
}

/// `Σ_j w_j f(θ_j)` over the nodes of `rule`.
pub fn integrate_sphere<F>(rule: &QuadratureRule, mut f: F) -> Result<Complex64>
where
    F: FnMut(&PolarPoint) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += f(p)? * *w;
    }
    Ok(acc)
}
