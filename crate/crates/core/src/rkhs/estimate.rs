use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::error::{domain, Error, Result};
use crate::specfun::{hyper_j, hyper_j_at_origin, RadialOrder};
use crate::sphere::CartesianPoint;

/// Default regularization is this multiple of the kernel's diagonal `ω_{d−1}`.
pub const DEFAULT_LAMBDA_SCALE: f64 = 1e-8;

/// Eigenvalues below this fraction of the largest are dropped by the
/// pseudo-inverse fallback.
pub const PINV_THRESHOLD: f64 = 1e-12;

/// At `λ = 0` a Gram system whose spectral condition number exceeds this is
/// rejected as numerically singular.
pub const MAX_UNREGULARIZED_CONDITION: f64 = 1e14;

const REFINEMENT_STEPS: usize = 2;

/// Pressure samples `p̂_ℓ` at distinct points `r_ℓ` for wavenumber `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSamples {
    k: f64,
    points: Vec<CartesianPoint>,
    pressures: Vec<Complex64>,
}

impl FieldSamples {
    pub fn new(k: f64, points: Vec<CartesianPoint>, pressures: Vec<Complex64>) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return domain(format!("wavenumber must be positive and finite, got {k}"));
        }
        if points.is_empty() {
            return Err(Error::Invalid("at least one sample is required".into()));
        }
        if points.len() != pressures.len() {
            return Err(Error::Invalid(format!(
                "{} points but {} pressures",
                points.len(),
                pressures.len()
            )));
        }
        let d = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != d) {
            return Err(Error::Invalid(format!(
                "mixed dimensions {d} and {}",
                p.dim()
            )));
        }
        if pressures
            .iter()
            .any(|p| !p.re.is_finite() || !p.im.is_finite())
        {
            return Err(Error::Invalid("pressures must be finite".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            // + 0.0 folds −0.0 into 0.0 so the bit patterns compare as numbers do
            let key: Vec<u64> = p.x().iter().map(|v| (v + 0.0).to_bits()).collect();
            if !seen.insert(key) {
                return Err(Error::Invalid(format!(
                    "sample point {i} duplicates an earlier point {:?}",
                    p.x()
                )));
            }
        }
        Ok(Self {
            k,
            points,
            pressures,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn points(&self) -> &[CartesianPoint] {
        &self.points
    }

    pub fn pressures(&self) -> &[Complex64] {
        &self.pressures
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The field `Σ_ℓ a_ℓ κ_k(·, r_ℓ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    pub k: f64,
    pub d: usize,
    pub centers: Vec<CartesianPoint>,
    pub weights: Vec<Complex64>,
    pub lambda: f64,
}

impl KernelEstimate {
    pub fn new(
        k: f64,
        d: usize,
        centers: Vec<CartesianPoint>,
        weights: Vec<Complex64>,
        lambda: f64,
    ) -> Result<Self> {
        if centers.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "{} centers but {} weights",
                centers.len(),
                weights.len()
            )));
        }
        if centers.iter().any(|c| c.dim() != d) {
            return Err(Error::Invalid(format!("every center must lie in d = {d}")));
        }
        if !(k > 0.0) || !(lambda >= 0.0) {
            return domain(format!("need k > 0 and λ ≥ 0, got k = {k}, λ = {lambda}"));
        }
        Ok(Self {
            k,
            d,
            centers,
            weights,
            lambda,
        })
    }
}

/// `κ_k(r, r′) = J_{d,0}(k|r − r′|)`.
pub fn kernel(d: usize, k: f64, r: &CartesianPoint, rp: &CartesianPoint) -> Result<f64> {
    if r.dim() != d || rp.dim() != d {
        return Err(Error::Invalid(format!("kernel points must lie in d = {d}")));
    }
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    hyper_j(RadialOrder::new(d, 0)?, k * r.distance(rp))
}

/// Gram matrix `G_{ℓℓ′} = κ_k(r_ℓ, r_ℓ′)`, built symmetric by construction.
pub fn gram(d: usize, k: f64, points: &[CartesianPoint]) -> Result<DMatrix<f64>> {
    let n = points.len();
    let diag = hyper_j_at_origin(d)?;
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = diag;
        for j in 0..i {
            let v = kernel(d, k, &points[i], &points[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    Cholesky,
    PseudoInverse,
}

/// A fitted estimate plus solver diagnostics.
#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub estimate: KernelEstimate,
    /// Spectral condition number of `G + λI` (infinite if not positive definite).
    pub condition: f64,
    pub method: SolveMethod,
}

/// `DEFAULT_LAMBDA_SCALE · ω_{d−1}`.
pub fn default_lambda(d: usize) -> Result<f64> {
    Ok(DEFAULT_LAMBDA_SCALE * hyper_j_at_origin(d)?)
}

/// Weights `a = (G + λI)^{-1} p̂`; see [`fit_detailed`].
pub fn fit(samples: &FieldSamples, d: usize, lambda: f64) -> Result<KernelEstimate> {
    fit_detailed(samples, d, lambda).map(|o| o.estimate)
}

/// Solves `(G + λI) a = p̂` for the real and imaginary parts separately.
///
/// A Cholesky factorization with two steps of iterative refinement is tried
/// first. If it breaks down (or, at `λ = 0`, the condition number exceeds
/// [`MAX_UNREGULARIZED_CONDITION`]) and `λ > 0`, the system is solved with an
/// eigenvalue-thresholded pseudo-inverse instead; at `λ = 0` the breakdown is
/// reported as [`Error::Singular`].
pub fn fit_detailed(samples: &FieldSamples, d: usize, lambda: f64) -> Result<FitOutcome> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!(
            "regularization must be finite and ≥ 0, got {lambda}"
        ));
    }
    if samples.dim() != d {
        return Err(Error::Invalid(format!(
            "samples lie in d = {} but d = {d} was requested",
            samples.dim()
        )));
    }
    let k = samples.k();
    let mut a = gram(d, k, samples.points())?;
    for i in 0..a.nrows() {
        a[(i, i)] += lambda;
    }
    let re = DVector::from_iterator(samples.len(), samples.pressures().iter().map(|p| p.re));
    let im = DVector::from_iterator(samples.len(), samples.pressures().iter().map(|p| p.im));

    let eig = SymmetricEigen::new(a.clone());
    let max_ev = eig.eigenvalues.max();
    let min_ev = eig.eigenvalues.min();
    let condition = if min_ev > 0.0 {
        max_ev / min_ev
    } else {
        f64::INFINITY
    };

    let factor = if lambda == 0.0 && condition > MAX_UNREGULARIZED_CONDITION {
        None
    } else {
        Cholesky::new(a.clone())
    };
    let (x_re, x_im, method) = match factor {
        Some(chol) => (
            refine(&a, &chol, &re),
            refine(&a, &chol, &im),
            SolveMethod::Cholesky,
        ),
        None if lambda == 0.0 => {
            return Err(Error::Singular(format!(
                "Gram matrix of {} samples is numerically singular at λ = 0 \
                 (condition estimate {condition:e}); use a regularization λ > 0",
                samples.len()
            )))
        }
        None => {
            let cut = PINV_THRESHOLD * max_ev;
            let inv: DVector<f64> = eig.eigenvalues.map(|e| if e > cut { 1.0 / e } else { 0.0 });
            let q = &eig.eigenvectors;
            let solve = |b: &DVector<f64>| q * (q.transpose() * b).component_mul(&inv);
            (solve(&re), solve(&im), SolveMethod::PseudoInverse)
        }
    };
    let weights = x_re
        .iter()
        .zip(x_im.iter())
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    Ok(FitOutcome {
        estimate: KernelEstimate {
            k,
            d,
            centers: samples.points().to_vec(),
            weights,
            lambda,
        },
        condition,
        method,
    })
}

fn refine(a: &DMatrix<f64>, chol: &Cholesky<f64, nalgebra::Dyn>, b: &DVector<f64>) -> DVector<f64> {
    let mut x = chol.solve(b);
    for _ in 0..REFINEMENT_STEPS {
        let r = b - a * &x;
        x += chol.solve(&r);
    }
    x
}

/// `Σ_ℓ a_ℓ κ_k(r, r_ℓ)`.
pub fn evaluate(est: &KernelEstimate, r: &CartesianPoint) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, w) in est.centers.iter().zip(&est.weights) {
        acc += w * kernel(est.d, est.k, r, c)?;
    }
    Ok(acc)
}
