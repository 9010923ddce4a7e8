use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::estimate::{FieldSamples, KernelEstimate};
use crate::error::{domain, Error, Result};
use crate::specfun::{hyper_h1, hyper_j, RadialOrder};
use crate::sphere::{harmonic_dim, CartesianPoint, HarmonicBasis, PolarPoint};

/// Radial family of an expansion: `J_{d,n}` inside a source-free ball,
/// `H^{(1)}_{d,n}` outside all sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Interior,
    Exterior,
}

/// `p(r, θ) = Σ_{n ≤ N} Σ_m c_n^m R_{d,n}(k r) Y_n^m(θ)` with coefficients in
/// the flat `(n, m)` order of [`HarmonicBasis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExpansion")]
pub struct SHExpansion {
    k: f64,
    d: usize,
    max_order: usize,
    kind: BasisKind,
    coefficients: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawExpansion {
    k: f64,
    d: usize,
    max_order: usize,
    kind: BasisKind,
    coefficients: Vec<Complex64>,
}

impl TryFrom<RawExpansion> for SHExpansion {
    type Error = Error;

    fn try_from(r: RawExpansion) -> Result<Self> {
        SHExpansion::new(r.k, r.d, r.max_order, r.kind, r.coefficients)
    }
}

fn coefficient_count(d: usize, max_order: usize) -> Result<usize> {
    let mut total = 0u64;
    for n in 0..=max_order {
        total = total
            .checked_add(harmonic_dim(d, n)?)
            .ok_or_else(|| Error::Overflow("coefficient count".into()))?;
    }
    usize::try_from(total).map_err(|_| Error::Overflow("coefficient count".into()))
}

impl SHExpansion {
    pub fn new(
        k: f64,
        d: usize,
        max_order: usize,
        kind: BasisKind,
        coefficients: Vec<Complex64>,
    ) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return domain(format!("wavenumber must be positive, got {k}"));
        }
        let expected = coefficient_count(d, max_order)?;
        if coefficients.len() != expected {
            return Err(Error::Invalid(format!(
                "d = {d}, N = {max_order} needs {expected} coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(Self {
            k,
            d,
            max_order,
            kind,
            coefficients,
        })
    }

    /// Interior expansion of `e^{i kvec·r}`: `B_n^m = i^n Y_n^m(kvec/|kvec|)`.
    pub fn plane_wave(kvec: &CartesianPoint, max_order: usize) -> Result<Self> {
        let k = kvec.norm();
        if k == 0.0 {
            return domain("plane wave needs a nonzero wave vector");
        }
        let basis = HarmonicBasis::new(kvec.dim(), max_order)?;
        let y = basis.eval_all(kvec.to_polar().theta())?;
        let phase = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        let mut coefficients = vec![Complex64::new(0.0, 0.0); basis.len()];
        for n in 0..=max_order {
            for i in basis.degree_range(n) {
                coefficients[i] = phase[n % 4] * y[i];
            }
        }
        Self::new(k, kvec.dim(), max_order, BasisKind::Interior, coefficients)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Coefficient of `Y_n^m` (`m` is 1-based).
    pub fn coefficient(&self, n: usize, m: usize) -> Result<Complex64> {
        if n > self.max_order {
            return Err(Error::Invalid(format!(
                "order {n} exceeds the truncation {}",
                self.max_order
            )));
        }
        let dim = harmonic_dim(self.d, n)? as usize;
        if m == 0 || m > dim {
            return Err(Error::Invalid(format!(
                "m must lie in 1..={dim} for n = {n}, got {m}"
            )));
        }
        let offset = if n == 0 {
            0
        } else {
            coefficient_count(self.d, n - 1)?
        };
        Ok(self.coefficients[offset + m - 1])
    }
}

/// `B_n^m = Σ_ℓ a_ℓ J_{d,n}(k|r_ℓ|) Y_n^m(θ_ℓ)` for every `n ≤ N`.
///
/// Each coefficient is a fixed sum over the centres, so its value does not
/// change when a different `N` is requested.
pub fn to_sh_expansion(est: &KernelEstimate, max_order: usize) -> Result<SHExpansion> {
    let basis = HarmonicBasis::new(est.d, max_order)?;
    let mut coefficients = vec![Complex64::new(0.0, 0.0); basis.len()];
    for (center, a) in est.centers.iter().zip(&est.weights) {
        let p = center.to_polar();
        let y = basis.eval_all(p.theta())?;
        for n in 0..=max_order {
            let radial = hyper_j(RadialOrder::new(est.d, n)?, est.k * p.r())?;
            for i in basis.degree_range(n) {
                coefficients[i] += a * (radial * y[i]);
            }
        }
    }
    SHExpansion::new(est.k, est.d, max_order, BasisKind::Interior, coefficients)
}

/// Value of the expansion at `p`.
pub fn eval_sh(exp: &SHExpansion, p: &PolarPoint) -> Result<Complex64> {
    let basis = HarmonicBasis::new(exp.d, exp.max_order)?;
    eval_with(&basis, exp, p)
}

/// [`eval_sh`] at many points, sharing one basis table.
pub fn eval_sh_many(exp: &SHExpansion, points: &[PolarPoint]) -> Result<Vec<Complex64>> {
    let basis = HarmonicBasis::new(exp.d, exp.max_order)?;
    points.iter().map(|p| eval_with(&basis, exp, p)).collect()
}

fn eval_with(basis: &HarmonicBasis, exp: &SHExpansion, p: &PolarPoint) -> Result<Complex64> {
    if p.dim() != exp.d {
        return Err(Error::Invalid(format!(
            "point in d = {} for an expansion in d = {}",
            p.dim(),
            exp.d
        )));
    }
    if exp.kind == BasisKind::Exterior && p.r() == 0.0 {
        return domain("an exterior expansion is singular at r = 0");
    }
    let y = basis.eval_all(p.theta())?;
    let z = exp.k * p.r();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..=exp.max_order {
        let ord = RadialOrder::new(exp.d, n)?;
        let radial = match exp.kind {
            BasisKind::Interior => Complex64::new(hyper_j(ord, z)?, 0.0),
            BasisKind::Exterior => hyper_h1(ord, z)?,
        };
        let angular: Complex64 = basis
            .degree_range(n)
            .map(|i| exp.coefficients[i] * y[i])
            .sum();
        acc += radial * angular;
    }
    Ok(acc)
}

/// Direct least-squares estimate of interior coefficients up to order `N`:
/// minimizes `‖Φ B − p̂‖² + λ‖B‖²` with `Φ_{ℓ,(n,m)} = J_{d,n}(k|r_ℓ|) Y_n^m(θ_ℓ)`.
///
/// The coefficients obtained this way depend on `N`. At `λ = 0` a
/// rank-deficient design matrix is an error.
pub fn fit_sh_direct(
    samples: &FieldSamples,
    d: usize,
    max_order: usize,
    lambda: f64,
) -> Result<SHExpansion> {
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
    let basis = HarmonicBasis::new(d, max_order)?;
    let (rows, cols) = (samples.len(), basis.len());
    let mut phi = DMatrix::<f64>::zeros(rows, cols);
    for (l, point) in samples.points().iter().enumerate() {
        let p = point.to_polar();
        let y = basis.eval_all(p.theta())?;
        for n in 0..=max_order {
            let radial = hyper_j(RadialOrder::new(d, n)?, samples.k() * p.r())?;
            for i in basis.degree_range(n) {
                phi[(l, i)] = radial * y[i];
            }
        }
    }

    let svd = phi.svd(true, true);
    let s = &svd.singular_values;
    let s_max = s.max();
    let tol = rows.max(cols) as f64 * f64::EPSILON * s_max;
    let rank = s.iter().filter(|&&v| v > tol).count();
    if lambda == 0.0 && (rank < cols || s_max == 0.0) {
        return Err(Error::Singular(format!(
            "design matrix has rank {rank} < {cols} unknowns ({rows} samples, N = {max_order}); use λ > 0"
        )));
    }
    let filter = s.map(|v| {
        if v > 0.0 && (lambda > 0.0 || v > tol) {
            v / (v * v + lambda)
        } else {
            0.0
        }
    });
    let u = svd
        .u
        .as_ref()
        .ok_or_else(|| Error::Singular("SVD did not converge".into()))?;
    let vt = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Singular("SVD did not converge".into()))?;
    let solve = |b: DVector<f64>| vt.transpose() * (u.transpose() * b).component_mul(&filter);
    let re = solve(DVector::from_iterator(
        rows,
        samples.pressures().iter().map(|p| p.re),
    ));
    let im = solve(DVector::from_iterator(
        rows,
        samples.pressures().iter().map(|p| p.im),
    ));
    let coefficients = re
        .iter()
        .zip(im.iter())
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    SHExpansion::new(samples.k(), d, max_order, BasisKind::Interior, coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::helmholtz_residual;
    use crate::rkhs::{evaluate, fit};
    use crate::specfun::hyper_j_at_origin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cart(x: &[f64]) -> CartesianPoint {
        CartesianPoint::new(x.to_vec()).unwrap()
    }

    fn ball(rng: &mut ChaCha8Rng, count: usize, d: usize, radius: f64) -> Vec<CartesianPoint> {
        let mut out = Vec::new();
        while out.len() < count {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-radius..radius)).collect();
            if x.iter().map(|v| v * v).sum::<f64>() <= radius * radius {
                out.push(cart(&x));
            }
        }
        out
    }

    fn plane_wave_samples(kvec: &[f64], pts: Vec<CartesianPoint>) -> FieldSamples {
        let kv = cart(kvec);
        let p = pts
            .iter()
            .map(|x| Complex64::from_polar(1.0, x.dot(&kv)))
            .collect();
        FieldSamples::new(kv.norm(), pts, p).unwrap()
    }

    #[test]
    fn origin_center_has_only_a_monopole() {
        let a = Complex64::new(0.25, -1.0);
        let est = KernelEstimate::new(
            2.0,
            4,
            vec![CartesianPoint::origin(4).unwrap()],
            vec![a],
            0.0,
        )
        .unwrap();
        let exp = to_sh_expansion(&est, 4).unwrap();
        let omega = hyper_j_at_origin(4).unwrap();
        assert!((exp.coefficients()[0] - a * omega.sqrt()).norm() < 1e-14);
        assert!(exp.coefficients()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn monopole_value_at_origin() {
        let mut c = vec![Complex64::new(0.0, 0.0); 1 + 3];
        c[0] = Complex64::new(1.0, 0.0);
        let exp = SHExpansion::new(1.0, 3, 1, BasisKind::Interior, c).unwrap();
        let v = eval_sh(&exp, &PolarPoint::new(0.0, vec![0.0, 0.0]).unwrap()).unwrap();
        assert!((v.re - (4.0 * std::f64::consts::PI).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn exterior_rejects_origin() {
        let c = vec![Complex64::new(1.0, 0.0); 1];
        let exp = SHExpansion::new(1.0, 3, 0, BasisKind::Exterior, c).unwrap();
        assert!(matches!(
            eval_sh(&exp, &PolarPoint::new(0.0, vec![0.0, 0.0]).unwrap()),
            Err(Error::Domain(_))
        ));
        assert!(eval_sh(&exp, &PolarPoint::new(1.0, vec![0.0, 0.0]).unwrap()).is_ok());
    }

    #[test]
    fn exterior_mode_solves_helmholtz() {
        let mut c = vec![Complex64::new(0.0, 0.0); 1 + 3 + 5];
        c[6] = Complex64::new(1.0, 0.0);
        let exp = SHExpansion::new(1.5, 3, 2, BasisKind::Exterior, c).unwrap();
        let field = |x: &CartesianPoint| eval_sh(&exp, &x.to_polar());
        let x = cart(&[0.9, -0.4, 0.7]);
        let r1 = helmholtz_residual(field, 1.5, &x, 0.02).unwrap().norm();
        let r2 = helmholtz_residual(field, 1.5, &x, 0.01).unwrap().norm();
        assert!((3.5..4.5).contains(&(r1 / r2)), "ratio {}", r1 / r2);
    }

    #[test]
    fn plane_wave_expansion_matches_exponential() {
        let kvec = cart(&[0.5, -1.0, 0.8, 0.3]);
        let exp = SHExpansion::plane_wave(&kvec, 30).unwrap();
        let r = cart(&[1.2, 0.4, -1.9, 0.9]);
        assert!(kvec.norm() * r.norm() <= 30.0 / std::f64::consts::E);
        let v = eval_sh(&exp, &r.to_polar()).unwrap();
        assert!((v - Complex64::from_polar(1.0, kvec.dot(&r))).norm() < 1e-10);
    }

    #[test]
    fn rk_route_coefficients_do_not_depend_on_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = plane_wave_samples(&[1.0, 0.5, -0.5], ball(&mut rng, 30, 3, 1.5));
        let est = fit(&s, 3, 0.0).unwrap();
        let small = to_sh_expansion(&est, 5).unwrap();
        let large = to_sh_expansion(&est, 15).unwrap();
        assert_eq!(
            small.coefficients(),
            &large.coefficients()[..small.coefficients().len()]
        );
    }

    #[test]
    fn sh_conversion_reproduces_kernel_estimate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts = ball(&mut rng, 25, 3, 1.0);
        let s = plane_wave_samples(&[0.0, 1.2, 0.9], pts);
        let est = fit(&s, 3, 0.0).unwrap();
        let n_star = crate::identities::truncation_order(est.k, 1.0);
        let exp = to_sh_expansion(&est, n_star).unwrap();
        for x in ball(&mut rng, 10, 3, 0.8) {
            let a = evaluate(&est, &x).unwrap();
            let b = eval_sh(&exp, &x.to_polar()).unwrap();
            assert!((a - b).norm() <= 1e-8 * a.norm(), "{a} vs {b}");
        }
    }

    #[test]
    fn direct_fit_recovers_a_pure_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = ball(&mut rng, 20, 3, 1.0);
        let mut c = vec![Complex64::new(0.0, 0.0); 4];
        c[1] = Complex64::new(1.0, 0.0);
        let mode = SHExpansion::new(1.0, 3, 1, BasisKind::Interior, c).unwrap();
        let p = pts
            .iter()
            .map(|x| eval_sh(&mode, &x.to_polar()).unwrap())
            .collect();
        let s = FieldSamples::new(1.0, pts, p).unwrap();
        let got = fit_sh_direct(&s, 3, 1, 0.0).unwrap();
        assert!((got.coefficient(1, 1).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        for (i, v) in got.coefficients().iter().enumerate() {
            if i != 1 {
                assert!(v.norm() < 1e-8);
            }
        }
    }

    #[test]
    fn direct_fit_errors_when_underdetermined_without_regularization() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = plane_wave_samples(&[1.0, 0.0, 0.0], ball(&mut rng, 10, 3, 1.0));
        assert!(matches!(
            fit_sh_direct(&s, 3, 3, 0.0),
            Err(Error::Singular(_))
        ));
        assert!(fit_sh_direct(&s, 3, 3, 1e-6).is_ok());
    }

    #[test]
    fn direct_fit_of_zero_field_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = ball(&mut rng, 15, 2, 1.0);
        let s = FieldSamples::new(2.0, pts, vec![Complex64::new(0.0, 0.0); 15]).unwrap();
        let got = fit_sh_direct(&s, 2, 3, 0.0).unwrap();
        assert!(got.coefficients().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn coefficient_accessor_and_validation() {
        let exp = SHExpansion::plane_wave(&cart(&[0.0, 0.0, 2.0]), 3).unwrap();
        assert_eq!(
            exp.coefficient(2, 3).unwrap(),
            exp.coefficients()[1 + 3 + 2]
        );
        assert!(exp.coefficient(2, 6).is_err());
        assert!(SHExpansion::new(
            1.0,
            3,
            2,
            BasisKind::Interior,
            vec![Complex64::new(0.0, 0.0); 8]
        )
        .is_err());
    }
}
