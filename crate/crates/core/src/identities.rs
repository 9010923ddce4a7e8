//! Numerical checks of the classical identities behind the band-limited
//! field model.
//!
//! Each checker evaluates both sides of an identity independently and hands
//! back an [`IdentityReport`]. Nothing here asserts; deciding what error is
//! acceptable is left to the caller (tests, the `verify` command).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_j, gamma, gegenbauer, hyper_h1, hyper_h2, hyper_j, RadialOrder};
use crate::sphere::{
    eval_harmonic, gauss_jacobi, surface_measure, CartesianPoint, HarmonicBasis, HarmonicIndex,
    PolarPoint, QuadratureRule,
};

/// Floor used in the relative error denominator.
pub const REL_EPS: f64 = 1e-300;

/// Inputs that produced a report, kept for tabulation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub d: Option<usize>,
    pub k: Option<f64>,
    pub n: Option<usize>,
    pub truncation: Option<usize>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub params: IdentityParams,
}

impl IdentityReport {
    pub fn new(lhs: Complex64, rhs: Complex64, params: IdentityParams) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(REL_EPS);
        Self {
            lhs,
            rhs,
            abs_err,
            rel_err,
            params,
        }
    }
}

/// Default truncation order `N*(k, R) = ⌈e·k·R/2⌉ + 10`, where `R` is the
/// largest radius involved. `J_{d,n}(kR)` decays super-exponentially once
/// `n` passes `kR`.
pub fn truncation_order(k: f64, radius: f64) -> usize {
    (E * k.abs() * radius.abs() / 2.0).ceil() as usize + 10
}

/// Step for first derivatives by central differences.
pub fn derivative_step(k: f64) -> f64 {
    1e-5 * f64::max(1.0, 1.0 / k)
}

fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Funk–Hecke check for `d ≥ 3`.
///
/// The left side integrates `φ(θ·ϑ) Y(θ)` over the sphere with `rule`; the
/// right side is
/// `n! Γ(d−2)/Γ(n+d−2) · ω_{d−2} · Y(ϑ) · ∫ φ(t) C_n^{(d−2)/2}(t) (1−t²)^{(d−3)/2} dt`
/// with a `gl_nodes`-point Gauss–Jacobi rule. Complex `φ` is handled by
/// integrating its real and imaginary parts with the same rules.
pub fn funk_hecke<F>(
    phi: F,
    idx: &HarmonicIndex,
    dir: &[f64],
    rule: &QuadratureRule,
    gl_nodes: usize,
) -> Result<IdentityReport>
where
    F: Fn(f64) -> Complex64,
{
    let d = idx.dim();
    if d == 2 {
        return Err(Error::Unsupported(
            "Funk–Hecke formula is unsupported for d=2 (Γ(d−2) has a pole)".into(),
        ));
    }
    if rule.dim() != d {
        return Err(Error::Invalid(format!(
            "quadrature rule is for d = {}, harmonic for d = {d}",
            rule.dim()
        )));
    }
    let target = PolarPoint::unit(dir.to_vec())?.to_cartesian();
    let mut lhs = Complex64::new(0.0, 0.0);
    for ((p, u), w) in rule
        .nodes()
        .iter()
        .zip(rule.directions())
        .zip(rule.weights())
    {
        let t: f64 = u.iter().zip(target.x()).map(|(a, b)| a * b).sum();
        lhs += phi(t.clamp(-1.0, 1.0)) * (w * eval_harmonic(idx, p.theta())?);
    }

    let n = idx.n();
    let lambda = 0.5 * (d as f64 - 2.0);
    let expo = 0.5 * (d as f64 - 3.0);
    let (nodes, weights) = gauss_jacobi(gl_nodes, expo, expo)?;
    let mut radial = Complex64::new(0.0, 0.0);
    for (&t, &w) in nodes.iter().zip(&weights) {
        radial += phi(t) * (w * gegenbauer(n, lambda, t)?);
    }
    let constant = factorial(n)? * gamma(d as f64 - 2.0)? / gamma((n + d) as f64 - 2.0)?
        * surface_measure(d - 1)?;
    let rhs = radial * (constant * eval_harmonic(idx, dir)?);

    Ok(IdentityReport::new(
        lhs,
        rhs,
        IdentityParams {
            d: Some(d),
            n: Some(n),
            points: vec![dir.to_vec()],
            ..Default::default()
        },
    ))
}

fn factorial(n: usize) -> Result<f64> {
    gamma(n as f64 + 1.0)
}

/// Weight used inside Gegenbauer's integral for `J_{ν+n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GegenbauerWeight {
    /// `(1−t²)^{ν−1/2}`, the weight that makes the identity hold.
    Symmetric,
    /// `(1−t)^{ν−1/2}`; kept only to demonstrate that it does not.
    OneSided,
}

/// Gegenbauer's integral representation
/// `J_{ν+n}(x) = (−i)^n Γ(2ν) n! (x/2)^ν / (Γ(ν+½) Γ(½) Γ(2ν+n)) · ∫ e^{ixt} C_n^ν(t) (1−t²)^{ν−½} dt`.
pub fn gegenbauer_bessel(nu: f64, n: usize, x: f64, gl_nodes: usize) -> Result<IdentityReport> {
    gegenbauer_bessel_weighted(nu, n, x, gl_nodes, GegenbauerWeight::Symmetric)
}

pub fn gegenbauer_bessel_weighted(
    nu: f64,
    n: usize,
    x: f64,
    gl_nodes: usize,
    weight: GegenbauerWeight,
) -> Result<IdentityReport> {
    if !(nu > 0.0) || !nu.is_finite() {
        return domain(format!("Gegenbauer's formula needs ν > 0, got {nu}"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("Gegenbauer's formula needs x > 0, got {x}"));
    }
    let lhs = Complex64::new(bessel_j(nu + n as f64, x)?, 0.0);

    let a = nu - 0.5;
    let (nodes, weights) = match weight {
        GegenbauerWeight::Symmetric => gauss_jacobi(gl_nodes, a, a)?,
        GegenbauerWeight::OneSided => gauss_jacobi(gl_nodes, a, 0.0)?,
    };
    // C_n^ν is orthogonal to every polynomial of degree < n under the
    // symmetric weight, so the first n Taylor terms of e^{ixt} integrate to
    // zero. For small x dropping them avoids summing O(1) terms into an O(xⁿ)
    // result.
    let drop_head = weight == GegenbauerWeight::Symmetric && n > 0 && x <= TAYLOR_TAIL_MAX_X;
    let mut integral = Complex64::new(0.0, 0.0);
    for (&t, &w) in nodes.iter().zip(&weights) {
        let e = if drop_head {
            exp_i_tail(n, x * t)
        } else {
            Complex64::from_polar(1.0, x * t)
        };
        integral += e * (w * gegenbauer(n, nu, t)?);
    }
    let scale = gamma(2.0 * nu)? * factorial(n)? * (0.5 * x).powf(nu)
        / (gamma(nu + 0.5)? * PI.sqrt() * gamma(2.0 * nu + n as f64)?);
    let rhs = i_pow(n).conj() * integral * scale;

    Ok(IdentityReport::new(
        lhs,
        rhs,
        IdentityParams {
            n: Some(n),
            points: vec![vec![nu, x]],
            ..Default::default()
        },
    ))
}

const TAYLOR_TAIL_MAX_X: f64 = 2.0;

/// `e^{iu} − Σ_{j<n} (iu)^j/j!` summed from its own series; `|u| ≤ 2`.
fn exp_i_tail(n: usize, u: f64) -> Complex64 {
    let iu = Complex64::new(0.0, u);
    let mut term = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        term = term * iu / j as f64;
    }
    let mut sum = term;
    let mut j = n;
    while term.norm() > 1e-17 * sum.norm() {
        j += 1;
        term = term * iu / j as f64;
        sum += term;
    }
    sum
}

/// Truncated plane-wave expansion
/// `Σ_{n≤N} i^n J_{d,n}(k|r|) Σ_m Y_n^m(ϑ) Y_n^m(θ_r)` with `k = |kvec|` and
/// `ϑ = kvec/k`.
pub fn plane_wave_truncated(
    kvec: &CartesianPoint,
    r: &CartesianPoint,
    big_n: usize,
) -> Result<Complex64> {
    let basis = HarmonicBasis::new(kvec.dim(), big_n)?;
    plane_wave_truncated_with(&basis, kvec, r, big_n)
}

/// As [`plane_wave_truncated`], reusing a prebuilt basis of order `≥ N`.
pub fn plane_wave_truncated_with(
    basis: &HarmonicBasis,
    kvec: &CartesianPoint,
    r: &CartesianPoint,
    big_n: usize,
) -> Result<Complex64> {
    let d = kvec.dim();
    check_basis(basis, d, big_n)?;
    if r.dim() != d {
        return Err(Error::Invalid(format!(
            "wave vector in d = {d} but point in d = {}",
            r.dim()
        )));
    }
    let k = kvec.norm();
    if k == 0.0 {
        return domain("plane wave needs a nonzero wave vector");
    }
    let y_dir = basis.eval_all(kvec.to_polar().theta())?;
    let rp = r.to_polar();
    let y_pt = basis.eval_all(rp.theta())?;
    let z = k * rp.r();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..=big_n {
        let angular: f64 = basis.degree_range(n).map(|i| y_dir[i] * y_pt[i]).sum();
        acc += i_pow(n) * (hyper_j(RadialOrder::new(d, n)?, z)? * angular);
    }
    Ok(acc)
}

fn check_basis(basis: &HarmonicBasis, d: usize, big_n: usize) -> Result<()> {
    if basis.dim() != d || basis.max_order() < big_n {
        return Err(Error::Invalid(format!(
            "basis (d = {}, N = {}) cannot serve d = {d}, N = {big_n}",
            basis.dim(),
            basis.max_order()
        )));
    }
    Ok(())
}

/// Addition theorem
/// `J_{d,0}(k|r−r′|) = Σ_{n,m} J_{d,n}(k|r|) Y_n^m(θ_r) J_{d,n}(k|r′|) Y_n^m(θ_{r′})`
/// truncated at `n ≤ N`.
pub fn addition_theorem(
    d: usize,
    k: f64,
    r: &CartesianPoint,
    rp: &CartesianPoint,
    big_n: usize,
) -> Result<IdentityReport> {
    let basis = HarmonicBasis::new(d, big_n)?;
    addition_theorem_with(&basis, k, r, rp, big_n)
}

pub fn addition_theorem_with(
    basis: &HarmonicBasis,
    k: f64,
    r: &CartesianPoint,
    rp: &CartesianPoint,
    big_n: usize,
) -> Result<IdentityReport> {
    let d = basis.dim();
    check_basis(basis, d, big_n)?;
    if r.dim() != d || rp.dim() != d {
        return Err(Error::Invalid(format!("points must lie in d = {d}")));
    }
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    let lhs = hyper_j(RadialOrder::new(d, 0)?, k * r.distance(rp))?;

    let (a, b) = (r.to_polar(), rp.to_polar());
    let (ya, yb) = (basis.eval_all(a.theta())?, basis.eval_all(b.theta())?);
    let mut rhs = 0.0;
    for n in 0..=big_n {
        let ord = RadialOrder::new(d, n)?;
        let radial = hyper_j(ord, k * a.r())? * hyper_j(ord, k * b.r())?;
        let angular: f64 = basis.degree_range(n).map(|i| ya[i] * yb[i]).sum();
        rhs += radial * angular;
    }

    Ok(IdentityReport::new(
        Complex64::new(lhs, 0.0),
        Complex64::new(rhs, 0.0),
        IdentityParams {
            d: Some(d),
            k: Some(k),
            truncation: Some(big_n),
            points: vec![r.x().to_vec(), rp.x().to_vec()],
            ..Default::default()
        },
    ))
}

/// `Δ_h f(x) + k² f(x)` with the standard `(2d+1)`-point central-difference
/// Laplacian of spacing `h`.
pub fn helmholtz_residual<F>(field: F, k: f64, x: &CartesianPoint, h: f64) -> Result<Complex64>
where
    F: Fn(&CartesianPoint) -> Result<Complex64>,
{
    if !(h > 0.0) || !h.is_finite() {
        return domain(format!("finite-difference step must be positive, got {h}"));
    }
    let center = field(x)?;
    let mut lap = Complex64::new(0.0, 0.0);
    let mut probe = x.x().to_vec();
    for i in 0..probe.len() {
        let xi = probe[i];
        probe[i] = xi + h;
        let plus = field(&CartesianPoint::new(probe.clone())?)?;
        probe[i] = xi - h;
        let minus = field(&CartesianPoint::new(probe.clone())?)?;
        probe[i] = xi;
        lap += plus + minus - center * 2.0;
    }
    Ok(lap / (h * h) + center * (k * k))
}

/// Which Hankel function [`radiation_remainder_of`] probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HankelKind {
    Outgoing,
    Incoming,
}

/// `r^{(d−1)/2} (∂_r − ik) H^{(1)}_{d,n}(kr)`, which tends to zero as
/// `r → ∞` for the outgoing solution.
pub fn radiation_remainder(d: usize, n: usize, k: f64, r: f64) -> Result<Complex64> {
    radiation_remainder_of(HankelKind::Outgoing, d, n, k, r)
}

/// The same expression for `H^{(2)}_{d,n}`; it stays of order one.
pub fn radiation_remainder_incoming(d: usize, n: usize, k: f64, r: f64) -> Result<Complex64> {
    radiation_remainder_of(HankelKind::Incoming, d, n, k, r)
}

pub fn radiation_remainder_of(
    kind: HankelKind,
    d: usize,
    n: usize,
    k: f64,
    r: f64,
) -> Result<Complex64> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("radiation remainder needs r > 0, got {r}"));
    }
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    let ord = RadialOrder::new(d, n)?;
    let h_of = |radius: f64| match kind {
        HankelKind::Outgoing => hyper_h1(ord, k * radius),
        HankelKind::Incoming => hyper_h2(ord, k * radius),
    };
    let step = derivative_step(k).min(0.5 * r);
    let dh = (h_of(r + step)? - h_of(r - step)?) / (2.0 * step);
    let ik = Complex64::new(0.0, k);
    Ok((dh - ik * h_of(r)?) * r.powf(0.5 * (d as f64 - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{quadrature, HarmonicIndex};

    fn cart(x: &[f64]) -> CartesianPoint {
        CartesianPoint::new(x.to_vec()).unwrap()
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(truncation_order(1.0, 0.0), 10);
        assert_eq!(truncation_order(2.0, 1.0), 13);
        assert_eq!(truncation_order(1.0, 5.0), 17);
    }

    #[test]
    fn funk_hecke_constant_function() {
        for d in 3..=5 {
            let rule = quadrature(d, 4).unwrap();
            let dir = vec![0.3; d - 1];
            let idx = HarmonicIndex::from_flat(d, 0, 1).unwrap();
            let rep = funk_hecke(|_| Complex64::new(1.0, 0.0), &idx, &dir, &rule, 4).unwrap();
            let expect = surface_measure(d).unwrap().sqrt();
            assert!((rep.lhs.re - expect).abs() < 1e-12 * expect, "d={d}");
            assert!((rep.rhs.re - expect).abs() < 1e-12 * expect, "d={d}");
            for n in 1..=3 {
                let idx = HarmonicIndex::from_flat(d, n, 1).unwrap();
                let rep = funk_hecke(|_| Complex64::new(1.0, 0.0), &idx, &dir, &rule, 4).unwrap();
                assert!(rep.lhs.norm() < 1e-9 && rep.rhs.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn funk_hecke_exponential_matches_plane_wave_coefficient() {
        // ∫ e^{ia θ·ϑ} Y(θ) dθ = i^n J_{3,n}(a) Y(ϑ)
        let (a, d, n) = (2.5, 3, 2);
        let rule = quadrature(d, 30).unwrap();
        let dir = vec![1.1, 0.7];
        for m in 1..=5 {
            let idx = HarmonicIndex::from_flat(d, n, m).unwrap();
            let rep =
                funk_hecke(|t| Complex64::from_polar(1.0, a * t), &idx, &dir, &rule, 40).unwrap();
            let coeff = -hyper_j(RadialOrder::new(d, n).unwrap(), a).unwrap()
                * eval_harmonic(&idx, &dir).unwrap();
            assert!(rep.rel_err < 1e-8, "m={m} {rep:?}");
            assert!((rep.rhs.re - coeff).abs() < 1e-9 * coeff.abs().max(1e-3));
        }
    }

    #[test]
    fn funk_hecke_rejects_the_plane() {
        let rule = quadrature(2, 3).unwrap();
        let idx = HarmonicIndex::from_flat(2, 1, 1).unwrap();
        let err = funk_hecke(|_| Complex64::new(1.0, 0.0), &idx, &[0.2], &rule, 4).unwrap_err();
        assert!(matches!(err, Error::Unsupported(ref s) if s.contains("d=2")));
    }

    #[test]
    fn gegenbauer_examples() {
        let half = gegenbauer_bessel(0.5, 0, 1.0, 30).unwrap();
        let closed = (2.0 / PI).sqrt() * 1f64.sin();
        assert!((half.lhs.re - closed).abs() < 1e-14);
        assert!(half.rel_err < 1e-9);
        assert!(gegenbauer_bessel(1.0, 0, 0.5, 30).unwrap().rel_err < 1e-9);
        assert!(gegenbauer_bessel(1.5, 3, 2.0, 30).unwrap().rel_err < 1e-8);
    }

    #[test]
    fn one_sided_weight_does_not_reproduce_bessel() {
        for &(nu, n, x) in &[(1.0, 0, 0.5), (1.5, 3, 2.0), (2.5, 1, 4.0)] {
            let good =
                gegenbauer_bessel_weighted(nu, n, x, 40, GegenbauerWeight::Symmetric).unwrap();
            let bad = gegenbauer_bessel_weighted(nu, n, x, 40, GegenbauerWeight::OneSided).unwrap();
            assert!(good.rel_err < 1e-10);
            assert!(
                bad.rel_err > 1e-2,
                "one-sided weight unexpectedly close: {bad:?}"
            );
        }
    }

    #[test]
    fn plane_wave_small_cases() {
        let kvec = cart(&[0.3, -1.2, 0.4]);
        let origin = CartesianPoint::origin(3).unwrap();
        let v = plane_wave_truncated(&kvec, &origin, 0).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);

        let kvec = cart(&[0.0, 0.6, 0.8]);
        let r = cart(&[0.48, 0.64, -0.6]);
        let exact = Complex64::from_polar(1.0, kvec.dot(&r));
        let v = plane_wave_truncated(&kvec, &r, 15).unwrap();
        assert!((v - exact).norm() < 1e-12, "{v} vs {exact}");
        assert!(plane_wave_truncated(&CartesianPoint::origin(3).unwrap(), &r, 3).is_err());
    }

    #[test]
    fn plane_wave_error_large_when_badly_truncated() {
        let kvec = cart(&[4.0, 0.0, 3.0]);
        let r = cart(&[1.0, 0.5, 1.0]);
        let exact = Complex64::from_polar(1.0, kvec.dot(&r));
        let kr = kvec.norm() * r.norm();
        let low = plane_wave_truncated(&kvec, &r, (kr / 2.0).floor() as usize - 1).unwrap();
        assert!((low - exact).norm() > 0.1);
    }

    #[test]
    fn addition_theorem_examples() {
        let o = CartesianPoint::origin(4).unwrap();
        let rep = addition_theorem(4, 1.0, &o, &o, 0).unwrap();
        assert!(rep.abs_err < 1e-10);
        assert!((rep.lhs.re - 2.0 * PI * PI).abs() < 1e-12);

        let r = cart(&[0.6, 0.0, 0.8]);
        let rp = cart(&[0.0, -1.0, 0.0]);
        let rep = addition_theorem(3, 1.0, &r, &rp, 20).unwrap();
        let dist = r.distance(&rp);
        let oracle = 4.0 * PI * dist.sin() / dist;
        assert!((rep.lhs.re - oracle).abs() < 1e-13 * oracle);
        assert!(rep.rel_err < 1e-9);
    }

    #[test]
    fn helmholtz_residual_of_plane_wave_is_second_order() {
        let kvec = [0.7, -0.4, 1.1];
        let k = kvec.iter().map(|v| v * v).sum::<f64>().sqrt();
        let field = |p: &CartesianPoint| Ok(Complex64::from_polar(1.0, p.dot(&cart(&kvec))));
        let x = cart(&[0.2, 0.5, -0.3]);
        let r1 = helmholtz_residual(field, k, &x, 0.02).unwrap().norm();
        let r2 = helmholtz_residual(field, k, &x, 0.01).unwrap().norm();
        let ratio = r1 / r2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn radiation_branches() {
        let out: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&r| radiation_remainder(3, 0, 1.0, r).unwrap().norm())
            .collect();
        assert!(out[0] > out[1] && out[1] > out[2]);
        // h_0^{(1)} closed form gives |remainder| = 4π/r exactly
        assert!((out[0] - 4.0 * PI / 10.0).abs() < 1e-6);
        let inc_lo = radiation_remainder_incoming(3, 0, 1.0, 10.0)
            .unwrap()
            .norm();
        let inc_hi = radiation_remainder_incoming(3, 0, 1.0, 1000.0)
            .unwrap()
            .norm();
        assert!(inc_hi > inc_lo / 1.5);

        let a = radiation_remainder(2, 1, 1.0, 10.0).unwrap().norm();
        let b = radiation_remainder(2, 1, 1.0, 1000.0).unwrap().norm();
        assert!(b < 0.1 * a);
        assert!(radiation_remainder(3, 0, 1.0, 0.0).is_err());
    }
}
