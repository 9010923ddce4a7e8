//! Identity-verification suites. Each case becomes one CSV row; the exit code
//! is 1 as soon as one case misses its threshold.

use std::f64::consts::E;
use std::io::Write;

use hyperhelm::identities::{
    addition_theorem_with, funk_hecke, gegenbauer_bessel, helmholtz_residual,
    plane_wave_truncated_with, radiation_remainder, radiation_remainder_incoming, truncation_order,
};
use hyperhelm::specfun::{hyper_h1, hyper_j, RadialOrder};
use hyperhelm::sphere::{
    eval_harmonic, harmonic_dim, quadrature, CartesianPoint, HarmonicBasis, HarmonicIndex,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::output::{num, Table};
use crate::sampling::{in_ball, unit_vector};
use crate::{Suite, VerifyArgs};

const HEADER: [&str; 10] = [
    "suite", "case", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err", "metric", "pass",
];

/// One verified case.
struct Case {
    name: String,
    lhs: Complex64,
    rhs: Complex64,
    abs_err: f64,
    rel_err: f64,
    metric: &'static str,
    pass: bool,
}

impl Case {
    /// Passes when `rel_err ≤ tol`.
    fn relative(name: String, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(1e-300);
        Self {
            name,
            lhs,
            rhs,
            abs_err,
            rel_err,
            metric: "rel_err",
            pass: rel_err <= tol,
        }
    }

    /// Passes when `abs_err ≤ tol`.
    fn absolute(name: String, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let mut c = Self::relative(name, lhs, rhs, f64::INFINITY);
        c.metric = "abs_err";
        c.pass = c.abs_err <= tol;
        c
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Addition => "addition",
        Suite::FunkHecke => "funk-hecke",
        Suite::Gegenbauer => "gegenbauer",
        Suite::PlaneWave => "plane-wave",
        Suite::Orthonormality => "orthonormality",
        Suite::Radiation => "radiation",
        Suite::Helmholtz => "helmholtz",
    }
}

pub fn run<W: Write>(args: &VerifyArgs, sink: W) -> CliResult<()> {
    if args.d < 2 {
        return Err(CliError::Usage(format!(
            "dimension must be at least 2, got {}",
            args.d
        )));
    }
    if !(args.k > 0.0) || !args.k.is_finite() || !(args.radius > 0.0) || !args.radius.is_finite() {
        return Err(CliError::Usage("--k and --radius must be positive".into()));
    }
    if args.tol.is_some_and(|t| !(t >= 0.0)) {
        return Err(CliError::Usage("--tol must be non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let cases = match args.suite {
        Suite::Addition => addition(args, &mut rng)?,
        Suite::FunkHecke => funk_hecke_suite(args, &mut rng)?,
        Suite::Gegenbauer => gegenbauer_suite(args)?,
        Suite::PlaneWave => plane_wave(args, &mut rng)?,
        Suite::Orthonormality => orthonormality(args)?,
        Suite::Radiation => radiation(args)?,
        Suite::Helmholtz => helmholtz(args, &mut rng)?,
    };

    let name = suite_name(args.suite);
    let mut table = Table::new(sink, &HEADER)?;
    for c in &cases {
        table.row(&[
            name.to_string(),
            c.name.clone(),
            num(c.lhs.re),
            num(c.lhs.im),
            num(c.rhs.re),
            num(c.rhs.im),
            num(c.abs_err),
            num(c.rel_err),
            c.metric.to_string(),
            c.pass.to_string(),
        ])?;
    }
    table.finish()?;

    let failed = cases.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(CliError::Numeric(format!(
            "{name}: {failed} of {} cases outside tolerance",
            cases.len()
        )));
    }
    Ok(())
}

fn point(x: Vec<f64>) -> CliResult<CartesianPoint> {
    Ok(CartesianPoint::new(x)?)
}

fn addition(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> CliResult<Vec<Case>> {
    let tol = args.tol.unwrap_or(1e-8);
    let big_n = args
        .big_n
        .unwrap_or_else(|| truncation_order(args.k, args.radius));
    let basis = HarmonicBasis::new(args.d, big_n)?;
    (0..args.cases)
        .map(|i| {
            let r = point(in_ball(rng, args.d, args.radius))?;
            let rp = point(in_ball(rng, args.d, args.radius))?;
            let rep = addition_theorem_with(&basis, args.k, &r, &rp, big_n)?;
            Ok(Case::relative(
                format!("pair{i} N={big_n}"),
                rep.lhs,
                rep.rhs,
                tol,
            ))
        })
        .collect()
}

fn random_index(rng: &mut ChaCha8Rng, d: usize, n_max: usize) -> CliResult<HarmonicIndex> {
    let n = rng.random_range(0..=n_max);
    let m = rng.random_range(1..=harmonic_dim(d, n)? as usize);
    Ok(HarmonicIndex::from_flat(d, n, m)?)
}

fn funk_hecke_suite(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> CliResult<Vec<Case>> {
    if args.d == 2 {
        return Err(CliError::Usage(
            "funk-hecke is unsupported for d=2 (the formula needs d ≥ 3)".into(),
        ));
    }
    let tol = args.tol.unwrap_or(1e-8);
    let n_max = args.n_max.unwrap_or(5);
    let a = args.k * args.radius;
    // exact degree of the product rule must cover Y (n_max) times φ: degree ≤ 6
    // for the polynomials, about e·a/2 + 15 for e^{iat} at double precision
    let order = ((n_max as f64 + (E * a).max(12.0) + 20.0) / 2.0).ceil() as usize;
    let rule = quadrature(args.d, order)?;
    let mut out = Vec::with_capacity(args.cases);
    for i in 0..args.cases {
        let idx = random_index(rng, args.d, n_max)?;
        let dir = point(unit_vector(rng, args.d))?.to_polar().theta().to_vec();
        let n = idx.n();
        let (label, rep) = if i % 2 == 0 {
            // degree ≥ n keeps the projection onto C_n nonzero
            let deg = rng.random_range(n.min(6)..=6);
            let coeffs: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
            let phi =
                |t: f64| Complex64::new(coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c), 0.0);
            (
                format!("poly{deg}"),
                funk_hecke(phi, &idx, &dir, &rule, (deg + n) / 2 + 2)?,
            )
        } else {
            let phi = |t: f64| Complex64::from_polar(1.0, a * t);
            (
                "exp".to_string(),
                funk_hecke(phi, &idx, &dir, &rule, (a.ceil() as usize) + n + 30)?,
            )
        };
        out.push(Case::relative(
            format!("{i} {label} n={} m={}", n, idx.m()),
            rep.lhs,
            rep.rhs,
            tol,
        ));
    }
    Ok(out)
}

/// Orders, degrees and arguments swept by the Gegenbauer suite.
pub const GEGENBAUER_NU: [f64; 4] = [0.5, 1.0, 1.5, 2.5];
pub const GEGENBAUER_X: [f64; 7] = [0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 20.0];

fn gegenbauer_suite(args: &VerifyArgs) -> CliResult<Vec<Case>> {
    let tol = args.tol.unwrap_or(1e-8);
    let n_max = args.n_max.unwrap_or(6);
    let mut out = Vec::new();
    for &nu in &GEGENBAUER_NU {
        for n in 0..=n_max {
            for &x in &GEGENBAUER_X {
                let nodes = (x + n as f64 + 10.0).ceil() as usize;
                let rep = gegenbauer_bessel(nu, n, x, nodes)?;
                out.push(Case::relative(
                    format!("nu={nu} n={n} x={x}"),
                    rep.lhs,
                    rep.rhs,
                    tol,
                ));
            }
        }
    }
    Ok(out)
}

fn plane_wave(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> CliResult<Vec<Case>> {
    let tol = args.tol.unwrap_or(1e-9);
    let max_n = args
        .big_n
        .unwrap_or_else(|| truncation_order(args.k, args.radius));
    let basis = HarmonicBasis::new(args.d, max_n)?;
    (0..args.cases)
        .map(|i| {
            let kvec = point(
                unit_vector(rng, args.d)
                    .into_iter()
                    .map(|v| v * args.k)
                    .collect(),
            )?;
            let r = point(in_ball(rng, args.d, args.radius))?;
            let big_n = args
                .big_n
                .unwrap_or_else(|| truncation_order(args.k, r.norm()));
            let exact = Complex64::from_polar(1.0, kvec.dot(&r));
            let approx = plane_wave_truncated_with(&basis, &kvec, &r, big_n)?;
            Ok(Case::absolute(
                format!("point{i} kr={:.3} N={big_n}", args.k * r.norm()),
                exact,
                approx,
                tol,
            ))
        })
        .collect()
}

fn orthonormality(args: &VerifyArgs) -> CliResult<Vec<Case>> {
    let tol = args.tol.unwrap_or(1e-10);
    let n_max = args.n_max.unwrap_or(6);
    let basis = HarmonicBasis::new(args.d, n_max)?;
    let rule = quadrature(args.d, n_max)?;
    let m = basis.len();
    let mut gram = vec![0.0; m * m];
    for (p, w) in rule.nodes().iter().zip(rule.weights()) {
        let y = basis.eval_all(p.theta())?;
        for i in 0..m {
            let wy = w * y[i];
            for j in 0..=i {
                gram[i * m + j] += wy * y[j];
            }
        }
    }
    let mut out = Vec::with_capacity(m);
    for (i, idx) in basis.indices().iter().enumerate() {
        // worst entry of row i against the identity
        let (mut worst_j, mut worst) = (i, -1.0);
        for j in 0..m {
            let g = if j <= i {
                gram[i * m + j]
            } else {
                gram[j * m + i]
            };
            let dev = (g - if i == j { 1.0 } else { 0.0 }).abs();
            if dev > worst {
                worst = dev;
                worst_j = j;
            }
        }
        let g = if worst_j <= i {
            gram[i * m + worst_j]
        } else {
            gram[worst_j * m + i]
        };
        let delta = if i == worst_j { 1.0 } else { 0.0 };
        let other = &basis.indices()[worst_j];
        out.push(Case::absolute(
            format!("({},{}) vs ({},{})", idx.n(), idx.m(), other.n(), other.m()),
            Complex64::new(g, 0.0),
            Complex64::new(delta, 0.0),
            tol,
        ));
    }
    Ok(out)
}

/// `kr` values where the radiation remainder is compared.
pub const RADIATION_KR: (f64, f64) = (10.0, 1000.0);

fn radiation(args: &VerifyArgs) -> CliResult<Vec<Case>> {
    let n_max = args.n_max.unwrap_or(3);
    let (near, far) = (RADIATION_KR.0 / args.k, RADIATION_KR.1 / args.k);
    let mut out = Vec::new();
    for n in 0..=n_max {
        let a = radiation_remainder(args.d, n, args.k, near)?;
        let b = radiation_remainder(args.d, n, args.k, far)?;
        let ratio = b.norm() / a.norm();
        out.push(Case {
            name: format!("H1 n={n} kr={}->{}", RADIATION_KR.0, RADIATION_KR.1),
            lhs: a,
            rhs: b,
            abs_err: b.norm(),
            rel_err: ratio,
            metric: "decay",
            pass: ratio <= 1.0 / 3.0,
        });
        let a = radiation_remainder_incoming(args.d, n, args.k, near)?;
        let b = radiation_remainder_incoming(args.d, n, args.k, far)?;
        let ratio = b.norm() / a.norm();
        out.push(Case {
            name: format!("H2 n={n} kr={}->{}", RADIATION_KR.0, RADIATION_KR.1),
            lhs: a,
            rhs: b,
            abs_err: b.norm(),
            rel_err: ratio,
            metric: "no-decay",
            pass: ratio >= 1.0 / 1.5,
        });
    }
    Ok(out)
}

/// Step pair for the convergence-rate test, in units of `1/k`.
pub const HELMHOLTZ_STEP: f64 = 0.02;

fn helmholtz(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> CliResult<Vec<Case>> {
    let (lo, hi) = (3.5, 4.5);
    let n_max = args.n_max.unwrap_or(3);
    let (d, k) = (args.d, args.k);
    let h = HELMHOLTZ_STEP / k;
    let mut out = Vec::with_capacity(args.cases);
    for i in 0..args.cases {
        // keep the stencil away from the singularity of the exterior field
        let radius = (0.6 + 1.4 * rng.random::<f64>()) / k;
        let x = point(
            unit_vector(rng, d)
                .into_iter()
                .map(|v| v * radius)
                .collect(),
        )?;
        let idx = random_index(rng, d, n_max)?;
        let ord = RadialOrder::new(d, idx.n())?;
        let (label, r1, r2) = match i % 3 {
            0 => {
                let kvec = point(unit_vector(rng, d).into_iter().map(|v| v * k).collect())?;
                let f = |p: &CartesianPoint| Ok(Complex64::from_polar(1.0, kvec.dot(p)));
                (
                    "plane",
                    helmholtz_residual(f, k, &x, h)?,
                    helmholtz_residual(f, k, &x, h / 2.0)?,
                )
            }
            1 => {
                let f = |p: &CartesianPoint| {
                    let q = p.to_polar();
                    Ok(Complex64::new(
                        hyper_j(ord, k * q.r())? * eval_harmonic(&idx, q.theta())?,
                        0.0,
                    ))
                };
                (
                    "interior",
                    helmholtz_residual(f, k, &x, h)?,
                    helmholtz_residual(f, k, &x, h / 2.0)?,
                )
            }
            _ => {
                let f = |p: &CartesianPoint| {
                    let q = p.to_polar();
                    Ok(hyper_h1(ord, k * q.r())? * eval_harmonic(&idx, q.theta())?)
                };
                (
                    "exterior",
                    helmholtz_residual(f, k, &x, h)?,
                    helmholtz_residual(f, k, &x, h / 2.0)?,
                )
            }
        };
        let ratio = r1.norm() / r2.norm();
        out.push(Case {
            name: format!("{i} {label} n={} m={} r={radius:.3}", idx.n(), idx.m()),
            lhs: r1,
            rhs: r2,
            abs_err: r2.norm(),
            rel_err: ratio,
            metric: "h2-ratio",
            pass: (lo..=hi).contains(&ratio),
        });
    }
    Ok(out)
}
