use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use hyperhelm::identities::truncation_order;
use hyperhelm::rkhs::{
    evaluate, fit_detailed, fit_sh_direct, to_sh_expansion, FieldSamples, SHExpansion, SolveMethod,
};
use hyperhelm::specfun::{hyper_j, hyper_j_at_origin, RadialOrder};
use hyperhelm::sphere::{eval_harmonic, CartesianPoint, HarmonicIndex, PolarPoint};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::config::{Array, ExperimentConfig, Lambda, Source, Truncation};
use crate::error::{CliError, CliResult};
use crate::output::{num, Table};
use crate::sampling::in_ball;

/// Regularization floor for `lambda = "auto"`, relative to `ω_{d−1}`.
const AUTO_LAMBDA_FLOOR: f64 = 1e-8;

pub fn run(config_path: &Path, out_dir: &Path) -> CliResult<()> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = ExperimentConfig::parse(&text)?;
    fs::create_dir_all(out_dir)?;
    let report = execute(&cfg)?;
    report.write(&cfg, out_dir)?;
    if let Some(limit) = cfg.max_rel_error {
        if !(report.rel_l2 <= limit) {
            return Err(CliError::Numeric(format!(
                "relative L2 error {:e} exceeds max_rel_error {limit:e}",
                report.rel_l2
            )));
        }
    }
    Ok(())
}

/// Everything an experiment produces, before it is written out.
pub struct Report {
    samples: FieldSamples,
    weights: Vec<Complex64>,
    lambda: f64,
    condition: f64,
    method: SolveMethod,
    truncation: usize,
    rk: Vec<SHExpansion>,
    direct: Vec<SHExpansion>,
    grid: Vec<(CartesianPoint, Complex64, Complex64)>,
    pub rel_l2: f64,
    max_abs: f64,
    sample_residual: f64,
}

fn field(source: &Source, d: usize, k: f64, x: &CartesianPoint) -> CliResult<Complex64> {
    Ok(match source {
        Source::PlaneWave {
            direction,
            amplitude,
        } => {
            let dir = PolarPoint::unit(direction.clone())?.to_cartesian();
            Complex64::new(amplitude[0], amplitude[1]) * Complex64::from_polar(1.0, k * dir.dot(x))
        }
        Source::InteriorMode { n, m, amplitude } => {
            let idx = HarmonicIndex::from_flat(d, *n, *m)?;
            let p = x.to_polar();
            let v = hyper_j(RadialOrder::new(d, *n)?, k * p.r())? * eval_harmonic(&idx, p.theta())?;
            Complex64::new(amplitude[0], amplitude[1]) * v
        }
        Source::Superposition { terms } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in terms {
                acc += field(t, d, k, x)?;
            }
            acc
        }
    })
}

/// Points of the cubic lattice `spacing·ℤ^d` inside the ball, in
/// lexicographic order of their integer coordinates.
fn lattice_in_ball(d: usize, spacing: f64, radius: f64) -> CliResult<Vec<CartesianPoint>> {
    let half = (radius / spacing + 1e-9).floor() as i64;
    let ticks: Vec<f64> = (-half..=half).map(|i| i as f64 * spacing).collect();
    grid_in_ball(d, &ticks, radius)
}

fn grid_in_ball(d: usize, ticks: &[f64], radius: f64) -> CliResult<Vec<CartesianPoint>> {
    let total = ticks
        .len()
        .checked_pow(d as u32)
        .filter(|&t| t <= 5_000_000)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "grid with {} ticks per axis in d = {d} is too large",
                ticks.len()
            ))
        })?;
    let mut out = Vec::new();
    let mut counter = vec![0usize; d];
    for _ in 0..total {
        let x: Vec<f64> = counter.iter().map(|&i| ticks[i]).collect();
        if x.iter().map(|v| v * v).sum::<f64>().sqrt() <= radius * (1.0 + 1e-12) {
            out.push(CartesianPoint::new(x)?);
        }
        // last coordinate varies fastest
        for c in counter.iter_mut().rev() {
            *c += 1;
            if *c < ticks.len() {
                break;
            }
            *c = 0;
        }
    }
    Ok(out)
}

fn sample_points(cfg: &ExperimentConfig) -> CliResult<Vec<CartesianPoint>> {
    match &cfg.array {
        Array::RandomBall {
            count,
            radius,
            rng_seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*rng_seed);
            (0..*count)
                .map(|_| Ok(CartesianPoint::new(in_ball(&mut rng, cfg.d, *radius))?))
                .collect()
        }
        Array::Grid { spacing, radius } => lattice_in_ball(cfg.d, *spacing, *radius),
        Array::Explicit { points } => points
            .iter()
            .map(|p| Ok(CartesianPoint::new(p.clone())?))
            .collect(),
    }
}

pub fn execute(cfg: &ExperimentConfig) -> CliResult<Report> {
    let (d, k) = (cfg.d, cfg.k);
    let points = sample_points(cfg)?;
    let noise =
        Normal::new(0.0, cfg.noise_std).map_err(|e| CliError::Usage(format!("noise_std: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pressures = Vec::with_capacity(points.len());
    for p in &points {
        let clean = field(&cfg.source, d, k, p)?;
        let (re, im) = (noise.sample(&mut rng), noise.sample(&mut rng));
        pressures.push(clean + Complex64::new(re, im));
    }
    let samples = FieldSamples::new(k, points, pressures)?;

    let omega = hyper_j_at_origin(d)?;
    let lambda = match cfg.lambda {
        Lambda::Value(v) => v,
        Lambda::Auto => AUTO_LAMBDA_FLOOR.max(cfg.noise_std * cfg.noise_std) * omega,
    };
    let outcome = fit_detailed(&samples, d, lambda)?;
    let est = &outcome.estimate;

    let sample_residual = samples
        .points()
        .iter()
        .zip(samples.pressures())
        .map(|(p, v)| Ok((evaluate(est, p)? - v).norm()))
        .collect::<CliResult<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max)
        / samples
            .pressures()
            .iter()
            .map(|p| p.norm())
            .fold(0.0, f64::max)
            .max(1e-300);

    let res = cfg.eval_grid.resolution;
    let r_grid = cfg.eval_grid.radius;
    let ticks: Vec<f64> = (0..res)
        .map(|i| -r_grid + 2.0 * r_grid * i as f64 / (res - 1) as f64)
        .collect();
    let mut grid = Vec::new();
    let (mut err2, mut truth2, mut max_abs) = (0.0, 0.0, 0.0f64);
    for x in grid_in_ball(d, &ticks, r_grid)? {
        let truth = field(&cfg.source, d, k, &x)?;
        let estimate = evaluate(est, &x)?;
        let e = (estimate - truth).norm();
        err2 += e * e;
        truth2 += truth.norm_sqr();
        max_abs = max_abs.max(e);
        grid.push((x, truth, estimate));
    }
    let rel_l2 = (err2 / truth2.max(1e-300)).sqrt();

    let r_max = samples
        .points()
        .iter()
        .map(CartesianPoint::norm)
        .fold(r_grid, f64::max);
    let truncation = match cfg.truncation {
        Truncation::Order(n) => n,
        Truncation::Auto => truncation_order(k, r_max),
    };
    let mut orders = cfg.coefficient_orders.clone();
    orders.push(truncation);
    orders.sort_unstable();
    orders.dedup();
    let rk = orders
        .iter()
        .map(|&n| Ok(to_sh_expansion(est, n)?))
        .collect::<CliResult<Vec<_>>>()?;
    let direct = orders
        .iter()
        .map(|&n| Ok(fit_sh_direct(&samples, d, n, cfg.direct_lambda)?))
        .collect::<CliResult<Vec<_>>>()?;

    Ok(Report {
        weights: est.weights.clone(),
        samples,
        lambda,
        condition: outcome.condition,
        method: outcome.method,
        truncation,
        rk,
        direct,
        grid,
        rel_l2,
        max_abs,
        sample_residual,
    })
}

fn open(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn coord_header(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x_{i}")).collect()
}

impl Report {
    fn write(&self, cfg: &ExperimentConfig, dir: &Path) -> CliResult<()> {
        let d = cfg.d;

        let mut header = vec!["index".to_string()];
        header.extend(coord_header(d));
        header.extend(["re".to_string(), "im".to_string()]);
        let mut t = Table::new(open(dir, "samples.csv")?, &header)?;
        for (i, (p, v)) in self
            .samples
            .points()
            .iter()
            .zip(self.samples.pressures())
            .enumerate()
        {
            let mut row = vec![i.to_string()];
            row.extend(p.x().iter().map(|&c| num(c)));
            row.extend([num(v.re), num(v.im)]);
            t.row(&row)?;
        }
        t.finish()?;

        let mut t = Table::new(open(dir, "weights.csv")?, &["index", "re", "im"])?;
        for (i, w) in self.weights.iter().enumerate() {
            t.row(&[i.to_string(), num(w.re), num(w.im)])?;
        }
        t.finish()?;

        let mut t = Table::new(
            open(dir, "coefficients.csv")?,
            &["route", "N", "n", "m", "re", "im"],
        )?;
        for (route, list) in [("rk", &self.rk), ("direct", &self.direct)] {
            for exp in list.iter() {
                let big_n = exp.max_order();
                let mut flat = exp.coefficients().iter();
                for n in 0..=big_n {
                    let dim = hyperhelm::sphere::harmonic_dim(d, n)? as usize;
                    for m in 1..=dim {
                        let c = flat
                            .next()
                            .expect("coefficient count matches the harmonic dimensions");
                        t.row(&[
                            route.to_string(),
                            big_n.to_string(),
                            n.to_string(),
                            m.to_string(),
                            num(c.re),
                            num(c.im),
                        ])?;
                    }
                }
            }
        }
        t.finish()?;

        let mut header = coord_header(d);
        header.extend(["re_truth", "im_truth", "re_est", "im_est", "abs_err"].map(String::from));
        let mut t = Table::new(open(dir, "field_error.csv")?, &header)?;
        for (x, truth, est) in &self.grid {
            let mut row: Vec<String> = x.x().iter().map(|&c| num(c)).collect();
            row.extend([
                num(truth.re),
                num(truth.im),
                num(est.re),
                num(est.im),
                num((est - truth).norm()),
            ]);
            t.row(&row)?;
        }
        t.finish()?;

        let method = match self.method {
            SolveMethod::Cholesky => "cholesky",
            SolveMethod::PseudoInverse => "pseudo_inverse",
        };
        let mut t = Table::new(open(dir, "summary.csv")?, &["metric", "value"])?;
        for (key, value) in [
            ("d", d.to_string()),
            ("k", num(cfg.k)),
            ("samples", self.samples.len().to_string()),
            ("lambda", num(self.lambda)),
            ("solver", method.to_string()),
            ("condition", num(self.condition)),
            ("truncation_N", self.truncation.to_string()),
            ("grid_points", self.grid.len().to_string()),
            ("rel_l2_error", num(self.rel_l2)),
            ("max_abs_error", num(self.max_abs)),
            ("sample_residual_rel", num(self.sample_residual)),
        ] {
            t.row(&[key.to_string(), value])?;
        }
        t.finish()
    }
}
