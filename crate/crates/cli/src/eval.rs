use std::io::Write;

use num_complex::Complex64;

use hyperhelm::specfun::{gegenbauer, hyper_h1, hyper_h2, hyper_j, hyper_n, RadialOrder};
use hyperhelm::sphere::harmonic_dim;

use crate::error::{CliError, CliResult};
use crate::output::{num, Table};
use crate::{EvalArgs, Function};

const MAX_ROWS: usize = 10_000_000;

fn need<T>(value: Option<T>, flag: &str, what: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{what} requires --{flag}")))
}

fn abscissae(args: &EvalArgs, what: &str) -> CliResult<Vec<f64>> {
    let from = need(args.from, "from", what)?;
    let to = need(args.to, "to", what)?;
    let step = need(args.step, "step", what)?;
    if !(step > 0.0) || !step.is_finite() || !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage(format!(
            "need finite --from/--to and --step > 0, got step {step}"
        )));
    }
    if to < from {
        return Err(CliError::Usage(format!(
            "--to ({to}) is below --from ({from})"
        )));
    }
    // tolerate the last abscissa landing a rounding error past `to`
    let count = ((to - from) / step * (1.0 + 1e-12)).floor() + 1.0;
    if count > MAX_ROWS as f64 {
        return Err(CliError::Usage(format!(
            "range would produce {count} rows (limit {MAX_ROWS})"
        )));
    }
    Ok((0..count as usize)
        .map(|i| from + i as f64 * step)
        .collect())
}

pub fn run<W: Write>(args: &EvalArgs, sink: W) -> CliResult<()> {
    // Everything is computed before any output so a domain error leaves
    // stdout empty.
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match args.function {
        Function::HyperJ | Function::HyperN | Function::HyperH1 | Function::HyperH2 => {
            let name = "radial functions";
            let ord = RadialOrder::new(need(args.d, "d", name)?, need(args.n, "n", name)?)?;
            let zs = abscissae(args, name)?;
            let mut rows = Vec::with_capacity(zs.len());
            for z in zs {
                let v: Complex64 = match args.function {
                    Function::HyperJ => hyper_j(ord, z)?.into(),
                    Function::HyperN => hyper_n(ord, z)?.into(),
                    Function::HyperH1 => hyper_h1(ord, z)?,
                    _ => hyper_h2(ord, z)?,
                };
                rows.push(match args.function {
                    Function::HyperJ | Function::HyperN => vec![num(z), num(v.re)],
                    _ => vec![num(z), num(v.re), num(v.im)],
                });
            }
            let header = match args.function {
                Function::HyperJ | Function::HyperN => vec!["z", "value"],
                _ => vec!["z", "re", "im"],
            };
            (header, rows)
        }
        Function::Gegenbauer => {
            let n = need(args.n, "n", "gegenbauer")?;
            let lambda = need(args.lambda, "lambda", "gegenbauer")?;
            let rows = abscissae(args, "gegenbauer")?
                .into_iter()
                .map(|t| Ok(vec![num(t), num(gegenbauer(n, lambda, t)?)]))
                .collect::<CliResult<_>>()?;
            (vec!["t", "value"], rows)
        }
        Function::HarmonicDim => {
            return dims(
                need(args.d, "d", "harmonic_dim")?,
                need(args.n_max, "n-max", "harmonic_dim")?,
                sink,
            )
        }
    };
    let mut table = Table::new(sink, &header)?;
    for r in rows {
        table.row(&r)?;
    }
    table.finish()
}

/// `n, dim, cumulative` for `n = 0..=n_max`.
pub fn dims<W: Write>(d: usize, n_max: usize, sink: W) -> CliResult<()> {
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut total: u64 = 0;
    for n in 0..=n_max {
        let dim = harmonic_dim(d, n)?;
        total = total
            .checked_add(dim)
            .ok_or_else(|| CliError::Numeric("cumulative dimension overflows u64".into()))?;
        rows.push([n.to_string(), dim.to_string(), total.to_string()]);
    }
    let mut table = Table::new(sink, &["n", "dim", "cumulative"])?;
    for r in &rows {
        table.row(r)?;
    }
    table.finish()
}
