//! Cylindrical Bessel functions `J_ν` and Neumann functions `N_ν` (also written
//! `Y_ν`) of real order `ν ≥ 0` and real argument.
//!
//! `J_ν` uses its power series while `(z/2)² ≤ ν + 1` (no significant
//! cancellation) and Miller's backward recurrence otherwise. The recurrence
//! runs in double-double arithmetic: near a zero of `J_ν` the step
//! `2μ/z·f_μ − f_{μ+1}` cancels almost completely, and in plain f64 the
//! result would only be accurate relative to the envelope of the function. The Miller
//! sequence is normalized with the closed forms of `J_{1/2}`, `J_{3/2}` for
//! half-integer orders and with the Neumann-type sum
//! `(z/2)^β = Σ_k (β + 2k) Γ(β + k) / k! · J_{β+2k}(z)` for every other base
//! order `β ∈ [0, 1)`.
//!
//! `N_ν` is seeded at orders `β`, `β + 1` and carried up with the forward
//! recurrence, which is stable for the Neumann family. Seeds are closed forms
//! (half-integer), Neumann series over the Miller sequence (integer) or the
//! reflection formula `N_β = (J_β cos βπ − J_{−β}) / sin βπ` (anything else).

use std::f64::consts::PI;

use super::dd::Dd;
use super::gamma::{gamma, ln_gamma};
use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE_AT: f64 = 1e200;
/// A power of two, so rescaling is exact in both words.
const RESCALE_BY: f64 = f64::from_bits((1023 - 665) << 52); // 2^-665

fn check_args(nu: f64, z: f64) -> Result<()> {
    if !nu.is_finite() || nu < 0.0 {
        return domain(format!("Bessel order must be finite and ≥ 0, got {nu}"));
    }
    if !z.is_finite() || z < 0.0 {
        return domain(format!("Bessel argument must be finite and ≥ 0, got {z}"));
    }
    Ok(())
}

/// `J_ν(z)` for `ν ≥ 0`, `z ≥ 0`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if series_preferred(nu, z) {
        return series_j(nu, z);
    }
    let m = nu.floor();
    let base = nu - m;
    let seq = miller_sequence(base, z, m as usize)?;
    Ok(seq[m as usize])
}

/// `N_ν(z)` (Neumann / Weber function, `Y_ν`) for `ν ≥ 0`, `z > 0`.
pub fn bessel_n(nu: f64, z: f64) -> Result<f64> {
    check_args(nu, z)?;
    if z == 0.0 {
        return domain("Neumann function is singular at z = 0");
    }
    let m = nu.floor() as usize;
    let base = nu - m as f64;
    let (mut prev, mut cur) = neumann_seeds(base, z)?;
    if m == 0 {
        return Ok(prev);
    }
    for i in 1..m {
        let mu = base + i as f64;
        let next = 2.0 * mu / z * cur - prev;
        if !next.is_finite() {
            return Err(Error::Overflow(format!("N_{nu}({z}) exceeds f64 range")));
        }
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::Overflow(format!("N_{nu}({z}) exceeds f64 range")))
    }
}

/// The series is used where consecutive terms shrink from the start, so the
/// alternating sum loses at most about one decimal digit.
fn series_preferred(nu: f64, z: f64) -> bool {
    let h = 0.5 * z;
    h * h <= nu + 1.0
}

/// Power series `Σ_j (−1)^j (z/2)^{2j+ν} / (j! Γ(j+ν+1))`.
pub(crate) fn series_j(nu: f64, z: f64) -> Result<f64> {
    let half = 0.5 * z;
    let lead = if nu == 0.0 {
        1.0
    } else if nu + 1.0 < 150.0 {
        half.powf(nu) / gamma(nu + 1.0)?
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)?).exp()
    };
    Ok(lead * series_tail(nu, z))
}

/// `Σ_j (−z²/4)^j / (j! (ν+1)_j)`: the series of `J_ν` without its leading factor.
pub(crate) fn series_tail(nu: f64, z: f64) -> f64 {
    let q = -0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..500 {
        let jf = j as f64;
        term *= q / (jf * (nu + jf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Normalized values `J_{β+i}(z)` for `i = 0..=K` where `K ≥ upto` is the
/// starting index of the backward recurrence.
fn miller_sequence(base: f64, z: f64, upto: usize) -> Result<Vec<f64>> {
    let top = (base + upto as f64).max(z);
    let mut start = (top + 30.0 + 10.0 * top.cbrt()).ceil() as usize;
    start = start.max(upto + 2);
    if start % 2 == 1 {
        start += 1;
    }
    let mut f = vec![Dd::ZERO; start + 2];
    f[start] = Dd::new(1e-30);
    for i in (1..=start).rev() {
        let mu = base + i as f64;
        f[i - 1] = Dd::ratio(2.0 * mu, z) * f[i] - f[i + 1];
        if f[i - 1].hi.abs() > RESCALE_AT {
            for v in &mut f[i - 1..] {
                *v = v.scale(RESCALE_BY);
            }
        }
    }
    f.truncate(start + 1);

    let scale = if base == 0.5 {
        let s = (2.0 / (PI * z)).sqrt();
        let j_half = s * z.sin();
        let j_three_half = s * (z.sin() / z - z.cos());
        if j_half.abs() >= j_three_half.abs() {
            j_half / f[0].to_f64()
        } else {
            j_three_half / f[1].to_f64()
        }
    } else {
        // c_0 = Γ(β+1); c_k = (β+2k) Γ(β+k)/k! for k ≥ 1
        let g1 = gamma(base + 1.0)?;
        let mut sum = f[0].scale(g1);
        let mut g = g1;
        let mut k = 1usize;
        while 2 * k <= start {
            let kf = k as f64;
            sum = sum + f[2 * k].scale((base + 2.0 * kf) * g);
            g *= (base + kf) / (kf + 1.0);
            k += 1;
        }
        (0.5 * z).powf(base) / sum.to_f64()
    };
    if !scale.is_finite() {
        return Err(Error::Overflow(format!(
            "Bessel recurrence normalization failed at base order {base}, z = {z}"
        )));
    }
    Ok(f.into_iter().map(|v| v.scale(scale).to_f64()).collect())
}

/// `(N_β(z), N_{β+1}(z))` for `β ∈ [0, 1)`.
fn neumann_seeds(base: f64, z: f64) -> Result<(f64, f64)> {
    if base == 0.5 {
        let s = (2.0 / (PI * z)).sqrt();
        let y_half = -s * z.cos();
        let y_minus_half = s * z.sin();
        return Ok((y_half, y_half / z - y_minus_half));
    }
    if base == 0.0 {
        let j = miller_sequence(0.0, z, 1)?;
        let log_term = (0.5 * z).ln() + EULER_GAMMA;
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        let mut k = 1;
        while 2 * k + 1 < j.len() {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            s0 += sign * j[2 * k] / kf;
            s1 += sign * (2.0 * kf + 1.0) * j[2 * k + 1] / (kf * (kf + 1.0));
            k += 1;
        }
        let y0 = 2.0 / PI * (log_term * j[0] - 2.0 * s0);
        let y1 = 2.0 / PI * (-j[0] / z + (log_term - 1.0) * j[1] - s1);
        return Ok((y0, y1));
    }
    // Reflection through negative orders: J_{-β} and J_{-β-1} come from the
    // backward recurrence continued below the base 1 - β.
    let reflected = 1.0 - base;
    let j = miller_sequence(reflected, z, 1)?;
    let j_minus = 2.0 * reflected / z * j[0] - j[1];
    let j_minus_1 = -2.0 * base / z * j_minus - j[0];
    let j_base = bessel_j(base, z)?;
    let j_base_1 = bessel_j(base + 1.0, z)?;
    let (s, c) = (base * PI).sin_cos();
    let y0 = (j_base * c - j_minus) / s;
    let y1 = (j_base_1 * c + j_minus_1) / s;
    Ok((y0, y1))
}

#[cfg(test)]
// reference values are quoted with every digit the oracle printed
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    // Independent oracle: the defining power series with the alternating sum
    // carried in double-double arithmetic, so cancellation up to z = 10 costs
    // nothing at the 1e-11 level.
    #[derive(Clone, Copy)]
    struct Dd(f64, f64);

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }

    fn dd_add(x: Dd, y: Dd) -> Dd {
        let s = two_sum(x.0, y.0);
        let t = s.1 + x.1 + y.1;
        two_sum(s.0, t)
    }

    fn dd_mul(x: Dd, y: f64) -> Dd {
        let p = x.0 * y;
        let e = x.0.mul_add(y, -p);
        two_sum(p, e + x.1 * y)
    }

    fn dd_div(x: Dd, y: f64) -> Dd {
        let q = x.0 / y;
        let r = dd_add(x, dd_mul(Dd(q, 0.0), -y));
        two_sum(q, r.0 / y)
    }

    fn series_oracle(nu: f64, z: f64) -> f64 {
        let q = Dd(-0.25 * z * z, 0.0);
        let q = Dd(q.0, (-0.25 * z).mul_add(z, -q.0));
        let mut term = Dd(1.0, 0.0);
        let mut sum = Dd(1.0, 0.0);
        for j in 1..400 {
            let jf = j as f64;
            // term *= q / (j (ν + j)), with the two-word q
            let t_hi = dd_mul(term, q.0);
            let t_lo = dd_mul(term, q.1);
            term = dd_div(dd_div(dd_add(t_hi, t_lo), jf), nu + jf);
            sum = dd_add(sum, term);
            if term.0.abs() < 1e-34 * sum.0.abs() {
                break;
            }
        }
        let lead = (nu * (0.5 * z).ln() - ln_gamma(nu + 1.0).unwrap()).exp();
        lead * (sum.0 + sum.1)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3.5, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-12);
        assert!(bessel_n(0.5, PI / 2.0).unwrap().abs() < 1e-12);
        assert!(close(
            bessel_n(0.5, PI).unwrap(),
            0.450_158_158_078_553_1,
            1e-14
        ));
    }

    #[test]
    fn j_matches_series_oracle() {
        let j5 = bessel_j(5.0, 2.0).unwrap();
        assert!(close(j5, series_oracle(5.0, 2.0), 1e-13));
        for nu in [0.0, 0.5, 1.0, 2.5, 7.0, 12.5, 30.0] {
            for i in 1..=40 {
                let z = 0.25 * i as f64;
                let got = bessel_j(nu, z).unwrap();
                let want = series_oracle(nu, z);
                let tol = 1e-11 * want.abs().max(1e-2);
                assert!((got - want).abs() <= tol, "nu={nu} z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn j_matches_high_precision_reference() {
        // mpmath.besselj at 40 digits
        let table = [
            (0.0, 1.0, 0.765_197_686_557_966_55),
            (1.0, 1.0, 0.440_050_585_744_933_52),
            (0.5, 1.0, 0.671_396_707_141_803_09),
            (2.5, 7.3, -0.300_849_431_587_499_81),
            (10.0, 3.0, 1.292_835_164_571_588_4e-5),
            (30.0, 25.0, 0.011_809_026_124_269_016),
            (60.0, 200.0, 0.034_156_500_001_271_93),
            (0.0, 200.0, -0.015_437_439_930_565_092),
            (12.5, 150.0, -0.017_793_981_756_987_76),
            (0.25, 3.7, -0.330_627_109_100_989_83),
            (0.75, 40.0, 0.118_885_845_312_303_83),
            (60.0, 10.0, 6.909_433_249_439_961_9e-41),
            (20.5, 0.5, 4.091_270_459_487_950_1e-32),
            (1.0, 60.0, 0.046_598_383_758_166_318),
        ];
        for (nu, z, want) in table {
            let got = bessel_j(nu, z).unwrap();
            assert!(close(got, want, 1e-11), "J_{nu}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn n_matches_high_precision_reference() {
        // mpmath.bessely at 40 digits
        let table = [
            (0.0, 1.0, 0.088_256_964_215_676_958),
            (1.0, 1.0, -0.781_212_821_300_288_72),
            (0.0, 0.001, -4.471_416_611_375_923_3),
            (1.0, 0.01, -63.678_596_282_060_655),
            (2.0, 5.0, 0.367_662_882_605_524_52),
            (5.0, 2.0, -9.935_989_128_481_975),
            (2.5, 3.0, -0.369_040_730_073_797_9),
            (10.0, 3.0, -2_582.607_129_484_299_7),
            (30.0, 25.0, -1.657_580_909_409_400_3),
            (60.0, 200.0, 0.046_584_428_316_212_468),
            (0.0, 200.0, -0.054_265_775_249_817_911),
            (12.5, 150.0, -0.062_787_697_584_394_241),
            (0.25, 3.7, 0.248_344_775_921_550_02),
            (0.75, 40.0, 0.042_227_989_713_511_529),
            (20.0, 60.0, -0.026_721_408_520_664_67),
            (1.5, 0.001, -25_231.337_835_861_056),
            (3.0, 1e-6, -5.092_958_178_941_288_1e18),
        ];
        for (nu, z, want) in table {
            let got = bessel_n(nu, z).unwrap();
            assert!(close(got, want, 1e-10), "N_{nu}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn n_half_integer_closed_form() {
        // N_{1/2}(z) = -sqrt(2/(πz)) cos z, via the connection formula N_{1/2} = -J_{-1/2}
        for i in 1..100 {
            let z = 0.37 * i as f64;
            let want = -(2.0 / (PI * z)).sqrt() * z.cos();
            let got = bessel_n(0.5, z).unwrap();
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1e-2));
        }
    }

    #[test]
    fn n_singular_behaviour() {
        // leading order -Γ(ν)(2/z)^ν/π = -25231.3...; mpmath gives -25231.337835861056
        let v = bessel_n(1.5, 1e-3).unwrap();
        assert!(v < -2.5e4);
        let lead = -gamma(1.5).unwrap() * (2.0f64 / 1e-3).powf(1.5) / PI;
        assert!(close(v, lead, 1e-5));
    }

    #[test]
    fn wronskian() {
        for nu in [0.0, 0.25, 0.5, 1.0, 2.5, 3.0, 7.5, 12.0] {
            for z in [0.3f64, 1.0, 2.7, 9.9, 25.0, 71.3] {
                let h = 1e-5 * z.min(1.0) / (1.0 + nu);
                let dj = (bessel_j(nu, z + h).unwrap() - bessel_j(nu, z - h).unwrap()) / (2.0 * h);
                let dn = (bessel_n(nu, z + h).unwrap() - bessel_n(nu, z - h).unwrap()) / (2.0 * h);
                let w = bessel_j(nu, z).unwrap() * dn - dj * bessel_n(nu, z).unwrap();
                let want = 2.0 / (PI * z);
                assert!(close(w, want, 1e-8), "nu={nu} z={z}: {w} vs {want}");
            }
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(bessel_n(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(-1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(1.0, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(bessel_n(60.0, 1e-6), Err(Error::Overflow(_))));
    }
}
