use crate::error::{domain, Result};

/// Gegenbauer polynomial `C_n^λ(t)` for `λ > −1/2`, `λ ≠ 0`, `t ∈ [−1, 1]`.
pub fn gegenbauer(n: usize, lambda: f64, t: f64) -> Result<f64> {
    check(lambda, t)?;
    Ok(gegenbauer_all(n, lambda, t)[n])
}

fn check(lambda: f64, t: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= -0.5 {
        return domain(format!(
            "Gegenbauer parameter must exceed -1/2, got {lambda}"
        ));
    }
    if lambda == 0.0 {
        return domain("Gegenbauer parameter λ = 0 is not supported (Chebyshev limit)");
    }
    if !(-1.0..=1.0).contains(&t) {
        return domain(format!("Gegenbauer argument must lie in [-1, 1], got {t}"));
    }
    Ok(())
}

/// `[C_0^λ(t), …, C_{n_max}^λ(t)]` by the three-term recurrence
/// `k C_k = 2(k+λ−1) t C_{k−1} − (k+2λ−2) C_{k−2}`.
///
/// No argument checks; callers guarantee `λ ≠ 0`.
pub fn gegenbauer_all(n_max: usize, lambda: f64, t: f64) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(1.0);
    if n_max >= 1 {
        c.push(2.0 * lambda * t);
    }
    for k in 2..=n_max {
        let kf = k as f64;
        let v =
            (2.0 * (kf + lambda - 1.0) * t * c[k - 1] - (kf + 2.0 * lambda - 2.0) * c[k - 2]) / kf;
        c.push(v);
    }
    c
}
