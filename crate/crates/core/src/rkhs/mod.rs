//! The band-limited space of interior Helmholtz solutions in `ℝ^d`.
//!
//! Its reproducing kernel is `κ_k(r, r′) = J_{d,0}(k|r − r′|)`, and
//! `{J_{d,n}(k|r|) Y_n^m(θ)}` is an orthonormal basis. A field sampled at
//! `L` points is estimated as `Σ_ℓ a_ℓ κ_k(·, r_ℓ)`; the addition theorem
//! then turns the weights into spherical-harmonic coefficients whose values
//! do not depend on where the expansion is truncated.

mod estimate;
mod expansion;

pub use estimate::{
    default_lambda, evaluate, fit, fit_detailed, gram, kernel, FieldSamples, FitOutcome,
    KernelEstimate, SolveMethod, DEFAULT_LAMBDA_SCALE, MAX_UNREGULARIZED_CONDITION, PINV_THRESHOLD,
};
pub use expansion::{
    eval_sh, eval_sh_many, fit_sh_direct, to_sh_expansion, BasisKind, SHExpansion,
};
