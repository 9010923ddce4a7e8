//! Real hyperspherical harmonics on `S^{d-1}`.
//!
//! A harmonic of degree `n` is labelled by a chain
//! `0 ≤ μ_1 ≤ μ_2 ≤ … ≤ μ_{d-1} = n` and, when `μ_1 ≥ 1`, a cosine/sine
//! parity. Its value factorizes over the polar angles:
//!
//! ```text
//! Y(θ) = Φ_{μ_1}(θ_1) · Π_{j=2}^{d-1} c_j · sin^{μ_{j-1}}θ_j · C^{μ_{j-1}+(j-1)/2}_{μ_j-μ_{j-1}}(cos θ_j)
//! Φ_0 = 1/√(2π),  Φ_μ = cos(μθ_1)/√π or sin(μθ_1)/√π
//! ```
//!
//! with `c_j` the closed-form Gegenbauer normalizers. The flat index `m`
//! (1-based) orders chains lexicographically by `(μ_{d-2}, …, μ_1, parity)`,
//! cosine before sine.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{gegenbauer_all, ln_gamma};

/// Cosine (`+`) or sine (`−`) type of the azimuthal factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Cos,
    Sin,
}

/// Chain label plus flat `(n, m)` address of one real hyperspherical harmonic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    chain: Vec<usize>,
    parity: Parity,
    n: usize,
    m: usize,
}

impl HarmonicIndex {
    /// Looks up the harmonic with flat address `(n, m)`, `1 ≤ m ≤ dim 𝒴_n`.
    pub fn from_flat(d: usize, n: usize, m: usize) -> Result<Self> {
        let all = enumerate_indices(d, n)?;
        if m == 0 || m > all.len() {
            return Err(Error::Invalid(format!(
                "m = {m} out of range 1..={} for d = {d}, n = {n}",
                all.len()
            )));
        }
        Ok(all[m - 1].clone())
    }

    /// Builds an index from its chain `(μ_1, …, μ_{d-1})` and parity.
    ///
    /// The parity is ignored (normalized to `Cos`) when `μ_1 = 0`.
    pub fn from_chain(chain: Vec<usize>, parity: Parity) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::Invalid("chain must have d - 1 ≥ 1 entries".into()));
        }
        if chain.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid(format!(
                "chain {chain:?} is not non-decreasing"
            )));
        }
        let parity = if chain[0] == 0 { Parity::Cos } else { parity };
        let d = chain.len() + 1;
        let n = *chain.last().unwrap();
        enumerate_indices(d, n)?
            .into_iter()
            .find(|idx| idx.chain == chain && idx.parity == parity)
            .ok_or_else(|| Error::Invalid("chain not found in enumeration".into()))
    }

    pub fn dim(&self) -> usize {
        self.chain.len() + 1
    }

    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based position within degree `n`.
    pub fn m(&self) -> usize {
        self.m
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c.checked_mul(n - k + i)? / i;
    }
    Some(c)
}

/// `dim 𝒴_n` in dimension `d`: `(2n+d−2)/(n+d−2) · C(n+d−2, n)`, exact.
pub fn harmonic_dim(d: usize, n: usize) -> Result<u64> {
    if d < 2 {
        return Err(Error::Invalid(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let overflow = || Error::Overflow(format!("dim of degree-{n} harmonics in d = {d}"));
    let (d, n) = (d as u128, n as u128);
    let c = binomial(n + d - 2, n).ok_or_else(overflow)?;
    let num = c.checked_mul(2 * n + d - 2).ok_or_else(overflow)?;
    u64::try_from(num / (n + d - 2)).map_err(|_| overflow())
}

/// All degree-`n` harmonic indices in flat order `m = 1, 2, …`.
pub fn enumerate_indices(d: usize, n: usize) -> Result<Vec<HarmonicIndex>> {
    let dim = harmonic_dim(d, n)? as usize;
    let mut out = Vec::with_capacity(dim);
    let mut chain = vec![0usize; d - 1];
    chain[d - 2] = n;
    fill_level(d - 2, n, &mut chain, &mut out);
    for (i, idx) in out.iter_mut().enumerate() {
        idx.m = i + 1;
    }
    debug_assert_eq!(out.len(), dim);
    Ok(out)
}

// `level` is the 0-based position still to be filled from the top; the
// outermost loop runs over μ_{d-2}, so the order is lexicographic in
// (μ_{d-2}, ..., μ_1, parity).
fn fill_level(level: usize, upper: usize, chain: &mut Vec<usize>, out: &mut Vec<HarmonicIndex>) {
    if level == 0 {
        let n = *chain.last().unwrap();
        let parities: &[Parity] = if chain[0] == 0 {
            &[Parity::Cos]
        } else {
            &[Parity::Cos, Parity::Sin]
        };
        for &parity in parities {
            out.push(HarmonicIndex {
                chain: chain.clone(),
                parity,
                n,
                m: 0,
            });
        }
        return;
    }
    for v in 0..=upper {
        chain[level - 1] = v;
        fill_level(level - 1, v, chain, out);
    }
}

/// `1/√h` with `h = ∫ (1−t²)^{λ−1/2} [C_m^λ(t)]² dt = π 2^{1−2λ} Γ(m+2λ) / (m! (m+λ) Γ(λ)²)`.
fn gegenbauer_normalizer(m: usize, lambda: f64) -> f64 {
    let mf = m as f64;
    let ln_h = PI.ln()
        + (1.0 - 2.0 * lambda) * std::f64::consts::LN_2
        + ln_gamma(mf + 2.0 * lambda).expect("positive argument")
        - ln_gamma(mf + 1.0).expect("positive argument")
        - (mf + lambda).ln()
        - 2.0 * ln_gamma(lambda).expect("positive argument");
    (-0.5 * ln_h).exp()
}

fn azimuthal(mu: usize, parity: Parity, theta1: f64) -> f64 {
    if mu == 0 {
        return 1.0 / (2.0 * PI).sqrt();
    }
    let arg = mu as f64 * theta1;
    match parity {
        Parity::Cos => arg.cos() / PI.sqrt(),
        Parity::Sin => arg.sin() / PI.sqrt(),
    }
}

/// Evaluates one harmonic at the angles `theta = (θ_1, …, θ_{d-1})`.
pub fn eval_harmonic(idx: &HarmonicIndex, theta: &[f64]) -> Result<f64> {
    if theta.len() != idx.chain.len() {
        return Err(Error::Invalid(format!(
            "harmonic in d = {} needs {} angles, got {}",
            idx.dim(),
            idx.chain.len(),
            theta.len()
        )));
    }
    let mut value = azimuthal(idx.chain[0], idx.parity, theta[0]);
    for j in 2..idx.dim() {
        let low = idx.chain[j - 2];
        let high = idx.chain[j - 1];
        let lambda = low as f64 + 0.5 * (j as f64 - 1.0);
        let (s, c) = theta[j - 1].sin_cos();
        let poly = gegenbauer_all(high - low, lambda, c)[high - low];
        value *= gegenbauer_normalizer(high - low, lambda) * s.powi(low as i32) * poly;
    }
    Ok(value)
}

/// All harmonics of degree `≤ max_order` in flat order, with tables that make
/// evaluating the whole family at one point cost `O(count · d)`.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    d: usize,
    max_order: usize,
    indices: Vec<HarmonicIndex>,
    offsets: Vec<usize>,
    // norms[j - 2][low][high - low] for level j
    norms: Vec<Vec<Vec<f64>>>,
}

impl HarmonicBasis {
    pub fn new(d: usize, max_order: usize) -> Result<Self> {
        let mut indices = Vec::new();
        let mut offsets = Vec::with_capacity(max_order + 2);
        for n in 0..=max_order {
            offsets.push(indices.len());
            indices.extend(enumerate_indices(d, n)?);
        }
        offsets.push(indices.len());
        let norms = (2..d)
            .map(|j| {
                (0..=max_order)
                    .map(|low| {
                        let lambda = low as f64 + 0.5 * (j as f64 - 1.0);
                        (0..=max_order - low)
                            .map(|m| gegenbauer_normalizer(m, lambda))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            d,
            max_order,
            indices,
            offsets,
            norms,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Total number of harmonics, `Σ_{n ≤ N} dim 𝒴_n`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[HarmonicIndex] {
        &self.indices
    }

    /// Flat range occupied by degree `n`.
    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Flat position of `(n, m)`.
    pub fn position(&self, n: usize, m: usize) -> usize {
        self.offsets[n] + m - 1
    }

    /// Values of every harmonic in the basis at `theta`.
    pub fn eval_all(&self, theta: &[f64]) -> Result<Vec<f64>> {
        if theta.len() != self.d - 1 {
            return Err(Error::Invalid(format!(
                "basis in d = {} needs {} angles, got {}",
                self.d,
                self.d - 1,
                theta.len()
            )));
        }
        let big_n = self.max_order;
        let (cos_tab, sin_tab): (Vec<f64>, Vec<f64>) = (0..=big_n)
            .map(|mu| {
                (
                    azimuthal(mu, Parity::Cos, theta[0]),
                    azimuthal(mu, Parity::Sin, theta[0]),
                )
            })
            .unzip();
        // level[j - 2][low][high - low]
        let levels: Vec<Vec<Vec<f64>>> = (2..self.d)
            .map(|j| {
                let (s, c) = theta[j - 1].sin_cos();
                let mut sin_pow = 1.0;
                (0..=big_n)
                    .map(|low| {
                        let lambda = low as f64 + 0.5 * (j as f64 - 1.0);
                        let norms = &self.norms[j - 2][low];
                        let row = gegenbauer_all(big_n - low, lambda, c)
                            .into_iter()
                            .zip(norms)
                            .map(|(p, nrm)| nrm * sin_pow * p)
                            .collect();
                        sin_pow *= s;
                        row
                    })
                    .collect()
            })
            .collect();
        Ok(self
            .indices
            .iter()
            .map(|idx| {
                let mu1 = idx.chain[0];
                let mut v = match idx.parity {
                    Parity::Cos => cos_tab[mu1],
                    Parity::Sin => sin_tab[mu1],
                };
                for (j, level) in levels.iter().enumerate() {
                    let low = idx.chain[j];
                    let high = idx.chain[j + 1];
                    v *= level[low][high - low];
                }
                v
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Counting homogeneous harmonic polynomials: C(n+d-1, n) - C(n+d-3, n-2).
    fn dim_oracle(d: usize, n: usize) -> u64 {
        let b = |a: usize, k: usize| binomial(a as u128, k as u128).unwrap() as u64;
        let total = b(n + d - 1, n);
        if n >= 2 {
            total - b(n + d - 3, n - 2)
        } else {
            total
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(harmonic_dim(3, 2).unwrap(), 5);
        assert_eq!(harmonic_dim(2, 7).unwrap(), 2);
        assert_eq!(harmonic_dim(4, 2).unwrap(), 9);
        assert_eq!(harmonic_dim(5, 3).unwrap(), 30);
        assert!(harmonic_dim(1, 2).is_err());
    }

    #[test]
    fn dimension_consistency() {
        for d in 2..=8 {
            for n in 0..=12 {
                let dim = harmonic_dim(d, n).unwrap();
                assert_eq!(dim, dim_oracle(d, n), "d={d} n={n}");
                assert_eq!(enumerate_indices(d, n).unwrap().len() as u64, dim);
            }
        }
    }

    #[test]
    fn dimension_overflow_is_reported() {
        assert!(matches!(harmonic_dim(200, 200), Err(Error::Overflow(_))));
    }

    #[test]
    fn enumeration_order() {
        let idx = enumerate_indices(2, 0).unwrap();
        assert_eq!(idx.len(), 1);
        let idx = enumerate_indices(2, 3).unwrap();
        assert_eq!(
            idx.iter().map(|i| i.parity()).collect::<Vec<_>>(),
            vec![Parity::Cos, Parity::Sin]
        );

        // d = 4, n = 1: chains (0,0,1), (0,1,1)+, (1,1,1)+, (1,1,1)-, ordered by μ_2 then μ_1
        let idx = enumerate_indices(4, 1).unwrap();
        let labels: Vec<_> = idx
            .iter()
            .map(|i| (i.chain().to_vec(), i.parity()))
            .collect();
        assert_eq!(
            labels,
            vec![
                (vec![0, 0, 1], Parity::Cos),
                (vec![0, 1, 1], Parity::Cos),
                (vec![1, 1, 1], Parity::Cos),
                (vec![1, 1, 1], Parity::Sin),
            ]
        );
        assert_eq!(enumerate_indices(5, 3).unwrap().len(), 30);
        assert_eq!(harmonic_dim(5, 3).unwrap(), 30);
    }

    #[test]
    fn flat_and_chain_round_trip() {
        for d in 2..=5 {
            for n in 0..=4 {
                for idx in enumerate_indices(d, n).unwrap() {
                    assert_eq!(HarmonicIndex::from_flat(d, n, idx.m()).unwrap(), idx);
                    assert_eq!(
                        HarmonicIndex::from_chain(idx.chain().to_vec(), idx.parity()).unwrap(),
                        idx
                    );
                }
            }
        }
        assert!(HarmonicIndex::from_flat(3, 1, 4).is_err());
        assert!(HarmonicIndex::from_chain(vec![2, 1], Parity::Cos).is_err());
    }

    #[test]
    fn constant_and_circle_harmonics() {
        for d in 2..=6 {
            let y0 = HarmonicIndex::from_flat(d, 0, 1).unwrap();
            let omega = crate::specfun::hyper_j_at_origin(d).unwrap();
            let theta = vec![0.3; d - 1];
            assert!((eval_harmonic(&y0, &theta).unwrap() - 1.0 / omega.sqrt()).abs() < 1e-15);
        }
        let cos1 = HarmonicIndex::from_flat(2, 1, 1).unwrap();
        assert!((eval_harmonic(&cos1, &[0.0]).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn degree_one_in_three_dimensions() {
        // √(3/(4π)) {x_3, x_2, x_1} for m = 1, 2, 3
        let c = (3.0 / (4.0 * PI)).sqrt();
        let theta = [1.1, 0.7];
        let x = crate::sphere::PolarPoint::unit(theta.to_vec())
            .unwrap()
            .to_cartesian();
        let want = [c * x.x()[2], c * x.x()[1], c * x.x()[0]];
        for (m, w) in (1..=3).zip(want) {
            let idx = HarmonicIndex::from_flat(3, 1, m).unwrap();
            assert!(
                (eval_harmonic(&idx, &theta).unwrap() - w).abs() < 1e-15,
                "m={m}"
            );
        }
    }

    #[test]
    fn basis_matches_single_evaluation() {
        for d in 2..=6 {
            let basis = HarmonicBasis::new(d, 5).unwrap();
            let theta: Vec<f64> = (0..d - 1).map(|i| 0.4 + 0.37 * i as f64).collect();
            let all = basis.eval_all(&theta).unwrap();
            for (idx, v) in basis.indices().iter().zip(&all) {
                let single = eval_harmonic(idx, &theta).unwrap();
                assert!((single - v).abs() < 1e-13 * single.abs().max(1.0));
            }
            for n in 0..=5 {
                assert_eq!(
                    basis.degree_range(n).len() as u64,
                    harmonic_dim(d, n).unwrap()
                );
            }
        }
    }

    #[test]
    fn wrong_angle_count() {
        let idx = HarmonicIndex::from_flat(3, 1, 1).unwrap();
        assert!(eval_harmonic(&idx, &[0.1]).is_err());
        assert!(HarmonicBasis::new(3, 2)
            .unwrap()
            .eval_all(&[0.1, 0.2, 0.3])
            .is_err());
    }
}
