use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Uniformly distributed unit vector in `ℝ^d` (normalized Gaussian).
pub fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Point uniformly distributed (by volume) in the ball of the given radius.
pub fn in_ball<R: Rng>(rng: &mut R, d: usize, radius: f64) -> Vec<f64> {
    let u: f64 = rng.random();
    let scale = radius * u.powf(1.0 / d as f64);
    unit_vector(rng, d).into_iter().map(|x| x * scale).collect()
}
