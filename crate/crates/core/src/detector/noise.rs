use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Source of i.i.d. additive perturbations.
pub trait NoiseSampler {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64;

    /// Standard deviation of one draw.
    fn sigma(&self) -> f64;

    fn perturb<R: Rng + ?Sized>(&self, x: &[Vec<f64>], rng: &mut R) -> Vec<Vec<f64>> {
        x.iter().map(|row| row.iter().map(|v| v + self.draw(rng)).collect()).collect()
    }

    fn draws<R: Rng + ?Sized>(&self, n: usize, m: usize, rng: &mut R) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..m).map(|_| self.draw(rng)).collect()).collect()
    }
}

/// Zero-mean Gaussian noise with standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    sigma: f64,
}

impl NoiseModel {
    pub fn gaussian(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidInput(format!("noise standard deviation must be >= 0, got {sigma}")));
        }
        Ok(Self { sigma })
    }
}

impl NoiseSampler for NoiseModel {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        self.sigma * z
    }

    fn sigma(&self) -> f64 {
        self.sigma
    }
}
