use rand::Rng;
use serde::{Deserialize, Serialize};

use super::beam::{beam_allocate, BeamConfig};
use super::utility::UtilitySpec;
use crate::Result;

/// Responders that ignore any utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomResponderKind {
    /// i.i.d. `U(0,1)` coordinates, redrawn until they sum to at most 1.
    UniformSimplex,
    /// Cobb-Douglas allocation with fresh random exponents every epoch.
    RandomCobbDouglas,
    /// The normalized random exponents themselves, used as time shares:
    /// i.i.d. across epochs and independent of the probe.
    RandomShares,
}

pub fn uniform_simplex<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let beta: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
        if beta.iter().sum::<f64>() <= 1.0 {
            return beta;
        }
    }
}

/// `U(0,1)` draws normalized to sum to one.
pub fn random_exponents<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.iter().map(|z| z / total).collect()
    } else {
        vec![1.0 / m as f64; m]
    }
}

pub fn random_response<R: Rng + ?Sized>(kind: RandomResponderKind, alpha: &[f64], pbar: f64, rng: &mut R) -> Result<Vec<f64>> {
    match kind {
        RandomResponderKind::UniformSimplex => Ok(uniform_simplex(alpha.len(), rng)),
        RandomResponderKind::RandomCobbDouglas => {
            let zeta = random_exponents(alpha.len(), rng);
            // Exponents of exactly 0 are not a valid Cobb-Douglas utility.
            let zeta = zeta.into_iter().map(|z| z.max(f64::MIN_POSITIVE)).collect();
            beam_allocate(&UtilitySpec::cobb_douglas(zeta), alpha, &BeamConfig { m: alpha.len(), pbar })
        }
        RandomResponderKind::RandomShares => Ok(random_exponents(alpha.len(), rng)),
    }
}
