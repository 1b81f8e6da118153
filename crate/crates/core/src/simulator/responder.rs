use rand::Rng;

use super::beam::{beam_allocate, BeamConfig};
use super::random::{random_response, RandomResponderKind};
use super::utility::{maximize_linear_budget, UtilitySpec};
use crate::Result;

/// A black box mapping one probe to one response.
pub trait Responder {
    fn respond<R: Rng + ?Sized>(&self, alpha: &[f64], rng: &mut R) -> Result<Vec<f64>>;

    fn respond_all<R: Rng + ?Sized>(&self, probes: &[Vec<f64>], rng: &mut R) -> Result<Vec<Vec<f64>>> {
        probes.iter().map(|a| self.respond(a, rng)).collect()
    }
}

/// Utility maximizer under the linear budget `α'β <= pbar`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMaximizer {
    pub utility: UtilitySpec,
    pub pbar: f64,
}

impl Responder for LinearMaximizer {
    fn respond<R: Rng + ?Sized>(&self, alpha: &[f64], _rng: &mut R) -> Result<Vec<f64>> {
        if alpha.len() >= 2 {
            beam_allocate(&self.utility, alpha, &BeamConfig::new(alpha.len(), self.pbar)?)
        } else {
            maximize_linear_budget(&self.utility, alpha, self.pbar)
        }
    }
}

/// Non-cognitive responder drawing fresh randomness every epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomResponder {
    pub kind: RandomResponderKind,
    pub pbar: f64,
}

impl Responder for RandomResponder {
    fn respond<R: Rng + ?Sized>(&self, alpha: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        random_response(self.kind, alpha, self.pbar, rng)
    }
}
