use super::utility::{maximize_linear_budget, UtilitySpec};
use crate::tracker::Matrix;
use crate::{Error, Result};

/// `m` targets sharing an average-precision budget `pbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamConfig {
    pub m: usize,
    pub pbar: f64,
}

impl BeamConfig {
    pub fn new(m: usize, pbar: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("beam allocation needs at least 2 targets, got {m}")));
        }
        if !(pbar > 0.0 && pbar.is_finite()) {
            return Err(Error::InvalidInput(format!("budget must be positive, got {pbar}")));
        }
        Ok(Self { m, pbar })
    }
}

/// Dwell allocation maximizing `u` subject to `β'α <= pbar`. Logs a warning
/// when the allocation exceeds the unit total dwell time, which the program
/// itself does not enforce.
pub fn beam_allocate(u: &UtilitySpec, alpha: &[f64], cfg: &BeamConfig) -> Result<Vec<f64>> {
    if alpha.len() != cfg.m {
        return Err(Error::Dimension(format!("{} probe entries for {} targets", alpha.len(), cfg.m)));
    }
    let beta = maximize_linear_budget(u, alpha, cfg.pbar)?;
    let total: f64 = beta.iter().sum();
    if total > 1.0 {
        log::warn!("beam allocation sums to {total:.4} > 1");
    }
    Ok(beta)
}

/// `α(i) = trace(Σ_{n|n−1}(i)⁻¹)`, the predicted precision of each target.
pub fn predicted_precision_probe(predicted: &[Matrix]) -> Result<Vec<f64>> {
    predicted
        .iter()
        .enumerate()
        .map(|(i, sigma)| {
            let inv = sigma
                .clone()
                .cholesky()
                .ok_or_else(|| Error::Singular(format!("predicted covariance of target {} is not positive definite", i + 1)))?
                .inverse();
            Ok(inv.trace())
        })
        .collect()
}
