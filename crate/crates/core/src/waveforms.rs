//! Observation-noise covariance `R` for the supported pulse families, in
//! (range, range-rate) coordinates.

use serde::{Deserialize, Serialize};

use crate::tracker::{Matrix, Vector};
use crate::{Error, Result};

pub const DEFAULT_C: f64 = 3e8;
pub const DEFAULT_FC: f64 = 1e9;
pub const DEFAULT_ETA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformFamily {
    TriangularCw,
    GaussianCw,
    GaussianLfmChirp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformSpec {
    pub family: WaveformFamily,
    /// Pulse-length parameter in seconds.
    pub lambda: f64,
    /// Chirp rate in 1/s²; ignored by the CW families.
    #[serde(default)]
    pub b: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_fc")]
    pub fc: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
}

fn default_c() -> f64 {
    DEFAULT_C
}
fn default_fc() -> f64 {
    DEFAULT_FC
}
fn default_eta() -> f64 {
    DEFAULT_ETA
}

impl WaveformSpec {
    pub fn new(family: WaveformFamily, lambda: f64) -> Self {
        Self { family, lambda, b: 0.0, c: DEFAULT_C, fc: DEFAULT_FC, eta: DEFAULT_ETA }
    }

    pub fn with_constants(mut self, c: f64, fc: f64, eta: f64) -> Self {
        self.c = c;
        self.fc = fc;
        self.eta = eta;
        self
    }

    pub fn with_chirp_rate(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda", self.lambda), ("c", self.c), ("fc", self.fc), ("eta", self.eta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("waveform {name} must be positive, got {v}")));
            }
        }
        if !self.b.is_finite() {
            return Err(Error::InvalidInput(format!("chirp rate must be finite, got {}", self.b)));
        }
        Ok(())
    }
}

pub fn obs_noise_cov(spec: &WaveformSpec) -> Result<Matrix> {
    spec.validate()?;
    let WaveformSpec { lambda: l, b, c, fc, eta, .. } = *spec;
    let (c2, l2) = (c * c, l * l);
    let (r11, r12, r22) = match spec.family {
        WaveformFamily::TriangularCw => (c2 * l2 / (12.0 * eta), 0.0, 5.0 * c2 / (2.0 * fc * fc * l2 * eta)),
        WaveformFamily::GaussianCw => (c2 * l2 / (2.0 * eta), 0.0, c2 / (2.0 * fc * fc * l2 * eta)),
        WaveformFamily::GaussianLfmChirp => (
            c2 * l2 / (2.0 * eta),
            -c2 * b * l2 / (fc * eta),
            c2 / (fc * fc * eta) * (1.0 / (2.0 * l2) + 2.0 * b * b * l2),
        ),
    };
    Ok(Matrix::from_row_slice(2, 2, &[r11, r12, r12, r22]))
}

/// `diag(β)`: the covariance whose spectrum is the requested response.
pub fn cov_from_eigenvalues(beta: &[f64]) -> Result<Matrix> {
    if beta.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
        return Err(Error::InvalidInput(format!("eigenvalues must be nonnegative: {beta:?}")));
    }
    Ok(Matrix::from_diagonal(&Vector::from_row_slice(beta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_constants() {
        let tri = obs_noise_cov(&WaveformSpec::new(WaveformFamily::TriangularCw, 1.0).with_constants(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(tri.as_slice(), &[1.0 / 12.0, 0.0, 0.0, 2.5]);
        let g = obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianCw, 1.0).with_constants(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(g.as_slice(), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianCw, 0.0)).is_err());
        assert!(obs_noise_cov(&WaveformSpec::new(WaveformFamily::GaussianCw, 1e-6).with_constants(1.0, 1.0, -1.0)).is_err());
        assert!(cov_from_eigenvalues(&[1.0, -0.1]).is_err());
    }
}
