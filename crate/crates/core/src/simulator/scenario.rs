use rand::Rng;
use serde::{Deserialize, Serialize};

use super::beam::{beam_allocate, BeamConfig};
use super::nonlinear::{maximize_nonlinear_budget, RiccatiBudget};
use super::random::{random_response, RandomResponderKind};
use super::utility::{maximize_linear_budget, UtilitySpec};
use crate::revealed::ProbeResponseDataset;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    LinearWaveform,
    NonlinearWaveform,
    Beam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponderKind {
    Cognitive,
    UniformSimplex,
    RandomCobbDouglas,
    RandomShares,
}

impl ResponderKind {
    pub fn random_kind(self) -> Option<RandomResponderKind> {
        match self {
            Self::Cognitive => None,
            Self::UniformSimplex => Some(RandomResponderKind::UniformSimplex),
            Self::RandomCobbDouglas => Some(RandomResponderKind::RandomCobbDouglas),
            Self::RandomShares => Some(RandomResponderKind::RandomShares),
        }
    }
}

/// Everything needed to generate one synthetic dataset apart from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub epochs: usize,
    pub m: usize,
    pub responder: ResponderKind,
    pub utility: UtilitySpec,
    #[serde(default = "one")]
    pub pbar: f64,
    /// Probe entries are drawn from `U(lo, hi)`.
    pub probe_range: [f64; 2],
    /// Used by the nonlinear-waveform scenario only.
    #[serde(default)]
    pub riccati: Option<RiccatiBudget>,
}

fn one() -> f64 {
    1.0
}

/// Upper bound on probe redraws in the nonlinear scenario.
pub const PROBE_RESAMPLE_CAP: usize = 10_000;

impl ScenarioConfig {
    pub fn defaults(scenario: ScenarioKind) -> Self {
        match scenario {
            ScenarioKind::LinearWaveform => Self {
                scenario,
                epochs: 50,
                m: 2,
                responder: ResponderKind::Cognitive,
                utility: UtilitySpec::determinant(),
                pbar: 1.0,
                probe_range: [0.1, 1.1],
                riccati: None,
            },
            ScenarioKind::NonlinearWaveform => Self {
                scenario,
                epochs: 50,
                m: 2,
                responder: ResponderKind::Cognitive,
                utility: UtilitySpec::determinant(),
                pbar: 1.0,
                probe_range: [0.1, 1.1],
                riccati: Some(RiccatiBudget::default()),
            },
            ScenarioKind::Beam => Self {
                scenario,
                epochs: 20,
                m: 3,
                responder: ResponderKind::Cognitive,
                utility: UtilitySpec::cobb_douglas(vec![0.5, 1.0, 2.0]),
                pbar: 1.0,
                probe_range: [0.0, 0.05],
                riccati: None,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.m == 0 {
            return Err(Error::InvalidInput("epochs and m must be positive".into()));
        }
        let [lo, hi] = self.probe_range;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidInput(format!("probe range [{lo}, {hi}] must satisfy 0 <= lo < hi")));
        }
        if !(self.pbar > 0.0 && self.pbar.is_finite()) {
            return Err(Error::InvalidInput(format!("budget must be positive, got {}", self.pbar)));
        }
        if self.responder == ResponderKind::Cognitive {
            self.utility.validate(self.m)?;
        }
        match self.scenario {
            ScenarioKind::Beam => {
                BeamConfig::new(self.m, self.pbar)?;
            }
            ScenarioKind::NonlinearWaveform => {
                let r = self.riccati_budget()?;
                r.validate()?;
                if r.state_dim() != self.m || r.response_dim() != self.m {
                    return Err(Error::Dimension(format!("Riccati model is not {0}x{0}", self.m)));
                }
                if self.responder != ResponderKind::Cognitive {
                    return Err(Error::InvalidInput(
                        "the nonlinear-waveform scenario requires a cognitive responder".into(),
                    ));
                }
            }
            ScenarioKind::LinearWaveform => {}
        }
        Ok(())
    }

    pub fn riccati_budget(&self) -> Result<RiccatiBudget> {
        self.riccati
            .clone()
            .ok_or_else(|| Error::InvalidInput("nonlinear-waveform scenario needs a [riccati] table".into()))
    }

    fn draw_probe<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let [lo, hi] = self.probe_range;
        (0..self.m)
            .map(|_| loop {
                let a = rng.random_range(lo..hi);
                if a > 0.0 {
                    break a;
                }
            })
            .collect()
    }

    /// Draws a probe for which the eigenvalue constraint can bind: the zero
    /// response is strictly feasible and the upper corner is not.
    fn draw_nonlinear_probe<R: Rng + ?Sized>(&self, budget: &RiccatiBudget, rng: &mut R) -> Result<Vec<f64>> {
        for _ in 0..PROBE_RESAMPLE_CAP {
            let alpha = self.draw_probe(rng);
            let floor = budget.spectral_load(&alpha, &vec![0.0; self.m])?;
            if floor < budget.lambda_bar && budget.activity_ceiling(&alpha)? >= budget.lambda_bar {
                return Ok(alpha);
            }
        }
        Err(Error::ResampleCapExceeded { attempts: PROBE_RESAMPLE_CAP })
    }
}

/// One synthetic interrogation: probes drawn per the scenario, responses
/// from the configured responder.
pub fn generate_dataset<R: Rng + ?Sized>(cfg: &ScenarioConfig, rng: &mut R) -> Result<ProbeResponseDataset> {
    cfg.validate()?;
    let budget = match cfg.scenario {
        ScenarioKind::NonlinearWaveform => Some(cfg.riccati_budget()?),
        _ => None,
    };
    let mut probes = Vec::with_capacity(cfg.epochs);
    let mut responses = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        let alpha = match &budget {
            Some(b) => cfg.draw_nonlinear_probe(b, rng)?,
            None => cfg.draw_probe(rng),
        };
        let beta = match (cfg.responder.random_kind(), cfg.scenario) {
            (Some(kind), _) => random_response(kind, &alpha, cfg.pbar, rng)?,
            (None, ScenarioKind::LinearWaveform) => maximize_linear_budget(&cfg.utility, &alpha, cfg.pbar)?,
            (None, ScenarioKind::Beam) => beam_allocate(&cfg.utility, &alpha, &BeamConfig::new(cfg.m, cfg.pbar)?)?,
            (None, ScenarioKind::NonlinearWaveform) => {
                maximize_nonlinear_budget(&cfg.utility, &alpha, budget.as_ref().expect("checked above"))?
            }
        };
        probes.push(alpha);
        responses.push(beta);
    }
    ProbeResponseDataset::new(probes, responses)
}
