//! Experiment configuration file (TOML). Every table is optional; missing
//! keys fall back to the library defaults, unknown keys are errors.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cogradar::detector::{NoisyChannel, DEFAULT_CDF_SAMPLES};
use cogradar::probe_opt::SpsaConfig;
use cogradar::simulator::{
    RandomResponderKind, ResponderKind, RiccatiBudget, ScenarioConfig, ScenarioKind, UtilitySpec,
};

use crate::CliError;

#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub simulate: ScenarioSection,
    #[serde(default)]
    pub test: TestSection,
    #[serde(default)]
    pub detect: DetectSection,
    #[serde(default)]
    pub spsa: SpsaSection,
}

/// Overrides on top of a scenario's defaults.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub scenario: Option<ScenarioKind>,
    pub epochs: Option<usize>,
    pub m: Option<usize>,
    pub responder: Option<ResponderKind>,
    pub utility: Option<UtilitySpec>,
    pub pbar: Option<f64>,
    pub probe_range: Option<[f64; 2]>,
    pub riccati: Option<RiccatiBudget>,
}

impl ScenarioSection {
    pub fn resolve(&self, fallback: ScenarioKind) -> ScenarioConfig {
        let d = ScenarioConfig::defaults(self.scenario.unwrap_or(fallback));
        ScenarioConfig {
            scenario: d.scenario,
            epochs: self.epochs.unwrap_or(d.epochs),
            m: self.m.unwrap_or(d.m),
            responder: self.responder.unwrap_or(d.responder),
            utility: self.utility.clone().unwrap_or(d.utility),
            pbar: self.pbar.unwrap_or(d.pbar),
            probe_range: self.probe_range.unwrap_or(d.probe_range),
            riccati: self.riccati.clone().or(d.riccati),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetKind {
    #[default]
    Linear,
    /// The eigenvalue budget of the `[test.riccati]` table.
    Riccati,
}

/// Axis of the utility contour grid: `[lo, hi]` with `points` samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub beta1: [f64; 2],
    pub beta2: [f64; 2],
    #[serde(default = "default_grid_points")]
    pub points: usize,
}

fn default_grid_points() -> usize {
    41
}

#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestSection {
    #[serde(default)]
    pub budget: BudgetKind,
    pub riccati: Option<RiccatiBudget>,
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    #[default]
    Response,
    Probe,
}

impl From<Channel> for NoisyChannel {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Response => NoisyChannel::Response,
            Channel::Probe => NoisyChannel::Probe,
        }
    }
}

#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectSection {
    /// Scenario for both responders; the beam scenario by default.
    #[serde(default)]
    pub scenario: ScenarioSection,
    pub random_responder: Option<RandomResponderKind>,
    pub channel: Option<Channel>,
    pub trials: Option<usize>,
    pub cdf_samples: Option<usize>,
    pub sigma_grid: Option<Vec<f64>>,
    pub gamma: Option<f64>,
}

/// Fully resolved detector sweep.
#[derive(Debug, Clone, Serialize)]
pub struct DetectParams {
    pub scenario: ScenarioConfig,
    pub random_responder: RandomResponderKind,
    pub channel: Channel,
    pub trials: usize,
    pub cdf_samples: usize,
    pub sigma_grid: Vec<f64>,
    pub gamma: f64,
}

impl DetectSection {
    pub fn resolve(&self) -> DetectParams {
        DetectParams {
            scenario: self.scenario.resolve(ScenarioKind::Beam),
            random_responder: self.random_responder.unwrap_or(RandomResponderKind::UniformSimplex),
            channel: self.channel.unwrap_or_default(),
            trials: self.trials.unwrap_or(100),
            cdf_samples: self.cdf_samples.unwrap_or(DEFAULT_CDF_SAMPLES),
            sigma_grid: self.sigma_grid.clone().unwrap_or_else(|| vec![0.0, 0.01, 0.05, 0.1, 0.2]),
            gamma: self.gamma.unwrap_or(0.05),
        }
    }
}

#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpsaSection {
    pub iterations: Option<usize>,
    pub trials: Option<usize>,
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    pub mu0: Option<f64>,
    pub cdf_samples: Option<usize>,
    pub common_random_numbers: Option<bool>,
    pub resample_cap: Option<usize>,
    pub sigma: Option<f64>,
    pub responder: Option<RandomResponderKind>,
    pub m: Option<usize>,
    pub epochs: Option<usize>,
    pub probe_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpsaParams {
    pub iterations: usize,
    pub trials: usize,
    pub gamma: f64,
    pub omega: f64,
    pub mu0: f64,
    pub cdf_samples: usize,
    pub common_random_numbers: bool,
    pub resample_cap: usize,
    pub sigma: f64,
    pub responder: RandomResponderKind,
    pub m: usize,
    pub epochs: usize,
    pub probe_range: [f64; 2],
}

impl SpsaSection {
    pub fn resolve(&self) -> SpsaParams {
        let d = SpsaConfig::default();
        SpsaParams {
            iterations: self.iterations.unwrap_or(d.iterations),
            trials: self.trials.unwrap_or(d.trials),
            gamma: self.gamma.unwrap_or(d.gamma),
            omega: self.omega.unwrap_or(d.omega),
            mu0: self.mu0.unwrap_or(d.mu0),
            cdf_samples: self.cdf_samples.unwrap_or(d.cdf_samples),
            common_random_numbers: self.common_random_numbers.unwrap_or(d.common_random_numbers),
            resample_cap: self.resample_cap.unwrap_or(d.resample_cap),
            sigma: self.sigma.unwrap_or(0.1),
            responder: self.responder.unwrap_or(RandomResponderKind::RandomShares),
            m: self.m.unwrap_or(3),
            epochs: self.epochs.unwrap_or(20),
            probe_range: self.probe_range.unwrap_or([0.0, 0.05]),
        }
    }
}

impl SpsaParams {
    pub fn spsa_config(&self, seed: u64) -> SpsaConfig {
        SpsaConfig {
            iterations: self.iterations,
            trials: self.trials,
            gamma: self.gamma,
            omega: self.omega,
            mu0: self.mu0,
            cdf_samples: self.cdf_samples,
            common_random_numbers: self.common_random_numbers,
            resample_cap: self.resample_cap,
            log_cost: true,
            seed,
        }
    }
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn parse(text: &str, origin: &str) -> Result<ExperimentConfig, CliError> {
    toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(1);
        CliError::Config(format!("{origin}:{line}: {}", e.message()))
    })
}

pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_report_their_line() {
        let text = "seed = 3\n\n[spsa]\niterations = 5\nomgea = 0.1\n";
        match parse(text, "cfg.toml") {
            Err(CliError::Config(msg)) => assert!(msg.starts_with("cfg.toml:5:"), "{msg}"),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = parse("", "x").unwrap();
        assert_eq!(cfg.spsa.resolve().iterations, 200);
        assert_eq!(cfg.detect.resolve().scenario.scenario, ScenarioKind::Beam);
        assert_eq!(cfg.simulate.resolve(ScenarioKind::LinearWaveform).epochs, 50);
    }

    #[test]
    fn nested_tables() {
        let text = "[simulate]\nscenario = \"beam\"\nepochs = 7\nutility = { kind = \"cobb_douglas\", exponents = [0.2, 0.3, 0.5] }\n\n[detect.scenario]\nm = 3\n";
        let cfg = parse(text, "x").unwrap();
        let sim = cfg.simulate.resolve(ScenarioKind::LinearWaveform);
        assert_eq!((sim.scenario, sim.epochs), (ScenarioKind::Beam, 7));
        assert_eq!(sim.utility, UtilitySpec::cobb_douglas(vec![0.2, 0.3, 0.5]));
    }
}
