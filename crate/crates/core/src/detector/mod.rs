//! Detecting a utility maximizer from noisy observations.
//!
//! Noise on the responses (or on the probes) turns exact GARP into a
//! statistical question. The statistic `Φ*` is the smallest uniform slack
//! that makes the data consistent; it is compared to the distribution of
//! the largest cross-cost perturbation `M` that pure noise would produce.

mod cdf;
mod noise;

use std::io::Write;

use rand::Rng;

pub use cdf::EmpiricalCdf;
pub use noise::{NoiseModel, NoiseSampler};

use crate::revealed::{check_cross_cost, format_f64, CrossCostMatrix};
use crate::{Error, Result};

/// Absolute tolerance of the `Φ*` line search.
pub const PHI_TOL: f64 = 1e-9;

/// Default Monte-Carlo sample size for the distribution of `M`.
pub const DEFAULT_CDF_SAMPLES: usize = 1000;

/// `true` when `a + Φ` (off the diagonal) satisfies GARP.
pub fn relaxed_feasible(a: &CrossCostMatrix, phi: f64) -> bool {
    check_cross_cost(&a.relaxed(phi)).consistent
}

/// Smallest `Φ >= 0` for which the relaxed cross costs are consistent, by
/// bisection on `[0, max(0, max −a[t][s])]`. The upper end of the final
/// bracket is returned, so the result is always feasible.
pub fn min_perturbation(a: &CrossCostMatrix) -> f64 {
    let mut hi = a.max_shortfall();
    if relaxed_feasible(a, 0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    while hi - lo > PHI_TOL {
        let mid = 0.5 * (lo + hi);
        if relaxed_feasible(a, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `Φ*` for clean probes and noisy responses.
pub fn min_perturbation_response(probes: &[Vec<f64>], noisy_responses: &[Vec<f64>]) -> Result<f64> {
    Ok(min_perturbation(&CrossCostMatrix::from_vectors(probes, noisy_responses)?))
}

/// `Φ*` for noisy probes and clean responses.
pub fn min_perturbation_probe(noisy_probes: &[Vec<f64>], responses: &[Vec<f64>]) -> Result<f64> {
    Ok(min_perturbation(&CrossCostMatrix::from_vectors(noisy_probes, responses)?))
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `max_{t≠s} α_t'(ε_t − ε_s)`; zero with fewer than two epochs.
pub fn m_response(probes: &[Vec<f64>], eps: &[Vec<f64>]) -> f64 {
    let n = probes.len();
    let mut best = if n < 2 { 0.0 } else { f64::NEG_INFINITY };
    for t in 0..n {
        let own = dot(&probes[t], &eps[t]);
        for s in 0..n {
            if s != t {
                best = best.max(own - dot(&probes[t], &eps[s]));
            }
        }
    }
    best
}

/// `max_{t≠s} ε_t'(β_t − β_s)`; zero with fewer than two epochs.
pub fn m_probe(responses: &[Vec<f64>], eps: &[Vec<f64>]) -> f64 {
    let n = responses.len();
    let mut best = if n < 2 { 0.0 } else { f64::NEG_INFINITY };
    for t in 0..n {
        let own = dot(&eps[t], &responses[t]);
        for s in 0..n {
            if s != t {
                best = best.max(own - dot(&eps[t], &responses[s]));
            }
        }
    }
    best
}

fn check_rows(x: &[Vec<f64>], samples: usize) -> Result<usize> {
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one Monte-Carlo sample".into()));
    }
    let m = x.first().map_or(0, Vec::len);
    if x.iter().any(|row| row.len() != m) {
        return Err(Error::Dimension("rows of unequal length".into()));
    }
    Ok(m)
}

/// Empirical distribution of `M` under response noise, from `samples` draws.
pub fn sample_m_response<N: NoiseSampler, R: Rng + ?Sized>(
    probes: &[Vec<f64>],
    noise: &N,
    samples: usize,
    rng: &mut R,
) -> Result<EmpiricalCdf> {
    let m = check_rows(probes, samples)?;
    let draws = (0..samples).map(|_| m_response(probes, &noise.draws(probes.len(), m, rng))).collect();
    EmpiricalCdf::from_samples(draws)
}

/// Empirical distribution of `M` under probe noise, from `samples` draws.
pub fn sample_m_probe<N: NoiseSampler, R: Rng + ?Sized>(
    responses: &[Vec<f64>],
    noise: &N,
    samples: usize,
    rng: &mut R,
) -> Result<EmpiricalCdf> {
    let m = check_rows(responses, samples)?;
    let draws = (0..samples).map(|_| m_probe(responses, &noise.draws(responses.len(), m, rng))).collect();
    EmpiricalCdf::from_samples(draws)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Consistent with utility maximization (cognitive).
    H0,
    H1,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::H0 => "H0",
            Self::H1 => "H1",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOutcome {
    pub phi_star: f64,
    /// `1 − F̂_M(Φ*)`.
    pub statistic: f64,
    pub decision: Decision,
    pub gamma: f64,
}

/// Accepts H0 iff `1 − F̂_M(Φ*) > γ`.
///
/// Data that are already consistent (`Φ* = 0`) get statistic 1: no amount
/// of noise is needed to explain them, even when the noise is degenerate.
pub fn decide(phi_star: f64, cdf: &EmpiricalCdf, gamma: f64) -> Result<DetectorOutcome> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidInput(format!("significance level must lie in (0, 1), got {gamma}")));
    }
    let statistic = if phi_star == 0.0 { 1.0 } else { 1.0 - cdf.eval(phi_star) };
    let decision = if statistic > gamma { Decision::H0 } else { Decision::H1 };
    Ok(DetectorOutcome { phi_star, statistic, decision, gamma })
}

/// Lower bound on the false-alarm probability for standard normal noise:
/// `1 − Π_t {1 − √(2/π) √(2‖α_t‖²) e^{−Φ²/(4‖α_t‖²)} / (Φ + √(Φ² + 8‖α_t‖²))}`.
pub fn type_i_lower_bound(phi_star: f64, probes: &[Vec<f64>]) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::InvalidInput("empty probe list".into()));
    }
    if !(phi_star >= 0.0) {
        return Err(Error::InvalidInput(format!("Φ* must be nonnegative, got {phi_star}")));
    }
    let c = (2.0 / std::f64::consts::PI).sqrt();
    let phi2 = phi_star * phi_star;
    let mut survive = 1.0;
    for a in probes {
        let n2: f64 = a.iter().map(|x| x * x).sum();
        if n2 == 0.0 {
            continue;
        }
        let tail = c * (2.0 * n2).sqrt() * (-phi2 / (4.0 * n2)).exp() / (phi_star + (phi2 + 8.0 * n2).sqrt());
        survive *= 1.0 - tail;
    }
    Ok(1.0 - survive)
}

/// Where the analyst's observations are corrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoisyChannel {
    Response,
    Probe,
}

impl NoisyChannel {
    /// `Φ*` after perturbing the relevant side of the record.
    pub fn perturbed_phi<N: NoiseSampler, R: Rng + ?Sized>(
        self,
        probes: &[Vec<f64>],
        responses: &[Vec<f64>],
        noise: &N,
        rng: &mut R,
    ) -> Result<f64> {
        match self {
            Self::Response => min_perturbation_response(probes, &noise.perturb(responses, rng)),
            Self::Probe => min_perturbation_probe(&noise.perturb(probes, rng), responses),
        }
    }

    /// Distribution of `M` for this channel.
    pub fn sample_m<N: NoiseSampler, R: Rng + ?Sized>(
        self,
        probes: &[Vec<f64>],
        responses: &[Vec<f64>],
        noise: &N,
        samples: usize,
        rng: &mut R,
    ) -> Result<EmpiricalCdf> {
        match self {
            Self::Response => sample_m_response(probes, noise, samples, rng),
            Self::Probe => sample_m_probe(responses, noise, samples, rng),
        }
    }
}

/// One row of a detector report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub trial: usize,
    pub outcome: DetectorOutcome,
    pub sigma: f64,
    pub seed: u64,
}

pub const REPORT_HEADER: [&str; 7] = ["trial", "phi_star", "statistic", "decision", "sigma", "gamma", "seed"];

pub fn write_report<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            format_f64(r.outcome.phi_star),
            format_f64(r.outcome.statistic),
            r.outcome.decision.to_string(),
            format_f64(r.sigma),
            format_f64(r.outcome.gamma),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_epoch_violation_needs_unit_slack() {
        let a = CrossCostMatrix::from_fn(2, |_, _| -1.0);
        let phi = min_perturbation(&a);
        assert!((phi - 1.0).abs() <= 2.0 * PHI_TOL, "{phi}");
    }

    #[test]
    fn consistent_data_need_no_slack() {
        let a = CrossCostMatrix::from_fn(3, |t, s| (s as f64 - t as f64).abs());
        assert_eq!(min_perturbation(&a), 0.0);
    }

    #[test]
    fn m_statistics_with_one_epoch() {
        assert_eq!(m_response(&[vec![1.0]], &[vec![5.0]]), 0.0);
        assert_eq!(m_probe(&[vec![1.0]], &[vec![5.0]]), 0.0);
    }

    #[test]
    fn m_response_two_epochs() {
        let m = m_response(&[vec![1.0], vec![1.0]], &[vec![0.5], vec![-0.25]]);
        assert_eq!(m, 0.75);
    }

    #[test]
    fn decisions() {
        let cdf = EmpiricalCdf::from_samples(vec![0.0; 10]).unwrap();
        assert_eq!(decide(0.0, &cdf, 0.05).unwrap().decision, Decision::H0);
        assert_eq!(decide(0.5, &cdf, 0.05).unwrap().statistic, 0.0);
        assert_eq!(decide(0.5, &cdf, 0.05).unwrap().decision, Decision::H1);
        assert!(decide(0.5, &cdf, 1.0).is_err());
    }

    #[test]
    fn bound_at_zero_slack() {
        let b = type_i_lower_bound(0.0, &[vec![3.0, 4.0]]).unwrap();
        assert!((b - (2.0 / std::f64::consts::PI).sqrt() / 2.0).abs() < 1e-15);
        assert!(type_i_lower_bound(1.0, &[]).is_err());
        assert!(type_i_lower_bound(1e3, &[vec![1.0]]).unwrap() < 1e-12);
    }

    #[test]
    fn report_layout() {
        let outcome = DetectorOutcome { phi_star: 0.5, statistic: 0.25, decision: Decision::H1, gamma: 0.05 };
        let mut buf = Vec::new();
        write_report(&[ReportRow { trial: 1, outcome, sigma: 0.1, seed: 42 }], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("trial,phi_star,statistic,decision,sigma,gamma,seed"));
        assert!(lines.next().unwrap().starts_with("1,5.0000000000000000e-1,"));
    }
}
