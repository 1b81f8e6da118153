//! SPSA search over the probe matrix to minimize the detector's empirical
//! Type-II error against a non-cognitive responder.

use std::io::Write;

use rand::Rng;

use crate::detector::{decide, min_perturbation_response, sample_m_response, Decision, EmpiricalCdf, NoiseSampler};
use crate::revealed::{check_cross_cost, format_f64, CrossCostMatrix};
use crate::seeds::{rng_for, split};
use crate::simulator::Responder;
use crate::{Error, Result};

/// Entries of a probe matrix are kept at or above this floor.
pub const POSITIVITY_FLOOR: f64 = 1e-6;

/// `m × N` probe matrix stored by epoch: `columns[n]` is `α_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeMatrix {
    columns: Vec<Vec<f64>>,
}

impl ProbeMatrix {
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self> {
        let m = columns.first().map_or(0, Vec::len);
        if m == 0 || columns.iter().any(|c| c.len() != m) {
            return Err(Error::Dimension("probe matrix columns must be nonempty and of equal length".into()));
        }
        if columns.iter().flatten().any(|a| !(*a >= POSITIVITY_FLOOR && a.is_finite())) {
            return Err(Error::InvalidInput(format!("probe entries must be >= {POSITIVITY_FLOOR:e}")));
        }
        Ok(Self { columns })
    }

    /// Entries drawn from `U(lo, hi)`, redrawing any below the floor.
    pub fn random<R: Rng + ?Sized>(m: usize, n: usize, lo: f64, hi: f64, rng: &mut R) -> Result<Self> {
        if !(hi > lo && hi > POSITIVITY_FLOOR) {
            return Err(Error::InvalidInput(format!("bad probe range [{lo}, {hi}]")));
        }
        let columns = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| loop {
                        let a = rng.random_range(lo..hi);
                        if a >= POSITIVITY_FLOOR {
                            break a;
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(columns)
    }

    pub fn m(&self) -> usize {
        self.columns[0].len()
    }

    pub fn epochs(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// Column-major flattening: `α_1(1..m), α_2(1..m), …`.
    pub fn flatten(&self) -> Vec<f64> {
        self.columns.concat()
    }

    /// Inverse of [`flatten`](Self::flatten), clamping entries to the floor.
    pub fn from_flat_projected(flat: &[f64], m: usize) -> Result<Self> {
        if m == 0 || flat.len() % m != 0 {
            return Err(Error::Dimension(format!("{} entries do not form columns of {m}", flat.len())));
        }
        Self::new(
            flat.chunks(m)
                .map(|c| c.iter().map(|a| if a.is_nan() { POSITIVITY_FLOOR } else { a.max(POSITIVITY_FLOOR) }).collect())
                .collect(),
        )
    }
}

/// SPSA settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SpsaConfig {
    pub iterations: usize,
    /// Trials per cost estimate.
    pub trials: usize,
    pub gamma: f64,
    /// Perturbation size `ω`.
    pub omega: f64,
    /// `μ_k = mu0 / k`.
    pub mu0: f64,
    /// Monte-Carlo samples for the distribution of `M`.
    pub cdf_samples: usize,
    /// Evaluate both perturbed costs with the same random numbers.
    pub common_random_numbers: bool,
    /// Cap on redraws per trial while the responder's clean data are consistent.
    pub resample_cap: usize,
    /// Spend one extra cost evaluation per iteration to log `Ĵ` at the iterate.
    pub log_cost: bool,
    pub seed: u64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            iterations: 200,
            trials: 100,
            gamma: 0.05,
            omega: 0.005,
            mu0: 0.005,
            cdf_samples: 1000,
            common_random_numbers: true,
            resample_cap: 1000,
            log_cost: true,
            seed: 0,
        }
    }
}

impl SpsaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !(self.mu0 >= 0.0) || self.trials == 0 || self.cdf_samples == 0 || self.resample_cap == 0 {
            return Err(Error::InvalidInput(
                "need omega > 0, mu0 >= 0, and positive trials, cdf_samples and resample_cap".into(),
            ));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidInput(format!("significance level must lie in (0, 1), got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn step_size(&self, k: usize) -> f64 {
        self.mu0 / k as f64
    }
}

/// Clean responses to `probe` that violate GARP, redrawn up to `cap` times.
pub fn draw_inconsistent<P: Responder, R: Rng + ?Sized>(
    probe: &ProbeMatrix,
    responder: &P,
    cap: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    for _ in 0..cap {
        let responses = responder.respond_all(probe.columns(), rng)?;
        let a = CrossCostMatrix::from_vectors(probe.columns(), &responses)?;
        if !check_cross_cost(&a).consistent {
            return Ok(responses);
        }
    }
    Err(Error::ResampleCapExceeded { attempts: cap })
}

/// Fraction of `trials` noisy interrogations of a GARP-violating responder
/// that the detector nonetheless accepts as cognitive. The random stream of
/// trial `s` is `rng_for(seed, [s])`.
pub fn estimate_type_ii<P: Responder, N: NoiseSampler>(
    probe: &ProbeMatrix,
    responder: &P,
    noise: &N,
    cdf: &EmpiricalCdf,
    trials: usize,
    gamma: f64,
    resample_cap: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let mut accepted = 0usize;
    for s in 0..trials {
        let mut rng = rng_for(seed, &[s as u64]);
        let clean = draw_inconsistent(probe, responder, resample_cap, &mut rng)?;
        let noisy = noise.perturb(&clean, &mut rng);
        let phi = min_perturbation_response(probe.columns(), &noisy)?;
        if decide(phi, cdf, gamma)?.decision == Decision::H0 {
            accepted += 1;
        }
    }
    Ok(accepted as f64 / trials as f64)
}

/// `Ĵ` at `probe` with a freshly sampled distribution of `M`, all drawn from `seed`.
pub fn evaluate_cost<P: Responder, N: NoiseSampler>(
    probe: &ProbeMatrix,
    responder: &P,
    noise: &N,
    cfg: &SpsaConfig,
    seed: u64,
) -> Result<f64> {
    let cdf = sample_m_response(probe.columns(), noise, cfg.cdf_samples, &mut rng_for(seed, &[0]))?;
    estimate_type_ii(probe, responder, noise, &cdf, cfg.trials, cfg.gamma, cfg.resample_cap, split(seed, &[1]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub iter: usize,
    /// `Ĵ` at `probe`, or NaN when logging is off.
    pub j_hat: f64,
    pub probe: ProbeMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpsaRun {
    pub initial_probe: ProbeMatrix,
    /// `Ĵ` at the initial probe (NaN when logging is off).
    pub initial_j: f64,
    /// One row per iteration, holding the iterate after that update.
    pub rows: Vec<TrajectoryRow>,
    /// Cost evaluations spent on gradient estimates.
    pub gradient_evaluations: usize,
}

impl SpsaRun {
    pub fn final_probe(&self) -> Option<&ProbeMatrix> {
        self.rows.last().map(|r| &r.probe)
    }

    pub fn final_j(&self) -> f64 {
        self.rows.last().map_or(self.initial_j, |r| r.j_hat)
    }

    /// Header `iter,J_hat,alpha_<i>_<n>…` (column-major), then one row per
    /// iteration. The initial probe is not a row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["iter".to_string(), "J_hat".to_string()];
        for n in 1..=self.initial_probe.epochs() {
            for i in 1..=self.initial_probe.m() {
                header.push(format!("alpha_{i}_{n}"));
            }
        }
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.iter.to_string(), format_f64(row.j_hat)];
            rec.extend(row.probe.flatten().into_iter().map(format_f64));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Equiprobable ±1 entries.
pub fn rademacher<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

/// Two-sided estimate `(J(x + ωΔ) − J(x − ωΔ))/(2ω) · Δ`. The cost is called
/// with the shifted point and the sign of the shift (`+1` first).
pub fn spsa_gradient<F>(x: &[f64], delta: &[f64], omega: f64, mut cost: F) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], f64) -> Result<f64>,
{
    if x.len() != delta.len() {
        return Err(Error::Dimension("point and perturbation lengths differ".into()));
    }
    let shifted = |sign: f64| -> Vec<f64> { x.iter().zip(delta).map(|(p, d)| p + sign * omega * d).collect() };
    let j_plus = cost(&shifted(1.0), 1.0)?;
    let j_minus = cost(&shifted(-1.0), -1.0)?;
    let scale = (j_plus - j_minus) / (2.0 * omega);
    Ok(delta.iter().map(|d| scale * d).collect())
}

/// Two-sided simultaneous-perturbation descent on `Ĵ`.
///
/// Iteration `k` draws `Δ ∈ {±1}^{mN}`, evaluates `Ĵ(P ± ωΔ)` (perturbed
/// points clamped to the positivity floor), forms
/// `ĝ = (Ĵ₊ − Ĵ₋)/(2ω) · Δ` and steps `P ← max(P − μ_k ĝ, floor)`.
pub fn spsa_optimize<P: Responder, N: NoiseSampler>(
    initial: &ProbeMatrix,
    cfg: &SpsaConfig,
    responder: &P,
    noise: &N,
) -> Result<SpsaRun> {
    cfg.validate()?;
    let m = initial.m();
    let log_eval = |p: &ProbeMatrix, k: usize| -> Result<f64> {
        if cfg.log_cost {
            evaluate_cost(p, responder, noise, cfg, split(cfg.seed, &[k as u64, 2]))
        } else {
            Ok(f64::NAN)
        }
    };
    let initial_j = log_eval(initial, 0)?;
    let mut probe = initial.clone();
    let mut rows = Vec::with_capacity(cfg.iterations);
    let mut gradient_evaluations = 0;
    for k in 1..=cfg.iterations {
        let mut rng = rng_for(cfg.seed, &[k as u64, 3]);
        let flat = probe.flatten();
        let delta = rademacher(flat.len(), &mut rng);
        let seed_plus = split(cfg.seed, &[k as u64, 0]);
        let seed_minus = if cfg.common_random_numbers { seed_plus } else { split(cfg.seed, &[k as u64, 1]) };
        let grad = spsa_gradient(&flat, &delta, cfg.omega, |x, sign| {
            let p = ProbeMatrix::from_flat_projected(x, m)?;
            gradient_evaluations += 1;
            evaluate_cost(&p, responder, noise, cfg, if sign > 0.0 { seed_plus } else { seed_minus })
        })?;
        let next: Vec<f64> = flat.iter().zip(&grad).map(|(p, g)| p - cfg.step_size(k) * g).collect();
        probe = ProbeMatrix::from_flat_projected(&next, m)?;
        let j_hat = log_eval(&probe, k)?;
        rows.push(TrajectoryRow { iter: k, j_hat, probe: probe.clone() });
    }
    Ok(SpsaRun { initial_probe: initial.clone(), initial_j, rows, gradient_evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_clamps_to_floor() {
        let p = ProbeMatrix::from_flat_projected(&[-1.0, 0.5, f64::NAN, 2.0], 2).unwrap();
        assert_eq!(p.flatten(), vec![POSITIVITY_FLOOR, 0.5, POSITIVITY_FLOOR, 2.0]);
        assert_eq!(p.columns()[1], vec![POSITIVITY_FLOOR, 2.0]);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(ProbeMatrix::new(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(ProbeMatrix::new(vec![vec![0.0]]).is_err());
        assert!(ProbeMatrix::from_flat_projected(&[1.0, 2.0, 3.0], 2).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SpsaConfig::default().validate().is_ok());
        assert!(SpsaConfig { omega: 0.0, ..Default::default() }.validate().is_err());
        assert!(SpsaConfig { gamma: 1.0, ..Default::default() }.validate().is_err());
    }
}
