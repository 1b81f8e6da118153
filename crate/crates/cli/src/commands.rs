use std::path::Path;

use serde::{Deserialize, Serialize};

use cogradar::detector::{decide, write_report, NoiseModel, NoisyChannel, ReportRow};
use cogradar::probe_opt::{spsa_optimize, ProbeMatrix};
use cogradar::revealed::{
    format_f64, nonlinear_cross_cost, reconstruct_utility, solve_afriat, solve_nonlinear_afriat, AfriatOutcome,
    CrossCostMatrix, NonlinearUtility, ProbeResponseDataset,
};
use cogradar::seeds::{rng_for, split};
use cogradar::simulator::{
    generate_dataset, RandomResponder, RandomResponderKind, ResponderKind, RiccatiBudget, ScenarioConfig,
    ScenarioKind,
};

use crate::config::{BudgetKind, DetectParams, GridSpec};
use crate::output::Outputs;
use crate::{CliError, Context};

/// Validation failures are configuration errors, whatever the library calls them.
fn check_config(cfg: &ScenarioConfig) -> Result<(), CliError> {
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))
}

pub fn simulate(ctx: &Context) -> Result<(), CliError> {
    let cfg = ctx.file.simulate.resolve(ScenarioKind::LinearWaveform);
    check_config(&cfg)?;
    let ds = generate_dataset(&cfg, &mut rng_for(ctx.seed, &[]))?;
    let mut out = Outputs::create(&ctx.out)?;
    out.write("dataset.csv", ds.to_csv_string().as_bytes())?;
    out.finish("simulate", ctx.seed, &cfg)
}

/// Verdict of `cogradar test`. Epoch indices are 1-based, matching the
/// dataset's `epoch` column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub consistent: bool,
    pub budget: BudgetKind,
    pub epochs: usize,
    pub dim: usize,
    pub u: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    /// Largest violation of the Afriat inequalities by `(u, λ)`.
    pub max_violation: Option<f64>,
    pub cycle: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct TestParams<'a> {
    dataset: String,
    dataset_sha256: String,
    budget: BudgetKind,
    riccati: Option<&'a RiccatiBudget>,
    grid: Option<GridSpec>,
}

fn default_grid(ds: &ProbeResponseDataset) -> GridSpec {
    let top = |i: usize| 1.5 * ds.responses().iter().map(|b| b[i]).fold(0.0, f64::max).max(1e-12);
    GridSpec { beta1: [0.0, top(0)], beta2: [0.0, top(1)], points: 41 }
}

fn axis(range: [f64; 2], points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![range[0]];
    }
    (0..points).map(|k| range[0] + (range[1] - range[0]) * k as f64 / (points - 1) as f64).collect()
}

pub fn test(ctx: &Context, dataset: &Path) -> Result<(), CliError> {
    let bytes = std::fs::read(dataset).map_err(|e| CliError::Config(format!("cannot read {}: {e}", dataset.display())))?;
    let ds = ProbeResponseDataset::read_csv(bytes.as_slice())
        .map_err(|e| CliError::Config(format!("{}: {e}", dataset.display())))?;
    let section = &ctx.file.test;
    let riccati = match section.budget {
        BudgetKind::Riccati => {
            let r = section.riccati.clone().unwrap_or_default();
            r.validate().map_err(|e| CliError::Config(e.to_string()))?;
            Some(r)
        }
        BudgetKind::Linear => None,
    };
    let spec = riccati.as_ref().map(|r| r.budgets_for(&ds));
    let (outcome, costs) = match &spec {
        Some(spec) => (solve_nonlinear_afriat(&ds, spec)?, nonlinear_cross_cost(&ds, spec)?),
        None => (solve_afriat(&ds)?, CrossCostMatrix::from_dataset(&ds)),
    };
    let mut report = TestReport {
        consistent: outcome.is_feasible(),
        budget: section.budget,
        epochs: ds.len(),
        dim: ds.dim(),
        u: None,
        lambda: None,
        max_violation: None,
        cycle: None,
    };
    let grid = (ds.dim() == 2).then(|| section.grid.clone().unwrap_or_else(|| default_grid(&ds)));
    let mut contour = None;
    match &outcome {
        AfriatOutcome::Feasible(sol) => {
            report.u = Some(sol.u.clone());
            report.lambda = Some(sol.lambda.clone());
            report.max_violation = Some(sol.max_violation(&costs).max(0.0));
            if let Some(g) = &grid {
                let nonlinear = match &spec {
                    Some(spec) => Some(NonlinearUtility::new(sol, &ds, spec)?),
                    None => None,
                };
                let mut text = String::from("beta_1,beta_2,utility\n");
                for b1 in axis(g.beta1, g.points) {
                    for b2 in axis(g.beta2, g.points) {
                        let x = [b1, b2];
                        let value = match (&nonlinear, &spec) {
                            (Some(util), Some(spec)) => util.eval(spec, &x)?,
                            _ => reconstruct_utility(sol, &ds, &x)?,
                        };
                        text.push_str(&format!("{},{},{}\n", format_f64(b1), format_f64(b2), format_f64(value)));
                    }
                }
                contour = Some(text);
            }
        }
        AfriatOutcome::Infeasible(cycle) => report.cycle = Some(cycle.iter().map(|t| t + 1).collect()),
    }
    let mut out = Outputs::create(&ctx.out)?;
    out.write_json("test_report.json", &report)?;
    if let Some(text) = contour {
        out.write("contour.csv", text.as_bytes())?;
    }
    let params = TestParams {
        dataset: dataset.display().to_string(),
        dataset_sha256: crate::output::sha256_hex(&bytes),
        budget: section.budget,
        riccati: riccati.as_ref(),
        grid,
    };
    out.finish("test", ctx.seed, &params)
}

fn as_responder(kind: RandomResponderKind) -> ResponderKind {
    match kind {
        RandomResponderKind::UniformSimplex => ResponderKind::UniformSimplex,
        RandomResponderKind::RandomCobbDouglas => ResponderKind::RandomCobbDouglas,
        RandomResponderKind::RandomShares => ResponderKind::RandomShares,
    }
}

fn check_detect(p: &DetectParams) -> Result<(), CliError> {
    check_config(&p.scenario)?;
    if p.sigma_grid.is_empty() || p.sigma_grid.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
        return Err(CliError::Config(format!("sigma grid must be nonempty and nonnegative: {:?}", p.sigma_grid)));
    }
    if !(p.gamma > 0.0 && p.gamma < 1.0) {
        return Err(CliError::Config(format!("gamma must lie in (0, 1), got {}", p.gamma)));
    }
    if p.trials == 0 || p.cdf_samples == 0 {
        return Err(CliError::Config("trials and cdf_samples must be positive".into()));
    }
    Ok(())
}

/// One detector trial: fresh interrogation, fresh sample of `M`, fresh noise.
/// Everything is drawn from `rng_for(seed, path)`; the row records that
/// derived seed.
pub fn detector_trial(
    cfg: &ScenarioConfig,
    channel: NoisyChannel,
    sigma: f64,
    gamma: f64,
    cdf_samples: usize,
    seed: u64,
    path: &[u64],
) -> Result<ReportRow, CliError> {
    let mut rng = rng_for(seed, path);
    let ds = generate_dataset(cfg, &mut rng)?;
    let noise = NoiseModel::gaussian(sigma)?;
    let cdf = channel.sample_m(ds.probes(), ds.responses(), &noise, cdf_samples, &mut rng)?;
    let phi = channel.perturbed_phi(ds.probes(), ds.responses(), &noise, &mut rng)?;
    let outcome = decide(phi, &cdf, gamma)?;
    Ok(ReportRow { trial: path[path.len() - 1] as usize + 1, outcome, sigma, seed: split(seed, path) })
}

pub fn detect(ctx: &Context) -> Result<(), CliError> {
    let p = ctx.file.detect.resolve();
    check_detect(&p)?;
    let responders = [("cognitive", ResponderKind::Cognitive), ("random", as_responder(p.random_responder))];
    let mut reports = Vec::new();
    let mut summary = String::from("responder,sigma,mean_statistic,h0_rate\n");
    for (r, (name, responder)) in responders.iter().enumerate() {
        let cfg = ScenarioConfig { responder: *responder, ..p.scenario.clone() };
        let mut rows = Vec::with_capacity(p.trials * p.sigma_grid.len());
        for (k, &sigma) in p.sigma_grid.iter().enumerate() {
            let start = rows.len();
            for i in 0..p.trials {
                let path = [r as u64, k as u64, i as u64];
                rows.push(detector_trial(&cfg, p.channel.into(), sigma, p.gamma, p.cdf_samples, ctx.seed, &path)?);
            }
            let batch = &rows[start..];
            let mean = batch.iter().map(|row| row.outcome.statistic).sum::<f64>() / batch.len() as f64;
            let h0 = batch.iter().filter(|row| row.outcome.decision == cogradar::detector::Decision::H0).count();
            summary.push_str(&format!(
                "{name},{},{},{}\n",
                format_f64(sigma),
                format_f64(mean),
                format_f64(h0 as f64 / batch.len() as f64)
            ));
        }
        let mut buf = Vec::new();
        write_report(&rows, &mut buf)?;
        reports.push((format!("detect_{name}.csv"), buf));
    }
    let mut out = Outputs::create(&ctx.out)?;
    for (name, buf) in &reports {
        out.write(name, buf)?;
    }
    out.write("detect_summary.csv", summary.as_bytes())?;
    out.finish("detect", ctx.seed, &p)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpsaSummary {
    pub initial_j: f64,
    pub final_j: f64,
    pub gradient_evaluations: usize,
    /// Columns `α_1, …, α_N`.
    pub initial_probe: Vec<Vec<f64>>,
    pub final_probe: Vec<Vec<f64>>,
}

pub fn spsa(ctx: &Context) -> Result<(), CliError> {
    let p = ctx.file.spsa.resolve();
    let [lo, hi] = p.probe_range;
    let initial = ProbeMatrix::random(p.m, p.epochs, lo, hi, &mut rng_for(ctx.seed, &[0]))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = p.spsa_config(split(ctx.seed, &[1]));
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let noise = NoiseModel::gaussian(p.sigma).map_err(|e| CliError::Config(e.to_string()))?;
    let responder = RandomResponder { kind: p.responder, pbar: 1.0 };
    let run = spsa_optimize(&initial, &cfg, &responder, &noise)?;
    let mut csv = Vec::new();
    run.write_csv(&mut csv)?;
    let summary = SpsaSummary {
        initial_j: run.initial_j,
        final_j: run.final_j(),
        gradient_evaluations: run.gradient_evaluations,
        initial_probe: initial.columns().to_vec(),
        final_probe: run.final_probe().unwrap_or(&initial).columns().to_vec(),
    };
    let mut out = Outputs::create(&ctx.out)?;
    out.write("trajectory.csv", &csv)?;
    out.write_json("spsa_summary.json", &summary)?;
    out.finish("spsa", ctx.seed, &p)
}
