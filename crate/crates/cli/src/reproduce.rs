//! The four reference studies, each scored against its acceptance threshold.

use serde::{Deserialize, Serialize};
use serde_json::json;

use cogradar::detector::{Decision, NoiseModel, NoisyChannel};
use cogradar::probe_opt::{spsa_optimize, ProbeMatrix};
use cogradar::revealed::{check_garp, solve_afriat, solve_nonlinear_afriat};
use cogradar::seeds::{rng_for, split};
use cogradar::simulator::{generate_dataset, RandomResponder, ResponderKind, ScenarioConfig, ScenarioKind, UtilitySpec};
use cogradar::tracker::lambda_max;

use crate::commands::detector_trial;
use crate::output::Outputs;
use crate::{CliError, Context, Study};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyResult {
    pub study: String,
    pub pass: bool,
    pub threshold: String,
    pub metrics: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub all_pass: bool,
    pub studies: Vec<StudyResult>,
}

const RUNS: u64 = 100;

fn linear(seed: u64) -> Result<StudyResult, CliError> {
    let utilities = [
        ("determinant", UtilitySpec::determinant()),
        ("trace", UtilitySpec::trace()),
        ("cobb_douglas", UtilitySpec::cobb_douglas(vec![0.5, 1.0])),
    ];
    let mut metrics = serde_json::Map::new();
    let mut pass = true;
    for (u, (name, utility)) in utilities.into_iter().enumerate() {
        let cfg = ScenarioConfig { utility, ..ScenarioConfig::defaults(ScenarioKind::LinearWaveform) };
        let mut feasible = 0;
        for s in 0..RUNS {
            let ds = generate_dataset(&cfg, &mut rng_for(seed, &[1, u as u64, s]))?;
            feasible += solve_afriat(&ds)?.is_feasible() as u64;
        }
        pass &= feasible == RUNS;
        metrics.insert(format!("{name}_feasible"), json!(feasible));
    }
    let cfg = ScenarioConfig {
        responder: ResponderKind::UniformSimplex,
        ..ScenarioConfig::defaults(ScenarioKind::LinearWaveform)
    };
    let mut violating = 0;
    for s in 0..RUNS {
        let ds = generate_dataset(&cfg, &mut rng_for(seed, &[1, 9, s]))?;
        violating += !check_garp(&ds).consistent as u64;
    }
    pass &= violating >= 90;
    metrics.insert("random_violating".into(), json!(violating));
    metrics.insert("runs".into(), json!(RUNS));
    Ok(StudyResult {
        study: "linear".into(),
        pass,
        threshold: "every cognitive run feasible; random responder violates GARP in >= 90 of 100".into(),
        metrics: metrics.into(),
    })
}

fn nonlinear(seed: u64) -> Result<StudyResult, CliError> {
    let cfg = ScenarioConfig::defaults(ScenarioKind::NonlinearWaveform);
    let budget = cfg.riccati_budget()?;
    let mut feasible = 0;
    let mut residual = 0.0f64;
    let mut activity = 0.0f64;
    for s in 0..RUNS {
        let ds = generate_dataset(&cfg, &mut rng_for(seed, &[2, s]))?;
        for t in 0..ds.len() {
            let sol = budget.steady_state(ds.probe(t), ds.response(t))?;
            residual = residual.max(sol.residual);
            activity = activity.max((lambda_max(&sol.sigma)? - budget.lambda_bar).abs());
        }
        feasible += solve_nonlinear_afriat(&ds, &budget.budgets_for(&ds))?.is_feasible() as u64;
    }
    Ok(StudyResult {
        study: "nonlinear".into(),
        pass: feasible == RUNS && residual <= 1e-10,
        threshold: "every run feasible; Riccati residual <= 1e-10 at every epoch".into(),
        metrics: json!({ "runs": RUNS, "feasible": feasible, "max_are_residual": residual, "max_activity_gap": activity }),
    })
}

fn beam(seed: u64) -> Result<StudyResult, CliError> {
    let base = ScenarioConfig::defaults(ScenarioKind::Beam);
    let cognitive = ScenarioConfig { responder: ResponderKind::Cognitive, ..base.clone() };
    let random = ScenarioConfig { responder: ResponderKind::UniformSimplex, ..base };
    let channel = NoisyChannel::Response;

    let mut alarms = 0;
    for i in 0..1000u64 {
        let row = detector_trial(&cognitive, channel, 0.05, 0.05, 1000, seed, &[3, 0, i])?;
        alarms += (row.outcome.decision == Decision::H1) as usize;
    }
    let false_alarm = alarms as f64 / 1000.0;

    let sigmas = [0.01, 0.05, 0.1, 0.2];
    let mut curve = Vec::new();
    for (k, &sigma) in sigmas.iter().enumerate() {
        let mean = |cfg: &ScenarioConfig, tag: u64| -> Result<f64, CliError> {
            let mut total = 0.0;
            for i in 0..300u64 {
                total += detector_trial(cfg, channel, sigma, 0.05, 1000, seed, &[3, 1, k as u64, tag, i])?.outcome.statistic;
            }
            Ok(total / 300.0)
        };
        let (c, r) = (mean(&cognitive, 0)?, mean(&random, 1)?);
        curve.push(json!({ "sigma": sigma, "cognitive": c, "random": r, "gap": c - r }));
    }
    let gaps: Vec<f64> = curve.iter().map(|p| p["gap"].as_f64().unwrap_or(f64::NAN)).collect();
    let separated = gaps[0] >= 0.5 && gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(StudyResult {
        study: "beam".into(),
        pass: false_alarm <= 0.07 && separated,
        threshold: "false-alarm rate <= 0.07 at sigma 0.05; statistic gap >= 0.5 at the smallest sigma and nonincreasing".into(),
        metrics: json!({ "false_alarm_rate": false_alarm, "curve": curve }),
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn spsa(ctx: &Context) -> Result<StudyResult, CliError> {
    let p = ctx.file.spsa.resolve();
    let noise = NoiseModel::gaussian(p.sigma).map_err(|e| CliError::Config(e.to_string()))?;
    let responder = RandomResponder { kind: p.responder, pbar: 1.0 };
    let [lo, hi] = p.probe_range;
    let mut initial = Vec::new();
    let mut last = Vec::new();
    for s in 0..5u64 {
        let probe = ProbeMatrix::random(p.m, p.epochs, lo, hi, &mut rng_for(ctx.seed, &[4, s, 0]))
            .map_err(|e| CliError::Config(e.to_string()))?;
        let run = spsa_optimize(&probe, &p.spsa_config(split(ctx.seed, &[4, s, 1])), &responder, &noise)?;
        log::info!("spsa seed {s}: {:.3} -> {:.3}", run.initial_j, run.final_j());
        initial.push(run.initial_j);
        last.push(run.final_j());
    }
    let (j0, j1) = (median(initial.clone()), median(last.clone()));
    Ok(StudyResult {
        study: "spsa".into(),
        pass: j0 >= 0.9 && j1 <= 0.35,
        threshold: "median initial J >= 0.9 and median final J <= 0.35 over 5 seeds".into(),
        metrics: json!({ "initial_j": initial, "final_j": last, "median_initial_j": j0, "median_final_j": j1, "params": p }),
    })
}

pub fn run(ctx: &Context, study: Study) -> Result<(), CliError> {
    let wanted = |s: Study| study == Study::All || study == s;
    let mut studies = Vec::new();
    if wanted(Study::Linear) {
        studies.push(linear(ctx.seed)?);
    }
    if wanted(Study::Nonlinear) {
        studies.push(nonlinear(ctx.seed)?);
    }
    if wanted(Study::Beam) {
        studies.push(beam(ctx.seed)?);
    }
    if wanted(Study::Spsa) {
        studies.push(spsa(ctx)?);
    }
    for s in &studies {
        eprintln!("{} {}: {}", if s.pass { "PASS" } else { "FAIL" }, s.study, s.metrics);
    }
    let summary = Summary { seed: ctx.seed, all_pass: studies.iter().all(|s| s.pass), studies };
    let mut out = Outputs::create(&ctx.out)?;
    out.write_json("reproduce_summary.json", &summary)?;
    out.finish("reproduce", ctx.seed, &json!({ "study": format!("{study:?}").to_lowercase(), "spsa": ctx.file.spsa.resolve() }))?;
    if summary.all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = summary.studies.iter().filter(|s| !s.pass).map(|s| s.study.as_str()).collect();
        Err(CliError::Acceptance(failed.join(", ")))
    }
}
