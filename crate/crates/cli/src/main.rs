//! `cogradar`: simulate radar interrogations, test them for utility
//! maximization, sweep the noisy detector, optimize probes, and reproduce
//! the reference experiments.

mod commands;
mod config;
mod output;
mod reproduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cogradar::simulator::ScenarioKind;
use config::{BudgetKind, ExperimentConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or input data.
    Config(String),
    /// A solver or sampler failed.
    Numerical(String),
    Io(String),
    /// `reproduce` ran but missed a threshold.
    Acceptance(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Acceptance(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "{m}"),
            Self::Acceptance(m) => write!(f, "acceptance threshold missed: {m}"),
        }
    }
}

impl From<cogradar::Error> for CliError {
    fn from(e: cogradar::Error) -> Self {
        use cogradar::Error as E;
        match e {
            E::Dimension(_) | E::InvalidInput(_) | E::Parse { .. } | E::Csv(_) | E::InactiveBudget { .. } => {
                Self::Config(e.to_string())
            }
            E::Io(_) => Self::Io(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cogradar", version, about = "Revealed-preference detection of cognitive radars")]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed (overrides the config file; default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides the config file; default `cogradar-out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a probe/response dataset.
    Simulate {
        #[arg(long, value_parser = parse_scenario)]
        scenario: Option<ScenarioKind>,
    },
    /// Test a dataset for utility maximization and reconstruct the utility.
    Test {
        /// Dataset CSV with header `epoch,alpha_1..alpha_m,beta_1..beta_m`.
        dataset: PathBuf,
        #[arg(long, value_enum)]
        budget: Option<BudgetArg>,
    },
    /// Sweep the noisy detector over a grid of noise levels.
    Detect {
        #[arg(long, value_parser = parse_scenario)]
        scenario: Option<ScenarioKind>,
        /// Comma-separated noise standard deviations.
        #[arg(long, value_delimiter = ',')]
        sigma_grid: Option<Vec<f64>>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Optimize the probe matrix by SPSA.
    Spsa {
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Run the reference studies and check them against their thresholds.
    Reproduce {
        #[arg(value_enum, default_value_t = Study::All)]
        study: Study,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BudgetArg {
    Linear,
    Riccati,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Study {
    All,
    Linear,
    Nonlinear,
    Beam,
    Spsa,
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    match s {
        "linear-waveform" => Ok(ScenarioKind::LinearWaveform),
        "nonlinear-waveform" => Ok(ScenarioKind::NonlinearWaveform),
        "beam" => Ok(ScenarioKind::Beam),
        _ => Err(format!("unknown scenario `{s}` (expected linear-waveform, nonlinear-waveform or beam)")),
    }
}

/// Settings shared by every command after merging flags over the file.
pub struct Context {
    pub file: ExperimentConfig,
    pub seed: u64,
    pub out: PathBuf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => config::load(p)?,
        None => ExperimentConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(0);
    let out = cli.out.clone().or_else(|| file.out.clone()).unwrap_or_else(|| PathBuf::from("cogradar-out"));
    let mut ctx = Context { file, seed, out };
    match cli.command {
        Command::Simulate { scenario } => {
            if scenario.is_some() {
                ctx.file.simulate.scenario = scenario;
            }
            commands::simulate(&ctx)
        }
        Command::Test { dataset, budget } => {
            if let Some(b) = budget {
                ctx.file.test.budget = match b {
                    BudgetArg::Linear => BudgetKind::Linear,
                    BudgetArg::Riccati => BudgetKind::Riccati,
                };
            }
            commands::test(&ctx, &dataset)
        }
        Command::Detect { scenario, sigma_grid, gamma, trials } => {
            let d = &mut ctx.file.detect;
            d.scenario.scenario = scenario.or(d.scenario.scenario);
            d.sigma_grid = sigma_grid.or(d.sigma_grid.take());
            d.gamma = gamma.or(d.gamma);
            d.trials = trials.or(d.trials);
            commands::detect(&ctx)
        }
        Command::Spsa { gamma, iterations } => {
            let s = &mut ctx.file.spsa;
            s.gamma = gamma.or(s.gamma);
            s.iterations = iterations.or(s.iterations);
            commands::spsa(&ctx)
        }
        Command::Reproduce { study } => reproduce::run(&ctx, study),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // The beam scenario's default probes exceed the unit dwell total every
    // epoch, so its per-epoch warning is only shown on request.
    let level = match cli.verbose {
        0 => "warn,cogradar::simulator::beam=error",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cogradar: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
