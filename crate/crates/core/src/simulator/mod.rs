//! Synthetic radars: utility maximizers under linear, Riccati-eigenvalue and
//! beam budgets, plus non-cognitive random responders.

mod beam;
mod nonlinear;
mod random;
mod responder;
mod scenario;
mod utility;

pub use beam::{beam_allocate, predicted_precision_probe, BeamConfig};
pub use nonlinear::{maximize_nonlinear_budget, EpochRiccatiBudget, RiccatiBudget};
pub use responder::{LinearMaximizer, RandomResponder, Responder};
pub use random::{random_exponents, random_response, uniform_simplex, RandomResponderKind};
pub use scenario::{generate_dataset, ResponderKind, ScenarioConfig, ScenarioKind, PROBE_RESAMPLE_CAP};
pub use utility::{maximize_linear_budget, maximize_linear_budget_numeric, UtilityKind, UtilitySpec};
