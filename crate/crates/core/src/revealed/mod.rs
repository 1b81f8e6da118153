//! Revealed-preference tests of constrained utility maximization.
//!
//! A dataset of `(probe, response)` pairs is rationalizable by a monotone
//! utility exactly when its cross-cost matrix `a[t][s] = α_t'(β_s − β_t)` is
//! cyclically consistent. That decision is made combinatorially
//! ([`check_garp`]); a feasible `(u, λ)` certificate is then built from
//! shortest-path potentials ([`solve_afriat`]). The [`lp`] module holds an
//! independent phase-1 simplex used to cross-check both.

mod afriat;
mod cross_cost;
mod dataset;
mod garp;
pub mod lp;
mod nonlinear;

pub use afriat::{
    reconstruct_utility, solve_afriat, solve_cross_cost, AfriatOutcome, AfriatSolution,
    CERTIFICATE_TOL,
};
pub use cross_cost::CrossCostMatrix;
pub use dataset::ProbeResponseDataset;
pub use dataset::format_f64;
pub use garp::{check_cross_cost, check_garp, GarpVerdict, GARP_TOL};
pub use nonlinear::{
    check_nonlinear_garp, nonlinear_cross_cost, reconstruct_nonlinear_utility,
    solve_nonlinear_afriat, Budget, LinearBudget, NonlinearBudgetSpec, NonlinearUtility, ACTIVITY_TOL,
};
