use super::garp::{Closure, GARP_TOL};
use super::{check_cross_cost, CrossCostMatrix, ProbeResponseDataset};
use crate::{Error, Result};

/// Absolute tolerance a returned certificate must meet on every inequality
/// `u_s - u_t - λ_t a[t][s] <= 0`, with `max λ` normalized to one.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Utility levels `u_t` and positive multipliers `λ_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AfriatSolution {
    pub u: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl AfriatSolution {
    /// Largest left-hand side over all Afriat inequalities.
    pub fn max_violation(&self, a: &CrossCostMatrix) -> f64 {
        let n = a.len();
        let mut worst = f64::NEG_INFINITY;
        for t in 0..n {
            for s in 0..n {
                worst = worst.max(self.u[s] - self.u[t] - self.lambda[t] * a.get(t, s));
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AfriatOutcome {
    Feasible(AfriatSolution),
    /// Carries the GARP-violating cycle that rules out any solution.
    Infeasible(Vec<usize>),
}

impl AfriatOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }

    pub fn solution(&self) -> Option<&AfriatSolution> {
        match self {
            Self::Feasible(s) => Some(s),
            Self::Infeasible(_) => None,
        }
    }
}

pub fn solve_afriat(ds: &ProbeResponseDataset) -> Result<AfriatOutcome> {
    solve_cross_cost(&CrossCostMatrix::from_dataset(ds))
}

/// Solve the Afriat inequalities for an arbitrary cross-cost matrix.
///
/// Feasibility is decided by cyclical consistency. Multipliers are then built
/// by adding strongly connected classes of the weak relation one at a time,
/// most-preferring class first: each new class reveals no preference for the
/// bundles already placed, so its level can be set to the largest value the
/// placed inequalities allow and its multipliers raised until its own
/// inequalities hold. Levels are finally recomputed as shortest-path
/// potentials over the graph weighted by `λ_t a[t][s]`.
pub fn solve_cross_cost(a: &CrossCostMatrix) -> Result<AfriatOutcome> {
    let verdict = check_cross_cost(a);
    if let Some(cycle) = verdict.violating_cycle {
        return Ok(AfriatOutcome::Infeasible(cycle));
    }
    let n = a.len();
    let closure = Closure::new(a);
    let reach = |i: usize, j: usize| closure.reach[i * n + j];

    // class representative = smallest mutually reachable index
    let class: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| reach(i, j) && reach(j, i)).unwrap()).collect();
    let reach_size: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| reach(i, j)).count()).collect();
    let mut reps: Vec<usize> = (0..n).filter(|&i| class[i] == i).collect();
    reps.sort_by(|&x, &y| reach_size[y].cmp(&reach_size[x]).then(x.cmp(&y)));

    let mut u = vec![0.0; n];
    let mut lambda = vec![0.0; n];
    let mut placed: Vec<usize> = Vec::with_capacity(n);
    for rep in reps {
        let members: Vec<usize> = (0..n).filter(|&i| class[i] == rep).collect();
        let level = placed
            .iter()
            .flat_map(|&s| members.iter().map(move |&t| (s, t)))
            .map(|(s, t)| u[s] + lambda[s] * a.get(s, t))
            .fold(f64::INFINITY, f64::min);
        let level = if level.is_finite() { level } else { 0.0 };
        for &t in &members {
            let need = placed
                .iter()
                .map(|&s| {
                    let cost = a.get(t, s);
                    debug_assert!(cost > GARP_TOL);
                    (u[s] - level) / cost
                })
                .fold(1.0, f64::max);
            u[t] = level;
            lambda[t] = need;
        }
        placed.extend(members);
    }

    let scale = lambda.iter().cloned().fold(0.0, f64::max);
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Numerical(format!("multiplier scale {scale}")));
    }
    for l in &mut lambda {
        *l /= scale;
    }
    if lambda.iter().any(|l| *l <= 0.0) {
        return Err(Error::Numerical("multiplier underflowed to zero".into()));
    }
    let u = potentials(a, &lambda);
    let sol = AfriatSolution { u, lambda };
    let worst = sol.max_violation(a);
    if worst > CERTIFICATE_TOL {
        return Err(Error::Numerical(format!("certificate violates an inequality by {worst:e}")));
    }
    Ok(AfriatOutcome::Feasible(sol))
}

/// `u_s = min_t dist(t, s)` over the complete graph with edge weights
/// `λ_t a[t][s]`, via Floyd–Warshall. Satisfies `u_s <= u_t + λ_t a[t][s]`
/// whenever the weighted graph has no negative cycle.
fn potentials(a: &CrossCostMatrix, lambda: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut dist: Vec<f64> = (0..n * n)
        .map(|k| {
            let (t, s) = (k / n, k % n);
            if t == s {
                0.0
            } else {
                lambda[t] * a.get(t, s)
            }
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            for j in 0..n {
                let via = dik + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
    (0..n).map(|s| (0..n).map(|t| dist[t * n + s]).fold(f64::INFINITY, f64::min)).collect()
}

/// `min_t { u_t + λ_t α_t'(β − β_t) }`: concave, monotone, and equal to `u_s`
/// at every observed `β_s`.
pub fn reconstruct_utility(sol: &AfriatSolution, ds: &ProbeResponseDataset, beta: &[f64]) -> Result<f64> {
    if beta.len() != ds.dim() {
        return Err(Error::Dimension(format!("expected {} entries, got {}", ds.dim(), beta.len())));
    }
    if sol.u.len() != ds.len() || sol.lambda.len() != ds.len() {
        return Err(Error::Dimension("solution does not match dataset length".into()));
    }
    Ok((0..ds.len())
        .map(|t| {
            let cost: f64 = ds.probe(t).iter().zip(beta).zip(ds.response(t)).map(|((a, b), bt)| a * (b - bt)).sum();
            sol.u[t] + sol.lambda[t] * cost
        })
        .fold(f64::INFINITY, f64::min))
}
