use super::afriat::{solve_cross_cost, AfriatOutcome, AfriatSolution};
use super::{check_cross_cost, CrossCostMatrix, GarpVerdict, ProbeResponseDataset};
use crate::{Error, Result};

/// Largest `|g_t(β_t)|` accepted as an active budget.
pub const ACTIVITY_TOL: f64 = 1e-6;

/// An increasing, continuous budget function `g`; the budget set is `g(β) <= 0`.
pub trait Budget: Send + Sync {
    fn eval(&self, beta: &[f64]) -> f64;
}

impl<F> Budget for F
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn eval(&self, beta: &[f64]) -> f64 {
        self(beta)
    }
}

/// `g(β) = α'(β − anchor)`: the linear budget through `anchor`.
#[derive(Debug, Clone)]
pub struct LinearBudget {
    pub alpha: Vec<f64>,
    pub anchor: Vec<f64>,
}

impl Budget for LinearBudget {
    fn eval(&self, beta: &[f64]) -> f64 {
        self.alpha.iter().zip(beta).zip(&self.anchor).map(|((a, b), c)| a * (b - c)).sum()
    }
}

/// One budget function per epoch.
pub struct NonlinearBudgetSpec {
    budgets: Vec<Box<dyn Budget>>,
}

impl NonlinearBudgetSpec {
    pub fn new(budgets: Vec<Box<dyn Budget>>) -> Self {
        Self { budgets }
    }

    /// The linear budgets `α_t'(β − β_t)` of a dataset.
    pub fn linear(ds: &ProbeResponseDataset) -> Self {
        Self::new(
            (0..ds.len())
                .map(|t| {
                    Box::new(LinearBudget { alpha: ds.probe(t).to_vec(), anchor: ds.response(t).to_vec() })
                        as Box<dyn Budget>
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.budgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.budgets.is_empty()
    }

    pub fn eval(&self, t: usize, beta: &[f64]) -> f64 {
        self.budgets[t].eval(beta)
    }
}

/// Cross costs `a[t][s] = g_t(β_s) − g_t(β_t)`, after checking that every
/// budget is active at its own response.
pub fn nonlinear_cross_cost(ds: &ProbeResponseDataset, budgets: &NonlinearBudgetSpec) -> Result<CrossCostMatrix> {
    if budgets.len() != ds.len() {
        return Err(Error::Dimension(format!("{} budgets for {} epochs", budgets.len(), ds.len())));
    }
    let own: Vec<f64> = (0..ds.len()).map(|t| budgets.eval(t, ds.response(t))).collect();
    if let Some((epoch, &value)) = own.iter().enumerate().find(|(_, g)| !(g.abs() <= ACTIVITY_TOL)) {
        return Err(Error::InactiveBudget { epoch, value });
    }
    Ok(CrossCostMatrix::from_fn(ds.len(), |t, s| budgets.eval(t, ds.response(s)) - own[t]))
}

pub fn check_nonlinear_garp(ds: &ProbeResponseDataset, budgets: &NonlinearBudgetSpec) -> Result<GarpVerdict> {
    Ok(check_cross_cost(&nonlinear_cross_cost(ds, budgets)?))
}

pub fn solve_nonlinear_afriat(ds: &ProbeResponseDataset, budgets: &NonlinearBudgetSpec) -> Result<AfriatOutcome> {
    solve_cross_cost(&nonlinear_cross_cost(ds, budgets)?)
}

/// `U(β) = min_t { u_t + λ_t (g_t(β) − g_t(β_t)) }`: monotone and
/// continuous, not necessarily concave. Holds the anchors `g_t(β_t)` so that
/// each evaluation costs one budget call per epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearUtility {
    sol: AfriatSolution,
    anchors: Vec<f64>,
    dim: usize,
}

impl NonlinearUtility {
    pub fn new(sol: &AfriatSolution, ds: &ProbeResponseDataset, budgets: &NonlinearBudgetSpec) -> Result<Self> {
        if sol.u.len() != ds.len() || sol.lambda.len() != ds.len() || budgets.len() != ds.len() {
            return Err(Error::Dimension("solution, budgets and dataset lengths differ".into()));
        }
        let anchors = (0..ds.len()).map(|t| budgets.eval(t, ds.response(t))).collect();
        Ok(Self { sol: sol.clone(), anchors, dim: ds.dim() })
    }

    pub fn eval(&self, budgets: &NonlinearBudgetSpec, beta: &[f64]) -> Result<f64> {
        if beta.len() != self.dim {
            return Err(Error::Dimension(format!("expected {} entries, got {}", self.dim, beta.len())));
        }
        Ok((0..self.anchors.len())
            .map(|t| self.sol.u[t] + self.sol.lambda[t] * (budgets.eval(t, beta) - self.anchors[t]))
            .fold(f64::INFINITY, f64::min))
    }
}

/// One-off evaluation of [`NonlinearUtility`].
pub fn reconstruct_nonlinear_utility(
    sol: &AfriatSolution,
    ds: &ProbeResponseDataset,
    budgets: &NonlinearBudgetSpec,
    beta: &[f64],
) -> Result<f64> {
    NonlinearUtility::new(sol, ds, budgets)?.eval(budgets, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::revealed::{check_garp, solve_afriat};

    #[test]
    fn linear_budgets_reduce_to_afriat() {
        let d = ProbeResponseDataset::new(
            vec![vec![1.0, 1.0], vec![1.0, 3.0], vec![0.4, 0.9]],
            vec![vec![2.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.5]],
        )
        .unwrap();
        let spec = NonlinearBudgetSpec::linear(&d);
        assert_eq!(check_nonlinear_garp(&d, &spec).unwrap(), check_garp(&d));
        assert_eq!(solve_nonlinear_afriat(&d, &spec).unwrap(), solve_afriat(&d).unwrap());
    }

    #[test]
    fn single_epoch_is_feasible() {
        let d = ProbeResponseDataset::new(vec![vec![1.0]], vec![vec![2.0]]).unwrap();
        let spec = NonlinearBudgetSpec::new(vec![Box::new(|b: &[f64]| b[0] * b[0] - 4.0)]);
        assert!(check_nonlinear_garp(&d, &spec).unwrap().consistent);
        assert!(solve_nonlinear_afriat(&d, &spec).unwrap().is_feasible());
    }

    #[test]
    fn inactive_budget_is_rejected() {
        let d = ProbeResponseDataset::new(vec![vec![1.0], vec![1.0]], vec![vec![2.0], vec![1.0]]).unwrap();
        let spec = NonlinearBudgetSpec::new(vec![
            Box::new(|b: &[f64]| b[0] - 2.0),
            Box::new(|b: &[f64]| b[0] - 1.0 + 1e-3),
        ]);
        match check_nonlinear_garp(&d, &spec) {
            Err(Error::InactiveBudget { epoch, .. }) => assert_eq!(epoch, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonlinear_utility_is_level_at_observations() {
        let d = ProbeResponseDataset::new(vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![vec![1.0, 1.0], vec![0.5, 2.0]])
            .unwrap();
        let spec = NonlinearBudgetSpec::new(vec![
            Box::new(|b: &[f64]| b[0] * b[0] + 2.0 * b[1] - 3.0),
            Box::new(|b: &[f64]| 2.0 * b[0] + b[1] * b[1] - 5.0),
        ]);
        let out = solve_nonlinear_afriat(&d, &spec).unwrap();
        let sol = out.solution().unwrap();
        for s in 0..2 {
            let v = reconstruct_nonlinear_utility(sol, &d, &spec, d.response(s)).unwrap();
            assert!((v - sol.u[s]).abs() <= 1e-9);
        }
    }
}
