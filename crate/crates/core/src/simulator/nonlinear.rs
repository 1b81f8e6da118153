use serde::{Deserialize, Serialize};

use super::utility::{golden_max, UtilitySpec};
use crate::revealed::{Budget, NonlinearBudgetSpec, ProbeResponseDataset};
use crate::tracker::{lambda_max, solve_are, AreSolution, Matrix, TrackerParams, Vector, ARE_MAX_ITER, ARE_TOL};
use crate::{Error, Result};

/// The eigenvalue budget `λmax(Σ*(α, β)) <= λ̄`, `β <= β̄`, where `Σ*` solves
/// the Riccati equation with `Q = diag(α)⁻¹` and `R = diag(β)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiccatiBudget {
    /// State matrix, row-major.
    pub a: Vec<Vec<f64>>,
    /// Observation matrix, row-major.
    pub c: Vec<Vec<f64>>,
    pub lambda_bar: f64,
    pub beta_bar: Vec<f64>,
}

fn to_matrix(rows: &[Vec<f64>]) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::Dimension("ragged or empty matrix".into()));
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl Default for RiccatiBudget {
    fn default() -> Self {
        Self {
            a: vec![vec![1.0, 1.0], vec![0.0, 1.0]],
            c: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            lambda_bar: 3.6,
            beta_bar: vec![10.0, 10.0],
        }
    }
}

impl RiccatiBudget {
    pub fn validate(&self) -> Result<()> {
        let (a, c) = (to_matrix(&self.a)?, to_matrix(&self.c)?);
        if a.nrows() != a.ncols() || c.ncols() != a.nrows() || c.nrows() != self.beta_bar.len() {
            return Err(Error::Dimension(format!(
                "A {:?}, C {:?}, {} response bounds",
                a.shape(),
                c.shape(),
                self.beta_bar.len()
            )));
        }
        if !(self.lambda_bar > 0.0 && self.lambda_bar.is_finite()) {
            return Err(Error::InvalidInput(format!("eigenvalue bound must be positive, got {}", self.lambda_bar)));
        }
        if self.beta_bar.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return Err(Error::InvalidInput(format!("response bounds must be positive: {:?}", self.beta_bar)));
        }
        Ok(())
    }

    pub fn response_dim(&self) -> usize {
        self.beta_bar.len()
    }

    pub fn state_dim(&self) -> usize {
        self.a.len()
    }

    pub fn tracker(&self, alpha: &[f64], beta: &[f64]) -> Result<TrackerParams> {
        if alpha.len() != self.state_dim() || beta.len() != self.response_dim() {
            return Err(Error::Dimension(format!("probe {} / response {} lengths", alpha.len(), beta.len())));
        }
        if alpha.iter().any(|a| !(*a > 0.0)) || beta.iter().any(|b| !(*b >= 0.0)) {
            return Err(Error::InvalidInput("probe must be positive and response nonnegative".into()));
        }
        // Diagonal Q and R are trivially valid; skip the eigen checks of `TrackerParams::new`.
        Ok(TrackerParams {
            a: to_matrix(&self.a)?,
            c: to_matrix(&self.c)?,
            q: Matrix::from_diagonal(&Vector::from_iterator(alpha.len(), alpha.iter().map(|a| 1.0 / a))),
            r: Matrix::from_diagonal(&Vector::from_row_slice(beta)),
        })
    }

    pub fn steady_state(&self, alpha: &[f64], beta: &[f64]) -> Result<AreSolution> {
        solve_are(&self.tracker(alpha, beta)?, ARE_TOL, ARE_MAX_ITER)
    }

    /// `λmax(Σ*(α, β))`.
    pub fn spectral_load(&self, alpha: &[f64], beta: &[f64]) -> Result<f64> {
        lambda_max(&self.steady_state(alpha, beta)?.sigma)
    }

    /// `λ_L = λmax(Σ*(α, β̄))`, the top of the window in which the eigenvalue
    /// constraint can bind.
    pub fn activity_ceiling(&self, alpha: &[f64]) -> Result<f64> {
        self.spectral_load(alpha, &self.beta_bar)
    }

    /// Budget function whose zero set is the boundary of the feasible region:
    /// `max(λmax(Σ*) − λ̄, max_i(β_i − β̄_i))`.
    pub fn g(&self, alpha: &[f64], beta: &[f64]) -> Result<f64> {
        let box_excess = beta.iter().zip(&self.beta_bar).map(|(b, bb)| b - bb).fold(f64::NEG_INFINITY, f64::max);
        Ok((self.spectral_load(alpha, beta)? - self.lambda_bar).max(box_excess))
    }

    pub fn epoch_budget(&self, alpha: &[f64]) -> EpochRiccatiBudget {
        EpochRiccatiBudget { budget: self.clone(), alpha: alpha.to_vec() }
    }

    /// One budget per epoch of `ds`, for the nonlinear revealed-preference test.
    pub fn budgets_for(&self, ds: &ProbeResponseDataset) -> NonlinearBudgetSpec {
        NonlinearBudgetSpec::new(
            ds.probes().iter().map(|a| Box::new(self.epoch_budget(a)) as Box<dyn Budget>).collect(),
        )
    }
}

/// [`RiccatiBudget`] frozen at one probe. Points where the Riccati iteration
/// fails evaluate to `+∞`, i.e. outside the budget set.
#[derive(Debug, Clone)]
pub struct EpochRiccatiBudget {
    budget: RiccatiBudget,
    alpha: Vec<f64>,
}

impl Budget for EpochRiccatiBudget {
    fn eval(&self, beta: &[f64]) -> f64 {
        self.budget.g(&self.alpha, beta).unwrap_or(f64::INFINITY)
    }
}

const ROOT_TOL: f64 = 1e-11;
const GOLDEN_TOL: f64 = 1e-9;

/// Largest `t ∈ [lo, hi]` with `excess(t) <= 0`, for `excess` increasing in
/// `t` and `excess(lo) <= 0`. Bracketed regula falsi with the Illinois
/// modification; the returned point is always on the feasible side.
fn feasible_edge(mut excess: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut f_hi = excess(hi)?;
    if f_hi <= 0.0 {
        return Ok(hi);
    }
    let mut f_lo = excess(lo)?;
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= ROOT_TOL * hi.max(1.0) || f_lo >= -ROOT_TOL {
            break;
        }
        let mut t = if f_hi.is_finite() { lo - f_lo * (hi - lo) / (f_hi - f_lo) } else { 0.5 * (lo + hi) };
        if !(t > lo && t < hi) {
            t = 0.5 * (lo + hi);
        }
        let f = excess(t)?;
        if f <= 0.0 {
            lo = t;
            f_lo = f;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            f_hi = f;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(lo)
}

/// Maximizer of `u` over `{0 <= β <= β̄ : λmax(Σ*(α, β)) <= λ̄}`.
///
/// If the upper corner is feasible it is the answer. Otherwise the search runs
/// along the active surface: for each coordinate pair, golden section over
/// `β(i)` with `β(j)` pushed up to the surface by a bracketed root search, sweeping pairs
/// until no coordinate moves.
pub fn maximize_nonlinear_budget(u: &UtilitySpec, alpha: &[f64], budget: &RiccatiBudget) -> Result<Vec<f64>> {
    budget.validate()?;
    let m = budget.response_dim();
    u.validate(m)?;
    let lbar = budget.lambda_bar;
    let load = |beta: &[f64]| budget.spectral_load(alpha, beta);

    if load(&budget.beta_bar)? <= lbar {
        return Ok(budget.beta_bar.clone());
    }
    let floor = load(&vec![0.0; m])?;
    if floor > lbar {
        return Err(Error::EmptyFeasibleSet(format!(
            "λmax at zero response is {floor:.6} > bound {lbar}"
        )));
    }

    let scaled = |s: f64| budget.beta_bar.iter().map(|b| s * b).collect::<Vec<_>>();
    let s = feasible_edge(|s| Ok(load(&scaled(s))? - lbar), 0.0, 1.0)?;
    let mut beta = scaled(s);

    for _sweep in 0..100 {
        let mut moved = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                if i == j || (m == 2 && j < i) {
                    continue;
                }
                let mut base = beta.clone();
                base[j] = 0.0;
                // β(i) range over which some β(j) >= 0 is feasible.
                let hi = feasible_edge(
                    |x| {
                        let mut b = base.clone();
                        b[i] = x;
                        Ok(load(&b)? - lbar)
                    },
                    0.0,
                    budget.beta_bar[i],
                )?;
                let surface = |x: f64| -> Result<Vec<f64>> {
                    let mut b = base.clone();
                    b[i] = x;
                    let y = feasible_edge(
                        |y| {
                            let mut bb = b.clone();
                            bb[j] = y;
                            Ok(load(&bb)? - lbar)
                        },
                        0.0,
                        budget.beta_bar[j],
                    )?;
                    b[j] = y;
                    Ok(b)
                };
                let mut failure = None;
                let x = golden_max(
                    |x| match surface(x) {
                        Ok(b) => u.log_value(&b),
                        Err(e) => {
                            failure.get_or_insert(e);
                            f64::NEG_INFINITY
                        }
                    },
                    0.0,
                    hi,
                    GOLDEN_TOL * hi.max(1.0),
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                let next = surface(x)?;
                if u.log_value(&next) >= u.log_value(&beta) {
                    moved = moved.max((next[i] - beta[i]).abs()).max((next[j] - beta[j]).abs());
                    beta = next;
                }
            }
        }
        if m == 2 || moved <= GOLDEN_TOL {
            break;
        }
    }
    Ok(beta)
}
