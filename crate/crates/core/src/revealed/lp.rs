//! Dense phase-1 simplex, used as an independent feasibility oracle for the
//! Afriat inequalities.

use super::{AfriatSolution, CrossCostMatrix};
use crate::{Error, Result};

// Entries below this are treated as roundoff; pivoting on them wrecks the tableau.
const PIVOT_TOL: f64 = 1e-9;
// Primal slack allowed by the Harris ratio test.
const HARRIS_TOL: f64 = 1e-11;

/// Find `x >= 0` with `A x <= b`, or `None` when the system is infeasible.
///
/// Rows with a negative right-hand side get an artificial variable; the sum
/// of artificials is driven to zero. The entering column follows Bland's
/// rule; the leaving row uses a two-pass Harris test, which prefers large
/// pivots among near-ties.
pub fn phase_one(a: &[Vec<f64>], b: &[f64], feas_tol: f64) -> Result<Option<Vec<f64>>> {
    let rows = a.len();
    if b.len() != rows {
        return Err(Error::Dimension("A and b row counts differ".into()));
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("ragged constraint matrix".into()));
    }
    let arts: Vec<usize> = (0..rows).filter(|&i| b[i] < 0.0).collect();
    let cols = n + rows + arts.len();
    let mut tab = vec![vec![0.0; cols + 1]; rows];
    let mut basis = vec![0usize; rows];
    for i in 0..rows {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            tab[i][j] = sign * a[i][j];
        }
        tab[i][n + i] = sign;
        tab[i][cols] = sign * b[i];
        basis[i] = n + i;
    }
    for (k, &i) in arts.iter().enumerate() {
        tab[i][n + rows + k] = 1.0;
        basis[i] = n + rows + k;
    }
    // reduced costs of the phase-1 objective (minimize the artificial sum)
    let mut red = vec![0.0; cols + 1];
    for &i in &arts {
        for j in 0..=cols {
            red[j] -= tab[i][j];
        }
    }
    for j in n + rows..cols {
        red[j] += 1.0;
    }

    let max_iter = 50 * (rows + cols).max(10);
    for _ in 0..max_iter {
        let Some(enter) = (0..cols).find(|&j| red[j] < -PIVOT_TOL && tab.iter().any(|r| r[j] > PIVOT_TOL)) else {
            // Residual infeasibility is judged relative to the solution's size.
            let scale = tab.iter().fold(1.0f64, |m, r| m.max(r[cols].abs()));
            if let Some(j) = (0..cols).find(|&j| red[j] < -feas_tol * scale) {
                // The objective is bounded below by zero, so a descent column
                // without a usable pivot means the tableau has lost accuracy.
                return Err(Error::Numerical(format!(
                    "phase-1 simplex stalled on column {j} with reduced cost {:.3e}",
                    red[j]
                )));
            }
            let objective = -red[cols];
            if objective > feas_tol * scale {
                return Ok(None);
            }
            let mut x = vec![0.0; n];
            for i in 0..rows {
                if basis[i] < n {
                    x[basis[i]] = tab[i][cols].max(0.0);
                }
            }
            return Ok(Some(x));
        };
        // Harris pass 1: the largest step allowed with slightly relaxed bounds.
        let mut bound = f64::INFINITY;
        for row in &tab {
            let p = row[enter];
            if p > PIVOT_TOL {
                bound = bound.min((row[cols].max(0.0) + HARRIS_TOL) / p);
            }
        }
        // Pass 2: among rows within that step, the largest pivot.
        let mut leave = usize::MAX;
        for (i, row) in tab.iter().enumerate() {
            let p = row[enter];
            if p > PIVOT_TOL && row[cols].max(0.0) / p <= bound && (leave == usize::MAX || p > tab[leave][enter]) {
                leave = i;
            }
        }
        let r = leave;
        let piv = tab[r][enter];
        for v in tab[r].iter_mut() {
            *v /= piv;
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != r {
                let f = row[enter];
                if f != 0.0 {
                    for (v, p) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * p;
                    }
                }
            }
        }
        let f = red[enter];
        for (v, p) in red.iter_mut().zip(&pivot_row) {
            *v -= f * p;
        }
        basis[r] = enter;
    }
    Err(Error::Numerical("phase-1 simplex hit its iteration cap".into()))
}

/// Feasibility of the Afriat inequalities posed as a linear program in
/// `u_t >= 0` and `λ_t = 1 + μ_t`, `μ_t >= 0` (both normalizations are free:
/// the system is invariant to shifting `u` and to scaling `(u, λ)`).
pub fn afriat_lp(a: &CrossCostMatrix, feas_tol: f64) -> Result<Option<AfriatSolution>> {
    let n = a.len();
    let mut rows = Vec::with_capacity(n * n);
    let mut rhs = Vec::with_capacity(n * n);
    for t in 0..n {
        for s in 0..n {
            if s == t {
                continue;
            }
            // u_s - u_t - a[t][s] μ_t <= a[t][s]
            let mut row = vec![0.0; 2 * n];
            row[s] += 1.0;
            row[t] -= 1.0;
            row[n + t] = -a.get(t, s);
            rows.push(row);
            rhs.push(a.get(t, s));
        }
    }
    if rows.is_empty() {
        return Ok(Some(AfriatSolution { u: vec![0.0; n], lambda: vec![1.0; n] }));
    }
    Ok(phase_one(&rows, &rhs, feas_tol)?.map(|x| AfriatSolution {
        u: x[..n].to_vec(),
        lambda: x[n..].iter().map(|m| 1.0 + m).collect(),
    }))
}
