use super::{symmetrize, Matrix, TrackerParams};
use crate::{Error, Result};

pub const ARE_TOL: f64 = 1e-10;
pub const ARE_MAX_ITER: usize = 100_000;

/// Converged Riccati fixed point together with its measured residual.
#[derive(Debug, Clone, PartialEq)]
pub struct AreSolution {
    pub sigma: Matrix,
    pub iterations: usize,
    pub residual: f64,
}

/// One step of the predicted-covariance recursion
/// `Σ ↦ A (Σ − Σ C' (C Σ C' + R)⁻¹ C Σ) A' + Q`.
pub fn riccati_map(params: &TrackerParams, sigma: &Matrix) -> Result<Matrix> {
    let (a, c) = (&params.a, &params.c);
    let sc = sigma * c.transpose();
    let innov = c * &sc + &params.r;
    let chol = innov
        .cholesky()
        .ok_or(Error::SingularInnovation(f64::INFINITY))?;
    let correction = &sc * chol.solve(&sc.transpose());
    let mut next = a * (sigma - correction) * a.transpose() + &params.q;
    symmetrize(&mut next);
    Ok(next)
}

/// Elementwise max-norm of `riccati_map(Σ) − Σ`.
pub fn are_residual(params: &TrackerParams, sigma: &Matrix) -> Result<f64> {
    Ok((riccati_map(params, sigma)? - sigma).amax())
}

/// Iterates the Riccati map from `Σ₀ = Q` until the residual drops to `tol`.
pub fn solve_are(params: &TrackerParams, tol: f64, max_iter: usize) -> Result<AreSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut sigma = params.q.clone();
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let next = riccati_map(params, &sigma)?;
        residual = (&next - &sigma).amax();
        if !residual.is_finite() {
            break;
        }
        if residual <= tol {
            // `sigma` has a measured residual; `next` has not been checked.
            return Ok(AreSolution { sigma, iterations: it, residual });
        }
        sigma = next;
    }
    Err(Error::RiccatiDiverged { iterations: max_iter, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> Matrix {
        Matrix::from_element(1, 1, v)
    }

    #[test]
    fn scalar_golden_ratio() {
        let p = TrackerParams::new(scalar(1.0), scalar(1.0), scalar(1.0), scalar(1.0)).unwrap();
        let sol = solve_are(&p, ARE_TOL, ARE_MAX_ITER).unwrap();
        assert!((sol.sigma[(0, 0)] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!(sol.residual <= ARE_TOL);
    }

    #[test]
    fn zero_dynamics_resets_to_q() {
        let q = Matrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let p = TrackerParams::new(Matrix::zeros(2, 2), Matrix::identity(2, 2), q.clone(), Matrix::identity(2, 2)).unwrap();
        let sol = solve_are(&p, ARE_TOL, ARE_MAX_ITER).unwrap();
        assert!((sol.sigma - q).amax() <= 1e-15);
    }

    #[test]
    fn unobservable_unstable_mode_diverges() {
        // C sees nothing, A is expanding: the predicted covariance grows without bound.
        let p = TrackerParams::new(scalar(2.0), scalar(0.0), scalar(1.0), scalar(1.0)).unwrap();
        assert!(matches!(solve_are(&p, ARE_TOL, 500), Err(Error::RiccatiDiverged { .. })));
    }
}
