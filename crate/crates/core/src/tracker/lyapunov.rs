use super::{symmetrize, Matrix};
use crate::{Error, Result};

/// Result of solving `Σ = A Σ A' + Q`.
#[derive(Debug, Clone, PartialEq)]
pub enum LyapunovSolution {
    Finite(Matrix),
    /// The spectral radius of `A` is at least one (or the series failed to
    /// settle), so the stationary covariance is unbounded.
    NoFiniteSolution,
}

impl LyapunovSolution {
    pub fn finite(&self) -> Option<&Matrix> {
        match self {
            Self::Finite(m) => Some(m),
            Self::NoFiniteSolution => None,
        }
    }
}

const UNIT_RADIUS_MARGIN: f64 = 1e-12;

pub fn spectral_radius(a: &Matrix) -> f64 {
    a.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Sums `Σ_k A^k Q (A^k)'` by squaring (Smith's doubling), stopping once
/// the newest block is below `tol` in max-norm.
pub fn solve_lyapunov(a: &Matrix, q: &Matrix, tol: f64, max_iter: usize) -> Result<LyapunovSolution> {
    let d = a.nrows();
    if a.ncols() != d || q.shape() != (d, d) {
        return Err(Error::Dimension(format!("A {:?}, Q {:?}", a.shape(), q.shape())));
    }
    if d == 0 || spectral_radius(a) >= 1.0 - UNIT_RADIUS_MARGIN {
        return Ok(if d == 0 { LyapunovSolution::Finite(q.clone()) } else { LyapunovSolution::NoFiniteSolution });
    }
    let mut sigma = q.clone();
    let mut ak = a.clone();
    for _ in 0..max_iter {
        let block = &ak * &sigma * ak.transpose();
        let size = block.amax();
        sigma += block;
        symmetrize(&mut sigma);
        if size <= tol {
            return Ok(LyapunovSolution::Finite(sigma));
        }
        if !size.is_finite() {
            break;
        }
        ak = &ak * &ak;
    }
    Ok(LyapunovSolution::NoFiniteSolution)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_closed_form() {
        let s = solve_lyapunov(&Matrix::from_element(1, 1, 0.5), &Matrix::from_element(1, 1, 0.75), 1e-14, 100).unwrap();
        assert!((s.finite().unwrap()[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_dynamics() {
        let q = Matrix::from_row_slice(2, 2, &[1.0, 0.2, 0.2, 3.0]);
        let s = solve_lyapunov(&Matrix::zeros(2, 2), &q, 1e-14, 100).unwrap();
        assert_eq!(s.finite().unwrap(), &q);
    }

    #[test]
    fn kinematic_block_has_no_finite_solution() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let s = solve_lyapunov(&a, &Matrix::identity(2, 2), 1e-12, 100).unwrap();
        assert_eq!(s, LyapunovSolution::NoFiniteSolution);
    }

    #[test]
    fn matches_fixed_point() {
        let a = Matrix::from_row_slice(2, 2, &[0.9, 0.3, -0.2, 0.5]);
        let q = Matrix::from_row_slice(2, 2, &[1.0, 0.1, 0.1, 0.5]);
        let s = solve_lyapunov(&a, &q, 1e-15, 100).unwrap();
        let s = s.finite().unwrap();
        assert!((&a * s * a.transpose() + &q - s).amax() < 1e-10);
    }
}
