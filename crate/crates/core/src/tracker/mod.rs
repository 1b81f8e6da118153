//! Linear-Gaussian tracking machinery: the Kalman recursion, the algebraic
//! Riccati and Lyapunov fixed points, and a cyclic Jacobi eigen solver for
//! the small symmetric matrices involved.

mod eigen;
mod kalman;
mod lyapunov;
mod riccati;

pub use eigen::{is_loewner_leq, lambda_max, symmetric_eigenvalues};
pub use kalman::{kalman_step, KalmanState, TrackerParams};
pub use lyapunov::{solve_lyapunov, spectral_radius, LyapunovSolution};
pub use riccati::{are_residual, riccati_map, solve_are, AreSolution, ARE_MAX_ITER, ARE_TOL};

pub type Matrix = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;

pub(crate) fn symmetrize(m: &mut Matrix) {
    let n = m.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

pub(crate) fn max_asymmetry(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}
