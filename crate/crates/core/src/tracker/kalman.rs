use super::{lambda_max, max_asymmetry, symmetric_eigenvalues, symmetrize, Matrix, Vector};
use crate::{Error, Result};

const PARAM_SYMMETRY_TOL: f64 = 1e-12;
const MAX_INNOVATION_COND: f64 = 1e12;

/// State-space model `x' = A x + w`, `y = C x + v`, `w ~ N(0, Q)`, `v ~ N(0, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackerParams {
    pub a: Matrix,
    pub c: Matrix,
    pub q: Matrix,
    pub r: Matrix,
}

impl TrackerParams {
    /// Checks shapes, symmetry of `Q` and `R`, and that both are positive
    /// semidefinite. Definiteness of the innovation covariance is checked
    /// when it is inverted.
    pub fn new(a: Matrix, c: Matrix, q: Matrix, r: Matrix) -> Result<Self> {
        let d = a.nrows();
        let p = c.nrows();
        if a.ncols() != d || c.ncols() != d || q.shape() != (d, d) || r.shape() != (p, p) {
            return Err(Error::Dimension(format!(
                "A {:?}, C {:?}, Q {:?}, R {:?}",
                a.shape(),
                c.shape(),
                q.shape(),
                r.shape()
            )));
        }
        for (name, m) in [("Q", &q), ("R", &r)] {
            let asym = max_asymmetry(m);
            if asym > PARAM_SYMMETRY_TOL * m.amax().max(1.0) {
                return Err(Error::Asymmetric(asym));
            }
            let lo = symmetric_eigenvalues(m)?[0];
            if lo < -PARAM_SYMMETRY_TOL * m.amax().max(1.0) {
                return Err(Error::InvalidInput(format!("{name} has negative eigenvalue {lo:e}")));
            }
        }
        Ok(Self { a, c, q, r })
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn obs_dim(&self) -> usize {
        self.c.nrows()
    }

    /// Same dynamics, different observation-noise covariance.
    pub fn with_r(&self, r: Matrix) -> Result<Self> {
        Self::new(self.a.clone(), self.c.clone(), self.q.clone(), r)
    }
}

/// Gaussian posterior `N(xhat, sigma)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanState {
    pub xhat: Vector,
    pub sigma: Matrix,
}

/// Inverse of a symmetric positive-definite innovation covariance, refusing
/// condition numbers above 1e12.
pub(crate) fn invert_innovation(s: &Matrix) -> Result<Matrix> {
    let ev = symmetric_eigenvalues(s)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if !(lo > 0.0) || hi / lo > MAX_INNOVATION_COND {
        return Err(Error::SingularInnovation(if lo > 0.0 { hi / lo } else { f64::INFINITY }));
    }
    s.clone()
        .cholesky()
        .map(|ch| ch.inverse())
        .ok_or_else(|| Error::SingularInnovation(hi / lo))
}

/// One predict/update cycle of the Kalman filter.
pub fn kalman_step(state: &KalmanState, y: &Vector, params: &TrackerParams) -> Result<KalmanState> {
    let d = params.state_dim();
    if state.xhat.len() != d || state.sigma.shape() != (d, d) || y.len() != params.obs_dim() {
        return Err(Error::Dimension("state, observation and model dimensions disagree".into()));
    }
    let (a, c) = (&params.a, &params.c);
    let mut pred = a * &state.sigma * a.transpose() + &params.q;
    symmetrize(&mut pred);
    let innov_cov = c * &pred * c.transpose() + &params.r;
    let s_inv = invert_innovation(&innov_cov)?;
    let gain = &pred * c.transpose() * s_inv;
    let x_pred = a * &state.xhat;
    let xhat = &x_pred + &gain * (y - c * &x_pred);
    let mut sigma = &pred - &gain * c * &pred;
    symmetrize(&mut sigma);
    Ok(KalmanState { xhat, sigma })
}

impl KalmanState {
    pub fn new(xhat: Vector, sigma: Matrix) -> Self {
        Self { xhat, sigma }
    }

    pub fn largest_variance(&self) -> Result<f64> {
        lambda_max(&self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[f64]) -> Matrix {
        Matrix::from_diagonal(&Vector::from_row_slice(v))
    }

    #[test]
    fn uninformative_measurement_returns_prior() {
        let p = TrackerParams::new(Matrix::zeros(2, 2), Matrix::identity(2, 2), Matrix::identity(2, 2), diag(&[1e12, 1e12]))
            .unwrap();
        let st = KalmanState::new(Vector::zeros(2), Matrix::identity(2, 2));
        let next = kalman_step(&st, &Vector::from_row_slice(&[3.0, -1.0]), &p).unwrap();
        assert!((next.sigma - Matrix::identity(2, 2)).amax() <= 1e-6);
    }

    #[test]
    fn known_state_is_unchanged() {
        let p = TrackerParams::new(diag(&[1.0]), diag(&[1.0]), diag(&[0.0]), diag(&[1.0])).unwrap();
        let st = KalmanState::new(Vector::from_row_slice(&[2.5]), diag(&[0.0]));
        let next = kalman_step(&st, &Vector::from_row_slice(&[100.0]), &p).unwrap();
        assert_eq!(next.sigma[(0, 0)], 0.0);
        assert_eq!(next.xhat[0], 2.5);
    }

    #[test]
    fn singular_innovation_is_an_error() {
        let p = TrackerParams::new(diag(&[1.0]), diag(&[1.0]), diag(&[0.0]), diag(&[0.0])).unwrap();
        let st = KalmanState::new(Vector::zeros(1), diag(&[0.0]));
        assert!(matches!(kalman_step(&st, &Vector::zeros(1), &p), Err(Error::SingularInnovation(_))));
    }

    #[test]
    fn invalid_params() {
        assert!(TrackerParams::new(diag(&[1.0]), diag(&[1.0]), diag(&[-1.0]), diag(&[1.0])).is_err());
        let asym = Matrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(TrackerParams::new(Matrix::identity(2, 2), Matrix::identity(2, 2), asym, Matrix::identity(2, 2)).is_err());
        assert!(TrackerParams::new(Matrix::identity(2, 2), Matrix::identity(3, 2), Matrix::identity(2, 2), Matrix::identity(2, 2)).is_err());
    }
}
