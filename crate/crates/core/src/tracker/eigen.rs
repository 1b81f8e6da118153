use super::{max_asymmetry, Matrix};
use crate::{Error, Result};

const ROTATION_THRESHOLD: f64 = 1e-14;
const SYMMETRY_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(s: &Matrix) -> Result<Vec<f64>> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", n, s.ncols())));
    }
    let scale = s.amax().max(1.0);
    let asym = max_asymmetry(s);
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric(asym));
    }
    let mut a: Vec<f64> = (0..n * n).map(|k| s[(k / n, k % n)]).collect();
    let idx = |i: usize, j: usize| i * n + j;
    let threshold = ROTATION_THRESHOLD * scale;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[idx(p, q)];
                if apq.abs() <= threshold {
                    continue;
                }
                rotated = true;
                let theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[idx(r, p)];
                        let arq = a[idx(r, q)];
                        let np = c * arp - sn * arq;
                        let nq = c * arq + sn * arp;
                        a[idx(r, p)] = np;
                        a[idx(p, r)] = np;
                        a[idx(r, q)] = nq;
                        a[idx(q, r)] = nq;
                    }
                }
                a[idx(p, p)] -= t * apq;
                a[idx(q, q)] += t * apq;
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
            }
        }
        if !rotated {
            let mut ev: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
            ev.sort_by(f64::total_cmp);
            return Ok(ev);
        }
    }
    Err(Error::Numerical("Jacobi sweeps did not converge".into()))
}

pub fn lambda_max(s: &Matrix) -> Result<f64> {
    symmetric_eigenvalues(s)?
        .last()
        .copied()
        .ok_or_else(|| Error::Dimension("empty matrix".into()))
}

/// `lo ⪯ hi` in the positive-semidefinite order, up to `tol`.
pub fn is_loewner_leq(lo: &Matrix, hi: &Matrix, tol: f64) -> Result<bool> {
    let diff = hi - lo;
    Ok(symmetric_eigenvalues(&diff)?[0] >= -tol)
}
