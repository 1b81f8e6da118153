use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityKind {
    /// `Π β(i)`.
    Determinant,
    /// `Σ β(i)`.
    Trace,
    /// `Π β(i)^ζ_i`.
    CobbDouglas,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitySpec {
    pub kind: UtilityKind,
    #[serde(default)]
    pub exponents: Vec<f64>,
}

impl UtilitySpec {
    pub fn determinant() -> Self {
        Self { kind: UtilityKind::Determinant, exponents: Vec::new() }
    }

    pub fn trace() -> Self {
        Self { kind: UtilityKind::Trace, exponents: Vec::new() }
    }

    pub fn cobb_douglas(exponents: Vec<f64>) -> Self {
        Self { kind: UtilityKind::CobbDouglas, exponents }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if self.kind == UtilityKind::CobbDouglas {
            if self.exponents.len() != m {
                return Err(Error::Dimension(format!("{} exponents for {m} coordinates", self.exponents.len())));
            }
            if self.exponents.iter().any(|z| !(*z > 0.0 && z.is_finite())) {
                return Err(Error::InvalidInput(format!("exponents must be positive: {:?}", self.exponents)));
            }
        }
        Ok(())
    }

    pub fn value(&self, beta: &[f64]) -> f64 {
        match self.kind {
            UtilityKind::Determinant => beta.iter().product(),
            UtilityKind::Trace => beta.iter().sum(),
            UtilityKind::CobbDouglas => beta.iter().zip(&self.exponents).map(|(b, z)| b.powf(*z)).product(),
        }
    }

    /// `ln U(β)`; same ordering as [`value`](Self::value) without underflow.
    pub fn log_value(&self, beta: &[f64]) -> f64 {
        match self.kind {
            UtilityKind::Determinant => beta.iter().map(|b| b.ln()).sum(),
            UtilityKind::Trace => beta.iter().sum::<f64>().ln(),
            UtilityKind::CobbDouglas => beta.iter().zip(&self.exponents).map(|(b, z)| z * b.ln()).sum(),
        }
    }
}

fn check_linear_inputs(alpha: &[f64], pbar: f64) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::Dimension("empty probe".into()));
    }
    if alpha.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidInput(format!("probe entries must be positive: {alpha:?}")));
    }
    if !(pbar > 0.0 && pbar.is_finite()) {
        return Err(Error::InvalidInput(format!("budget must be positive, got {pbar}")));
    }
    Ok(())
}

/// Closed-form maximizer of `u` over `{β >= 0 : α'β <= pbar}`.
pub fn maximize_linear_budget(u: &UtilitySpec, alpha: &[f64], pbar: f64) -> Result<Vec<f64>> {
    check_linear_inputs(alpha, pbar)?;
    let m = alpha.len();
    u.validate(m)?;
    Ok(match u.kind {
        UtilityKind::Determinant => alpha.iter().map(|a| pbar / (m as f64 * a)).collect(),
        UtilityKind::CobbDouglas => {
            let total: f64 = u.exponents.iter().sum();
            alpha.iter().zip(&u.exponents).map(|(a, z)| z / total * pbar / a).collect()
        }
        UtilityKind::Trace => {
            let cheapest = (0..m).fold(0, |best, i| if alpha[i] < alpha[best] { i } else { best });
            let mut beta = vec![0.0; m];
            beta[cheapest] = pbar / alpha[cheapest];
            beta
        }
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[lo, hi]`; returns the best abscissa seen.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let (flo, fhi) = (f(lo), f(hi));
    [(lo, flo), (x1, f1), (x2, f2), (hi, fhi)]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, (x, v)| if v > best.1 { (x, v) } else { best })
        .0
}

/// Derivative-free maximizer of any increasing utility on the linear budget
/// by repeated pairwise exchanges of spending share along the budget line.
pub fn maximize_linear_budget_numeric(u: &UtilitySpec, alpha: &[f64], pbar: f64) -> Result<Vec<f64>> {
    check_linear_inputs(alpha, pbar)?;
    let m = alpha.len();
    u.validate(m)?;
    let to_beta = |w: &[f64]| -> Vec<f64> { w.iter().zip(alpha).map(|(w, a)| w * pbar / a).collect() };
    let mut w = vec![1.0 / m as f64; m];
    for _ in 0..200 {
        let mut moved = 0.0f64;
        for i in 0..m {
            for j in i + 1..m {
                let pool = w[i] + w[j];
                let mut trial = w.clone();
                let x = golden_max(
                    |x| {
                        trial[i] = x;
                        trial[j] = pool - x;
                        u.log_value(&to_beta(&trial))
                    },
                    0.0,
                    pool,
                    1e-13,
                );
                moved = moved.max((x - w[i]).abs());
                w[i] = x;
                w[j] = pool - x;
            }
        }
        if moved <= 1e-12 {
            break;
        }
    }
    Ok(to_beta(&w))
}
