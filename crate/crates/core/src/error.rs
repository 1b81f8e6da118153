use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("budget for epoch {epoch} is not active at the observed response (g = {value:e})")]
    InactiveBudget { epoch: usize, value: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("innovation covariance is numerically singular (condition number {0:e})")]
    SingularInnovation(f64),

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("Riccati iteration did not converge in {iterations} iterations (last step {residual:e})")]
    RiccatiDiverged { iterations: usize, residual: f64 },

    #[error("empty feasible set: {0}")]
    EmptyFeasibleSet(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no acceptable draw after {attempts} attempts")]
    ResampleCapExceeded { attempts: usize },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
