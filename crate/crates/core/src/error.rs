use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("arity mismatch: expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("no nonnegative root: C*rho + C0 = {0} < 0")]
    NoPositiveRoot(f64),

    #[error("singular derivative: prod(V + b_j) vanishes at V = {0}")]
    SingularDerivative(f64),

    #[error("closed form returned non-positive potential {0}; C0 is too small")]
    InsufficientC0(f64),

    #[error("resolvent cubic has no positive root (f = {0})")]
    ResolventFailure(f64),

    #[error("method {method} does not apply: {reason}")]
    MethodMismatch {
        method: &'static str,
        reason: String,
    },

    #[error("invalid finite-difference step {0}")]
    InvalidStep(f64),

    #[error("metric is not positive definite (min eigenvalue {0})")]
    AssemblyFailure(f64),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("cone metric evaluated at the apex (w = 0)")]
    ConeApex,

    #[error("singular matrix")]
    Singular,

    #[error("series inconsistency: {0}")]
    Series(String),

    #[error("underdetermined fit: {0}")]
    UnderdeterminedFit(String),
}
