//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix required to be stable (or antistable) is not.
    #[error("stability mismatch: {0}")]
    NotStable(String),

    /// An eigenvalue lies within the axis tolerance of the imaginary axis, so the
    /// stable/antistable splitting is ill-posed. Callers should use the modal or
    /// diagonal path instead.
    #[error("eigenvalue {real}+{imag}i within {tol:e} of the imaginary axis")]
    AxisEigenvalue { real: f64, imag: f64, tol: f64 },

    /// A Gramian is numerically singular. `worst_direction` is the eigenvector of
    /// the smallest eigenvalue, i.e. the direction that is hardest to control.
    #[error("singular Gramian: condition {cond:.3e} exceeds {limit:.1e}")]
    SingularGramian {
        cond: f64,
        limit: f64,
        worst_direction: Vec<f64>,
    },

    #[error("subsystem ({which}) is uncontrollable: Gramian block condition {cond:.3e}")]
    UncontrollableSubsystem { which: &'static str, cond: f64 },

    #[error("damping is not proportional: off-diagonal norm {offdiag:.3e} (relative)")]
    NonProportionalDamping { offdiag: f64 },

    #[error("zero natural frequency at mode {mode} (omega = {omega:.3e}); ground the network")]
    ZeroFrequency { mode: usize, omega: f64 },

    #[error("horizon overflow: exp(A t_f) exceeds floating-point range; largest usable t_f ≈ {suggested_tf:.3e}")]
    HorizonOverflow { suggested_tf: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Greedy trace-inverse placement cannot reach a finite objective: some modal
    /// direction is uncovered by every candidate set of the requested size.
    #[error("infeasible coverage: {0}")]
    InfeasibleCoverage(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }
}
