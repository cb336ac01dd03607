use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NonHermitianInput(f64),
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid cluster spec: {0}")]
    InvalidSpec(String),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("qubit count {0} is outside the supported range")]
    UnsupportedQubitCount(usize),
    #[error("measure requires {expected} qubits, state has {found}")]
    WrongQubitCount { expected: usize, found: usize },
    #[error("invalid measure {0:?}")]
    InvalidMeasure(String),
    #[error("invalid dephasing grid: {0}")]
    InvalidGrid(String),
    #[error("bisection tolerance {0:e} is below the 1e-8 floor")]
    ToleranceTooSmall(f64),
    #[error("measure {0} is already zero at p = 0; there is no entanglement to lose")]
    NoInitialEntanglement(String),
}
