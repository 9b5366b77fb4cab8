use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} needs {n} qubits, above the dense cap of {cap}")]
    SizeCap { what: &'static str, n: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("operator is not Hermitian (imaginary residue {0:e})")]
    NotHermitian(f64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("state is not normalized (norm deviation {0:e})")]
    Normalization(f64),
    #[error("sign approximation needs order above the cap of {0}")]
    OrderCap(usize),
    #[error("phase factors reach residual {residual:e}, above tolerance {tol:e}")]
    PhaseFactors { residual: f64, tol: f64 },
    #[error("eigendecomposition failed to converge")]
    Eigen,
    #[error("ancilla postselection failed after {0} attempts")]
    RetryCap(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
