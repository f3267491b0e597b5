use thiserror::Error;

use crate::lattice::Violation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e} at ({row}, {col}))")]
    NotHermitian {
        asymmetry: f64,
        row: usize,
        col: usize,
    },
    #[error("negative eigenvalue {eigenvalue:.3e} exceeds tolerance")]
    NegativeEigenvalueBeyondTolerance { eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Choi matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("|gamma| = {modulus} lies outside the closed unit disk")]
    OutsideUnitDisk { modulus: f64 },
    #[error(
        "intermediate block is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
    )]
    IntermediateBlockNotPsd { min_eigenvalue: f64 },
    #[error("parameter ({k}, {j}) is undefined")]
    UndefinedParameter { k: usize, j: usize },
    #[error("invalid parameter family: {0}")]
    InvariantViolation(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not completely positive: {0}")]
    Violation(Violation),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
