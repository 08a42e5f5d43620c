// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra and exact open-system evolution for small
//! qubit registers.

mod channel;
pub mod gates;
mod matrix;
mod state;

pub use channel::{pauli_strings, KrausChannel};
pub use matrix::{kron, ComplexMatrix};
pub use num_complex::Complex64;
pub use state::DensityMatrix;

/// Tolerance for equalities (Hermiticity, trace, unitarity, completeness).
pub const EQ_TOL: f64 = 1e-12;
/// Lowest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum QsimError {
    #[error("matrix must have positive dimensions")]
    EmptyMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not a qubit register dimension")]
    NotQubitDimension(usize),
    #[error("register of {0} qubits is outside 1..=10")]
    QubitCount(usize),
    #[error("invalid targets: {0}")]
    InvalidTargets(String),
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("observable is not Hermitian")]
    NotHermitian,
    #[error("Kraus set is incomplete (defect {0:e})")]
    IncompleteKraus(f64),
    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
}
