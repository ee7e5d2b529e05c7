use thiserror::Error;

use crate::BasisIndex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} appears more than once in a gate")]
    DuplicateQubit(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("{requested} qubits exceeds the dense cap of {cap}")]
    DenseCapExceeded { requested: usize, cap: usize },
    #[error("{0} qubits exceeds the basis index capacity")]
    TooManyQubits(usize),
    #[error("projecting qubit {qubit} onto {outcome} leaves a zero-norm state")]
    ZeroNormProjection { qubit: usize, outcome: u8 },
    #[error("{0} has no unitary adjoint")]
    NotUnitary(&'static str),
    #[error("basis map is not injective: two states land on {0}")]
    NonInjective(BasisIndex),
    #[error("state must be normalized, got norm^2 = {0}")]
    NotNormalized(f64),
}

pub type Result<T, E = StateError> = std::result::Result<T, E>;
