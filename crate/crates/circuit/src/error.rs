use quantum_state::{Qubit, StateError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("qubit {qubit} is not allocated (circuit has {num_qubits})")]
    Unallocated { qubit: Qubit, num_qubits: usize },
    #[error("qubit {0} is not a live ancilla")]
    NotLiveAncilla(Qubit),
    #[error("no registered semantics for {gate} in block `{block}`")]
    NoSemantics { gate: String, block: String },
    #[error("register label `{0}` already in use")]
    DuplicateLabel(String),
    #[error("invalid semantics: {0}")]
    InvalidSemantics(String),
    #[error("output is spread over {0} basis states, expected one")]
    NotBasis(usize),
    #[error("block stack is unbalanced")]
    OpenBlock,
}

pub type Result<T, E = CircuitError> = std::result::Result<T, E>;
