use quantum_state::{BasisIndex, GateKind, QuantumState, Qubit, RngStream, SparseState};

use crate::error::{CircuitError, Result};
use crate::ir::Op;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Executes every elementary gate on the wavefunction.
    GateFaithful,
    /// Replaces blocks that carry semantics by their classical basis map.
    /// Resets keep outcome 0 whenever that branch is non-empty.
    Semantic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Measure,
    Reset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Event {
    pub kind: EventKind,
    pub qubit: Qubit,
    pub outcome: bool,
}

/// Outcomes of every measurement and reset, in execution order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub events: Vec<Event>,
}

impl MeasurementRecord {
    /// Reset outcomes equal to 1; each one flipped signs on some components.
    pub fn sign_flips(&self) -> usize {
        self.events.iter().filter(|e| e.kind == EventKind::Reset && e.outcome).count()
    }
}

pub fn run_ops(
    ops: &[Op],
    state: &mut dyn QuantumState,
    backend: Backend,
    rng: &mut RngStream,
    record: &mut MeasurementRecord,
) -> Result<()> {
    run_inner(ops, "<root>", state, backend, rng, record)
}

/// Runs `ops` on the basis state `input` and returns the single basis state
/// it maps to. Fails if the output is a superposition.
pub fn run_basis(
    ops: &[Op],
    num_qubits: usize,
    input: BasisIndex,
    backend: Backend,
    rng: &mut RngStream,
) -> Result<BasisIndex> {
    let mut state = SparseState::basis(num_qubits, input)?;
    let mut record = MeasurementRecord::default();
    run_ops(ops, &mut state, backend, rng, &mut record)?;
    let mut it = state.iter();
    match (it.next(), state.len()) {
        (Some((idx, amp)), 1) if (amp.norm_sqr() - 1.0).abs() < 1e-9 => Ok(*idx),
        _ => Err(CircuitError::NotBasis(state.len())),
    }
}

fn run_inner(
    ops: &[Op],
    label: &str,
    state: &mut dyn QuantumState,
    backend: Backend,
    rng: &mut RngStream,
    record: &mut MeasurementRecord,
) -> Result<()> {
    for op in ops {
        match op {
            Op::Block(b) => match (&b.semantics, backend) {
                (Some(sem), Backend::Semantic) => state.permute_basis(&mut |i| sem.apply(i))?,
                _ => run_inner(&b.ops, b.label, state, backend, rng, record)?,
            },
            Op::Gate(g) => {
                let q = g.targets()[0];
                match (g.kind(), backend) {
                    (GateKind::Measure, _) => {
                        g.check_range(state.num_qubits())?;
                        let outcome = state.measure_qubit(q, rng)?;
                        record.events.push(Event { kind: EventKind::Measure, qubit: q, outcome });
                    }
                    (GateKind::ResetProtocol, b) => {
                        g.check_range(state.num_qubits())?;
                        let outcome = match b {
                            Backend::GateFaithful => state.reset_ancilla(q, rng)?,
                            Backend::Semantic => state.reset_ancilla_forced(q, false)?,
                        };
                        record.events.push(Event { kind: EventKind::Reset, qubit: q, outcome });
                    }
                    (GateKind::H, Backend::Semantic) => {
                        return Err(CircuitError::NoSemantics { gate: g.to_string(), block: label.to_string() })
                    }
                    _ => state.apply_gate(g)?,
                }
            }
        }
    }
    Ok(())
}
