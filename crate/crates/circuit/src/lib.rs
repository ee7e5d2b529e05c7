//! Circuit intermediate representation for arithmetic macro-ops.
//!
//! A [`Circuit`] is a tree of [`Op`]s: elementary gates and labelled blocks.
//! Blocks built by the arithmetic generators carry [`Semantics`], the
//! classical basis-state map they implement, so the same circuit can be run
//! gate by gate or as a classical permutation ([`Backend`]).
//!
//! Depth is greedy ASAP layering over all gates, controls included;
//! measurements and resets occupy a layer like any single-qubit gate.

mod builder;
mod error;
mod ir;
mod run;
mod stats;
pub mod verify;

pub use builder::{dump_ops, AncillaPool, Circuit};
pub use error::{CircuitError, Result};
pub use ir::{adjoint, flatten, AddTerms, Block, Op, Operand, Semantics, Term};
pub use quantum_state::{BasisIndex, Control, GateKind, GateOp, Polarity, QuantumState, Qubit, RngStream};
pub use run::{run_basis, run_ops, Backend, Event, EventKind, MeasurementRecord};
pub use stats::{CircuitStats, GateClass, StatsAccumulator};

impl Circuit {
    /// Runs the whole circuit on `state`.
    pub fn run(&self, state: &mut dyn QuantumState, backend: Backend, rng: &mut RngStream) -> Result<MeasurementRecord> {
        let mut record = MeasurementRecord::default();
        run_ops(self.ops(), state, backend, rng, &mut record)?;
        Ok(record)
    }
}
