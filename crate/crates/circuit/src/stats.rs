use std::collections::BTreeMap;
use std::fmt;

use quantum_state::{GateKind, GateOp};

use crate::ir::Op;

/// Gate kind with the rotation angle erased, for counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateClass {
    X,
    Y,
    Z,
    H,
    Phase,
    Swap,
    Measure,
    Reset,
}

impl GateClass {
    pub fn of(kind: GateKind) -> Self {
        match kind {
            GateKind::X => GateClass::X,
            GateKind::Y => GateClass::Y,
            GateKind::Z => GateClass::Z,
            GateKind::H => GateClass::H,
            GateKind::Phase(_) => GateClass::Phase,
            GateKind::Swap => GateClass::Swap,
            GateKind::Measure => GateClass::Measure,
            GateKind::ResetProtocol => GateClass::Reset,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateClass::X => "X",
            GateClass::Y => "Y",
            GateClass::Z => "Z",
            GateClass::H => "H",
            GateClass::Phase => "PHASE",
            GateClass::Swap => "SWAP",
            GateClass::Measure => "MEASURE",
            GateClass::Reset => "RESET",
        }
    }

    /// Every phase gate counts as a rotation, whatever its angle.
    pub fn is_rotation(&self) -> bool {
        matches!(self, GateClass::Phase)
    }
}

impl fmt::Display for GateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Snapshot of resource counts. Toffoli and controlled-swap gates are
/// counted as single 3-qubit operations, not decomposed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CircuitStats {
    /// Gate counts keyed by (class, arity), arity = targets + controls.
    pub counts: BTreeMap<(GateClass, usize), u64>,
    /// ASAP layer count; measurements and resets occupy a layer like gates.
    pub depth: u64,
    /// Maximum number of simultaneously live pool ancillae.
    pub ancilla_high_water: usize,
    pub total_qubits: usize,
}

impl CircuitStats {
    pub fn total_gates(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, class: GateClass, arity: usize) -> u64 {
        self.counts.get(&(class, arity)).copied().unwrap_or(0)
    }

    /// Gates of any class touching exactly `arity` qubits.
    pub fn by_arity(&self, arity: usize) -> u64 {
        self.counts.iter().filter(|((_, a), _)| *a == arity).map(|(_, n)| n).sum()
    }

    pub fn by_class(&self, class: GateClass) -> u64 {
        self.counts.iter().filter(|((c, _), _)| *c == class).map(|(_, n)| n).sum()
    }
}

/// Incremental gate counter and ASAP depth scheduler.
#[derive(Clone, Debug, Default)]
pub struct StatsAccumulator {
    counts: BTreeMap<(GateClass, usize), u64>,
    frontier: Vec<u64>,
    depth: u64,
}

impl StatsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, g: &GateOp) {
        *self.counts.entry((GateClass::of(g.kind()), g.arity())).or_insert(0) += 1;
        let top = g.qubits().max().unwrap_or(0);
        if self.frontier.len() <= top {
            self.frontier.resize(top + 1, 0);
        }
        let layer = 1 + g.qubits().map(|q| self.frontier[q]).max().unwrap_or(0);
        for q in g.qubits() {
            self.frontier[q] = layer;
        }
        self.depth = self.depth.max(layer);
    }

    pub fn record_ops(&mut self, ops: &[Op]) {
        for op in ops {
            op.for_each_gate(&mut |g| self.record(g));
        }
    }

    pub fn snapshot(&self, ancilla_high_water: usize, total_qubits: usize) -> CircuitStats {
        CircuitStats { counts: self.counts.clone(), depth: self.depth, ancilla_high_water, total_qubits }
    }
}
