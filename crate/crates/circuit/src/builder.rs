use std::collections::BTreeMap;

use quantum_state::{Control, GateKind, GateOp, Qubit};

use crate::error::{CircuitError, Result};
use crate::ir::{Block, Op, Semantics};
use crate::stats::{CircuitStats, StatsAccumulator};

/// Scratch-qubit allocator.
///
/// A released ancilla returns to the free list either after a reset
/// (`release_dirty`) or on the caller's word that it was uncomputed
/// (`release_clean`).
#[derive(Clone, Debug, Default)]
pub struct AncillaPool {
    free: Vec<Qubit>,
    live: Vec<Qubit>,
    high_water: usize,
}

impl AncillaPool {
    pub fn live(&self) -> usize {
        self.live.len()
    }

    pub fn high_water(&self) -> usize {
        self.high_water
    }

    /// Every qubit the pool has ever handed out.
    pub fn size(&self) -> usize {
        self.free.len() + self.live.len()
    }

    fn take_live(&mut self, q: Qubit) -> Result<()> {
        let pos = self.live.iter().position(|&l| l == q).ok_or(CircuitError::NotLiveAncilla(q))?;
        self.live.swap_remove(pos);
        Ok(())
    }
}

/// Gate list under construction, with register labels, an ancilla pool and
/// incrementally maintained resource statistics.
#[derive(Clone, Debug, Default)]
pub struct Circuit {
    num_qubits: usize,
    root: Vec<Op>,
    open: Vec<Block>,
    labels: BTreeMap<String, Vec<Qubit>>,
    pool: AncillaPool,
    stats: StatsAccumulator,
    /// Set once a gate may have moved a qubit off |0>; cleared by reset.
    dirty: Vec<bool>,
}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Allocates `n` fresh qubits (in |0>) under `label`.
    pub fn alloc_register(&mut self, label: &str, n: usize) -> Result<Vec<Qubit>> {
        if self.labels.contains_key(label) {
            return Err(CircuitError::DuplicateLabel(label.to_string()));
        }
        let qubits: Vec<Qubit> = (self.num_qubits..self.num_qubits + n).collect();
        self.num_qubits += n;
        self.dirty.resize(self.num_qubits, false);
        self.labels.insert(label.to_string(), qubits.clone());
        Ok(qubits)
    }

    pub fn labels(&self) -> &BTreeMap<String, Vec<Qubit>> {
        &self.labels
    }

    pub fn register(&self, label: &str) -> Option<&[Qubit]> {
        self.labels.get(label).map(|v| v.as_slice())
    }

    /// A scratch qubit in |0>, reusing released ones first.
    pub fn alloc_ancilla(&mut self) -> Qubit {
        let q = self.pool.free.pop().unwrap_or_else(|| {
            self.num_qubits += 1;
            self.dirty.push(false);
            self.num_qubits - 1
        });
        self.pool.live.push(q);
        self.pool.high_water = self.pool.high_water.max(self.pool.live.len());
        q
    }

    pub fn alloc_ancillae(&mut self, n: usize) -> Vec<Qubit> {
        (0..n).map(|_| self.alloc_ancilla()).collect()
    }

    /// Returns an ancilla the caller has uncomputed back to |0>.
    pub fn release_clean(&mut self, q: Qubit) -> Result<()> {
        self.pool.take_live(q)?;
        self.dirty[q] = false;
        self.pool.free.push(q);
        Ok(())
    }

    /// Resets a garbage-holding ancilla with the measurement protocol, then frees it.
    pub fn release_dirty(&mut self, q: Qubit) -> Result<()> {
        self.pool.take_live(q)?;
        self.emit(GateOp::reset(q))?;
        self.pool.free.push(q);
        Ok(())
    }

    fn track_fresh(&mut self, g: &GateOp) {
        match g.kind() {
            GateKind::ResetProtocol => self.dirty[g.targets()[0]] = false,
            GateKind::X | GateKind::Y | GateKind::H | GateKind::Swap => {
                for &t in g.targets() {
                    self.dirty[t] = true;
                }
            }
            GateKind::Z | GateKind::Phase(_) | GateKind::Measure => {}
        }
    }

    /// True if no gate since allocation or the last reset could have moved
    /// `q` off |0>. Conservative: an X applied twice still counts as dirty.
    pub fn is_fresh(&self, q: Qubit) -> bool {
        !self.dirty.get(q).copied().unwrap_or(true)
    }

    /// Records that `q` was uncomputed back to |0> by the caller.
    pub fn mark_fresh(&mut self, q: Qubit) {
        if let Some(d) = self.dirty.get_mut(q) {
            *d = false;
        }
    }

    pub fn pool(&self) -> &AncillaPool {
        &self.pool
    }

    pub fn emit(&mut self, gate: GateOp) -> Result<()> {
        if let Some(qubit) = gate.qubits().find(|&q| q >= self.num_qubits) {
            return Err(CircuitError::Unallocated { qubit, num_qubits: self.num_qubits });
        }
        self.stats.record(&gate);
        self.track_fresh(&gate);
        let op = Op::Gate(gate);
        match self.open.last_mut() {
            Some(b) => b.ops.push(op),
            None => self.root.push(op),
        }
        Ok(())
    }

    /// Emits `f`'s gates inside a labelled block. With `semantics` set, the
    /// semantic backend replaces the whole block by its classical map.
    pub fn block<T, F>(&mut self, label: &'static str, semantics: Option<Semantics>, f: F) -> Result<T>
    where
        F: FnOnce(&mut Circuit) -> Result<T>,
    {
        if let Some(Semantics::AddTerms(a)) = &semantics {
            a.validate()?;
        }
        self.open.push(Block { label, semantics, ops: Vec::new() });
        let out = f(self);
        let block = self.open.pop().ok_or(CircuitError::OpenBlock)?;
        let value = out?;
        let op = Op::Block(block);
        match self.open.last_mut() {
            Some(b) => b.ops.push(op),
            None => self.root.push(op),
        }
        Ok(value)
    }

    pub fn x(&mut self, q: Qubit) -> Result<()> {
        self.emit(GateOp::x(q))
    }

    pub fn h(&mut self, q: Qubit) -> Result<()> {
        self.emit(GateOp::h(q))
    }

    pub fn cx(&mut self, c: Qubit, t: Qubit) -> Result<()> {
        self.emit(GateOp::cx(c, t)?)
    }

    /// X on `t` under arbitrary-polarity controls (at most two).
    pub fn mcx(&mut self, controls: &[Control], t: Qubit) -> Result<()> {
        self.emit(GateOp::new(GateKind::X, &[t], controls)?)
    }

    pub fn ccx(&mut self, c0: Control, c1: Control, t: Qubit) -> Result<()> {
        self.emit(GateOp::ccx(c0, c1, t)?)
    }

    pub fn phase(&mut self, q: Qubit, angle: f64, controls: &[Control]) -> Result<()> {
        self.emit(GateOp::new(GateKind::Phase(angle), &[q], controls)?)
    }

    pub fn swap(&mut self, a: Qubit, b: Qubit, controls: &[Control]) -> Result<()> {
        self.emit(GateOp::new(GateKind::Swap, &[a, b], controls)?)
    }

    pub fn measure(&mut self, q: Qubit) -> Result<()> {
        self.emit(GateOp::measure(q))
    }

    /// Reset protocol on an arbitrary (non-pool) qubit.
    pub fn reset(&mut self, q: Qubit) -> Result<()> {
        self.emit(GateOp::reset(q))
    }

    pub fn reset_all(&mut self, qubits: &[Qubit]) -> Result<()> {
        qubits.iter().try_for_each(|&q| self.reset(q))
    }

    pub fn ops(&self) -> &[Op] {
        &self.root
    }

    /// Moves out the ops emitted so far, keeping qubit layout, labels, pool
    /// state and statistics. Lets long programs be built and run in segments.
    pub fn take_ops(&mut self) -> Result<Vec<Op>> {
        if !self.open.is_empty() {
            return Err(CircuitError::OpenBlock);
        }
        Ok(std::mem::take(&mut self.root))
    }

    /// Appends previously built ops (e.g. an adjoint) with stats bookkeeping.
    pub fn extend(&mut self, ops: Vec<Op>) -> Result<()> {
        for op in &ops {
            let mut bad = None;
            op.for_each_gate(&mut |g| {
                if bad.is_none() {
                    bad = g.qubits().find(|&q| q >= self.num_qubits);
                }
            });
            if let Some(qubit) = bad {
                return Err(CircuitError::Unallocated { qubit, num_qubits: self.num_qubits });
            }
            self.stats.record_ops(std::slice::from_ref(op));
            op.for_each_gate(&mut |g| self.track_fresh(g));
        }
        match self.open.last_mut() {
            Some(b) => b.ops.extend(ops),
            None => self.root.extend(ops),
        }
        Ok(())
    }

    /// Statistics over everything emitted since construction.
    pub fn stats(&self) -> CircuitStats {
        self.stats.snapshot(self.pool.high_water, self.num_qubits)
    }

    /// One gate per line in the stable text format.
    pub fn dump(&self) -> String {
        dump_ops(&self.root)
    }
}

pub fn dump_ops(ops: &[Op]) -> String {
    let mut s = String::new();
    for op in ops {
        op.for_each_gate(&mut |g| {
            s.push_str(&g.to_string());
            s.push('\n');
        });
    }
    s
}
