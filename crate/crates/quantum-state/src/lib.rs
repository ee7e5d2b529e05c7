//! Wavefunction backends for arithmetic-circuit simulation.
//!
//! [`SparseState`] keeps only nonzero amplitudes and scales to hundreds of
//! qubits as long as the state stays close to a few basis states.
//! [`DenseState`] stores the full vector and is capped at [`DENSE_CAP`]
//! qubits. Both implement [`QuantumState`], including the measure-based
//! ancilla reset (Hadamard, measure, conditional X).
//!
//! Qubit `k` is bit `k` of a [`BasisIndex`].

mod basis;
mod dense;
mod error;
mod gate;
mod rng;
mod sparse;

pub use basis::{BasisIndex, MAX_QUBITS};
pub use dense::{DenseState, DENSE_CAP};
pub use error::{Result, StateError};
pub use gate::{Control, GateKind, GateOp, Polarity, Qubit};
pub use num_complex::Complex64;
pub use rng::{splitmix64, RngStream};
pub use sparse::{SparseState, PRUNE_THRESHOLD};

/// Wavefunction amplitude.
pub type Amplitude = Complex64;

/// Below this, a measurement branch counts as empty for forced resets.
const EMPTY_BRANCH: f64 = 1e-12;

pub(crate) fn check_qubit(q: Qubit, num_qubits: usize) -> Result<()> {
    if q < num_qubits {
        Ok(())
    } else {
        Err(StateError::QubitOutOfRange { qubit: q, num_qubits })
    }
}

pub trait QuantumState {
    fn num_qubits(&self) -> usize;

    /// Applies a unitary gate. Measure and reset go through
    /// [`measure_qubit`](Self::measure_qubit) and [`reset_ancilla`](Self::reset_ancilla).
    fn apply_gate(&mut self, gate: &GateOp) -> Result<()>;

    /// Probability that measuring `q` gives `outcome`.
    fn probability(&self, q: Qubit, outcome: bool) -> Result<f64>;

    /// Discards the branch where `q != outcome` and renormalizes.
    fn project(&mut self, q: Qubit, outcome: bool) -> Result<()>;

    fn amplitude(&self, idx: &BasisIndex) -> Complex64;

    /// Nonzero amplitudes in ascending basis order.
    fn entries(&self) -> Vec<(BasisIndex, Complex64)>;

    /// Relabels basis states through `f`, which must be injective on the support.
    fn permute_basis(&mut self, f: &mut dyn FnMut(BasisIndex) -> BasisIndex) -> Result<()>;

    fn norm_sqr(&self) -> f64;

    /// Measures `q` using a supplied uniform `u` in `[0, 1)`: outcome 0 iff `u < P(0)`.
    fn measure_qubit_with_uniform(&mut self, q: Qubit, u: f64) -> Result<bool> {
        let p0 = self.probability(q, false)?;
        let outcome = u >= p0;
        self.project(q, outcome)?;
        Ok(outcome)
    }

    fn measure_qubit(&mut self, q: Qubit, rng: &mut RngStream) -> Result<bool> {
        let u = rng.next_uniform();
        self.measure_qubit_with_uniform(q, u)
    }

    /// Returns `q` to |0> by Hadamard, measurement and a conditional X.
    ///
    /// Magnitudes of the other qubits' components are untouched; components
    /// where the ancilla held 1 pick up a sign of `(-1)^outcome`. Returns the
    /// measured outcome so the sign pattern can be reconstructed.
    fn reset_ancilla(&mut self, q: Qubit, rng: &mut RngStream) -> Result<bool> {
        let u = rng.next_uniform();
        self.reset_ancilla_with_uniform(q, u)
    }

    fn reset_ancilla_with_uniform(&mut self, q: Qubit, u: f64) -> Result<bool> {
        self.apply_gate(&GateOp::h(q))?;
        let outcome = self.measure_qubit_with_uniform(q, u)?;
        if outcome {
            self.apply_gate(&GateOp::x(q))?;
        }
        Ok(outcome)
    }

    /// Reset with the measurement outcome fixed to `preferred`, falling back
    /// to the other branch only when `preferred` has (numerically) zero weight.
    fn reset_ancilla_forced(&mut self, q: Qubit, preferred: bool) -> Result<bool> {
        self.apply_gate(&GateOp::h(q))?;
        let outcome = if self.probability(q, preferred)? > EMPTY_BRANCH { preferred } else { !preferred };
        self.project(q, outcome)?;
        if outcome {
            self.apply_gate(&GateOp::x(q))?;
        }
        Ok(outcome)
    }

    /// Applies any gate kind; returns the outcome for Measure and ResetProtocol.
    fn execute(&mut self, gate: &GateOp, rng: &mut RngStream) -> Result<Option<bool>> {
        match gate.kind() {
            GateKind::Measure => {
                gate.check_range(self.num_qubits())?;
                self.measure_qubit(gate.targets()[0], rng).map(Some)
            }
            GateKind::ResetProtocol => {
                gate.check_range(self.num_qubits())?;
                self.reset_ancilla(gate.targets()[0], rng).map(Some)
            }
            _ => self.apply_gate(gate).map(|_| None),
        }
    }
}

/// Rotates `entries` so the largest-magnitude amplitude is real and positive.
/// Ties resolve to the lowest basis index.
pub fn fix_global_phase(entries: &[(BasisIndex, Complex64)]) -> Vec<(BasisIndex, Complex64)> {
    let mut best: Option<&(BasisIndex, Complex64)> = None;
    for e in entries {
        // A small slack keeps ties from being decided by rounding noise.
        if best.is_none_or(|b| e.1.norm() > b.1.norm() + 1e-12) {
            best = Some(e);
        }
    }
    let rot = match best {
        Some((_, a)) if a.norm() > 0.0 => a.conj() / a.norm(),
        _ => Complex64::new(1.0, 0.0),
    };
    entries.iter().map(|(i, a)| (*i, a * rot)).collect()
}

/// Compares two states up to a global phase, amplitude by amplitude.
pub fn approx_eq_up_to_phase(a: &dyn QuantumState, b: &dyn QuantumState, tol: f64) -> bool {
    let fa = fix_global_phase(&a.entries());
    let fb = fix_global_phase(&b.entries());
    let get = |v: &[(BasisIndex, Complex64)], i: &BasisIndex| {
        v.binary_search_by(|e| e.0.cmp(i)).map(|k| v[k].1).unwrap_or_default()
    };
    fa.iter().all(|(i, x)| (x - get(&fb, i)).norm() <= tol) && fb.iter().all(|(i, y)| (y - get(&fa, i)).norm() <= tol)
}
