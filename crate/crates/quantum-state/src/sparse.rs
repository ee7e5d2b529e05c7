use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Result, StateError};
use crate::gate::{GateKind, GateOp, Qubit};
use crate::{check_qubit, BasisIndex, DenseState, QuantumState, MAX_QUBITS};

/// Amplitudes below this magnitude are dropped after interfering gates.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Wavefunction stored as a map from basis label to amplitude.
///
/// Memory scales with the number of nonzero amplitudes, so classical
/// arithmetic on a handful of basis states stays cheap at any width.
#[derive(Clone, Debug)]
pub struct SparseState {
    num_qubits: usize,
    entries: FxHashMap<BasisIndex, Complex64>,
    scratch: FxHashMap<BasisIndex, Complex64>,
}

impl SparseState {
    /// The all-zero basis state.
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, BasisIndex::ZERO)
    }

    pub fn basis(num_qubits: usize, idx: BasisIndex) -> Result<Self> {
        Self::check_size(num_qubits, &idx)?;
        let mut entries = FxHashMap::default();
        entries.insert(idx, Complex64::new(1.0, 0.0));
        Ok(SparseState { num_qubits, entries, scratch: FxHashMap::default() })
    }

    /// Builds a state from explicit amplitudes; zero amplitudes are skipped.
    /// The result must be normalized to within 1e-10.
    pub fn from_entries<I>(num_qubits: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisIndex, Complex64)>,
    {
        let mut map = FxHashMap::default();
        for (idx, a) in entries {
            Self::check_size(num_qubits, &idx)?;
            if a != Complex64::new(0.0, 0.0) {
                *map.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += a;
            }
        }
        let norm: f64 = map.values().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(SparseState { num_qubits, entries: map, scratch: FxHashMap::default() })
    }

    fn check_size(num_qubits: usize, idx: &BasisIndex) -> Result<()> {
        if num_qubits > MAX_QUBITS {
            return Err(StateError::TooManyQubits(num_qubits));
        }
        match idx.highest_bit() {
            Some(q) if q >= num_qubits => Err(StateError::QubitOutOfRange { qubit: q, num_qubits }),
            _ => Ok(()),
        }
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Unordered view of the stored amplitudes.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Complex64)> {
        self.entries.iter()
    }

    /// Adds qubits in |0> above the current register file.
    pub fn grow(&mut self, num_qubits: usize) -> Result<()> {
        if num_qubits > MAX_QUBITS {
            return Err(StateError::TooManyQubits(num_qubits));
        }
        self.num_qubits = self.num_qubits.max(num_qubits);
        Ok(())
    }

    pub fn to_dense(&self) -> Result<DenseState> {
        DenseState::from_sparse(self)
    }

    /// Rebuilds the map through `f`, which must be injective on the support.
    fn rekey<F>(&mut self, mut f: F) -> Result<()>
    where
        F: FnMut(BasisIndex, Complex64) -> (BasisIndex, Complex64),
    {
        self.scratch.clear();
        self.scratch.reserve(self.entries.len());
        for (idx, a) in self.entries.drain() {
            let (j, b) = f(idx, a);
            if self.scratch.insert(j, b).is_some() {
                return Err(StateError::NonInjective(j));
            }
        }
        std::mem::swap(&mut self.entries, &mut self.scratch);
        Ok(())
    }

    fn prune(&mut self) {
        let before = self.entries.len();
        self.entries.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        if self.entries.len() != before {
            self.renormalize();
        }
    }

    fn renormalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for a in self.entries.values_mut() {
                *a /= n;
            }
        }
    }
}

impl QuantumState for SparseState {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.check_range(self.num_qubits)?;
        let t = gate.targets()[0];
        match gate.kind() {
            GateKind::X => self.rekey(|mut idx, a| {
                if gate.controls_hold(&idx) {
                    idx.flip(t);
                }
                (idx, a)
            }),
            GateKind::Y => self.rekey(|mut idx, a| {
                if !gate.controls_hold(&idx) {
                    return (idx, a);
                }
                let was_one = idx.bit(t);
                idx.flip(t);
                // Y|0> = i|1>, Y|1> = -i|0>
                let f = if was_one { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
                (idx, a * f)
            }),
            GateKind::Z | GateKind::Phase(_) => {
                let f = match gate.kind() {
                    GateKind::Phase(theta) => Complex64::from_polar(1.0, theta),
                    _ => Complex64::new(-1.0, 0.0),
                };
                for (idx, a) in self.entries.iter_mut() {
                    if idx.bit(t) && gate.controls_hold(idx) {
                        *a *= f;
                    }
                }
                Ok(())
            }
            GateKind::Swap => {
                let u = gate.targets()[1];
                self.rekey(|mut idx, a| {
                    if idx.bit(t) != idx.bit(u) && gate.controls_hold(&idx) {
                        idx.flip(t);
                        idx.flip(u);
                    }
                    (idx, a)
                })
            }
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.scratch.clear();
                let zero = Complex64::new(0.0, 0.0);
                for (idx, a) in self.entries.drain() {
                    if !gate.controls_hold(&idx) {
                        *self.scratch.entry(idx).or_insert(zero) += a;
                        continue;
                    }
                    let sign = if idx.bit(t) { -1.0 } else { 1.0 };
                    *self.scratch.entry(idx.with_bit(t, false)).or_insert(zero) += a * s;
                    *self.scratch.entry(idx.with_bit(t, true)).or_insert(zero) += a * (s * sign);
                }
                std::mem::swap(&mut self.entries, &mut self.scratch);
                self.prune();
                Ok(())
            }
            GateKind::Measure | GateKind::ResetProtocol => Err(StateError::InvalidGate(format!(
                "{} needs a random stream; use measure_qubit or reset_ancilla",
                gate.kind().name()
            ))),
        }
    }

    fn probability(&self, q: Qubit, outcome: bool) -> Result<f64> {
        check_qubit(q, self.num_qubits)?;
        Ok(self.entries.iter().filter(|(i, _)| i.bit(q) == outcome).map(|(_, a)| a.norm_sqr()).sum())
    }

    fn project(&mut self, q: Qubit, outcome: bool) -> Result<()> {
        check_qubit(q, self.num_qubits)?;
        self.entries.retain(|i, _| i.bit(q) == outcome);
        if self.entries.is_empty() {
            return Err(StateError::ZeroNormProjection { qubit: q, outcome: outcome as u8 });
        }
        self.renormalize();
        Ok(())
    }

    fn amplitude(&self, idx: &BasisIndex) -> Complex64 {
        self.entries.get(idx).copied().unwrap_or_default()
    }

    fn entries(&self) -> Vec<(BasisIndex, Complex64)> {
        let mut v: Vec<_> = self.entries.iter().map(|(i, a)| (*i, *a)).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn permute_basis(&mut self, f: &mut dyn FnMut(BasisIndex) -> BasisIndex) -> Result<()> {
        let n = self.num_qubits;
        let mut range_err = None;
        self.rekey(|idx, a| {
            let j = f(idx);
            if let Some(q) = j.highest_bit().filter(|&q| q >= n) {
                range_err = Some(q);
            }
            (j, a)
        })?;
        match range_err {
            Some(qubit) => Err(StateError::QubitOutOfRange { qubit, num_qubits: n }),
            None => Ok(()),
        }
    }

    fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum()
    }
}
