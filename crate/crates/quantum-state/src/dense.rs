use num_complex::Complex64;

use crate::error::{Result, StateError};
use crate::gate::{Control, GateKind, GateOp, Polarity, Qubit};
use crate::{check_qubit, BasisIndex, QuantumState, SparseState};

/// Widest register file the dense backend accepts (2^26 amplitudes, 1 GiB).
pub const DENSE_CAP: usize = 26;

/// Full statevector of length `2^num_qubits`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn masks(controls: &[Control]) -> (usize, usize) {
    controls.iter().fold((0, 0), |(mask, want), c| {
        let bit = 1usize << c.qubit;
        match c.polarity {
            Polarity::One => (mask | bit, want | bit),
            Polarity::Zero => (mask | bit, want),
        }
    })
}

impl DenseState {
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, idx: usize) -> Result<Self> {
        if num_qubits > DENSE_CAP {
            return Err(StateError::DenseCapExceeded { requested: num_qubits, cap: DENSE_CAP });
        }
        let mut amps = vec![Complex64::default(); 1usize << num_qubits];
        let slot = amps.get_mut(idx).ok_or_else(|| StateError::QubitOutOfRange {
            qubit: (usize::BITS - 1 - idx.leading_zeros()) as usize,
            num_qubits,
        })?;
        *slot = Complex64::new(1.0, 0.0);
        Ok(DenseState { num_qubits, amps })
    }

    /// Wraps an explicit amplitude vector; it must be normalized to 1e-10.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(StateError::InvalidGate(format!("amplitude vector length {len} is not a power of two")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > DENSE_CAP {
            return Err(StateError::DenseCapExceeded { requested: num_qubits, cap: DENSE_CAP });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(DenseState { num_qubits, amps })
    }

    pub fn from_sparse(s: &SparseState) -> Result<Self> {
        let n = s.num_qubits();
        if n > DENSE_CAP {
            return Err(StateError::DenseCapExceeded { requested: n, cap: DENSE_CAP });
        }
        let mut amps = vec![Complex64::default(); 1usize << n];
        for (idx, a) in s.iter() {
            // Range was checked on insertion, so the index fits in `n` bits.
            amps[idx.to_u64().expect("index below dense cap") as usize] = *a;
        }
        Ok(DenseState { num_qubits: n, amps })
    }

    /// Exact conversion; zero amplitudes are not stored.
    pub fn to_sparse(&self) -> Result<SparseState> {
        SparseState::from_entries(
            self.num_qubits,
            self.amps
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != Complex64::default())
                .map(|(i, a)| (BasisIndex::from_u64(i as u64), *a)),
        )
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    fn for_pairs<F>(&mut self, t: usize, controls: &[Control], mut f: F)
    where
        F: FnMut(&mut Complex64, &mut Complex64),
    {
        let (mask, want) = masks(controls);
        let tb = 1usize << t;
        for i in 0..self.amps.len() {
            if i & tb == 0 && i & mask == want {
                let (lo, hi) = self.amps.split_at_mut(i | tb);
                f(&mut lo[i], &mut hi[0]);
            }
        }
    }
}

impl QuantumState for DenseState {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.check_range(self.num_qubits)?;
        let t = gate.targets()[0];
        let controls = gate.controls();
        match gate.kind() {
            GateKind::X => self.for_pairs(t, controls, std::mem::swap),
            GateKind::Y => self.for_pairs(t, controls, |a0, a1| {
                let (x0, x1) = (*a0, *a1);
                *a0 = x1 * Complex64::new(0.0, -1.0);
                *a1 = x0 * Complex64::new(0.0, 1.0);
            }),
            GateKind::Z => self.for_pairs(t, controls, |_, a1| *a1 = -*a1),
            GateKind::Phase(theta) => {
                let f = Complex64::from_polar(1.0, theta);
                self.for_pairs(t, controls, |_, a1| *a1 *= f)
            }
            GateKind::H => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_pairs(t, controls, |a0, a1| {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = (x0 + x1) * s;
                    *a1 = (x0 - x1) * s;
                })
            }
            GateKind::Swap => {
                let (mask, want) = masks(controls);
                let (ta, tb) = (1usize << t, 1usize << gate.targets()[1]);
                for i in 0..self.amps.len() {
                    if i & ta != 0 && i & tb == 0 && i & mask == want {
                        self.amps.swap(i, i ^ ta ^ tb);
                    }
                }
            }
            GateKind::Measure | GateKind::ResetProtocol => {
                return Err(StateError::InvalidGate(format!(
                    "{} needs a random stream; use measure_qubit or reset_ancilla",
                    gate.kind().name()
                )))
            }
        }
        Ok(())
    }

    fn probability(&self, q: Qubit, outcome: bool) -> Result<f64> {
        check_qubit(q, self.num_qubits)?;
        let b = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & b != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn project(&mut self, q: Qubit, outcome: bool) -> Result<()> {
        let p = self.probability(q, outcome)?;
        if p == 0.0 {
            return Err(StateError::ZeroNormProjection { qubit: q, outcome: outcome as u8 });
        }
        let b = 1usize << q;
        let scale = 1.0 / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & b != 0) == outcome {
                *a *= scale;
            } else {
                *a = Complex64::default();
            }
        }
        Ok(())
    }

    fn amplitude(&self, idx: &BasisIndex) -> Complex64 {
        idx.to_u64().and_then(|i| self.amps.get(i as usize)).copied().unwrap_or_default()
    }

    fn entries(&self) -> Vec<(BasisIndex, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != Complex64::default())
            .map(|(i, a)| (BasisIndex::from_u64(i as u64), *a))
            .collect()
    }

    fn permute_basis(&mut self, f: &mut dyn FnMut(BasisIndex) -> BasisIndex) -> Result<()> {
        let mut out = vec![Complex64::default(); self.amps.len()];
        let mut hit = vec![false; self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            if *a == Complex64::default() {
                continue;
            }
            let j = f(BasisIndex::from_u64(i as u64));
            let slot = j
                .to_u64()
                .map(|j| j as usize)
                .filter(|&j| j < out.len())
                .ok_or(StateError::QubitOutOfRange {
                    qubit: j.highest_bit().unwrap_or(0),
                    num_qubits: self.num_qubits,
                })?;
            if hit[slot] {
                return Err(StateError::NonInjective(j));
            }
            hit[slot] = true;
            out[slot] = *a;
        }
        self.amps = out;
        Ok(())
    }

    fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}
