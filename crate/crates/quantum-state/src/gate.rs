use std::fmt;

use arrayvec::ArrayVec;

use crate::error::{Result, StateError};
use crate::BasisIndex;

pub type Qubit = usize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    /// `diag(1, e^{i angle})` on the target.
    Phase(f64),
    Swap,
    Measure,
    /// Hadamard, measure, then X on outcome 1. Leaves the target in |0>.
    ResetProtocol,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::Phase(_) => "PHASE",
            GateKind::Swap => "SWAP",
            GateKind::Measure => "MEASURE",
            GateKind::ResetProtocol => "RESET",
        }
    }

    fn max_controls(&self) -> usize {
        match self {
            GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::Phase(_) => 2,
            GateKind::Swap => 1,
            GateKind::Measure | GateKind::ResetProtocol => 0,
        }
    }

    fn num_targets(&self) -> usize {
        match self {
            GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateKind::Measure | GateKind::ResetProtocol)
    }
}

/// Which control value activates a gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires on |1>.
    One,
    /// Fires on |0> (drawn as an open circle).
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: Qubit,
    pub polarity: Polarity,
}

impl Control {
    pub fn one(qubit: Qubit) -> Self {
        Control { qubit, polarity: Polarity::One }
    }

    pub fn zero(qubit: Qubit) -> Self {
        Control { qubit, polarity: Polarity::Zero }
    }

    /// Control on `qubit` firing when it reads `value`.
    pub fn on(qubit: Qubit, value: bool) -> Self {
        if value {
            Control::one(qubit)
        } else {
            Control::zero(qubit)
        }
    }

    #[inline]
    pub fn holds(&self, idx: &BasisIndex) -> bool {
        idx.bit(self.qubit) == (self.polarity == Polarity::One)
    }

    pub fn inverted(self) -> Self {
        let polarity = match self.polarity {
            Polarity::One => Polarity::Zero,
            Polarity::Zero => Polarity::One,
        };
        Control { polarity, ..self }
    }
}

/// One elementary gate with polarity-tagged controls.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    targets: ArrayVec<Qubit, 2>,
    controls: ArrayVec<Control, 2>,
}

impl GateOp {
    pub fn new(kind: GateKind, targets: &[Qubit], controls: &[Control]) -> Result<Self> {
        if targets.len() != kind.num_targets() {
            return Err(StateError::InvalidGate(format!(
                "{} takes {} target(s), got {}",
                kind.name(),
                kind.num_targets(),
                targets.len()
            )));
        }
        if controls.len() > kind.max_controls() {
            return Err(StateError::InvalidGate(format!(
                "{} takes at most {} control(s), got {}",
                kind.name(),
                kind.max_controls(),
                controls.len()
            )));
        }
        if let GateKind::Phase(a) = kind {
            if !a.is_finite() {
                return Err(StateError::InvalidGate(format!("non-finite phase angle {a}")));
            }
        }
        let mut seen: ArrayVec<Qubit, 4> = ArrayVec::new();
        for q in targets.iter().copied().chain(controls.iter().map(|c| c.qubit)) {
            if seen.contains(&q) {
                return Err(StateError::DuplicateQubit(q));
            }
            seen.push(q);
        }
        Ok(GateOp {
            kind,
            targets: targets.iter().copied().collect(),
            controls: controls.iter().copied().collect(),
        })
    }

    pub fn x(q: Qubit) -> Self {
        Self::new(GateKind::X, &[q], &[]).expect("valid gate")
    }

    pub fn h(q: Qubit) -> Self {
        Self::new(GateKind::H, &[q], &[]).expect("valid gate")
    }

    pub fn cx(c: Qubit, t: Qubit) -> Result<Self> {
        Self::new(GateKind::X, &[t], &[Control::one(c)])
    }

    pub fn ccx(c0: Control, c1: Control, t: Qubit) -> Result<Self> {
        Self::new(GateKind::X, &[t], &[c0, c1])
    }

    pub fn phase(q: Qubit, angle: f64) -> Result<Self> {
        Self::new(GateKind::Phase(angle), &[q], &[])
    }

    pub fn swap(a: Qubit, b: Qubit) -> Result<Self> {
        Self::new(GateKind::Swap, &[a, b], &[])
    }

    pub fn measure(q: Qubit) -> Self {
        Self::new(GateKind::Measure, &[q], &[]).expect("valid gate")
    }

    pub fn reset(q: Qubit) -> Self {
        Self::new(GateKind::ResetProtocol, &[q], &[]).expect("valid gate")
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[Qubit] {
        &self.targets
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    /// Total qubits touched: targets plus controls.
    pub fn arity(&self) -> usize {
        self.targets.len() + self.controls.len()
    }

    pub fn qubits(&self) -> impl Iterator<Item = Qubit> + '_ {
        self.targets.iter().copied().chain(self.controls.iter().map(|c| c.qubit))
    }

    #[inline]
    pub fn controls_hold(&self, idx: &BasisIndex) -> bool {
        self.controls.iter().all(|c| c.holds(idx))
    }

    pub fn check_range(&self, num_qubits: usize) -> Result<()> {
        match self.qubits().find(|&q| q >= num_qubits) {
            Some(qubit) => Err(StateError::QubitOutOfRange { qubit, num_qubits }),
            None => Ok(()),
        }
    }

    pub fn adjoint(&self) -> Result<Self> {
        let kind = match self.kind {
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::Measure => return Err(StateError::NotUnitary("MEASURE")),
            GateKind::ResetProtocol => return Err(StateError::NotUnitary("RESET")),
            k => k,
        };
        Ok(GateOp { kind, ..self.clone() })
    }
}

/// `KIND targets=[..] controls=[(q,+|-)..] angle=<rad>`
impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} targets=[", self.kind.name())?;
        for (i, t) in self.targets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("] controls=[")?;
        for (i, c) in self.controls.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let p = if c.polarity == Polarity::One { '+' } else { '-' };
            write!(f, "({},{p})", c.qubit)?;
        }
        let angle = match self.kind {
            GateKind::Phase(a) => a,
            _ => 0.0,
        };
        write!(f, "] angle={angle:?}")
    }
}
