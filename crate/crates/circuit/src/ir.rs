use quantum_state::{BasisIndex, Control, GateOp, Qubit};

use crate::error::{CircuitError, Result};

/// A register read as an integer, little-endian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operand {
    pub qubits: Vec<Qubit>,
    /// Two's complement: the top qubit weighs `-2^(len-1)`.
    pub signed: bool,
}

impl Operand {
    pub fn new(qubits: &[Qubit], signed: bool) -> Self {
        Operand { qubits: qubits.to_vec(), signed }
    }

    pub fn unsigned(qubits: &[Qubit]) -> Self {
        Self::new(qubits, false)
    }

    pub fn signed(qubits: &[Qubit]) -> Self {
        Self::new(qubits, true)
    }

    /// Integer weight of bit `i`.
    pub fn weight(&self, i: usize) -> i128 {
        if self.signed && i + 1 == self.qubits.len() {
            -(1i128 << i)
        } else {
            1i128 << i
        }
    }

    pub fn value(&self, idx: &BasisIndex) -> i128 {
        let raw = idx.read(&self.qubits) as i128;
        let n = self.qubits.len();
        if self.signed && n > 0 && (raw >> (n - 1)) & 1 == 1 {
            raw - (1i128 << n)
        } else {
            raw
        }
    }
}

/// `scale * prod(factors)`; an empty factor list is a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub scale: i128,
    pub factors: Vec<Operand>,
}

impl Term {
    pub fn constant(scale: i128) -> Self {
        Term { scale, factors: Vec::new() }
    }

    pub fn linear(scale: i128, x: Operand) -> Self {
        Term { scale, factors: vec![x] }
    }

    pub fn product(scale: i128, x: Operand, y: Operand) -> Self {
        Term { scale, factors: vec![x, y] }
    }
}

/// `target += sum(terms) mod 2^len(target)` when every control holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddTerms {
    pub target: Vec<Qubit>,
    pub terms: Vec<Term>,
    pub controls: Vec<Control>,
}

impl AddTerms {
    pub fn validate(&self) -> Result<()> {
        let n = self.target.len();
        if n == 0 || n > 120 {
            return Err(CircuitError::InvalidSemantics(format!("target width {n} outside 1..=120")));
        }
        let mut seen: Vec<Qubit> = self.target.clone();
        seen.extend(self.controls.iter().map(|c| c.qubit));
        let mut sorted = seen.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CircuitError::InvalidSemantics("target and controls overlap".into()));
        }
        for t in &self.terms {
            for f in &t.factors {
                if f.qubits.iter().any(|q| self.target.contains(q)) {
                    return Err(CircuitError::InvalidSemantics("operand overlaps target".into()));
                }
                if f.qubits.len() > 60 {
                    return Err(CircuitError::InvalidSemantics("operand wider than 60 qubits".into()));
                }
            }
        }
        Ok(())
    }

    /// Classical transition on one basis state.
    pub fn apply(&self, mut idx: BasisIndex) -> BasisIndex {
        if !self.controls.iter().all(|c| c.holds(&idx)) {
            return idx;
        }
        let delta = self.terms.iter().fold(0i128, |acc, t| {
            let v = t.factors.iter().fold(t.scale, |v, f| v.wrapping_mul(f.value(&idx)));
            acc.wrapping_add(v)
        });
        let n = self.target.len();
        let mask = (1u128 << n) - 1;
        let cur = idx.read(&self.target);
        idx.write(&self.target, (cur.wrapping_add(delta as u128)) & mask);
        idx
    }

    /// Subtracts instead of adds.
    pub fn inverse(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { scale: t.scale.wrapping_neg(), factors: t.factors.clone() })
            .collect();
        AddTerms { terms, ..self.clone() }
    }
}

/// Classical meaning attached to a block, used by the semantic backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Semantics {
    AddTerms(AddTerms),
}

impl Semantics {
    pub fn apply(&self, idx: BasisIndex) -> BasisIndex {
        match self {
            Semantics::AddTerms(a) => a.apply(idx),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Semantics::AddTerms(a) => Semantics::AddTerms(a.inverse()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub label: &'static str,
    pub semantics: Option<Semantics>,
    pub ops: Vec<Op>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Gate(GateOp),
    Block(Block),
}

impl Op {
    /// Visits every elementary gate in program order.
    pub fn for_each_gate<F: FnMut(&GateOp)>(&self, f: &mut F) {
        match self {
            Op::Gate(g) => f(g),
            Op::Block(b) => b.ops.iter().for_each(|o| o.for_each_gate(f)),
        }
    }
}

/// Gates of `ops` flattened in program order.
pub fn flatten(ops: &[Op]) -> Vec<GateOp> {
    let mut out = Vec::new();
    for op in ops {
        op.for_each_gate(&mut |g| out.push(g.clone()));
    }
    out
}

/// Inverse program: reversed order, adjoint gates, inverted semantics.
pub fn adjoint(ops: &[Op]) -> Result<Vec<Op>> {
    ops.iter()
        .rev()
        .map(|op| match op {
            Op::Gate(g) => Ok(Op::Gate(g.adjoint()?)),
            Op::Block(b) => Ok(Op::Block(Block {
                label: b.label,
                semantics: b.semantics.as_ref().map(Semantics::inverse),
                ops: adjoint(&b.ops)?,
            })),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_operand_value() {
        let op = Operand::signed(&[0, 1, 2]);
        assert_eq!(op.value(&BasisIndex::from_u64(0b101)), -3);
        assert_eq!(op.weight(2), -4);
        assert_eq!(Operand::unsigned(&[0, 1, 2]).value(&BasisIndex::from_u64(0b101)), 5);
    }

    #[test]
    fn add_terms_wraps_and_inverts() {
        let add = AddTerms {
            target: vec![0, 1, 2, 3],
            terms: vec![Term::constant(7), Term::product(1, Operand::signed(&[4, 5]), Operand::unsigned(&[6]))],
            controls: vec![],
        };
        add.validate().unwrap();
        // 12 + 7 + (-1 * 1) = 18 = 2 mod 16
        let idx = BasisIndex::from_u64(12 | 0b11 << 4 | 1 << 6);
        let out = add.apply(idx);
        assert_eq!(out.read(&[0, 1, 2, 3]), 2);
        assert_eq!(add.inverse().apply(out), idx);
    }

    #[test]
    fn validate_rejects_overlap() {
        let add = AddTerms { target: vec![0, 1], terms: vec![Term::linear(1, Operand::unsigned(&[1]))], controls: vec![] };
        assert!(add.validate().is_err());
    }
}
