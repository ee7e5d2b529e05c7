//! Floating-point registers and the circuits that operate on them.
//!
//! A float is a two's complement integer exponent next to a two's complement
//! `(m, m-1)` fixed-point mantissa. Canonical values have
//! `|mantissa| in [0.5, 1)`, or are the exact zero with both fields cleared.
//! Every circuit here reproduces [`float_oracle`] bit for bit: truncating
//! arithmetic, underflow flushed to zero, exponent overflow wrapping.
//!
//! Scratch qubits come from the circuit's ancilla pool and are either
//! uncomputed or reset before an operation returns, so the pool's live count
//! is back to zero after each top-level call.

mod arith;
mod func;
mod shift;

use circuit::{BasisIndex, Circuit, CircuitError, Qubit};
use fixed_arith::{FixedError, FixedFormat, FixedReg};
use float_oracle::{FloatFormat, OracleError, SoftFloat};
use thiserror::Error;

pub use arith::{fadd, fmul, fneg, zero_exp};
pub use func::{fexp, recip};
pub use shift::{shift, ShiftMode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloatError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Fixed(#[from] FixedError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("qubit {0} is not known to be |0>")]
    NotFresh(Qubit),
    #[error("operands have different formats: {0} and {1}")]
    FormatMismatch(FloatFormat, FloatFormat),
    #[error("{op} needs {need}, got {fmt}")]
    Unsupported { op: &'static str, need: &'static str, fmt: FloatFormat },
    #[error("shift needs a register and a shift amount of at least one qubit each")]
    EmptyShift,
}

pub type Result<T, E = FloatError> = std::result::Result<T, E>;

/// Exponent and mantissa registers of one float.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloatReg {
    pub exp: FixedReg,
    pub mant: FixedReg,
    pub fmt: FloatFormat,
}

impl FloatReg {
    /// Allocates `label.exp` and `label.mant`.
    pub fn alloc(c: &mut Circuit, label: &str, fmt: FloatFormat) -> Result<Self> {
        let (e, m) = (fmt.e as usize, fmt.m as usize);
        let exp = FixedReg::alloc(c, &format!("{label}.exp"), FixedFormat::integer(e, true)?)?;
        let mant = FixedReg::alloc(c, &format!("{label}.mant"), FixedFormat::new(m, m - 1, true)?)?;
        Ok(FloatReg { exp, mant, fmt })
    }

    pub fn qubits(&self) -> impl Iterator<Item = Qubit> + '_ {
        self.exp.qubits.iter().chain(&self.mant.qubits).copied()
    }

    pub fn read(&self, idx: &BasisIndex) -> SoftFloat {
        let e = idx.read(&self.exp.qubits) as u64;
        let m = idx.read(&self.mant.qubits) as u64;
        SoftFloat::from_raw(self.fmt, e, m)
    }

    pub fn write(&self, idx: &mut BasisIndex, v: SoftFloat) {
        let (e, m) = v.raw();
        idx.write(&self.exp.qubits, e as u128);
        idx.write(&self.mant.qubits, m as u128);
    }

    /// X gates that load the classical constant `v` into a fresh register.
    pub fn load(&self, c: &mut Circuit, v: SoftFloat) -> Result<()> {
        self.ensure_fresh(c)?;
        self.flip_bits(c, v)
    }

    /// Inverse of [`FloatReg::load`]; the register is fresh afterwards.
    pub fn unload(&self, c: &mut Circuit, v: SoftFloat) -> Result<()> {
        self.flip_bits(c, v)?;
        for q in self.qubits() {
            c.mark_fresh(q);
        }
        Ok(())
    }

    fn flip_bits(&self, c: &mut Circuit, v: SoftFloat) -> Result<()> {
        let (e, m) = v.raw();
        for (i, &q) in self.exp.qubits.iter().enumerate() {
            if e >> i & 1 == 1 {
                c.x(q)?;
            }
        }
        for (i, &q) in self.mant.qubits.iter().enumerate() {
            if m >> i & 1 == 1 {
                c.x(q)?;
            }
        }
        Ok(())
    }

    /// Resets both fields with the measurement protocol.
    pub fn reset(&self, c: &mut Circuit) -> Result<()> {
        for q in self.qubits() {
            c.reset(q)?;
        }
        Ok(())
    }

    pub fn ensure_fresh(&self, c: &Circuit) -> Result<()> {
        match self.qubits().find(|&q| !c.is_fresh(q)) {
            Some(q) => Err(FloatError::NotFresh(q)),
            None => Ok(()),
        }
    }
}

fn same_format(a: &FloatReg, b: &FloatReg) -> Result<()> {
    if a.fmt != b.fmt {
        return Err(FloatError::FormatMismatch(a.fmt, b.fmt));
    }
    Ok(())
}

/// `ceil(log2(n + 1))`: bits needed for the unsigned value `n`.
fn bitlen(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}
