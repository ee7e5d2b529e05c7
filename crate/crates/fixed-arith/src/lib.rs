//! Fixed-point arithmetic on qubit registers using QFT (Draper) adders.
//!
//! Every adder is one QFT conjugation of the target with phase rotations in
//! between. Constants become single-qubit phases, register operands become
//! controlled phases and products become doubly controlled phases, so
//! `acc += b * c` is exact and needs no ancillae. Two's complement operands
//! enter through the weight of their top bit (`-2^(n-1)`); wraparound is the
//! natural modulus of the target register.
//!
//! Each adder is emitted as a block tagged with its [`AddTerms`] meaning,
//! which the semantic backend applies directly.

use std::f64::consts::PI;

use circuit::{AddTerms, BasisIndex, Circuit, CircuitError, Control, Operand, Qubit, Semantics, Term};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("invalid fixed-point format n={n} f={f}")]
    InvalidFormat { n: usize, f: usize },
    #[error("width mismatch: {0}")]
    WidthMismatch(String),
    #[error("registers overlap on qubit {0}")]
    Overlap(Qubit),
    #[error("qubit {0} is not known to be |0>")]
    NotFresh(Qubit),
    #[error("{value} is not on the 2^-{f} grid")]
    NotRepresentable { value: f64, f: usize },
    #[error("at most two controls fit on a phase rotation; this adder needs {0}")]
    TooManyControls(usize),
}

pub type Result<T, E = FixedError> = std::result::Result<T, E>;

/// `n` qubits, `f` of them fractional, optionally two's complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FixedFormat {
    pub n: usize,
    pub f: usize,
    pub signed: bool,
}

impl FixedFormat {
    pub fn new(n: usize, f: usize, signed: bool) -> Result<Self> {
        if n == 0 || n > 64 || f > n {
            return Err(FixedError::InvalidFormat { n, f });
        }
        Ok(FixedFormat { n, f, signed })
    }

    pub fn integer(n: usize, signed: bool) -> Result<Self> {
        Self::new(n, 0, signed)
    }

    /// Interprets the low `n` bits of `raw` as an integer code.
    pub fn code(&self, raw: u128) -> i128 {
        let raw = (raw & self.mask()) as i128;
        if self.signed && (raw >> (self.n - 1)) & 1 == 1 {
            raw - (1i128 << self.n)
        } else {
            raw
        }
    }

    /// Bit pattern of an integer code, wrapped to `n` bits.
    pub fn raw(&self, code: i128) -> u128 {
        (code as u128) & self.mask()
    }

    pub fn decode(&self, raw: u128) -> f64 {
        self.code(raw) as f64 / (1u128 << self.f) as f64
    }

    /// Integer code of `value`, which must lie on the `2^-f` grid.
    pub fn quantize(&self, value: f64) -> Result<i128> {
        let scaled = value * (1u128 << self.f) as f64;
        if !scaled.is_finite() || scaled.fract() != 0.0 || scaled.abs() >= 2f64.powi(100) {
            return Err(FixedError::NotRepresentable { value, f: self.f });
        }
        Ok(scaled as i128)
    }

    pub fn min_code(&self) -> i128 {
        if self.signed {
            -(1i128 << (self.n - 1))
        } else {
            0
        }
    }

    pub fn max_code(&self) -> i128 {
        if self.signed {
            (1i128 << (self.n - 1)) - 1
        } else {
            (1i128 << self.n) - 1
        }
    }

    fn mask(&self) -> u128 {
        (1u128 << self.n) - 1
    }
}

/// A fixed-point register: qubits listed LSB first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedReg {
    pub qubits: Vec<Qubit>,
    pub format: FixedFormat,
}

impl FixedReg {
    pub fn new(qubits: Vec<Qubit>, format: FixedFormat) -> Result<Self> {
        if qubits.len() != format.n {
            return Err(FixedError::WidthMismatch(format!("{} qubits for n={}", qubits.len(), format.n)));
        }
        check_disjoint(&[&qubits])?;
        Ok(FixedReg { qubits, format })
    }

    pub fn alloc(c: &mut Circuit, label: &str, format: FixedFormat) -> Result<Self> {
        let qubits = c.alloc_register(label, format.n)?;
        Ok(FixedReg { qubits, format })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn msb(&self) -> Qubit {
        self.qubits[self.qubits.len() - 1]
    }

    pub fn operand(&self) -> Operand {
        Operand::new(&self.qubits, self.format.signed)
    }

    /// Integer code held by this register in basis state `idx`.
    pub fn read(&self, idx: &BasisIndex) -> i128 {
        self.format.code(idx.read(&self.qubits))
    }

    /// Real value held by this register in basis state `idx`.
    pub fn value(&self, idx: &BasisIndex) -> f64 {
        self.format.decode(idx.read(&self.qubits))
    }
}

fn check_disjoint(groups: &[&[Qubit]]) -> Result<()> {
    let mut all: Vec<Qubit> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    all.sort_unstable();
    match all.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(FixedError::Overlap(w[0])),
        None => Ok(()),
    }
}

/// Quantum Fourier transform without terminal swaps.
///
/// Afterwards qubit `k` carries the phase `exp(2 pi i a / 2^(k+1))`, so an
/// addition of `v` is a `2 pi v / 2^(k+1)` rotation on each qubit `k`.
pub fn qft(c: &mut Circuit, qubits: &[Qubit]) -> Result<()> {
    c.block("qft", None, |c| {
        for k in (0..qubits.len()).rev() {
            c.h(qubits[k])?;
            for j in (0..k).rev() {
                c.phase(qubits[k], PI / 2f64.powi((k - j) as i32), &[Control::one(qubits[j])])?;
            }
        }
        Ok(())
    })?;
    Ok(())
}

/// Inverse of [`qft`].
pub fn iqft(c: &mut Circuit, qubits: &[Qubit]) -> Result<()> {
    c.block("iqft", None, |c| {
        for k in 0..qubits.len() {
            for j in 0..k {
                c.phase(qubits[k], -PI / 2f64.powi((k - j) as i32), &[Control::one(qubits[j])])?;
            }
            c.h(qubits[k])?;
        }
        Ok(())
    })?;
    Ok(())
}

/// Rotation adding integer weight `w` to Fourier qubit `k`: `pi * r / 2^k`
/// with `r = w mod 2^(k+1)` taken in `(-2^k, 2^k]`. `None` when trivial.
fn fourier_angle(w: i128, k: usize) -> Option<f64> {
    if k >= 120 {
        // Weights never reach this far; treat as a whole turn.
        return None;
    }
    let m = 1i128 << (k + 1);
    let mut r = w.rem_euclid(m);
    if r > m / 2 {
        r -= m;
    }
    if r == 0 {
        None
    } else {
        Some(PI * r as f64 / (1u128 << k) as f64)
    }
}

/// Emits `target += sum(terms)` as a QFT-conjugated phase program.
///
/// Constant terms are folded together. Each factor bit contributes one
/// control, and together with `add.controls` a rotation may carry at most two.
pub fn add_terms(c: &mut Circuit, label: &'static str, add: AddTerms) -> Result<()> {
    let max_factors = add.terms.iter().map(|t| t.factors.len()).max().unwrap_or(0);
    if max_factors + add.controls.len() > 2 {
        return Err(FixedError::TooManyControls(max_factors + add.controls.len()));
    }
    for t in &add.terms {
        let groups: Vec<&[Qubit]> = t.factors.iter().map(|f| f.qubits.as_slice()).collect();
        if t.factors.len() == 2 {
            check_disjoint(&groups)?;
        }
    }
    let constant: i128 = add.terms.iter().filter(|t| t.factors.is_empty()).map(|t| t.scale).sum();
    let target = add.target.clone();
    let controls = add.controls.clone();
    let terms = add.terms.clone();
    c.block(label, Some(Semantics::AddTerms(add)), |c| {
        qft(c, &target).map_err(into_circuit)?;
        for (k, &tq) in target.iter().enumerate() {
            if let Some(a) = fourier_angle(constant, k) {
                c.phase(tq, a, &controls)?;
            }
            for t in terms.iter().filter(|t| !t.factors.is_empty()) {
                let x = &t.factors[0];
                for (i, &xq) in x.qubits.iter().enumerate() {
                    let wx = t.scale.wrapping_mul(x.weight(i));
                    match t.factors.get(1) {
                        None => {
                            if let Some(a) = fourier_angle(wx, k) {
                                let mut ctl = vec![Control::one(xq)];
                                ctl.extend_from_slice(&controls);
                                c.phase(tq, a, &ctl)?;
                            }
                        }
                        Some(y) => {
                            for (j, &yq) in y.qubits.iter().enumerate() {
                                if let Some(a) = fourier_angle(wx.wrapping_mul(y.weight(j)), k) {
                                    c.phase(tq, a, &[Control::one(xq), Control::one(yq)])?;
                                }
                            }
                        }
                    }
                }
            }
        }
        iqft(c, &target).map_err(into_circuit)?;
        Ok(())
    })?;
    Ok(())
}

fn into_circuit(e: FixedError) -> CircuitError {
    match e {
        FixedError::Circuit(c) => c,
        other => CircuitError::InvalidSemantics(other.to_string()),
    }
}

/// `reg += code * 2^-f` (mod `2^n`), under up to two controls.
pub fn add_const(c: &mut Circuit, reg: &FixedReg, code: i128, controls: &[Control]) -> Result<()> {
    add_const_raw(c, &reg.qubits, code, controls)
}

/// Integer constant add on a bare qubit list.
pub fn add_const_raw(c: &mut Circuit, target: &[Qubit], code: i128, controls: &[Control]) -> Result<()> {
    add_terms(
        c,
        "add_const",
        AddTerms { target: target.to_vec(), terms: vec![Term::constant(code)], controls: controls.to_vec() },
    )
}

/// `reg += value`, where `value` must lie on the register's grid.
pub fn add_value(c: &mut Circuit, reg: &FixedReg, value: f64, controls: &[Control]) -> Result<()> {
    let code = reg.format.quantize(value)?;
    add_const(c, reg, code, controls)
}

/// `dst += src` for registers with the same `n` and `f`; one optional control.
pub fn add_reg(c: &mut Circuit, dst: &FixedReg, src: &FixedReg, control: Option<Control>) -> Result<()> {
    if dst.format.n != src.format.n || dst.format.f != src.format.f {
        return Err(FixedError::WidthMismatch(format!("add_reg needs equal formats, got {:?} and {:?}", dst.format, src.format)));
    }
    add_scaled(c, &dst.qubits, src.operand(), 1, control)
}

/// `dst -= src`, the adjoint of [`add_reg`].
pub fn sub_reg(c: &mut Circuit, dst: &FixedReg, src: &FixedReg, control: Option<Control>) -> Result<()> {
    if dst.format.n != src.format.n || dst.format.f != src.format.f {
        return Err(FixedError::WidthMismatch(format!("sub_reg needs equal formats, got {:?} and {:?}", dst.format, src.format)));
    }
    add_scaled(c, &dst.qubits, src.operand(), -1, control)
}

/// `dst += scale * src` with `src` sign-extended as its signedness dictates.
pub fn add_scaled(c: &mut Circuit, dst: &[Qubit], src: Operand, scale: i128, control: Option<Control>) -> Result<()> {
    check_disjoint(&[dst, &src.qubits])?;
    add_terms(
        c,
        "add_reg",
        AddTerms { target: dst.to_vec(), terms: vec![Term::linear(scale, src)], controls: control.into_iter().collect() },
    )
}

/// `acc += b * c` exactly. Binary points must align: `acc.f >= b.f + c.f`.
pub fn fma(c: &mut Circuit, acc: &FixedReg, b: &FixedReg, cr: &FixedReg) -> Result<()> {
    let need = b.format.f + cr.format.f;
    if acc.format.f < need {
        return Err(FixedError::WidthMismatch(format!(
            "accumulator has {} fraction bits, product needs {need}",
            acc.format.f
        )));
    }
    check_disjoint(&[&acc.qubits, &b.qubits, &cr.qubits])?;
    let scale = 1i128 << (acc.format.f - need);
    add_terms(
        c,
        "fma",
        AddTerms { target: acc.qubits.clone(), terms: vec![Term::product(scale, b.operand(), cr.operand())], controls: vec![] },
    )
}

/// Two's complement negation: X on every qubit, then add one.
pub fn negate(c: &mut Circuit, reg: &[Qubit]) -> Result<()> {
    c.block("negate", None, |c| {
        for &q in reg {
            c.x(q)?;
        }
        add_const_raw(c, reg, 1, &[]).map_err(into_circuit)
    })?;
    Ok(())
}

/// Negation applied only where `control` holds.
pub fn c_negate(c: &mut Circuit, reg: &[Qubit], control: Control) -> Result<()> {
    if reg.contains(&control.qubit) {
        return Err(FixedError::Overlap(control.qubit));
    }
    c.block("c_negate", None, |c| {
        for &q in reg {
            c.mcx(&[control], q)?;
        }
        add_const_raw(c, reg, 1, &[control]).map_err(into_circuit)
    })?;
    Ok(())
}

/// CX fan-out of `src` onto a qubit known to be |0>.
pub fn copy(c: &mut Circuit, src: Qubit, dst: Qubit) -> Result<()> {
    if !c.is_fresh(dst) {
        return Err(FixedError::NotFresh(dst));
    }
    c.cx(src, dst)?;
    Ok(())
}
