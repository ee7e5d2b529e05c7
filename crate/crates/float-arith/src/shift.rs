use circuit::{Circuit, Control, Qubit};
use fixed_arith::{negate, FixedReg};

use crate::{FloatError, Result};

/// Which halves of the shifter to emit. Callers that know the sign of the
/// shift amount skip the half that can never fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    Both,
    RightOnly,
    LeftOnly,
}

/// In-place `q <- q * 2^-s` for a signed shift register `s` (positive shifts
/// right). Right shifts fill with the sign bit when `q` is signed and with 0
/// otherwise; left shifts fill 0. Bits shifted out are discarded.
///
/// `anc` must be four fresh qubits; all four are clean again afterwards.
pub fn shift(c: &mut Circuit, q: &FixedReg, s: &FixedReg, anc: [Qubit; 4]) -> Result<()> {
    if let Some(&a) = anc.iter().find(|&&a| !c.is_fresh(a)) {
        return Err(FloatError::NotFresh(a));
    }
    shift_bits(c, &q.qubits, q.format.signed, &s.qubits, anc, ShiftMode::Both)
}

/// Shift on bare qubit lists: controlled-swap cascades, one per bit of `s`.
pub(crate) fn shift_bits(
    c: &mut Circuit,
    q: &[Qubit],
    signed: bool,
    s: &[Qubit],
    anc: [Qubit; 4],
    mode: ShiftMode,
) -> Result<()> {
    if q.is_empty() || s.is_empty() {
        return Err(FloatError::EmptyShift);
    }
    let [a0, a1, a2, a3] = anc;
    let (n, w) = (q.len(), s.len());
    let s_sign = s[w - 1];
    c.block("shift", None, |c| {
        if mode != ShiftMode::LeftOnly && w > 1 {
            // Arithmetic right shift of a negative value is the complement
            // of a logical shift of its complement.
            if signed {
                c.cx(q[n - 1], a3)?;
                for &b in q {
                    c.cx(a3, b)?;
                }
            }
            for k in (0..w - 1).rev() {
                let d = pow2(k);
                c.ccx(Control::one(s[k]), Control::zero(s_sign), a1)?;
                for l in 0..n.saturating_sub(d) {
                    c.swap(q[l], q[l + d], &[Control::one(a1)])?;
                }
                for &b in &q[n.saturating_sub(d)..] {
                    clear_if(c, b, a1, a0)?;
                }
                c.ccx(Control::one(s[k]), Control::zero(s_sign), a1)?;
            }
            if signed {
                for &b in q {
                    c.cx(a3, b)?;
                }
                c.cx(q[n - 1], a3)?;
            }
        }
        if mode != ShiftMode::RightOnly {
            c.cx(s_sign, a2)?;
            negate(c, s).map_err(crate::arith::into_circuit)?;
            for k in (0..w).rev() {
                let d = pow2(k);
                c.ccx(Control::one(s[k]), Control::one(a2), a1)?;
                for l in (d..n).rev() {
                    c.swap(q[l], q[l - d], &[Control::one(a1)])?;
                }
                for &b in &q[..d.min(n)] {
                    clear_if(c, b, a1, a0)?;
                }
                c.ccx(Control::one(s[k]), Control::one(a2), a1)?;
            }
            negate(c, s).map_err(crate::arith::into_circuit)?;
            c.cx(s_sign, a2)?;
        }
        Ok(())
    })?;
    Ok(())
}

/// Clears `b` where `ctl` is set, through a scratch copy that is reset
/// right away.
pub(crate) fn clear_if(c: &mut Circuit, b: Qubit, ctl: Qubit, scratch: Qubit) -> circuit::Result<()> {
    c.cx(b, scratch)?;
    c.ccx(Control::one(scratch), Control::one(ctl), b)?;
    c.reset(scratch)
}

fn pow2(k: usize) -> usize {
    1usize.checked_shl(k as u32).unwrap_or(usize::MAX)
}
