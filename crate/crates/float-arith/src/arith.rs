use std::iter::once;

use circuit::{AddTerms, Circuit, CircuitError, Control, Operand, Qubit, Term};
use fixed_arith::{add_const_raw, add_terms, c_negate, negate};

use crate::shift::{clear_if, shift_bits, ShiftMode};
use crate::{bitlen, same_format, FloatError, FloatReg, Result};

pub(crate) fn into_circuit(e: impl Into<FloatError>) -> CircuitError {
    match e.into() {
        FloatError::Circuit(c) | FloatError::Fixed(fixed_arith::FixedError::Circuit(c)) => c,
        other => CircuitError::InvalidSemantics(other.to_string()),
    }
}

/// Emits `f` inside an unlabelled-semantics block named `label`.
pub(crate) fn group(c: &mut Circuit, label: &'static str, f: impl FnOnce(&mut Circuit) -> Result<()>) -> Result<()> {
    c.block(label, None, |c| f(c).map_err(into_circuit))?;
    Ok(())
}

fn alloc4(c: &mut Circuit) -> [Qubit; 4] {
    [c.alloc_ancilla(), c.alloc_ancilla(), c.alloc_ancilla(), c.alloc_ancilla()]
}

fn release_clean_all(c: &mut Circuit, qs: &[Qubit]) -> Result<()> {
    for &q in qs {
        c.release_clean(q)?;
    }
    Ok(())
}

fn release_dirty_all(c: &mut Circuit, qs: &[Qubit]) -> Result<()> {
    for &q in qs {
        c.release_dirty(q)?;
    }
    Ok(())
}

/// Clears the exponent of every basis state whose mantissa is zero.
///
/// `anc` must be fresh. Both are left holding garbage for the caller to reset.
pub fn zero_exp(c: &mut Circuit, q: &FloatReg, anc: [Qubit; 2]) -> Result<()> {
    if let Some(&a) = anc.iter().find(|&&a| !c.is_fresh(a)) {
        return Err(FloatError::NotFresh(a));
    }
    let [nz, t] = anc;
    group(c, "zero_exp", |c| {
        // nz <- (mantissa != 0), one bit at a time from the top.
        for (i, &b) in q.mant.qubits.iter().rev().enumerate() {
            if i > 0 {
                c.reset(t)?;
            }
            c.ccx(Control::one(b), Control::zero(nz), t)?;
            c.cx(t, nz)?;
        }
        for &b in q.exp.qubits.iter().rev() {
            c.reset(t)?;
            c.ccx(Control::one(b), Control::zero(nz), t)?;
            c.cx(t, b)?;
        }
        Ok(())
    })
}

fn zero_exp_pooled(c: &mut Circuit, q: &FloatReg) -> Result<()> {
    let anc = [c.alloc_ancilla(), c.alloc_ancilla()];
    zero_exp(c, q, anc)?;
    release_dirty_all(c, &anc)
}

/// Final stage shared by multiply and add. `x` holds the result exponent
/// plus `2^(e-1)`, with `out.exp` as its low bits and `ext` above. A
/// negative `x` is an underflow and flushes the mantissa to zero.
fn finish(c: &mut Circuit, out: &FloatReg, x: &[Qubit], ext: &[Qubit]) -> Result<()> {
    let e = out.fmt.e as usize;
    let uf = c.alloc_ancilla();
    c.cx(x[x.len() - 1], uf)?;
    add_const_raw(c, x, -(1i128 << (e - 1)), &[])?;
    release_dirty_all(c, ext)?;
    let scratch = c.alloc_ancilla();
    for &b in &out.mant.qubits {
        clear_if(c, b, uf, scratch)?;
    }
    c.release_clean(scratch)?;
    c.release_dirty(uf)?;
    zero_exp_pooled(c, out)
}

/// `out <- q * r`. The full mantissa product is formed exactly, truncated
/// (floored) to `m + 1` bits, renormalized by at most one left shift and
/// narrowed to `m` bits; exponents add with the shift subtracted.
pub fn fmul(c: &mut Circuit, q: &FloatReg, r: &FloatReg, out: &FloatReg) -> Result<()> {
    same_format(q, r)?;
    same_format(q, out)?;
    out.ensure_fresh(c)?;
    let (e, m) = (q.fmt.e as usize, q.fmt.m as usize);
    group(c, "fmul", |c| {
        let ext = c.alloc_ancillae(m - 1);
        let acc: Vec<Qubit> = ext.iter().chain(&out.mant.qubits).copied().collect();
        add_terms(
            c,
            "fmul_product",
            AddTerms { target: acc, terms: vec![Term::product(1, q.mant.operand(), r.mant.operand())], controls: vec![] },
        )?;
        release_dirty_all(c, &ext[..m - 2])?;
        let guard = ext[m - 2];
        let t: Vec<Qubit> = once(guard).chain(out.mant.qubits.iter().copied()).collect();

        let sgn = c.alloc_ancilla();
        c.cx(out.mant.msb(), sgn)?;
        c_negate(c, &t, Control::one(sgn))?;
        // |T| < 2^m, so bit m-1 clear means the product is below 0.5.
        let lz = c.alloc_ancilla();
        c.cx(t[m - 1], lz)?;
        c.x(lz)?;
        let sa = alloc4(c);
        shift_bits(c, &t, false, &[lz], sa, ShiftMode::LeftOnly)?;
        release_clean_all(c, &sa)?;
        c.release_dirty(guard)?;
        c_negate(c, &out.mant.qubits, Control::one(sgn))?;
        c.cx(out.mant.msb(), sgn)?;
        c.release_clean(sgn)?;

        let xe = c.alloc_ancillae(2);
        let x: Vec<Qubit> = out.exp.qubits.iter().chain(&xe).copied().collect();
        add_terms(
            c,
            "fmul_exp",
            AddTerms {
                target: x.clone(),
                terms: vec![
                    Term::constant(1 << (e - 1)),
                    Term::linear(-1, Operand::unsigned(&[lz])),
                    Term::linear(1, q.exp.operand()),
                    Term::linear(1, r.exp.operand()),
                ],
                controls: vec![],
            },
        )?;
        c.release_dirty(lz)?;
        finish(c, out, &x, &xe)
    })
}

/// `out <- q + r`. The operand with the smaller exponent (or the zero one)
/// is copied out, aligned by an arithmetic right shift that keeps one guard
/// bit, and added to twice the other mantissa. A leading-zero counter then
/// drives the renormalizing shift and the exponent correction.
pub fn fadd(c: &mut Circuit, q: &FloatReg, r: &FloatReg, out: &FloatReg) -> Result<()> {
    same_format(q, r)?;
    same_format(q, out)?;
    out.ensure_fresh(c)?;
    let (e, m) = (q.fmt.e as usize, q.fmt.m as usize);
    let (qm, rm) = (&q.mant.qubits, &r.mant.qubits);
    group(c, "fadd", |c| {
        // d = q.exp - r.exp in e+1 bits.
        let dx = c.alloc_ancilla();
        let d: Vec<Qubit> = out.exp.qubits.iter().copied().chain(once(dx)).collect();
        add_terms(
            c,
            "fadd_expdiff",
            AddTerms {
                target: d.clone(),
                terms: vec![Term::linear(1, q.exp.operand()), Term::linear(-1, r.exp.operand())],
                controls: vec![],
            },
        )?;

        // pick = q is the operand to align: q is zero, or q.exp < r.exp and r is nonzero.
        let sel = c.alloc_ancilla();
        c.cx(dx, sel)?;
        let zq = c.alloc_ancilla();
        let zr = c.alloc_ancilla();
        c.ccx(Control::zero(qm[m - 1]), Control::zero(qm[m - 2]), zq)?;
        c.ccx(Control::zero(rm[m - 1]), Control::zero(rm[m - 2]), zr)?;
        let t1 = c.alloc_ancilla();
        c.ccx(Control::one(sel), Control::zero(zr), t1)?;
        let pick = c.alloc_ancilla();
        c.ccx(Control::zero(t1), Control::zero(zq), pick)?;
        c.x(pick)?;
        c.ccx(Control::one(sel), Control::zero(zr), t1)?;
        c.ccx(Control::zero(rm[m - 1]), Control::zero(rm[m - 2]), zr)?;
        c.ccx(Control::zero(qm[m - 1]), Control::zero(qm[m - 2]), zq)?;
        c.cx(dx, sel)?;
        release_clean_all(c, &[t1, zr, zq, sel])?;

        // Align the small mantissa by the exponent gap.
        for i in 0..m {
            c.ccx(Control::one(pick), Control::one(qm[i]), out.mant.qubits[i])?;
            c.ccx(Control::zero(pick), Control::one(rm[i]), out.mant.qubits[i])?;
        }
        c_negate(c, &d, Control::one(pick))?;
        let g = c.alloc_ancilla();
        let aligned: Vec<Qubit> = once(g).chain(out.mant.qubits.iter().copied()).collect();
        let sa = alloc4(c);
        shift_bits(c, &aligned, true, &d, sa, ShiftMode::RightOnly)?;
        release_clean_all(c, &sa)?;
        c.reset_all(&out.exp.qubits)?;
        c.release_dirty(dx)?;

        // w = aligned (sign-extended) + 2 * big mantissa, in m+2 bits.
        let t = c.alloc_ancilla();
        c.cx(out.mant.msb(), t)?;
        let w: Vec<Qubit> = aligned.iter().copied().chain(once(t)).collect();
        let pick_op = Operand::unsigned(&[pick]);
        add_terms(
            c,
            "fadd_mant",
            AddTerms {
                target: w.clone(),
                terms: vec![
                    Term::linear(2, q.mant.operand()),
                    Term::product(2, pick_op.clone(), r.mant.operand()),
                    Term::product(-2, pick_op.clone(), q.mant.operand()),
                ],
                controls: vec![],
            },
        )?;
        let sgn = c.alloc_ancilla();
        c.cx(t, sgn)?;
        c_negate(c, &w, Control::one(sgn))?;

        // x = 1 - (leading zeros of w[0..=m]) = bitlen(w) - m.
        let xw = (e + 2).max(bitlen(m) + 1);
        let xext = c.alloc_ancillae(xw - e);
        let x: Vec<Qubit> = out.exp.qubits.iter().chain(&xext).copied().collect();
        c.x(x[0])?;
        let found = c.alloc_ancilla();
        for k in (0..=m).rev() {
            if k == m {
                add_const_raw(c, &x, -1, &[Control::zero(w[k])])?;
                c.cx(w[k], found)?;
            } else {
                add_const_raw(c, &x, -1, &[Control::zero(w[k]), Control::zero(found)])?;
                if k > 0 {
                    let tmp = c.alloc_ancilla();
                    c.cx(found, tmp)?;
                    c.ccx(Control::one(w[k]), Control::zero(tmp), found)?;
                    c.release_dirty(tmp)?;
                }
            }
        }
        c.release_dirty(found)?;
        let sa = alloc4(c);
        shift_bits(c, &w[..=m], false, &x[..bitlen(m) + 1], sa, ShiftMode::Both)?;
        release_clean_all(c, &sa)?;
        c.release_dirty(g)?;
        c.release_clean(t)?;
        c_negate(c, &out.mant.qubits, Control::one(sgn))?;
        c.cx(out.mant.msb(), sgn)?;
        c.release_clean(sgn)?;

        add_terms(
            c,
            "fadd_exp",
            AddTerms {
                target: x.clone(),
                terms: vec![
                    Term::constant(1 << (e - 1)),
                    Term::linear(1, q.exp.operand()),
                    Term::product(1, pick_op.clone(), r.exp.operand()),
                    Term::product(-1, pick_op, q.exp.operand()),
                ],
                controls: vec![],
            },
        )?;
        c.release_dirty(pick)?;
        finish(c, out, &x, &xext)
    })
}

/// In-place negation of the mantissa.
pub fn fneg(c: &mut Circuit, q: &FloatReg) -> Result<()> {
    negate(c, &q.mant.qubits)?;
    Ok(())
}
