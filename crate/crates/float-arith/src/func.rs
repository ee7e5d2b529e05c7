use circuit::{AddTerms, Circuit, Term};
use fixed_arith::add_terms;
use float_oracle::{o_encode, Rounding, SoftFloat};

use crate::arith::{fadd, fmul, fneg, group};
use crate::{FloatError, FloatReg, Result};

/// Newton-Raphson reciprocal `x <- x * (2 - q * x)`, `iters` times, from the
/// guess `sign(q) * 0.5 * 2^(1 - q.exp)`.
///
/// Workspace registers `label.{x,t,u,two}` are allocated on the circuit and
/// reset between steps; the returned register holds the result. Zero or
/// out-of-range inputs produce garbage, which the oracle flags.
pub fn recip(c: &mut Circuit, q: &FloatReg, iters: usize, label: &str) -> Result<FloatReg> {
    let fmt = q.fmt;
    if fmt.e < 3 {
        return Err(FloatError::Unsupported { op: "recip", need: "e >= 3 to hold the constant 2", fmt });
    }
    let m = fmt.m as usize;
    let mut x = FloatReg::alloc(c, &format!("{label}.x"), fmt)?;
    let mut t = FloatReg::alloc(c, &format!("{label}.t"), fmt)?;
    let u = FloatReg::alloc(c, &format!("{label}.u"), fmt)?;
    let two_reg = FloatReg::alloc(c, &format!("{label}.two"), fmt)?;
    let two = SoftFloat { exp: 2, mant: fmt.half(), fmt };
    group(c, "recip", |c| {
        c.x(x.mant.qubits[m - 2])?;
        c.cx(q.mant.msb(), x.mant.msb())?;
        add_terms(
            c,
            "recip_guess",
            AddTerms {
                target: x.exp.qubits.clone(),
                terms: vec![Term::constant(1), Term::linear(-1, q.exp.operand())],
                controls: vec![],
            },
        )?;
        two_reg.load(c, two)?;
        for _ in 0..iters {
            fmul(c, q, &x, &t)?;
            fneg(c, &t)?;
            fadd(c, &two_reg, &t, &u)?;
            t.reset(c)?;
            fmul(c, &x, &u, &t)?;
            x.reset(c)?;
            u.reset(c)?;
            std::mem::swap(&mut x, &mut t);
        }
        two_reg.unload(c, two)
    })?;
    Ok(x)
}

/// Horner evaluation of the order-`n` Taylor polynomial of `exp(q)`:
/// `1 + q (1 + q/2 (1 + ... (1 + q/n)))`. The constants `1/k` are loaded
/// rounded to nearest and unloaded after use. Accurate for `|q| <= 1`.
pub fn fexp(c: &mut Circuit, q: &FloatReg, n: usize, label: &str) -> Result<FloatReg> {
    let fmt = q.fmt;
    let reg = |c: &mut Circuit, name: &str| FloatReg::alloc(c, &format!("{label}.{name}"), fmt);
    let one_reg = reg(c, "one")?;
    let k_reg = reg(c, "k")?;
    let t = reg(c, "t")?;
    let p = reg(c, "p")?;
    let mut acc = reg(c, "acc")?;
    let mut next = reg(c, "next")?;
    let one = o_encode(1.0, fmt, Rounding::NearestEven)?;
    group(c, "fexp", |c| {
        one_reg.load(c, one)?;
        acc.load(c, one)?;
        for k in (1..=n).rev() {
            let ck = o_encode(1.0 / k as f64, fmt, Rounding::NearestEven)?;
            k_reg.load(c, ck)?;
            fmul(c, q, &k_reg, &t)?;
            k_reg.unload(c, ck)?;
            fmul(c, &t, &acc, &p)?;
            fadd(c, &one_reg, &p, &next)?;
            t.reset(c)?;
            p.reset(c)?;
            acc.reset(c)?;
            std::mem::swap(&mut acc, &mut next);
        }
        one_reg.unload(c, one)
    })?;
    Ok(acc)
}
