use anyhow::Result;
use circuit::{Circuit, CircuitStats};
use fixed_arith::{FixedFormat, FixedReg};
use float_arith::{fadd, fmul, recip, shift, zero_exp, FloatReg};
use serde::{Deserialize, Serialize};

use crate::Split;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ResourceOp {
    Add,
    Mul,
    Recip,
    /// Mantissa shifted by an exponent-width signed amount.
    Shift,
    Zeroexp,
}

impl ResourceOp {
    pub fn name(&self) -> &'static str {
        match self {
            ResourceOp::Add => "add",
            ResourceOp::Mul => "mul",
            ResourceOp::Recip => "recip",
            ResourceOp::Shift => "shift",
            ResourceOp::Zeroexp => "zeroexp",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceRow {
    pub op: &'static str,
    pub width: u32,
    pub kind: &'static str,
    pub arity: usize,
    pub count: u64,
    pub depth: u64,
    pub total_qubits: usize,
    pub ancilla_peak: usize,
}

/// Builds one instance of `op` at `split` and returns its statistics.
pub fn resource_stats(op: ResourceOp, split: Split, iters: usize) -> Result<CircuitStats> {
    let fmt = split.format();
    let mut c = Circuit::new();
    match op {
        ResourceOp::Add | ResourceOp::Mul => {
            let q = FloatReg::alloc(&mut c, "q", fmt)?;
            let r = FloatReg::alloc(&mut c, "r", fmt)?;
            let out = FloatReg::alloc(&mut c, "out", fmt)?;
            if op == ResourceOp::Add {
                fadd(&mut c, &q, &r, &out)?;
            } else {
                fmul(&mut c, &q, &r, &out)?;
            }
        }
        ResourceOp::Recip => {
            let q = FloatReg::alloc(&mut c, "q", fmt)?;
            recip(&mut c, &q, iters, "recip")?;
        }
        ResourceOp::Shift => {
            let m = fmt.m as usize;
            let q = FixedReg::alloc(&mut c, "q", FixedFormat::new(m, m - 1, true)?)?;
            let s = FixedReg::alloc(&mut c, "s", FixedFormat::integer(fmt.e as usize, true)?)?;
            let anc = [c.alloc_ancilla(), c.alloc_ancilla(), c.alloc_ancilla(), c.alloc_ancilla()];
            shift(&mut c, &q, &s, anc)?;
            for a in anc {
                c.release_clean(a)?;
            }
        }
        ResourceOp::Zeroexp => {
            let q = FloatReg::alloc(&mut c, "q", fmt)?;
            let anc = [c.alloc_ancilla(), c.alloc_ancilla()];
            zero_exp(&mut c, &q, anc)?;
            for a in anc {
                c.release_dirty(a)?;
            }
        }
    }
    Ok(c.stats())
}

/// One row per (gate class, arity) per width.
pub fn cmd_resources(op: ResourceOp, splits: &[Split], iters: usize) -> Result<Vec<ResourceRow>> {
    let mut rows = Vec::new();
    for &split in splits {
        let split = Split::new(split.width, split.e, split.m)?;
        let st = resource_stats(op, split, iters)?;
        for (&(class, arity), &count) in &st.counts {
            rows.push(ResourceRow {
                op: op.name(),
                width: split.width,
                kind: class.name(),
                arity,
                count,
                depth: st.depth,
                total_qubits: st.total_qubits,
                ancilla_peak: st.ancilla_high_water,
            });
        }
    }
    Ok(rows)
}
