use anyhow::{bail, Result};
use circuit::{run_basis, BasisIndex, Circuit, Op, RngStream, StatsAccumulator};
use float_arith::{fadd, fmul, FloatReg};
use float_oracle::{
    l2_relative_error, o_add, o_encode, o_mul, o_ode_reference, ode_exact, trapezoid_coefficients, FloatFormat,
    Rounding, SoftFloat,
};
use serde::{Deserialize, Serialize};

use crate::{BackendChoice, StatsSummary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeConfig {
    pub widths: Vec<u32>,
    /// Exponent bits for every width; the mantissa takes the rest.
    pub exponent: u32,
    pub dts: Vec<f64>,
    pub horizon: f64,
    pub seed: u64,
    pub backend: BackendChoice,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            widths: vec![14, 16, 18, 20],
            exponent: 5,
            dts: vec![0.25, 0.125, 0.0625, 0.03125],
            horizon: 2.0 * std::f64::consts::PI,
            seed: 2024,
            backend: BackendChoice::Semantic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeRow {
    pub width: u32,
    pub dt: f64,
    pub step: usize,
    pub t: f64,
    pub u1: f64,
    pub u2: f64,
    pub u1_exact: f64,
    pub u2_exact: f64,
    /// Relative l2 error over all samples up to and including this step.
    pub l2_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeCase {
    pub width: u32,
    pub e: u32,
    pub m: u32,
    pub dt: f64,
    pub steps: usize,
    pub final_l2_rel_err: f64,
    pub log2_final_l2_rel_err: f64,
    /// The same integrator in double precision.
    pub reference_l2_rel_err: f64,
    /// Steps where the circuit state differs from the soft-float oracle.
    pub oracle_mismatches: usize,
    pub circuit: StatsSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OdeReport {
    pub rows: Vec<OdeRow>,
    pub cases: Vec<OdeCase>,
}

/// Error of the double-precision trapezoidal trajectory against the exact
/// solution over `steps` steps.
pub fn ode_reference_error(dt: f64, steps: usize) -> f64 {
    l2_relative_error(o_ode_reference(dt, steps).iter().map(|s| (s.u, s.exact)))
}

fn steps_for(dt: f64, horizon: f64) -> Result<usize> {
    if !(dt > 0.0) || dt.log2().fract() != 0.0 {
        bail!("dt must be a positive power of two, got {dt}");
    }
    if !(horizon > 0.0) {
        bail!("horizon must be positive, got {horizon}");
    }
    Ok((horizon / dt).round() as usize)
}

/// The integrator split into reusable segments: one that loads the
/// constants and `u0`, and one step circuit per parity of the step index
/// (the state alternates between two register pairs).
struct OdeProgram {
    num_qubits: usize,
    init: Vec<Op>,
    step: [Vec<Op>; 2],
    state: [[FloatReg; 2]; 2],
    ancilla_peak: usize,
}

fn build(fmt: FloatFormat, a: SoftFloat, b: SoftFloat, nb: SoftFloat, u0: [SoftFloat; 2]) -> Result<OdeProgram> {
    let mut c = Circuit::new();
    let ra = FloatReg::alloc(&mut c, "a", fmt)?;
    let rb = FloatReg::alloc(&mut c, "b", fmt)?;
    let rnb = FloatReg::alloc(&mut c, "nb", fmt)?;
    let u = [FloatReg::alloc(&mut c, "u1", fmt)?, FloatReg::alloc(&mut c, "u2", fmt)?];
    let v = [FloatReg::alloc(&mut c, "v1", fmt)?, FloatReg::alloc(&mut c, "v2", fmt)?];
    let p = [FloatReg::alloc(&mut c, "p1", fmt)?, FloatReg::alloc(&mut c, "p2", fmt)?];
    ra.load(&mut c, a)?;
    rb.load(&mut c, b)?;
    rnb.load(&mut c, nb)?;
    u[0].load(&mut c, u0[0])?;
    u[1].load(&mut c, u0[1])?;
    let init = c.take_ops()?;
    let step = |c: &mut Circuit, from: &[FloatReg; 2], to: &[FloatReg; 2]| -> Result<Vec<Op>> {
        // to1 = a u1 + b u2, to2 = -b u1 + a u2
        for (row, (k1, k2)) in [(&ra, &rb), (&rnb, &ra)].into_iter().enumerate() {
            fmul(c, k1, &from[0], &p[0])?;
            fmul(c, k2, &from[1], &p[1])?;
            fadd(c, &p[0], &p[1], &to[row])?;
            p[0].reset(c)?;
            p[1].reset(c)?;
        }
        from[0].reset(c)?;
        from[1].reset(c)?;
        Ok(c.take_ops()?)
    };
    let even = step(&mut c, &u, &v)?;
    let odd = step(&mut c, &v, &u)?;
    Ok(OdeProgram { num_qubits: c.num_qubits(), init, step: [even, odd], state: [u, v], ancilla_peak: c.pool().high_water() })
}

pub fn cmd_ode(cfg: &OdeConfig) -> Result<OdeReport> {
    let mut rows = Vec::new();
    let mut cases = Vec::new();
    for &width in &cfg.widths {
        if width <= cfg.exponent + 2 {
            bail!("width {width} leaves no room for a mantissa next to {} exponent bits", cfg.exponent);
        }
        let fmt = FloatFormat::new(cfg.exponent, width - cfg.exponent)?;
        for &dt in &cfg.dts {
            let steps = steps_for(dt, cfg.horizon)?;
            let (ca, cb) = trapezoid_coefficients(dt);
            let enc = |x: f64| o_encode(x, fmt, Rounding::NearestEven);
            let (a, b, nb) = (enc(ca)?, enc(cb)?, enc(-cb)?);
            let u0 = [enc(0.0)?, enc(-1.0)?];
            let prog = build(fmt, a, b, nb, u0)?;

            let mut acc = StatsAccumulator::new();
            acc.record_ops(&prog.init);
            let mut rng = RngStream::new(cfg.seed).derive(((width as u64) << 32) | steps as u64);
            let backend = cfg.backend.into();
            let mut idx = run_basis(&prog.init, prog.num_qubits, BasisIndex::ZERO, backend, &mut rng)?;
            let mut soft = u0;
            let mut mismatches = 0;
            let (mut num, mut den) = (0.0, 0.0);
            for step in 0..=steps {
                if step > 0 {
                    let seg = &prog.step[(step - 1) % 2];
                    acc.record_ops(seg);
                    idx = run_basis(seg, prog.num_qubits, idx, backend, &mut rng)?;
                    soft = [
                        o_add(o_mul(a, soft[0]).value, o_mul(b, soft[1]).value).value,
                        o_add(o_mul(nb, soft[0]).value, o_mul(a, soft[1]).value).value,
                    ];
                }
                let regs = &prog.state[step % 2];
                let got = [regs[0].read(&idx), regs[1].read(&idx)];
                if got != soft {
                    mismatches += 1;
                }
                let t = step as f64 * dt;
                let exact = ode_exact(t);
                let u = [got[0].decode(), got[1].decode()];
                num += (u[0] - exact[0]).powi(2) + (u[1] - exact[1]).powi(2);
                den += exact[0].powi(2) + exact[1].powi(2);
                rows.push(OdeRow {
                    width,
                    dt,
                    step,
                    t,
                    u1: u[0],
                    u2: u[1],
                    u1_exact: exact[0],
                    u2_exact: exact[1],
                    l2_rel_err: (num / den).sqrt(),
                });
            }
            let err = (num / den).sqrt();
            let stats = acc.snapshot(prog.ancilla_peak, prog.num_qubits);
            cases.push(OdeCase {
                width,
                e: fmt.e,
                m: fmt.m,
                dt,
                steps,
                final_l2_rel_err: err,
                log2_final_l2_rel_err: err.log2(),
                reference_l2_rel_err: ode_reference_error(dt, steps),
                oracle_mismatches: mismatches,
                circuit: (&stats).into(),
            });
        }
    }
    Ok(OdeReport { rows, cases })
}
