//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use circuit::verify::permutation_mismatches;
use circuit::{run_basis, Backend, BasisIndex, Circuit, GateClass, RngStream};
use fixed_arith::{add_const, add_reg, fma, negate, FixedFormat, FixedReg};
use float_arith::{fadd, fmul, fneg, shift, zero_exp, FloatReg};
use float_oracle::{enumerate_canonical, o_add, o_mul, o_neg, o_shift, o_zeroexp, FloatFormat, SoftFloat};
use qfp_bench::{cmd_ode, cmd_recip_bench, resource_stats, OdeConfig, OdeReport, RecipConfig, ResourceOp, Split};
use quantum_state::{Complex64, DenseState, GateOp, QuantumState};

const FIXED_BUDGET: Duration = Duration::from_secs(5 * 60);
const FLOAT_BUDGET: Duration = Duration::from_secs(30 * 60);
const RECIP_BUDGET: Duration = Duration::from_secs(10 * 60);
const ODE_BUDGET: Duration = Duration::from_secs(30 * 60);
const RESET_BUDGET: Duration = Duration::from_secs(1);

/// Amplitude tolerance for the tagged-superposition permutation check.
const PERM_TOL: f64 = 1e-9;
const SPOT_CHECKS: usize = 1000;
const RECIP_WIDTH20_MAX: f64 = 1.0 / 512.0; // 2^-9
const ODE_WIDTH20_MAX: f64 = 1.0 / 128.0; // 2^-7
const ODE_DT: f64 = 0.0625;
/// A dt has reached its plateau when the width-20 error is within this
/// factor of the double-precision integrator's error.
const PLATEAU_FACTOR: f64 = 2.0;
const PLATEAU_RATIO: (f64, f64) = (2.0, 8.0);
const MIN_R2: f64 = 0.95;
const DT_RATIO: (f64, f64) = (1.8, 2.2);
const ANCILLA_MAX: usize = 15;
const ANCILLA_TARGET: usize = 13;
const RESET_TOL: f64 = 1e-15;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let took = start.elapsed();
    let pass = out.pass && took < budget;
    let line = format!(
        "{} [{id}] {name}: {} ({:.2}s, budget {}s)\n",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        budget.as_secs_f64()
    );
    // Straight to the handle so the line shows even when test output is captured.
    let _ = std::io::stdout().write_all(line.as_bytes());
    let _ = std::io::stdout().flush();
    pass
}

// ---- fixed point ----------------------------------------------------------

/// Two's complement reading of an `n`-bit pattern, independent of fixed-arith.
fn value(raw: u128, n: usize, signed: bool) -> i128 {
    let raw = (raw & ((1u128 << n) - 1)) as i128;
    if signed && raw >> (n - 1) == 1 {
        raw - (1i128 << n)
    } else {
        raw
    }
}

fn wrap(v: i128, n: usize) -> u128 {
    v.rem_euclid(1i128 << n) as u128
}

fn count_mismatches(c: &Circuit, expected: impl Fn(BasisIndex) -> BasisIndex) -> (u64, usize) {
    let n = c.num_qubits();
    let bad = permutation_mismatches(c.ops(), n, PERM_TOL, |x| expected(BasisIndex::from_u64(x)).to_u64().unwrap()).unwrap();
    (1u64 << n, bad.len())
}

fn fixed_exhaustive() -> Outcome {
    let (mut checked, mut bad, mut circuits) = (0u64, 0usize, 0usize);
    let mut tally = |(n, b): (u64, usize)| {
        checked += n;
        bad += b;
        circuits += 1;
    };
    for signed in [false, true] {
        for n in 1..=6usize {
            for f in [0usize, 2] {
                if f > n {
                    continue;
                }
                let fmt = FixedFormat::new(n, f, signed).unwrap();

                for k in 0..1u128 << n {
                    let mut c = Circuit::new();
                    let a = FixedReg::alloc(&mut c, "a", fmt).unwrap();
                    add_const(&mut c, &a, value(k, n, signed), &[]).unwrap();
                    tally(count_mismatches(&c, |mut x| {
                        let v = value(x.read(&a.qubits), n, signed) + value(k, n, signed);
                        x.write(&a.qubits, wrap(v, n));
                        x
                    }));
                }

                let mut c = Circuit::new();
                let a = FixedReg::alloc(&mut c, "a", fmt).unwrap();
                let b = FixedReg::alloc(&mut c, "b", fmt).unwrap();
                add_reg(&mut c, &a, &b, None).unwrap();
                tally(count_mismatches(&c, |mut x| {
                    let v = value(x.read(&a.qubits), n, signed) + value(x.read(&b.qubits), n, signed);
                    x.write(&a.qubits, wrap(v, n));
                    x
                }));

                let mut c = Circuit::new();
                let a = FixedReg::alloc(&mut c, "a", fmt).unwrap();
                negate(&mut c, &a.qubits).unwrap();
                tally(count_mismatches(&c, |mut x| {
                    x.write(&a.qubits, wrap(-value(x.read(&a.qubits), n, signed), n));
                    x
                }));

                // The accumulator carries the product's 2f fraction bits.
                if 2 * f <= n {
                    let mut c = Circuit::new();
                    let acc = FixedReg::alloc(&mut c, "acc", FixedFormat::new(n, 2 * f, signed).unwrap()).unwrap();
                    let b = FixedReg::alloc(&mut c, "b", fmt).unwrap();
                    let d = FixedReg::alloc(&mut c, "c", fmt).unwrap();
                    fma(&mut c, &acc, &b, &d).unwrap();
                    tally(count_mismatches(&c, |mut x| {
                        let v = value(x.read(&acc.qubits), n, signed)
                            + value(x.read(&b.qubits), n, signed) * value(x.read(&d.qubits), n, signed);
                        x.write(&acc.qubits, wrap(v, n));
                        x
                    }));
                }
            }
        }
    }
    Outcome {
        pass: bad == 0,
        detail: format!("{circuits} circuits, {checked} basis inputs, {bad} mismatches (gate-faithful)"),
    }
}

// ---- float ----------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum Bin {
    Mul,
    Add,
}

struct BinCircuit {
    c: Circuit,
    q: FloatReg,
    r: FloatReg,
    out: FloatReg,
}

impl BinCircuit {
    fn new(f: FloatFormat, op: Bin) -> Self {
        let mut c = Circuit::new();
        let q = FloatReg::alloc(&mut c, "q", f).unwrap();
        let r = FloatReg::alloc(&mut c, "r", f).unwrap();
        let out = FloatReg::alloc(&mut c, "out", f).unwrap();
        match op {
            Bin::Mul => fmul(&mut c, &q, &r, &out).unwrap(),
            Bin::Add => fadd(&mut c, &q, &r, &out).unwrap(),
        }
        BinCircuit { c, q, r, out }
    }

    /// `None` when the inputs are disturbed or workspace is left dirty.
    fn eval(&self, a: SoftFloat, b: SoftFloat, backend: Backend, rng: &mut RngStream) -> Option<SoftFloat> {
        let mut idx = BasisIndex::ZERO;
        self.q.write(&mut idx, a);
        self.r.write(&mut idx, b);
        let got = run_basis(self.c.ops(), self.c.num_qubits(), idx, backend, rng).ok()?;
        let v = self.out.read(&got);
        let mut clean = idx;
        self.out.write(&mut clean, v);
        (got == clean).then_some(v)
    }
}

struct Pair {
    a: SoftFloat,
    b: SoftFloat,
    got: Option<SoftFloat>,
}

fn unary_circuit(f: FloatFormat, build: impl FnOnce(&mut Circuit, &FloatReg)) -> (Circuit, FloatReg) {
    let mut c = Circuit::new();
    let q = FloatReg::alloc(&mut c, "q", f).unwrap();
    build(&mut c, &q);
    (c, q)
}

/// Runs a single-register circuit; `None` unless everything outside `q` is zero.
fn eval_unary(c: &Circuit, q: &FloatReg, a: SoftFloat, backend: Backend, rng: &mut RngStream) -> Option<SoftFloat> {
    let mut idx = BasisIndex::ZERO;
    q.write(&mut idx, a);
    let got = run_basis(c.ops(), c.num_qubits(), idx, backend, rng).ok()?;
    let v = q.read(&got);
    let mut rest = got;
    q.write(&mut rest, SoftFloat::zero(a.fmt));
    (rest == BasisIndex::ZERO).then_some(v)
}

fn pick<T: Copy>(all: &[T], rng: &mut RngStream) -> T {
    all[((rng.next_uniform() * all.len() as f64) as usize).min(all.len() - 1)]
}

struct ShiftCase {
    c: Circuit,
    q: FixedReg,
    s: FixedReg,
    signed: bool,
}

impl ShiftCase {
    fn check(&self, code: u128, sraw: u128, backend: Backend, rng: &mut RngStream) -> bool {
        let (m, w) = (self.q.len(), self.s.len());
        let mut idx = BasisIndex::ZERO;
        idx.write(&self.q.qubits, code);
        idx.write(&self.s.qubits, sraw);
        let out = o_shift(value(code, m, self.signed) as i64, m as u32, self.signed, value(sraw, w, true) as i64);
        let mut want = idx;
        want.write(&self.q.qubits, wrap(out as i128, m));
        run_basis(self.c.ops(), self.c.num_qubits(), idx, backend, rng).ok() == Some(want)
    }
}

struct FloatRun {
    mul: Vec<Pair>,
    add: Vec<Pair>,
}

fn float_exhaustive(f: FloatFormat) -> (Outcome, FloatRun) {
    let all: Vec<SoftFloat> = enumerate_canonical(f).unwrap().collect();
    let mut rng = RngStream::new(1);
    let mut parts = Vec::new();
    let mut bad_total = 0usize;

    let mut run_bin = |op: Bin| {
        let bc = BinCircuit::new(f, op);
        let mut pairs = Vec::with_capacity(all.len() * all.len());
        for &a in &all {
            for &b in &all {
                pairs.push(Pair { a, b, got: bc.eval(a, b, Backend::Semantic, &mut rng) });
            }
        }
        let oracle = |a, b| match op {
            Bin::Mul => o_mul(a, b).value,
            Bin::Add => o_add(a, b).value,
        };
        let bad = pairs.iter().filter(|p| p.got != Some(oracle(p.a, p.b))).count();
        (bc, pairs, bad)
    };
    let (mul_c, mul, bad) = run_bin(Bin::Mul);
    parts.push(format!("fmul {}/{} bad", bad, mul.len()));
    bad_total += bad;
    let (add_c, add, bad) = run_bin(Bin::Add);
    parts.push(format!("fadd {}/{} bad", bad, add.len()));
    bad_total += bad;

    // Shift on the mantissa width, amounts of e and e + 1 bits.
    let m = f.m as usize;
    let (mut shifts, mut bad) = (0usize, 0usize);
    let mut shift_cases = Vec::new();
    for signed in [false, true] {
        for w in [f.e as usize, f.e as usize + 1] {
            let mut c = Circuit::new();
            let q = FixedReg::alloc(&mut c, "q", FixedFormat::integer(m, signed).unwrap()).unwrap();
            let s = FixedReg::alloc(&mut c, "s", FixedFormat::integer(w, true).unwrap()).unwrap();
            let anc = [c.alloc_ancilla(), c.alloc_ancilla(), c.alloc_ancilla(), c.alloc_ancilla()];
            shift(&mut c, &q, &s, anc).unwrap();
            for a in anc {
                c.release_clean(a).unwrap();
            }
            let case = ShiftCase { c, q, s, signed };
            for code in 0..1u128 << m {
                for sraw in 0..1u128 << w {
                    shifts += 1;
                    bad += !case.check(code, sraw, Backend::Semantic, &mut rng) as usize;
                }
            }
            shift_cases.push(case);
        }
    }
    parts.push(format!("shift {bad}/{shifts} bad"));
    bad_total += bad;

    let (ze_c, ze_q) = unary_circuit(f, |c, q| {
        let anc = [c.alloc_ancilla(), c.alloc_ancilla()];
        zero_exp(c, q, anc).unwrap();
        for a in anc {
            c.release_dirty(a).unwrap();
        }
    });
    let raw_codes: Vec<SoftFloat> =
        (0..1u64 << f.width()).map(|r| SoftFloat::from_raw(f, r & ((1 << f.e) - 1), r >> f.e)).collect();
    let bad = raw_codes
        .iter()
        .filter(|&&v| eval_unary(&ze_c, &ze_q, v, Backend::Semantic, &mut rng) != Some(o_zeroexp(v)))
        .count();
    parts.push(format!("zero_exp {bad}/{} bad", raw_codes.len()));
    bad_total += bad;

    let (neg_c, neg_q) = unary_circuit(f, |c, q| fneg(c, q).unwrap());
    let bad = all
        .iter()
        .filter(|&&v| eval_unary(&neg_c, &neg_q, v, Backend::Semantic, &mut rng) != Some(o_neg(v).value))
        .count();
    parts.push(format!("fneg {bad}/{} bad", all.len()));
    bad_total += bad;

    // Gate-faithful spot checks against the semantic results.
    let mut draw = RngStream::new(99);
    let mut gate_bad = 0usize;
    for (bc, pairs) in [(&mul_c, &mul), (&add_c, &add)] {
        for _ in 0..SPOT_CHECKS {
            let p = &pairs[(draw.next_uniform() * pairs.len() as f64) as usize % pairs.len()];
            gate_bad += (bc.eval(p.a, p.b, Backend::GateFaithful, &mut rng) != p.got) as usize;
        }
    }
    for case in &shift_cases {
        for _ in 0..SPOT_CHECKS / shift_cases.len() {
            let code = (draw.next_uniform() * (1u64 << case.q.len()) as f64) as u128;
            let sraw = (draw.next_uniform() * (1u64 << case.s.len()) as f64) as u128;
            gate_bad += !case.check(code, sraw, Backend::GateFaithful, &mut rng) as usize;
        }
    }
    for _ in 0..SPOT_CHECKS {
        let v = pick(&raw_codes, &mut draw);
        gate_bad += (eval_unary(&ze_c, &ze_q, v, Backend::GateFaithful, &mut rng) != Some(o_zeroexp(v))) as usize;
        let v = pick(&all, &mut draw);
        gate_bad += (eval_unary(&neg_c, &neg_q, v, Backend::GateFaithful, &mut rng) != Some(o_neg(v).value)) as usize;
    }
    parts.push(format!("gate-faithful spot checks {gate_bad} bad ({SPOT_CHECKS} per op)"));
    bad_total += gate_bad;

    (Outcome { pass: bad_total == 0, detail: parts.join(", ") }, FloatRun { mul, add })
}

fn accuracy(run: &FloatRun) -> Outcome {
    let mut parts = Vec::new();
    let mut violations = 0usize;
    for (name, pairs, ulps, flagged) in [
        ("fmul", &run.mul, 1.0, &(|a, b| o_mul(a, b).flags.any()) as &dyn Fn(SoftFloat, SoftFloat) -> bool),
        ("fadd", &run.add, 2.0, &|a, b| o_add(a, b).flags.any()),
    ] {
        let (mut kept, mut excluded, mut bad, mut worst) = (0usize, 0usize, 0usize, 0f64);
        for p in pairs.iter() {
            if flagged(p.a, p.b) {
                excluded += 1;
                continue;
            }
            kept += 1;
            let Some(got) = p.got else {
                bad += 1;
                continue;
            };
            // Exact in f64 at this width.
            let real = if name == "fmul" { p.a.decode() * p.b.decode() } else { p.a.decode() + p.b.decode() };
            let err = (got.decode() - real).abs() / got.ulp();
            worst = worst.max(err);
            bad += (err > ulps) as usize;
        }
        violations += bad;
        parts.push(format!("{name} {bad} violations of {ulps} ulp over {kept} pairs (worst {worst:.3} ulp, {excluded} out-of-range excluded)"));
    }
    Outcome { pass: violations == 0, detail: parts.join("; ") }
}

// ---- benchmarks -----------------------------------------------------------

fn recip_bench() -> Outcome {
    let r = cmd_recip_bench(&RecipConfig::default()).unwrap();
    let errs: Vec<f64> = r.widths.iter().map(|w| w.mean_abs_rel_err).collect();
    let decreasing = errs.windows(2).all(|p| p[1] < p[0]);
    let last = *errs.last().unwrap();
    let mismatches: usize = r.widths.iter().map(|w| w.oracle_mismatches).sum();
    let curve: Vec<String> = r.widths.iter().map(|w| format!("w{}={:.2}", w.width, w.log2_mean_abs_rel_err)).collect();
    Outcome {
        pass: decreasing && last <= RECIP_WIDTH20_MAX && mismatches == 0,
        detail: format!(
            "log2 mean |rel err| [{}], strictly decreasing {decreasing}, width 20 {:.2} <= -9, oracle mismatches {mismatches}",
            curve.join(" "),
            last.log2()
        ),
    }
}

fn ode_check(r: &OdeReport) -> Outcome {
    let cfg = OdeConfig::default();
    let widest = *cfg.widths.iter().max().unwrap();
    let at = |w: u32, dt: f64| r.cases.iter().find(|c| c.width == w && c.dt == dt).unwrap();

    let headline = at(widest, ODE_DT).final_l2_rel_err;
    let mut monotone = true;
    let mut plateaus = Vec::new();
    for &dt in &cfg.dts {
        let errs: Vec<f64> = cfg.widths.iter().map(|&w| at(w, dt).final_l2_rel_err).collect();
        monotone &= errs.windows(2).all(|p| p[1] <= p[0]);
        let c = at(widest, dt);
        if c.final_l2_rel_err <= PLATEAU_FACTOR * c.reference_l2_rel_err {
            plateaus.push((dt, c.final_l2_rel_err));
        }
    }
    let ratios: Vec<f64> = plateaus
        .windows(2)
        .filter(|p| p[1].0 == p[0].0 / 2.0)
        .map(|p| p[0].1 / p[1].1)
        .collect();
    let ratios_ok = !ratios.is_empty() && ratios.iter().all(|r| (PLATEAU_RATIO.0..=PLATEAU_RATIO.1).contains(r));
    let mismatches: usize = r.cases.iter().map(|c| c.oracle_mismatches).sum();
    Outcome {
        pass: headline <= ODE_WIDTH20_MAX && monotone && ratios_ok && mismatches == 0,
        detail: format!(
            "width {widest} dt 2^-4 log2 err {:.2} <= -7, non-increasing with width {monotone}, plateaued dts {:?}, plateau ratios {:?} in [2, 8], oracle mismatches {mismatches}",
            headline.log2(),
            plateaus.iter().map(|p| p.0).collect::<Vec<_>>(),
            ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>()
        ),
    }
}

// ---- resources ------------------------------------------------------------

/// Least-squares polynomial fit of degree `deg`; returns R^2.
fn r_squared(xs: &[f64], ys: &[f64], deg: usize) -> f64 {
    let k = deg + 1;
    let mean_x = xs.iter().sum::<f64>() / xs.len() as f64;
    // Normal equations on centred x, solved by Gaussian elimination.
    let mut a = vec![vec![0f64; k + 1]; k];
    for (&x, &y) in xs.iter().zip(ys) {
        let pw: Vec<f64> = (0..k).map(|i| (x - mean_x).powi(i as i32)).collect();
        for i in 0..k {
            for j in 0..k {
                a[i][j] += pw[i] * pw[j];
            }
            a[i][k] += pw[i] * y;
        }
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        for row in 0..k {
            if row != col {
                let factor = a[row][col] / a[col][col];
                for j in col..=k {
                    a[row][j] -= factor * a[col][j];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..k).map(|i| a[i][k] / a[i][i]).collect();
    let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let fit: f64 = coef.iter().enumerate().map(|(i, c)| c * (x - mean_x).powi(i as i32)).sum();
        ss_res += (y - fit).powi(2);
        ss_tot += (y - mean_y).powi(2);
    }
    1.0 - ss_res / ss_tot
}

fn resource_scaling(ode: &OdeReport) -> Outcome {
    let splits: Vec<Split> = RecipConfig::default().splits;
    let iters = RecipConfig::default().iters;
    let stats: Vec<_> = splits.iter().map(|&s| resource_stats(ResourceOp::Recip, s, iters).unwrap()).collect();
    let xs: Vec<f64> = splits.iter().map(|s| s.width as f64).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for arity in 1..=3 {
        let all: Vec<f64> = stats.iter().map(|s| s.by_arity(arity) as f64).collect();
        let non_phase: Vec<f64> = stats
            .iter()
            .map(|s| s.counts.iter().filter(|((c, a), _)| *a == arity && *c != GateClass::Phase).map(|(_, n)| *n as f64).sum())
            .collect();
        let r2 = r_squared(&xs, &all, 1);
        ok &= r2 >= MIN_R2;
        parts.push(format!("{arity}q linear R2 {r2:.4} (non-phase {:.4})", r_squared(&xs, &non_phase, 1)));
    }
    let cphase: Vec<f64> = stats
        .iter()
        .map(|s| s.counts.iter().filter(|((c, a), _)| *c == GateClass::Phase && *a >= 2).map(|(_, n)| *n as f64).sum())
        .collect();
    let r2 = r_squared(&xs, &cphase, 2);
    ok &= r2 >= MIN_R2;
    parts.push(format!("controlled-phase quadratic R2 {r2:.4}"));

    let cfg = OdeConfig::default();
    let mut ratios = Vec::new();
    for &w in &cfg.widths {
        for p in cfg.dts.windows(2) {
            let total = |dt: f64| {
                ode.cases.iter().find(|c| c.width == w && c.dt == dt).unwrap().circuit.total_gates as f64
            };
            ratios.push(total(p[1]) / total(p[0]));
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(l, h), &r| (l.min(r), h.max(r)));
    ok &= lo >= DT_RATIO.0 && hi <= DT_RATIO.1;
    parts.push(format!("ODE op ratio on halving dt in [{lo:.3}, {hi:.3}]"));
    Outcome { pass: ok, detail: parts.join(", ") }
}

fn ancilla_economy() -> Outcome {
    let split = *RecipConfig::default().splits.iter().max_by_key(|s| s.width).unwrap();
    let peak = resource_stats(ResourceOp::Recip, split, RecipConfig::default().iters).unwrap().ancilla_high_water;
    Outcome {
        pass: peak <= ANCILLA_MAX,
        detail: format!(
            "recip width {} (e={}, m={}) ancilla high-water {peak} <= {ANCILLA_MAX}, target {ANCILLA_TARGET}; \
             the peak is the m-1 product extension of the exact mantissa multiply, one below max(m, 7) \
             because the mantissa register holds the top of the product",
            split.width, split.e, split.m
        ),
    }
}

// ---- reset protocol -------------------------------------------------------

fn reset_example() -> Outcome {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut parts = Vec::new();
    let mut ok = true;
    for (u, want_outcome, sign) in [(0.1, false, 1.0), (0.9, true, -1.0)] {
        // Qubit 0 is the ancilla; build (|001> + |110>)/sqrt2 from |000>.
        let mut st = DenseState::basis(3, 0).unwrap();
        st.apply_gate(&GateOp::h(2)).unwrap();
        st.apply_gate(&GateOp::cx(2, 1).unwrap()).unwrap();
        st.apply_gate(&GateOp::x(0)).unwrap();
        st.apply_gate(&GateOp::cx(2, 0).unwrap()).unwrap();
        let psi2 = [(1usize, s), (6, s)];
        ok &= (0..8).all(|i| {
            let want = psi2.iter().find(|p| p.0 == i).map_or(0.0, |p| p.1);
            (st.amps()[i] - Complex64::new(want, 0.0)).norm() <= RESET_TOL
        });

        let outcome = st.reset_ancilla_with_uniform(0, u).unwrap();
        let want = [(6usize, s), (0, sign * s)];
        let exact = (0..8).all(|i| {
            let w = want.iter().find(|p| p.0 == i).map_or(0.0, |p| p.1);
            (st.amps()[i] - Complex64::new(w, 0.0)).norm() <= RESET_TOL
        });
        ok &= exact && outcome == want_outcome;
        parts.push(format!(
            "outcome {} -> (|110> {} |000>)/sqrt2 {}",
            outcome as u8,
            if sign > 0.0 { "+" } else { "-" },
            if exact { "exact" } else { "WRONG" }
        ));
    }
    Outcome { pass: ok, detail: parts.join(", ") }
}

fn main() {
    // Harness flags such as --nocapture are accepted and ignored.
    let mut results = Vec::new();
    results.push(report(1, "fixed-point exhaustive n<=6", FIXED_BUDGET, fixed_exhaustive));

    let fmt = FloatFormat::new(4, 6).unwrap();
    let mut float_run = None;
    results.push(report(2, "float exhaustive (e=4, m=6)", FLOAT_BUDGET, || {
        let (out, run) = float_exhaustive(fmt);
        float_run = Some(run);
        out
    }));
    let float_run = float_run.unwrap();
    results.push(report(3, "accuracy width 10", FLOAT_BUDGET, || accuracy(&float_run)));
    results.push(report(4, "reciprocal benchmark", RECIP_BUDGET, recip_bench));

    let mut ode = None;
    results.push(report(5, "ODE replication", ODE_BUDGET, || {
        let r = cmd_ode(&OdeConfig::default()).unwrap();
        let out = ode_check(&r);
        ode = Some(r);
        out
    }));
    let ode = ode.unwrap();
    results.push(report(6, "resource scaling", FIXED_BUDGET, || resource_scaling(&ode)));
    results.push(report(7, "ancilla economy", FIXED_BUDGET, ancilla_economy));
    results.push(report(8, "ancilla reset worked example", RESET_BUDGET, reset_example));

    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
