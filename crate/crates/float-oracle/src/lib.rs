//! Classical, bit-exact model of the two's complement float encoding.
//!
//! A value is `mant * 2^-(m-1) * 2^exp` with an `e`-bit two's complement
//! exponent and an `m`-bit two's complement mantissa. Canonical values have
//! `|mant|` in `[2^(m-2), 2^(m-1))`, or are the unique zero `(0, 0)`.
//!
//! The operations here reproduce the circuits' truncation, guard-bit and
//! wraparound behaviour exactly, so circuit outputs can be compared code for
//! code. Real-number accuracy is a separate question answered by comparing
//! [`SoftFloat::decode`] against `f64` arithmetic.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid float format e={e} m={m}")]
    InvalidFormat { e: u32, m: u32 },
    #[error("{0} overflows the exponent range")]
    Overflow(f64),
    #[error("{0} underflows the exponent range")]
    Underflow(f64),
    #[error("{0} is not finite")]
    NotFinite(f64),
    #[error("exhaustive enumeration limited to e + m <= 14, got {0}")]
    EnumerationBound(u32),
    #[error("code ({exp}, {mant}) does not fit e={e} m={m}")]
    CodeOutOfRange { exp: i64, mant: i64, e: u32, m: u32 },
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;

/// Exponent width `e` and mantissa width `m`, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FloatFormat {
    pub e: u32,
    pub m: u32,
}

impl FloatFormat {
    pub fn new(e: u32, m: u32) -> Result<Self> {
        if !(2..=16).contains(&e) || !(2..=40).contains(&m) {
            return Err(OracleError::InvalidFormat { e, m });
        }
        Ok(FloatFormat { e, m })
    }

    pub fn width(&self) -> u32 {
        self.e + self.m
    }

    pub fn exp_min(&self) -> i64 {
        -(1i64 << (self.e - 1))
    }

    pub fn exp_max(&self) -> i64 {
        (1i64 << (self.e - 1)) - 1
    }

    /// Smallest canonical mantissa magnitude, `2^(m-2)` (value 0.5).
    pub fn half(&self) -> i64 {
        1i64 << (self.m - 2)
    }

    /// `2^(m-1)`, the mantissa scale (value 1.0, itself not representable).
    pub fn one(&self) -> i64 {
        1i64 << (self.m - 1)
    }

    /// Wraps an integer to the `e`-bit exponent range.
    pub fn wrap_exp(&self, v: i64) -> i64 {
        wrap(v, self.e)
    }
}

impl fmt::Display for FloatFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(e={}, m={})", self.e, self.m)
    }
}

fn wrap(v: i64, bits: u32) -> i64 {
    let m = 1i64 << bits;
    let r = v.rem_euclid(m);
    if r >= m / 2 {
        r - m
    } else {
        r
    }
}

/// A float in the circuit encoding: two's complement codes plus format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SoftFloat {
    pub exp: i64,
    pub mant: i64,
    pub fmt: FloatFormat,
}

impl SoftFloat {
    pub fn zero(fmt: FloatFormat) -> Self {
        SoftFloat { exp: 0, mant: 0, fmt }
    }

    /// Codes must fit their widths; canonicality is not required.
    pub fn new(fmt: FloatFormat, exp: i64, mant: i64) -> Result<Self> {
        let m_ok = (-(1i64 << (fmt.m - 1))..(1i64 << (fmt.m - 1))).contains(&mant);
        if !m_ok || !(fmt.exp_min()..=fmt.exp_max()).contains(&exp) {
            return Err(OracleError::CodeOutOfRange { exp, mant, e: fmt.e, m: fmt.m });
        }
        Ok(SoftFloat { exp, mant, fmt })
    }

    /// From raw register bit patterns (low `e` and `m` bits).
    pub fn from_raw(fmt: FloatFormat, exp_raw: u64, mant_raw: u64) -> Self {
        SoftFloat { exp: wrap(exp_raw as i64, fmt.e), mant: wrap(mant_raw as i64, fmt.m), fmt }
    }

    /// Register bit patterns `(exp, mant)`.
    pub fn raw(&self) -> (u64, u64) {
        let em = (1u64 << self.fmt.e) - 1;
        let mm = (1u64 << self.fmt.m) - 1;
        (self.exp as u64 & em, self.mant as u64 & mm)
    }

    pub fn decode(&self) -> f64 {
        self.mant as f64 * 2f64.powi(self.exp as i32 - (self.fmt.m as i32 - 1))
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0
    }

    pub fn is_canonical(&self) -> bool {
        if self.mant == 0 {
            return self.exp == 0;
        }
        let a = self.mant.abs();
        a >= self.fmt.half() && a < self.fmt.one()
    }

    /// Unit in the last place at this exponent, `2^(exp - (m-1))`.
    pub fn ulp(&self) -> f64 {
        2f64.powi(self.exp as i32 - (self.fmt.m as i32 - 1))
    }
}

impl fmt::Display for SoftFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{} ({})", self.mant, self.exp, self.decode())
    }
}

/// Out-of-range conditions raised while computing a result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// Exponent exceeded the maximum and wrapped.
    pub overflow: bool,
    /// Exponent fell below the minimum and the result was flushed to zero.
    pub underflow: bool,
    /// Input outside the operation's domain (zero reciprocal, wrapped guess).
    pub unrepresentable: bool,
}

impl Flags {
    pub fn any(&self) -> bool {
        self.overflow || self.underflow || self.unrepresentable
    }

    fn merge(&mut self, other: Flags) {
        self.overflow |= other.overflow;
        self.underflow |= other.underflow;
        self.unrepresentable |= other.unrepresentable;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpResult {
    pub value: SoftFloat,
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Round to nearest, ties to even. Used for loading constants.
    NearestEven,
    /// Floor of the two's complement mantissa, as the circuits truncate.
    Truncate,
}

/// Canonical code for `x`.
pub fn o_encode(x: f64, fmt: FloatFormat, mode: Rounding) -> Result<SoftFloat> {
    if !x.is_finite() {
        return Err(OracleError::NotFinite(x));
    }
    if x == 0.0 {
        return Ok(SoftFloat::zero(fmt));
    }
    // x = f * 2^exp with |f| in [0.5, 1)
    let mut exp = x.abs().log2().floor() as i64 + 1;
    while x.abs() >= 2f64.powi(exp as i32) {
        exp += 1;
    }
    while x.abs() < 2f64.powi(exp as i32 - 1) {
        exp -= 1;
    }
    let scaled = x * 2f64.powi(fmt.m as i32 - 1 - exp as i32);
    let mut mant = match mode {
        Rounding::NearestEven => scaled.round_ties_even(),
        Rounding::Truncate => scaled.floor(),
    } as i64;
    if mant.abs() == fmt.one() {
        mant /= 2;
        exp += 1;
    }
    if exp > fmt.exp_max() {
        return Err(OracleError::Overflow(x));
    }
    if exp < fmt.exp_min() {
        return Err(OracleError::Underflow(x));
    }
    Ok(SoftFloat { exp, mant, fmt })
}

/// Finishes a result from a raw exponent: flush on underflow, wrap on
/// overflow, and zero the exponent of a zero mantissa.
fn finish(fmt: FloatFormat, v: i64, mant: i64) -> OpResult {
    let mut flags = Flags::default();
    if mant == 0 {
        return OpResult { value: SoftFloat::zero(fmt), flags };
    }
    if v < fmt.exp_min() {
        flags.underflow = true;
        return OpResult { value: SoftFloat::zero(fmt), flags };
    }
    if v > fmt.exp_max() {
        flags.overflow = true;
    }
    OpResult { value: SoftFloat { exp: fmt.wrap_exp(v), mant, fmt }, flags }
}

/// Product with the full mantissa product truncated to `m+1` bits, one
/// renormalizing left shift, and the exponent sum.
pub fn o_mul(a: SoftFloat, b: SoftFloat) -> OpResult {
    let fmt = a.fmt;
    let m = fmt.m;
    let p = a.mant as i128 * b.mant as i128;
    let t = p >> (m - 2);
    let neg = t < 0;
    let mut mag = t.abs();
    let lz = mag < fmt.one() as i128;
    if lz {
        mag <<= 1;
    }
    let mut mant = (mag >> 1) as i64;
    if neg {
        mant = -mant;
    }
    finish(fmt, a.exp + b.exp - lz as i64, mant)
}

/// Sum with the smaller-exponent operand aligned by an arithmetic right
/// shift that keeps one guard bit, then renormalized by leading-zero count.
pub fn o_add(a: SoftFloat, b: SoftFloat) -> OpResult {
    let fmt = a.fmt;
    let m = fmt.m as i64;
    let (za, zb) = (a.is_zero(), b.is_zero());
    // `a` is the operand to align when it is zero, or has the smaller
    // exponent and `b` is nonzero.
    let a_small = za || (a.exp < b.exp && !zb);
    let (small, big) = if a_small { (a, b) } else { (b, a) };
    let sa = big.exp - small.exp;
    let w = small.mant * 2;
    let w = if sa < 0 { w } else { w >> sa.min(63) };
    let s = w + 2 * big.mant;
    if s == 0 {
        return OpResult { value: SoftFloat::zero(fmt), flags: Flags::default() };
    }
    let mag = s.abs();
    let p = 63 - mag.leading_zeros() as i64;
    let k = p - (m - 1);
    let norm = if k >= 0 { mag >> k } else { mag << -k };
    let mant = if s < 0 { -(norm >> 1) } else { norm >> 1 };
    finish(fmt, big.exp + k, mant)
}

pub fn o_neg(a: SoftFloat) -> OpResult {
    let mut flags = Flags::default();
    if a.mant == -a.fmt.one() {
        flags.unrepresentable = true;
        return OpResult { value: a, flags };
    }
    OpResult { value: SoftFloat { mant: -a.mant, ..a }, flags }
}

/// Exponent cleared when the mantissa is zero; otherwise unchanged.
pub fn o_zeroexp(a: SoftFloat) -> SoftFloat {
    if a.mant == 0 {
        SoftFloat { exp: 0, ..a }
    } else {
        a
    }
}

/// Register-level shift of an `n`-bit code by `s` (positive = right).
/// Right shifts fill with the sign bit when `signed`, else with 0; left
/// shifts fill 0 and drop bits off the top.
pub fn o_shift(code: i64, n: u32, signed: bool, s: i64) -> i64 {
    let mask = (1i64 << n) - 1;
    let raw = code & mask;
    let out = if s >= 0 {
        let s = s.min(63);
        if signed {
            wrap(raw, n) >> s
        } else {
            raw >> s
        }
    } else if -s >= n as i64 {
        0
    } else {
        raw << -s
    };
    if signed {
        wrap(out & mask, n)
    } else {
        out & mask
    }
}

/// Newton-Raphson reciprocal `x <- x * (2 - q * x)` from the guess
/// `sign(q) * 0.5 * 2^(1 - q.exp)`.
pub fn o_recip(q: SoftFloat, iters: usize) -> OpResult {
    let fmt = q.fmt;
    let mut flags = Flags::default();
    // A zero input still runs the iteration, as the circuit does.
    if q.is_zero() {
        flags.unrepresentable = true;
    }
    let guess_exp = 1 - q.exp;
    if guess_exp > fmt.exp_max() {
        flags.unrepresentable = true;
    }
    let half = if q.mant >= 0 { fmt.half() } else { -fmt.half() };
    let mut x = SoftFloat { exp: fmt.wrap_exp(guess_exp), mant: half, fmt };
    let two = SoftFloat { exp: 2, mant: fmt.half(), fmt };
    if two.exp > fmt.exp_max() {
        flags.unrepresentable = true;
    }
    for _ in 0..iters {
        let t = o_mul(q, x);
        let nt = o_neg(t.value);
        let u = o_add(two, nt.value);
        let nx = o_mul(x, u.value);
        for f in [t.flags, nt.flags, u.flags, nx.flags] {
            flags.merge(f);
        }
        x = nx.value;
    }
    OpResult { value: x, flags }
}

/// Horner evaluation of the order-`n` Taylor polynomial of `exp(x)`:
/// `1 + x (1 + x/2 (1 + ... (1 + x/n)))`, with `1/k` loaded to nearest.
pub fn o_exp(x: SoftFloat, n: usize) -> Result<OpResult> {
    let fmt = x.fmt;
    let one = o_encode(1.0, fmt, Rounding::NearestEven)?;
    let mut acc = one;
    let mut flags = Flags::default();
    for k in (1..=n).rev() {
        let ck = o_encode(1.0 / k as f64, fmt, Rounding::NearestEven)?;
        let t = o_mul(x, ck);
        let p = o_mul(t.value, acc);
        let s = o_add(one, p.value);
        for f in [t.flags, p.flags, s.flags] {
            flags.merge(f);
        }
        acc = s.value;
    }
    Ok(OpResult { value: acc, flags })
}

/// Every canonical code of `fmt` exactly once: zero first, then by
/// exponent, negative mantissas before positive.
pub fn enumerate_canonical(fmt: FloatFormat) -> Result<impl Iterator<Item = SoftFloat>> {
    if fmt.width() > 14 {
        return Err(OracleError::EnumerationBound(fmt.width()));
    }
    let (half, one) = (fmt.half(), fmt.one());
    let nonzero = (fmt.exp_min()..=fmt.exp_max()).flat_map(move |exp| {
        (-one + 1..=-half).chain(half..one).map(move |mant| SoftFloat { exp, mant, fmt })
    });
    Ok(std::iter::once(SoftFloat::zero(fmt)).chain(nonzero))
}

/// Closed-form count of canonical codes, `2^(e+m-1) + 1`.
pub fn canonical_count(fmt: FloatFormat) -> u64 {
    (1u64 << (fmt.e + fmt.m - 1)) + 1
}

/// One step of the reference rotation system `u' = [[0, 1], [-1, 0]] u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeSample {
    pub step: usize,
    pub t: f64,
    pub u: [f64; 2],
    pub exact: [f64; 2],
}

/// Coefficients `(a, b)` of the trapezoidal update
/// `u_{k+1} = [[a, b], [-b, a]] u_k`, with `a = (1 - dt^2/4) / (1 + dt^2/4)`
/// and `b = dt / (1 + dt^2/4)`.
pub fn trapezoid_coefficients(dt: f64) -> (f64, f64) {
    let d = 1.0 + dt * dt / 4.0;
    ((1.0 - dt * dt / 4.0) / d, dt / d)
}

/// Exact solution from `u(0) = [0, -1]`: `-[sin t, cos t]`.
pub fn ode_exact(t: f64) -> [f64; 2] {
    [-t.sin(), -t.cos()]
}

/// Double-precision trapezoidal trajectory from `u0 = [0, -1]`, steps `0..=steps`.
pub fn o_ode_reference(dt: f64, steps: usize) -> Vec<OdeSample> {
    let (a, b) = trapezoid_coefficients(dt);
    let mut u = [0.0, -1.0];
    let mut out = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        let t = step as f64 * dt;
        out.push(OdeSample { step, t, u, exact: ode_exact(t) });
        u = [a * u[0] + b * u[1], -b * u[0] + a * u[1]];
    }
    out
}

/// `||traj - exact||_2 / ||exact||_2` over the stacked components.
pub fn l2_relative_error<I>(pairs: I) -> f64
where
    I: IntoIterator<Item = ([f64; 2], [f64; 2])>,
{
    let (mut num, mut den) = (0.0, 0.0);
    for (u, x) in pairs {
        num += (u[0] - x[0]).powi(2) + (u[1] - x[1]).powi(2);
        den += x[0] * x[0] + x[1] * x[1];
    }
    (num / den).sqrt()
}
