use anyhow::Result;
use float_oracle::{o_encode, FloatFormat, Rounding};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EncodeReport {
    pub input: f64,
    pub e: u32,
    pub m: u32,
    pub exp_code: i64,
    pub mant_code: i64,
    pub decoded: f64,
    /// Truncation can stay in range where rounding up overflows, and the
    /// other way round near the underflow edge.
    pub truncate_exp_code: Option<i64>,
    pub truncate_mant_code: Option<i64>,
    pub truncate_decoded: Option<f64>,
}

/// Codes of `x` under round-to-nearest (the default) and truncation.
pub fn cmd_encode(x: f64, e: u32, m: u32) -> Result<EncodeReport> {
    let fmt = FloatFormat::new(e, m)?;
    let n = o_encode(x, fmt, Rounding::NearestEven)?;
    let t = o_encode(x, fmt, Rounding::Truncate).ok();
    Ok(EncodeReport {
        input: x,
        e,
        m,
        exp_code: n.exp,
        mant_code: n.mant,
        decoded: n.decode(),
        truncate_exp_code: t.map(|t| t.exp),
        truncate_mant_code: t.map(|t| t.mant),
        truncate_decoded: t.map(|t| t.decode()),
    })
}
