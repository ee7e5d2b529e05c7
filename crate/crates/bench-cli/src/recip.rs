use anyhow::Result;
use circuit::{run_basis, BasisIndex, Circuit, RngStream};
use float_arith::{recip, FloatReg};
use float_oracle::{o_encode, o_recip, Rounding};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::{BackendChoice, Split, StatsSummary};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecipConfig {
    pub splits: Vec<Split>,
    pub samples: usize,
    pub iters: usize,
    pub mean: f64,
    pub stddev: f64,
    pub seed: u64,
    pub backend: BackendChoice,
}

impl Default for RecipConfig {
    fn default() -> Self {
        let splits = [(10, 4, 6), (12, 5, 7), (14, 5, 9), (16, 5, 11), (18, 6, 12), (20, 7, 13)]
            .into_iter()
            .map(|(width, e, m)| Split { width, e, m })
            .collect();
        RecipConfig { splits, samples: 100, iters: 10, mean: 0.0, stddev: 5.0, seed: 2024, backend: BackendChoice::Semantic }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecipRow {
    pub width: u32,
    pub e: u32,
    pub m: u32,
    pub sample: usize,
    /// The encoded input (the raw draw when it does not encode).
    pub input: f64,
    /// Double-precision reciprocal of the encoded input.
    pub expected: Option<f64>,
    pub output: Option<f64>,
    pub signed_rel_err: Option<f64>,
    pub discarded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WidthSummary {
    pub width: u32,
    pub e: u32,
    pub m: u32,
    pub kept: usize,
    pub discarded: usize,
    pub mean_abs_rel_err: f64,
    pub log2_mean_abs_rel_err: f64,
    pub stddev_rel_err: f64,
    pub min_rel_err: f64,
    pub max_rel_err: f64,
    /// Kept samples whose circuit output differs from the oracle's code.
    pub oracle_mismatches: usize,
    pub circuit: StatsSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecipReport {
    pub rows: Vec<RecipRow>,
    pub widths: Vec<WidthSummary>,
}

/// Stream key of one sample, so each draw is independent of run order.
fn sample_rng(seed: u64, width: u32, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((width as u64) << 32) | sample as u64);
    rng
}

pub fn cmd_recip_bench(cfg: &RecipConfig) -> Result<RecipReport> {
    let normal = Normal::new(cfg.mean, cfg.stddev)?;
    let mut rows = Vec::new();
    let mut widths = Vec::new();
    for split in &cfg.splits {
        let split = Split::new(split.width, split.e, split.m)?;
        let fmt = split.format();
        let mut c = Circuit::new();
        let q = FloatReg::alloc(&mut c, "q", fmt)?;
        let out = recip(&mut c, &q, cfg.iters, "recip")?;
        let stats = c.stats();
        let mut errs = Vec::new();
        let mut mismatches = 0;
        for sample in 0..cfg.samples {
            let x = normal.sample(&mut sample_rng(cfg.seed, split.width, sample));
            let mut row = RecipRow {
                width: split.width,
                e: split.e,
                m: split.m,
                sample,
                input: x,
                expected: None,
                output: None,
                signed_rel_err: None,
                discarded: true,
            };
            if let Ok(v) = o_encode(x, fmt, Rounding::NearestEven) {
                row.input = v.decode();
                let want = o_recip(v, cfg.iters);
                if !want.flags.any() {
                    let mut idx = BasisIndex::ZERO;
                    q.write(&mut idx, v);
                    let mut rng = RngStream::new(cfg.seed).derive(((split.width as u64) << 32) | sample as u64);
                    let got = out.read(&run_basis(c.ops(), c.num_qubits(), idx, cfg.backend.into(), &mut rng)?);
                    if got != want.value {
                        mismatches += 1;
                    }
                    let expected = 1.0 / v.decode();
                    let err = (got.decode() - expected) / expected;
                    row.expected = Some(expected);
                    row.output = Some(got.decode());
                    row.signed_rel_err = Some(err);
                    row.discarded = false;
                    errs.push(err);
                }
            }
            rows.push(row);
        }
        widths.push(summarize(split, &errs, cfg.samples - errs.len(), mismatches, &stats));
    }
    Ok(RecipReport { rows, widths })
}

fn summarize(s: Split, errs: &[f64], discarded: usize, oracle_mismatches: usize, stats: &circuit::CircuitStats) -> WidthSummary {
    let n = errs.len().max(1) as f64;
    let mean_abs = errs.iter().map(|e| e.abs()).sum::<f64>() / n;
    let mean = errs.iter().sum::<f64>() / n;
    let var = errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / n;
    WidthSummary {
        width: s.width,
        e: s.e,
        m: s.m,
        kept: errs.len(),
        discarded,
        mean_abs_rel_err: mean_abs,
        log2_mean_abs_rel_err: mean_abs.log2(),
        stddev_rel_err: var.sqrt(),
        min_rel_err: errs.iter().copied().fold(f64::INFINITY, f64::min),
        max_rel_err: errs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        oracle_mismatches,
        circuit: stats.into(),
    }
}
