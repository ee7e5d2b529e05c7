//! Benchmarks and resource reports for the quantum float circuits.
//!
//! Every command is a pure function of its configuration and seed. Results
//! come back as plain row structs plus a JSON summary; [`write_csv`] and
//! [`write_json`] put them on disk.

mod encode;
mod ode;
mod recip;
mod resources;

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use circuit::Backend;
use float_oracle::FloatFormat;
use serde::{Deserialize, Serialize};

pub use encode::{cmd_encode, EncodeReport};
pub use ode::{cmd_ode, ode_reference_error, OdeCase, OdeConfig, OdeReport, OdeRow};
pub use recip::{cmd_recip_bench, RecipConfig, RecipReport, RecipRow, WidthSummary};
pub use resources::{cmd_resources, resource_stats, ResourceOp, ResourceRow};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Backend choice as it appears in configs and on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Semantic,
    Gate,
}

impl From<BackendChoice> for Backend {
    fn from(b: BackendChoice) -> Self {
        match b {
            BackendChoice::Semantic => Backend::Semantic,
            BackendChoice::Gate => Backend::GateFaithful,
        }
    }
}

/// A total width with its exponent/mantissa split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub width: u32,
    pub e: u32,
    pub m: u32,
}

impl Split {
    pub fn new(width: u32, e: u32, m: u32) -> Result<Self> {
        if e + m != width {
            bail!("invalid split for width {width}: e={e} + m={m} != {width}");
        }
        FloatFormat::new(e, m)?;
        Ok(Split { width, e, m })
    }

    pub fn format(&self) -> FloatFormat {
        FloatFormat { e: self.e, m: self.m }
    }
}

/// Zips parallel width/exponent/mantissa lists into splits.
pub fn splits(widths: &[u32], exponents: &[u32], mantissas: &[u32]) -> Result<Vec<Split>> {
    if widths.len() != exponents.len() || widths.len() != mantissas.len() {
        bail!("widths, exponents and mantissas must have the same length");
    }
    widths.iter().zip(exponents).zip(mantissas).map(|((&w, &e), &m)| Split::new(w, e, m)).collect()
}

/// Summary document: the exact config, seed and version next to the stats.
#[derive(Clone, Debug, Serialize)]
pub struct Summary<C: Serialize, S: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: C,
    pub stats: S,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut w = csv::Writer::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Gate totals keyed by `CLASS/arity`, for summaries.
pub fn counts_map(stats: &circuit::CircuitStats) -> std::collections::BTreeMap<String, u64> {
    stats.counts.iter().map(|((c, a), n)| (format!("{}/{a}", c.name()), *n)).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct StatsSummary {
    pub total_gates: u64,
    pub depth: u64,
    pub total_qubits: usize,
    pub ancilla_peak: usize,
    pub counts: std::collections::BTreeMap<String, u64>,
}

impl From<&circuit::CircuitStats> for StatsSummary {
    fn from(s: &circuit::CircuitStats) -> Self {
        StatsSummary {
            total_gates: s.total_gates(),
            depth: s.depth,
            total_qubits: s.total_qubits,
            ancilla_peak: s.ancilla_high_water,
            counts: counts_map(s),
        }
    }
}
