use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use qfp_bench::*;

/// Quantum floating-point arithmetic benchmarks.
#[derive(Parser)]
#[command(name = "qfp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Newton reciprocal accuracy on Gaussian samples, per width.
    RecipBench(RecipArgs),
    /// Trapezoidal integration of the rotation system u' = [[0,1],[-1,0]] u.
    Ode(OdeArgs),
    /// Gate counts, depth and ancilla peak of one operation across widths.
    Resources(ResourceArgs),
    /// Print the codes of a real number.
    Encode(EncodeArgs),
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10, 12, 14, 16, 18, 20])]
    widths: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 5, 5, 6, 7])]
    exponents: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [6, 7, 9, 11, 12, 13])]
    mantissas: Vec<u32>,
}

#[derive(Args)]
struct RecipArgs {
    #[command(flatten)]
    splits: SplitArgs,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    #[arg(long, default_value_t = 0.0)]
    mean: f64,
    #[arg(long, default_value_t = 5.0)]
    stddev: f64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendChoice::Semantic)]
    backend: BackendChoice,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct OdeArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [14, 16, 18, 20])]
    widths: Vec<u32>,
    /// Exponent bits, shared by every width.
    #[arg(long, default_value_t = 5)]
    exponents: u32,
    /// Time steps in seconds; each must be a power of two.
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.125, 0.0625, 0.03125])]
    dt: Vec<f64>,
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
    horizon: f64,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendChoice::Semantic)]
    backend: BackendChoice,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct ResourceArgs {
    #[arg(value_enum)]
    op: ResourceOp,
    #[command(flatten)]
    splits: SplitArgs,
    /// Newton iterations for `recip`.
    #[arg(long, default_value_t = 10)]
    iters: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(allow_hyphen_values = true)]
    x: f64,
    #[arg(default_value_t = 5)]
    e: u32,
    #[arg(default_value_t = 11)]
    m: u32,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::RecipBench(a) => {
            let cfg = RecipConfig {
                splits: splits(&a.splits.widths, &a.splits.exponents, &a.splits.mantissas)?,
                samples: a.samples,
                iters: a.iters,
                mean: a.mean,
                stddev: a.stddev,
                seed: a.seed,
                backend: a.backend,
            };
            let report = cmd_recip_bench(&cfg)?;
            write_csv(&a.out.join("recip.csv"), &report.rows)?;
            let summary = Summary { command: "recip-bench", version: VERSION, seed: cfg.seed, config: cfg, stats: report.widths };
            write_json(&a.out.join("recip_summary.json"), &summary)?;
            for w in &summary.stats {
                println!(
                    "width {:2} (e={}, m={:2}): kept {:3}, discarded {:2}, mean |rel err| 2^{:.2}",
                    w.width, w.e, w.m, w.kept, w.discarded, w.log2_mean_abs_rel_err
                );
            }
        }
        Command::Ode(a) => {
            let cfg = OdeConfig {
                widths: a.widths,
                exponent: a.exponents,
                dts: a.dt,
                horizon: a.horizon,
                seed: a.seed,
                backend: a.backend,
            };
            let report = cmd_ode(&cfg)?;
            write_csv(&a.out.join("ode.csv"), &report.rows)?;
            let summary = Summary { command: "ode", version: VERSION, seed: cfg.seed, config: cfg, stats: report.cases };
            write_json(&a.out.join("ode_summary.json"), &summary)?;
            for c in &summary.stats {
                println!(
                    "width {:2} dt {:<8} steps {:3}: l2 rel err 2^{:.2} (double precision 2^{:.2}), {} gates",
                    c.width,
                    c.dt,
                    c.steps,
                    c.log2_final_l2_rel_err,
                    c.reference_l2_rel_err.log2(),
                    c.circuit.total_gates
                );
            }
        }
        Command::Resources(a) => {
            let sp = splits(&a.splits.widths, &a.splits.exponents, &a.splits.mantissas)?;
            let rows = cmd_resources(a.op, &sp, a.iters)?;
            let path = a.out.join(format!("resources_{}.csv", a.op.name()));
            write_csv(&path, &rows)?;
            let per_width: Vec<StatsSummary> =
                sp.iter().map(|&s| resource_stats(a.op, s, a.iters).map(|st| (&st).into())).collect::<Result<_>>()?;
            let summary = Summary {
                command: "resources",
                version: VERSION,
                seed: 0,
                config: serde_json::json!({ "op": a.op, "splits": sp, "iters": a.iters }),
                stats: per_width,
            };
            write_json(&a.out.join(format!("resources_{}_summary.json", a.op.name())), &summary)?;
            println!("wrote {}", path.display());
        }
        Command::Encode(a) => {
            let report = cmd_encode(a.x, a.e, a.m)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}
