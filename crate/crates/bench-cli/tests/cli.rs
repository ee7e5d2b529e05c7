use std::fs;
use std::process::Command;

use qfp_bench::*;

fn small_recip(backend: BackendChoice) -> RecipConfig {
    RecipConfig {
        splits: vec![Split::new(10, 4, 6).unwrap(), Split::new(12, 5, 7).unwrap()],
        samples: 8,
        iters: 3,
        backend,
        ..RecipConfig::default()
    }
}

#[test]
fn recip_defaults_match_published_splits() {
    let cfg = RecipConfig::default();
    let got: Vec<(u32, u32, u32)> = cfg.splits.iter().map(|s| (s.width, s.e, s.m)).collect();
    assert_eq!(got, vec![(10, 4, 6), (12, 5, 7), (14, 5, 9), (16, 5, 11), (18, 6, 12), (20, 7, 13)]);
    assert_eq!((cfg.samples, cfg.iters, cfg.mean, cfg.stddev), (100, 10, 0.0, 5.0));
}

#[test]
fn invalid_split_rejected() {
    assert!(Split::new(10, 4, 5).is_err());
    assert!(splits(&[10, 12], &[4], &[6]).is_err());
}

#[test]
fn recip_rows_are_consistent() {
    let r = cmd_recip_bench(&small_recip(BackendChoice::Semantic)).unwrap();
    assert_eq!(r.rows.len(), 16);
    for row in &r.rows {
        if row.discarded {
            assert!(row.output.is_none());
            continue;
        }
        let (exp, out, err) = (row.expected.unwrap(), row.output.unwrap(), row.signed_rel_err.unwrap());
        assert_eq!(exp, 1.0 / row.input);
        assert!((err - (out - exp) / exp).abs() < 1e-15);
    }
    assert!(r.widths.iter().all(|w| w.oracle_mismatches == 0 && w.kept + w.discarded == 8));
}

#[test]
fn zero_sample_is_discarded() {
    let cfg = RecipConfig { mean: 0.0, stddev: 0.0, ..small_recip(BackendChoice::Semantic) };
    // A zero standard deviation is a degenerate normal; every draw is 0.
    let r = cmd_recip_bench(&cfg).unwrap();
    assert!(r.rows.iter().all(|row| row.input == 0.0 && row.discarded));
}

#[test]
fn gate_backend_matches_semantic() {
    let cfg = |b| RecipConfig { samples: 3, iters: 1, splits: vec![Split::new(10, 4, 6).unwrap()], ..small_recip(b) };
    let s = cmd_recip_bench(&cfg(BackendChoice::Semantic)).unwrap();
    let g = cmd_recip_bench(&cfg(BackendChoice::Gate)).unwrap();
    assert_eq!(s.rows, g.rows);

    let ode = |b| OdeConfig { widths: vec![9], exponent: 4, dts: vec![0.5], horizon: 1.0, seed: 1, backend: b };
    assert_eq!(cmd_ode(&ode(BackendChoice::Semantic)).unwrap().rows, cmd_ode(&ode(BackendChoice::Gate)).unwrap().rows);
}

#[test]
fn ode_rejects_bad_dt() {
    let cfg = OdeConfig { dts: vec![0.3], widths: vec![14], ..OdeConfig::default() };
    assert!(cmd_ode(&cfg).is_err());
}

#[test]
fn ode_first_rows() {
    let cfg = OdeConfig { widths: vec![16], dts: vec![0.25], horizon: 1.0, ..OdeConfig::default() };
    let r = cmd_ode(&cfg).unwrap();
    assert_eq!(r.rows.len(), 5);
    assert_eq!((r.rows[0].u1, r.rows[0].u2, r.rows[0].l2_rel_err), (0.0, -1.0, 0.0));
    assert_eq!(r.cases[0].oracle_mismatches, 0);
    assert!(r.rows[1].u1 < 0.0 && r.rows[1].u2 > -1.0);
}

#[test]
fn resources_rows() {
    let rows = cmd_resources(ResourceOp::Mul, &[Split::new(10, 4, 6).unwrap()], 1).unwrap();
    assert!(rows.iter().any(|r| r.kind == "PHASE" && r.arity == 3));
    assert!(rows.iter().all(|r| r.op == "mul" && r.width == 10 && r.ancilla_peak == rows[0].ancilla_peak));
}

#[test]
fn encode_examples() {
    let r = cmd_encode(3.14159265, 5, 11).unwrap();
    assert_eq!((r.decoded, r.exp_code, r.mant_code), (3.140625, 2, 804));
    let z = cmd_encode(0.0, 4, 6).unwrap();
    assert_eq!((z.exp_code, z.mant_code), (0, 0));
    assert!(cmd_encode(2f64.powi(20), 4, 6).is_err());
}

fn qfp(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qfp")).args(args).output().unwrap()
}

#[test]
fn cli_outputs_are_deterministic() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = d.path().to_str().unwrap();
        let args = ["recip-bench", "--widths", "10,12", "--exponents", "4,5", "--mantissas", "6,7", "--samples", "5"];
        let o = qfp(&[&args[..], &["--out", out]].concat());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = qfp(&["ode", "--widths", "14", "--dt", "0.25", "--horizon", "2", "--out", out]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = qfp(&["resources", "add", "--widths", "10", "--exponents", "4", "--mantissas", "6", "--out", out]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["recip.csv", "recip_summary.json", "ode.csv", "ode_summary.json", "resources_add.csv"] {
        let a = fs::read(d1.path().join(f)).unwrap();
        assert_eq!(a, fs::read(d2.path().join(f)).unwrap(), "{f} differs between runs");
    }
    let head = |f: &str| fs::read_to_string(d1.path().join(f)).unwrap().lines().next().unwrap().to_string();
    assert_eq!(head("recip.csv"), "width,e,m,sample,input,expected,output,signed_rel_err,discarded");
    assert_eq!(head("ode.csv"), "width,dt,step,t,u1,u2,u1_exact,u2_exact,l2_rel_err");
    assert_eq!(head("resources_add.csv"), "op,width,kind,arity,count,depth,total_qubits,ancilla_peak");

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d1.path().join("recip_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["version"], VERSION);
    assert_eq!(summary["seed"], 2024);
    assert_eq!(summary["config"]["samples"], 5);
}

#[test]
fn cli_errors() {
    assert!(!qfp(&["recip-bench", "--widths", "10", "--exponents", "4", "--mantissas", "5"]).status.success());
    assert!(!qfp(&["ode", "--dt", "0.2", "--widths", "14"]).status.success());
    assert!(!qfp(&["resources", "divide"]).status.success());
    let o = qfp(&["encode", "1048576", "4", "6"]);
    assert!(!o.status.success());
    let o = qfp(&["encode", "3.14159265", "5", "11"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("3.140625"));
}
