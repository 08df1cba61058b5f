//! End-to-end tests of the command-line surface and its file formats.

use latitude::io::load_csv;
use latitude::{frobenius_error, mixed_product, sigmoid, MixedFactorization, ParamVectors};
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latitude"))
}

fn read(path: impl AsRef<Path>) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn synth_then_factorize_outputs_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("data");
    let status = bin()
        .args([
            "synth",
            "--mode",
            "mixed",
            "--n",
            "30",
            "--m",
            "24",
            "--k",
            "3",
            "--noise",
            "0",
            "--seed",
            "5",
            "--out-prefix",
        ])
        .arg(&prefix)
        .status()
        .unwrap();
    assert!(status.success());
    for suffix in ["clean", "noisy", "B", "C", "co", "ro"] {
        assert!(dir.path().join(format!("data.{suffix}.csv")).exists());
    }

    let out = dir.path().join("fit");
    let status = bin()
        .args(["factorize", "--k", "3", "--niter", "6", "--seed", "1", "--input"])
        .arg(dir.path().join("data.clean.csv"))
        .arg("--out-prefix")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let b = load_csv(dir.path().join("fit.B.csv")).unwrap().matrix;
    let c = load_csv(dir.path().join("fit.C.csv")).unwrap().matrix;
    let co: Vec<f64> = load_csv(dir.path().join("fit.co.csv"))
        .unwrap()
        .matrix
        .values()
        .to_vec();
    let ro: Vec<f64> = load_csv(dir.path().join("fit.ro.csv"))
        .unwrap()
        .matrix
        .values()
        .to_vec();
    let alpha = load_csv(dir.path().join("fit.alpha.csv")).unwrap().matrix;

    // alpha file equals sigma(co_i + ro_j) recomputed from the vectors.
    for i in 0..alpha.rows() {
        for j in 0..alpha.cols() {
            assert!((alpha.get(i, j) - sigmoid(co[i] + ro[j])).abs() < 1e-12);
        }
    }

    // report.json's error matches the reconstruction from the saved factors.
    let report: serde_json::Value =
        serde_json::from_slice(&read(dir.path().join("fit.report.json"))).unwrap();
    let abs_error = report["abs_error"].as_f64().unwrap();
    let params = ParamVectors::new(co, ro, report["M"].as_f64().unwrap()).unwrap();
    let fact = MixedFactorization::new(b, c, params).unwrap();
    let recon = mixed_product(&fact).unwrap();
    let a = load_csv(dir.path().join("data.clean.csv")).unwrap().matrix;
    let (abs, _) = frobenius_error(&a, &recon).unwrap();
    assert!(
        (abs - abs_error).abs() <= 1e-9 * abs_error.max(1.0),
        "report {abs_error} vs recomputed {abs}"
    );
    assert_eq!(report["error_trace"].as_array().unwrap().len(), 6);
}

#[test]
fn factorize_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.csv");
    {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = latitude::DenseMatrix::from_vec(
            25,
            20,
            (0..500).map(|_| rng.gen::<f64>()).collect(),
        )
        .unwrap();
        latitude::io::save_matrix_csv(&input, &a).unwrap();
    }
    let run = |prefix: &Path, threads: &str| {
        let status = bin()
            .args([
                "factorize", "--k", "3", "--niter", "4", "--seed", "9", "--threads", threads,
                "--input",
            ])
            .arg(&input)
            .arg("--out-prefix")
            .arg(prefix)
            .status()
            .unwrap();
        assert!(status.success());
    };
    let p1 = dir.path().join("r1");
    let p2 = dir.path().join("r2");
    let p3 = dir.path().join("r3");
    run(&p1, "1");
    run(&p2, "1");
    run(&p3, "4");
    for suffix in ["B.csv", "C.csv", "co.csv", "ro.csv", "alpha.csv"] {
        let b1 = read(dir.path().join(format!("r1.{suffix}")));
        assert_eq!(b1, read(dir.path().join(format!("r2.{suffix}"))), "{suffix}");
        assert_eq!(b1, read(dir.path().join(format!("r3.{suffix}"))), "{suffix}");
    }
}

#[test]
fn eval_degenerate_sweep_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.csv");
    let status = bin()
        .args([
            "eval", "--axis", "noise", "--values", "0", "--methods", "svd", "--repeats", "1",
            "--n", "20", "--m", "16", "--k", "2", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 2, "header plus one data row: {text}");
    assert!(lines[0].starts_with("axis_value,repeat,method"));
    assert!(lines[1].contains("svd"));
}

#[test]
fn bench_writes_timings() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let status = bin()
        .args([
            "bench", "--sizes", "30,60", "--m", "20", "--k", "2", "--niter", "2", "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.trim().lines().count(), 3);
}

#[test]
fn error_exit_codes() {
    // Usage error: unknown method.
    let code = bin()
        .args([
            "eval", "--axis", "noise", "--values", "0", "--methods", "bogus", "--out", "/tmp/x.csv",
        ])
        .status()
        .unwrap()
        .code()
        .unwrap();
    assert_eq!(code, 1);

    // Invalid combination: lattrunc with k = 1.
    let code = bin()
        .args([
            "eval", "--axis", "noise", "--values", "0", "--methods", "lattrunc", "--k", "1",
            "--out", "/tmp/x.csv",
        ])
        .status()
        .unwrap()
        .code()
        .unwrap();
    assert_eq!(code, 1);

    // Data error: missing input file.
    let dir = tempfile::tempdir().unwrap();
    let code = bin()
        .args(["factorize", "--k", "2", "--input"])
        .arg(dir.path().join("missing.csv"))
        .arg("--out-prefix")
        .arg(dir.path().join("out"))
        .status()
        .unwrap()
        .code()
        .unwrap();
    assert_eq!(code, 2);

    // Unknown flag.
    let code = bin().args(["synth", "--bogus"]).status().unwrap().code().unwrap();
    assert_eq!(code, 1);
}
