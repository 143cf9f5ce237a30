//! End-to-end runs of the `tubal` binary.

use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use tubal::synth::{gaussian_vec, trial_rng};
use tubal::{TransformSpec, TubalMatrix, TubalTensor};
use tubal_cli::bench::CSV_HEADER;
use tubal_cli::compress::read_manifest;
use tubal_cli::tensor_file::{Payload, TensorFile};

fn tubal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tubal")).args(args).output().expect("spawn tubal")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_random(path: &Path, dims: &[usize], seed: u64) -> TensorFile {
    let len = dims.iter().product();
    let f = TensorFile::new(dims.to_vec(), Payload::Real(gaussian_vec(&mut trial_rng(seed, 0), len))).unwrap();
    f.save(path).unwrap();
    f
}

/// `S *_1 U_1 *_2 U_2 *_3 U_3` with a 2x3x2 core: mode ranks (2, 3, 2).
fn write_low_rank(path: &Path) {
    let t = TransformSpec::dft(4).unwrap();
    let mut rng = trial_rng(9, 1);
    let mut x = TubalTensor::from_real(&[2, 3, 2], &gaussian_vec(&mut rng, 12 * 4), &t).unwrap();
    for (n, (d, r)) in [(6, 2), (5, 3), (7, 2)].into_iter().enumerate() {
        let u = TubalMatrix::from_real(d, r, &gaussian_vec(&mut rng, d * r * 4), &t).unwrap();
        x = x.mode_n_product(&u, n).unwrap();
    }
    TensorFile::from_tensor(&x).save(path).unwrap();
}

#[test]
fn hilbert_demo_reports_reference_values() {
    let o = tubal(&["hilbert-demo"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("1.7166, 0.1002"), "{text}");
    assert!(text.contains("S(1,1,1) = (1.4734, 0.8780)") || text.contains("S(1,1,1) = (-1.4734, -0.8780)"), "{text}");
}

#[test]
fn bench_random_writes_stable_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let args = ["bench-random", "--dims", "6,6,6,4", "--rank", "2", "--beta", "0", "--trunc", "2", "--trials", "3", "--seed", "5"];
    let o = tubal(&[&args[..], &["--out", csv.to_str().unwrap()]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 2 + 2);
    for r in &rows {
        assert_eq!(r.len(), 6);
        assert!(r[3].parse::<f64>().unwrap() <= 1e-8, "noiseless exact rank: {r:?}");
    }
    // same seed, same errors; timing excluded
    let again = stdout(&tubal(&args));
    let errs = |s: &str| s.lines().map(|l| l.split(',').take(5).collect::<Vec<_>>().join(",")).collect::<Vec<_>>();
    assert_eq!(errs(&text), errs(&again));
    let threaded = Command::new(env!("CARGO_BIN_EXE_tubal")).args(args).env("TUBAL_THREADS", "2").output().unwrap();
    assert_eq!(errs(&text), errs(&stdout(&threaded)));
}

#[test]
fn bench_random_requires_seed() {
    let o = tubal(&["bench-random", "--dims", "4,4,2", "--rank", "1", "--beta", "0.1", "--trunc", "2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
    let bad = Command::new(env!("CARGO_BIN_EXE_tubal")).arg("selftest").env("TUBAL_THREADS", "zero").output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn compress_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.tten");
    write_random(&input, &[5, 4, 3, 3], 1);
    for (algo, trunc) in [("tr", "5,4,3"), ("seq", "3,2,2"), ("tr", "2,3,1")] {
        let out = dir.path().join(format!("{algo}-{trunc}"));
        let o = tubal(&["compress", input.to_str().unwrap(), "--trunc", trunc, "--algo", algo, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let m = read_manifest(&out).unwrap();
        assert!(m.err <= m.bound + 1e-10, "{m:?}");
        if trunc == "5,4,3" {
            assert!(m.err <= 1e-10);
        }
        let rebuilt = dir.path().join("b.tten");
        let o = tubal(&["decompress", out.to_str().unwrap(), "--out", rebuilt.to_str().unwrap()]);
        assert!(o.status.success(), "{}\n{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
        let b = TensorFile::load(&rebuilt).unwrap();
        assert_eq!(b.dims, vec![5, 4, 3, 3]);
        let a = TensorFile::load(&input).unwrap();
        let (x, y) = (a.complex_data(), b.complex_data());
        let diff = x.iter().zip(&y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
        let norm = x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        assert!((diff / norm - m.err).abs() <= 1e-12);
    }
}

#[test]
fn compress_recovers_exact_low_rank() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("low.tten");
    write_low_rank(&input);
    let out = dir.path().join("c");
    let o = tubal(&["compress", input.to_str().unwrap(), "--trunc", "2,3,2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let m = read_manifest(&out).unwrap();
    assert!(m.err <= 1e-8, "{m:?}");
    assert!(m.compression_ratio > 1.0);
    let moved = dir.path().join("moved.tten");
    std::fs::rename(&input, &moved).unwrap();
    let o = tubal(&["decompress", out.to_str().unwrap(), "--out", dir.path().join("r.tten").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not available"));
    let o = tubal(&[
        "decompress",
        out.to_str().unwrap(),
        "--out",
        dir.path().join("r.tten").to_str().unwrap(),
        "--reference",
        moved.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn compress_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.tten");
    write_random(&input, &[3, 3, 2], 2);
    let out = dir.path().join("x");
    assert!(!tubal(&["compress", input.to_str().unwrap(), "--trunc", "4,1", "--out", out.to_str().unwrap()]).status.success());
    assert!(!tubal(&["compress", input.to_str().unwrap(), "--trunc", "1", "--out", out.to_str().unwrap()]).status.success());
    std::fs::write(&input, b"NOPE").unwrap();
    let o = tubal(&["compress", input.to_str().unwrap(), "--trunc", "1,1", "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("magic"));
}

#[test]
fn selftest_passes_and_catches_injected_faults() {
    let o = tubal(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    let o = tubal(&["selftest", "--inject-fault", "ordering"]);
    assert!(!o.status.success());
    let text = stdout(&o);
    let failing: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1);
    assert!(failing[0].contains("ordering"));
    assert!(!stdout(&tubal(&["--help"])).contains("inject"));
}
