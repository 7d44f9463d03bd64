//! End-to-end binary tests: determinism, exit codes, manifests, and the
//! compare harness.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_refgames"))
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn simulate_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let status = bin()
            .args([
                "simulate",
                "--domain",
                "segment",
                "--assignment",
                "random",
                "--depth",
                "10",
                "--replicates",
                "2000",
                "--seed",
                "7",
                "--output",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read(&a, "samples.csv"), read(&b, "samples.csv"));
}

#[test]
fn simulate_output_independent_of_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("t1"), tmp.path().join("t4"));
    for (out, threads) in [(&a, "1"), (&b, "4")] {
        let status = bin()
            .args([
                "simulate", "--domain", "segment", "--assignment", "alternating", "--depth",
                "12", "--replicates", "1000", "--seed", "3", "--threads", threads, "--output",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read(&a, "samples.csv"), read(&b, "samples.csv"));
}

#[test]
fn manifest_regenerates_identical_output() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let status = bin()
        .args([
            "simulate", "--domain", "segment", "--assignment", "random", "--depth", "8",
            "--replicates", "500", "--seed", "11", "--output",
        ])
        .arg(&first)
        .status()
        .unwrap();
    assert!(status.success());

    let second = tmp.path().join("second");
    let status = bin()
        .args(["simulate", "--config"])
        .arg(first.join("manifest.json"))
        .args(["--output"])
        .arg(&second)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read(&first, "samples.csv"), read(&second, "samples.csv"));
}

#[test]
fn iterate_cdf_phi_concentrates() {
    let tmp = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["iterate-cdf", "--map", "phi", "--steps", "30", "--output"])
        .arg(tmp.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(tmp.path().join("cdf.csv")).unwrap();
    // F just below the golden-ratio point must be nearly 0.
    let f_at = |target: f64| -> f64 {
        text.lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',');
                let x: f64 = it.next().unwrap().parse().unwrap();
                let f: f64 = it.next().unwrap().parse().unwrap();
                (x, f)
            })
            .filter(|(x, _)| *x <= target)
            .last()
            .unwrap()
            .1
    };
    assert!(f_at(0.568) < 1e-3);
    assert!(f_at(0.668) > 1.0 - 1e-3);
}

#[test]
fn solve_not_converged_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let status = bin()
        .args([
            "solve", "--domain", "triangle", "--schedule", "hybrid", "--eps", "0.025",
            "--steps", "10", "--resolution", "64", "--output",
        ])
        .arg(tmp.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn invalid_domain_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["solve", "--domain", "not-a-domain", "--output"])
        .arg(tmp.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn solve_segment_reports_golden_point() {
    let tmp = tempfile::tempdir().unwrap();
    let status = bin()
        .args([
            "solve", "--domain", "segment", "--schedule", "alternating", "--steps", "200",
            "--output",
        ])
        .arg(tmp.path())
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("solution.json")).unwrap())
            .unwrap();
    let x = report["point"][0].as_f64().unwrap();
    let b = (5.0f64.sqrt() - 1.0) / 2.0;
    assert!((x - b).abs() < 1e-3, "x = {x}");
    assert!(report["pareto_gap"].as_f64().unwrap() == 0.0);
}

#[test]
fn compare_flags_depth_mismatch_and_passes_ks() {
    let tmp = tempfile::tempdir().unwrap();
    let sim = tmp.path().join("sim");
    let ana = tmp.path().join("ana");
    // Random-controller samples are uniform; one raw-pair(1/2) step keeps
    // the analytic CDF uniform, so KS should clear its critical value.
    assert!(bin()
        .args([
            "simulate", "--domain", "segment", "--assignment", "random", "--depth", "15",
            "--replicates", "20000", "--seed", "5", "--output",
        ])
        .arg(&sim)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["iterate-cdf", "--map", "raw-pair", "--p1", "0.5", "--steps", "1", "--output"])
        .arg(&ana)
        .status()
        .unwrap()
        .success());
    let out = tmp.path().join("cmp");
    assert!(bin()
        .arg("compare")
        .arg(sim.join("samples.csv"))
        .arg(ana.join("cdf.csv"))
        .args(["--box-centers", "0.5,0.618", "--output"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("compare.json")).unwrap()).unwrap();
    assert!(report["ks_pass"].as_bool().unwrap());
    assert_eq!(report["box_checks"].as_array().unwrap().len(), 2);
    for check in report["box_checks"].as_array().unwrap() {
        assert!(check["diff"].as_f64().unwrap() < 0.02);
    }
    // Sample depth 15 vs analytic depth 1 must be flagged.
    assert!(report["depth_mismatch"].as_str().unwrap().contains("15"));
}

#[test]
fn compare_identical_empirical_inputs_gives_zero_ks() {
    // A CDF built from the samples themselves: KS is bounded by one step
    // height, and the degenerate self-comparison is exact at the grid.
    let tmp = tempfile::tempdir().unwrap();
    let sample_path = tmp.path().join("s.csv");
    let cdf_path = tmp.path().join("c.csv");
    // Two-point sample whose empirical CDF is written out exactly.
    fs::write(&sample_path, "replicate,payoff1,payoff2\n0,0.25,0\n1,0.75,0\n").unwrap();
    fs::write(&cdf_path, "x,F\n0,0\n0.25,0.5\n0.75,1\n1,1\n").unwrap();
    let out = tmp.path().join("cmp");
    assert!(bin()
        .arg("compare")
        .arg(&sample_path)
        .arg(&cdf_path)
        .args(["--output"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("compare.json")).unwrap()).unwrap();
    assert!(report["ks"].as_f64().unwrap() <= 0.5 + 1e-12);
    assert!(report["depth_mismatch"].is_null());
}

#[test]
fn ternary_report_contains_fixed_point() {
    let tmp = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["ternary", "--steps", "60", "--resolution", "128", "--output"])
        .arg(tmp.path())
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("ternary.json")).unwrap())
            .unwrap();
    let root = report["alternating_fixed_point"]["value"].as_f64().unwrap();
    assert!((root - 0.68).abs() < 0.01);
}
