//! End-to-end checks of the binary: documented exit codes, printed values
//! against the library's closed forms, container round trips, and report
//! determinism.

use std::process::{Command, Output};

use mixnorm::{FamilySpec, Grid, GridFunction, Oracle, SpaceParams, TestFamily};

fn mixnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixnorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn norm_matches_dilation_oracle() {
    let out = mixnorm(&[
        "norm", "--family", "ex6", "--j", "3", "--space", "F", "--t", "1", "--p", "2", "--q", "2",
        "--d", "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let value: f64 = stdout(&out).trim().parse().unwrap();

    // the closed form integrates the undilated profile, so the oracle wants
    // a grid wide enough for it; the printed value is grid-independent and
    // the tolerance absorbs the quadrature difference
    let m = FamilySpec::new(TestFamily::Ex6, 3, 2).unwrap();
    let grid = Grid::dyadic_uniform(2, 512, 8).unwrap();
    let sp = SpaceParams::mixed_f(1.0, 2.0, 2.0, 2);
    let Oracle::Exact(target) = m.oracle(&sp, &grid).unwrap() else {
        panic!("expected exact oracle")
    };
    assert!(
        (value - target).abs() <= 0.01 * target,
        "cli {value} vs oracle {target}"
    );
}

#[test]
fn norm_of_zero_container_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.mxgf");
    let grid = Grid::uniform(2, 32, 16.0 * std::f64::consts::PI).unwrap();
    GridFunction::zeros(&grid).save(&path).unwrap();

    let out = mixnorm(&["norm", "--in", path.to_str().unwrap(), "--t", "1", "--p", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn infinite_p_is_rejected_on_the_f_scale() {
    let out = mixnorm(&["norm", "--family", "ex2", "--space", "F", "--p", "inf"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn region_point_prints_both_verdicts() {
    let out = mixnorm(&["region", "--t", "1", "--p", "2", "--q", "3", "--direction", "equal"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("forward: Yes ["), "{text}");
    assert!(text.contains("reverse:"), "{text}");
}

#[test]
fn region_rejects_one_dimension() {
    let out = mixnorm(&["region", "--t", "1", "--d", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_recovers_the_diagonal_rate() {
    let out = mixnorm(&[
        "scan", "--family", "ex5", "--t", "1", "--p", "2", "--q", "2", "--d", "2", "--lmax", "6",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let slope_line = text
        .lines()
        .find(|l| l.starts_with("slope "))
        .expect("slope line");
    let slope: f64 = slope_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((slope - 1.0).abs() <= 0.05, "{slope_line}");
    assert!(text.contains("predicted slope 1.0"), "{text}");
    assert!(text.contains("classifier:"), "{text}");
}

#[test]
fn corpus_scan_is_seed_deterministic() {
    let run = || {
        let out = mixnorm(&[
            "scan", "--corpus", "12", "--seed", "901", "--t", "1", "--p", "2", "--q", "2",
            "--src", "mixed", "--dst", "iso", "--n", "128",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let first = run();
    assert!(first.contains("max ratio"), "{first}");
    assert!(first.contains("classifier: Yes ["), "{first}");
    assert_eq!(first, run());

    let out = mixnorm(&["scan", "--t", "1"]);
    assert_eq!(code(&out), 2, "scan without --family or --corpus");
}

#[test]
fn scan_beyond_nyquist_fails_cleanly() {
    let out = mixnorm(&[
        "scan", "--family", "ex5", "--t", "1", "--lmax", "30", "--n", "512",
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_runs_a_single_fast_criterion() {
    let out = mixnorm(&["verify", "--suite", "fast", "--id", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("[PASS]"), "{text}");
    assert!(text.contains("1 of 1 criteria passed"), "{text}");
}

#[test]
fn generate_then_norm_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let container = dir.path().join("member.mxgf");
    let out = mixnorm(&[
        "generate", "--family", "ex4", "--l", "3", "--coeffs", "0.7,1.3,0.4", "--out",
        container.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar = dir.path().join("member.mxgf.json");
    assert!(container.exists() && sidecar.exists());

    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sidecar).unwrap()).unwrap();
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["family"], "ex4");
    assert_eq!(meta["coeffs"].as_array().unwrap().len(), 3);
    assert!(meta["grid_n"].as_array().is_some());

    let from_file = mixnorm(&[
        "norm", "--in", container.to_str().unwrap(), "--t", "0.5", "--p", "2", "--q", "2",
    ]);
    let direct = mixnorm(&[
        "norm", "--family", "ex4", "--l", "3", "--coeffs", "0.7,1.3,0.4", "--t", "0.5", "--p",
        "2", "--q", "2",
    ]);
    let a: f64 = stdout(&from_file).trim().parse().unwrap();
    let b: f64 = stdout(&direct).trim().parse().unwrap();
    assert!((a - b).abs() <= 1e-9 * b, "file {a} vs direct {b}");
}

#[test]
fn json_reports_are_deterministic_modulo_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let fst = dir.path().join("a.json");
    let snd = dir.path().join("b.json");
    for path in [&fst, &snd] {
        let out = mixnorm(&[
            "norm", "--family", "ex2", "--l", "2", "--t", "1", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let strip = |p: &std::path::Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("\"timestamp\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip(&fst);
    assert!(a.contains("\"schema_version\": 1"));
    assert_eq!(a, strip(&snd));
}
