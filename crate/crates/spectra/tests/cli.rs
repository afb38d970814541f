use std::fs;
use std::process::{Command, Output};

use spectra::io::{read_csv, read_dump, MatrixKind};
use spectra::Report;

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Report {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

#[test]
fn dirichlet_factor_passes_with_a_full_report() {
    let out = spectra(&["factor", "--bc", "dirichlet", "--length", "1", "--modes", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r.schema, spectra::report_schema_version());
    assert_eq!(r.command, "factor");
    assert!(r.pass);
    assert!(!r.tolerances.is_empty());
    assert_eq!(r.inputs["modes"], 5);
}

#[test]
fn every_verb_emits_a_passing_report() {
    let runs: &[&[&str]] = &[
        &["product", "--combo", "dr", "--length2", "2", "--n", "8"],
        &["verify", "--suite", "gram", "--combo", "rr", "--n", "10"],
        &["verify", "--suite", "normalization"],
        &["verify", "--suite", "residual", "--combo", "dn", "--n", "6"],
        &["verify", "--suite", "parseval", "--n", "100"],
        &["verify", "--suite", "witness"],
        &["oracle", "--bc", "robin", "--h", "0.0078125", "--modes", "3", "--tol", "1e-3"],
        &["two-param", "--combo", "ns", "--n", "4"],
        &["trace", "--n", "3"],
        &["solve", "--combo", "rr", "--mu", "1", "--n", "64"],
    ];
    for args in runs {
        let out = spectra(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r.schema, "1");
        assert!(r.pass && !r.tolerances.is_empty(), "{args:?}");
    }
}

#[test]
fn identical_invocations_give_identical_bytes() {
    for args in [
        &["product", "--combo", "rr", "--b-left", "0.3", "--n", "12"][..],
        &["solve", "--combo", "dd", "--rhs", "bubble", "--n", "200"][..],
        &["trace", "--length", "1.5"][..],
    ] {
        let a = spectra(args);
        let b = spectra(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn failed_tolerance_exits_one_and_still_reports() {
    let out = spectra(&["factor", "--bc", "robin", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!report(&out).pass);
}

#[test]
fn invalid_input_exits_two() {
    let out = spectra(&["factor", "--bc", "robin", "--b-left", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positivity"));
    assert!(out.stdout.is_empty());

    assert_eq!(spectra(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(spectra(&["factor", "--bc", "dirichlet", "--bogus"]).status.code(), Some(2));
    assert_eq!(spectra(&["factor", "--length", "-1", "--bc", "neumann"]).status.code(), Some(2));
    // the constant Neumann mode makes the unshifted problem singular
    let out = spectra(&["solve", "--combo", "nn"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1, 1)"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(spectra(&["--help"]).status.code(), Some(0));
    assert_eq!(spectra(&["--version"]).status.code(), Some(0));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = spectra(&["factor", "--bc", "neumann", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Report = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.command, "factor");
    assert_eq!(r.to_json(), fs::read_to_string(&path).unwrap());
}

#[test]
fn oracle_writes_readable_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let dump = dir.path().join("m.bin");
    let out = spectra(&[
        "oracle",
        "--combo",
        "dd",
        "--h",
        "0.25",
        "--modes",
        "2",
        "--tol",
        "1",
        "--csv",
        csv.to_str().unwrap(),
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let unknowns = report(&out).results["unknowns"].as_u64().unwrap() as usize;
    assert_eq!(unknowns, 9);

    let (data, cols) = read_csv(&fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!((data.len(), cols), (81, 9));
    for i in 0..9 {
        for j in 0..9 {
            assert_eq!(data[i * 9 + j], data[j * 9 + i]);
        }
    }

    let bytes = fs::read(&dump).unwrap();
    let mut r = bytes.as_slice();
    let mut kinds = Vec::new();
    while !r.is_empty() {
        let (kind, m) = read_dump(&mut r).unwrap();
        assert_eq!(m.order, 9);
        kinds.push(kind);
    }
    assert_eq!(kinds, [MatrixKind::Stiffness, MatrixKind::Mass, MatrixKind::Boundary]);
}
