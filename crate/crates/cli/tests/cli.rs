// SPDX-License-Identifier: Apache-2.0

use polya_cli::{run, EXIT_DIFF, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
use polya_core::classify::{read_csv, sweep_rd_polya_index1, SweepRecord};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("polya").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn field_reports_invariants() {
    let (code, out, _) = cli(&["field", "-5"]);
    assert_eq!(code, EXIT_OK);
    for line in ["h            2", "#Po          2", "g            2"] {
        assert!(out.contains(line), "{out}");
    }
    let (code, out, _) = cli(&["field", "34", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let rec: SweepRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((rec.h, rec.h_plus, rec.polya, rec.norm), (2, 4, 1, Some(1)));
}

#[test]
fn exit_codes() {
    let (code, _, err) = cli(&["field", "12"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("square-free"), "{err}");
    assert_eq!(cli(&["field", "1"]).0, EXIT_DOMAIN);
    assert_eq!(cli(&["sweep", "imaginary", "--max", "1e6"]).0, EXIT_USAGE);
    assert_eq!(cli(&["sweep", "imaginary", "--max", "1.5", "--index", "1"]).0, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
    assert_eq!(cli(&["bounds", "eval", "--which", "ihara", "--d", "7"]).0, EXIT_DOMAIN);
    assert_eq!(cli(&["bounds", "eval", "--which", "mw", "--d", "76"]).0, EXIT_DOMAIN);
    assert_eq!(cli(&["sweep", "imaginary", "--max", "1e6", "--index", "1", "--mem-budget", "1000"]).0, EXIT_DOMAIN);
}

#[test]
fn verify_table_one() {
    let (code, out, _) = cli(&["verify", "--table", "T1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("T1: ok"));
}

#[test]
fn verify_reports_a_corrupted_reference() {
    let path = std::env::temp_dir().join(format!("polya-ref-{}.csv", std::process::id()));
    std::fs::write(&path, "table,group,D\nT7,2,34\nT7,4,146\n").unwrap();
    let (code, out, _) = cli(&["verify", "--table", "T7", "--data", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, EXIT_DIFF);
    assert!(out.contains("D = 146: expected 4, computed 2"), "{out}");
    assert_eq!(cli(&["verify", "--table", "T7", "--data", "/nonexistent.csv"]).0, EXIT_DOMAIN);
}

#[test]
fn csv_output_round_trips() {
    let (code, out, _) = cli(&["sweep", "rd", "--max", "5e4", "--mode", "polya1", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(read_csv(out.as_bytes()).unwrap(), sweep_rd_polya_index1(50_000).unwrap());
}

#[test]
fn json_lines_match_csv() {
    let args = ["sweep", "imaginary", "--max", "2e4", "--index", "2"];
    let (_, csv, _) = cli(&[&args[..], &["--format", "csv"]].concat());
    let (_, json, _) = cli(&[&args[..], &["--format", "json"]].concat());
    let from_json: Vec<SweepRecord> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(from_json, read_csv(csv.as_bytes()).unwrap());
}

#[test]
fn output_does_not_depend_on_worker_count() {
    for args in [
        ["sweep", "rd", "--max", "1e5", "--mode", "genus-eq-class"],
        ["sweep", "imaginary", "--max", "3e5", "--index", "2"],
    ] {
        let one = cli(&[&args[..], &["--workers", "1", "--format", "csv"]].concat());
        let three = cli(&[&args[..], &["--workers", "3", "--format", "csv"]].concat());
        assert_eq!(one.0, EXIT_OK);
        assert_eq!(one.1, three.1);
    }
}

#[test]
fn threshold_report_lists_every_curve() {
    let (code, out, _) = cli(&["bounds", "thresholds", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 7, "{out}");
    let (code, out, _) = cli(&["bounds", "eval", "--which", "mw", "--d", "8"]);
    assert_eq!(code, EXIT_OK);
    let v: f64 = out.trim().parse().unwrap();
    assert!((v - 0.0283735).abs() < 1e-6);
}
