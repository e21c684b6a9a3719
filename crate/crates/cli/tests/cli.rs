use std::process::{Command, Output};

use serde_json::Value;

fn statdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statdisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = statdisc(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn value(report: &Value, name: &str) -> f64 {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == name)
        .unwrap_or_else(|| panic!("row {name} missing"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn reproduce_matches_every_reference() {
    let out = statdisc(&["reproduce"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&["reproduce"]);
    assert_eq!(r["schema_version"], "1");
    assert_eq!(r["experiment"], "reproduce");
    let rows = r["results"].as_array().unwrap();
    assert!(rows.len() >= 20);
    for row in rows {
        assert!(row["abs_error"].as_f64().unwrap() <= 1e-10, "{row}");
    }
    assert_eq!(value(&r, "P_H(rhoN,tauN) N=5"), 0.90625);
    let three_port = rows
        .iter()
        .find(|x| x["name"] == "P_BS(rho3,tau3,fermion)")
        .unwrap();
    assert_eq!(three_port["paper_value"], 0.75);
    assert_eq!(three_port["fraction"], "3/4");
}

#[test]
fn detect_maximal_entanglement() {
    let r = json(&["detect", "--lambda", "0.5"]);
    assert!((value(&r, "P_detect") - 0.625).abs() < 1e-12);
    assert_eq!(r["config"]["lambda"], 0.5);
    assert_eq!(r["config"]["statistics"], "fermion");
}

#[test]
fn purify_maximally_mixed() {
    let r = json(&["purify", "--r", "0", "--theta", "1.1", "--phi", "-0.3"]);
    assert!(value(&r, "r_out").abs() < 1e-12);
    assert!((value(&r, "P_success") - 0.75).abs() < 1e-12);
}

#[test]
fn purify_keeps_direction() {
    let r = json(&["purify", "--r", "0.5", "--theta", "0.7", "--phi", "2.0"]);
    assert!((value(&r, "r_out") - 4.0 * 0.5 / (3.0 + 0.25)).abs() < 1e-12);
    let z = value(&r, "bloch_out_z");
    assert!((z - value(&r, "r_out") * 0.7f64.cos()).abs() < 1e-12);
}

#[test]
fn classical_standard_matches_closed_form() {
    let r = json(&[
        "classical",
        "--n",
        "4",
        "--classical-interpretation",
        "standard",
    ]);
    assert!((value(&r, "P_classical(standard) N=4") - 0.84375).abs() < 1e-12);
    assert_eq!(r["config"]["classical_interpretation"], "standard");
}

#[test]
fn classical_literal_falls_short() {
    let r = json(&[
        "classical",
        "--n",
        "4",
        "--classical-interpretation",
        "literal",
    ]);
    assert!(value(&r, "P_classical(literal) N=4") < 0.84375 - 0.1);
}

#[test]
fn classical_monte_carlo_is_seeded() {
    let args = ["classical", "--n", "10", "--samples", "5000", "--seed", "7"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a, b);
    let p = value(&a, "P_classical(standard) N=10");
    assert!((p - (1.0 - 11.0 / 2048.0)).abs() < 0.02, "{p}");
}

#[test]
fn scan_and_discriminate() {
    let r = json(&["scan", "--n", "3", "--statistics", "fermion"]);
    assert!((value(&r, "P_BS N=3 fermion") - 0.75).abs() < 1e-10);
    assert!(value(&r, "gap N=2 fermion").abs() < 1e-10);

    let r = json(&["discriminate", "--pair", "rho-sigma", "--prior0", "0.5"]);
    assert!((value(&r, "P_H(rho2,sigma2)") - 0.75).abs() < 1e-12);
    assert!((value(&r, "P_BS(rho2,sigma2,boson)") - 0.75).abs() < 1e-12);
    assert!((value(&r, "P_BS(rho2,sigma2,fermion)") - 0.75).abs() < 1e-12);
}

#[test]
fn probabilities_stay_in_unit_interval() {
    for args in [
        vec!["reproduce"],
        vec!["scan", "--n", "4"],
        vec!["discriminate", "--n", "3", "--prior0", "0.2"],
        vec!["detect", "--lambda", "0.1", "--statistics", "boson"],
        vec![
            "classical",
            "--n",
            "5",
            "--classical-interpretation",
            "literal",
        ],
    ] {
        let r = json(&args);
        for row in r["results"].as_array().unwrap() {
            let name = row["name"].as_str().unwrap();
            if name.starts_with("P_") {
                let v = row["value"].as_f64().unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&v), "{name} = {v}");
            }
        }
    }
}

#[test]
fn json_is_byte_identical() {
    let args = [
        "discriminate",
        "--n",
        "3",
        "--prior0",
        "0.3",
        "--format",
        "json",
    ];
    let a = statdisc(&args);
    let b = statdisc(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_round_trips() {
    let out = statdisc(&["reproduce", "--format", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["name", "value", "fraction", "paper_value", "abs_error"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let row = rows.iter().find(|r| &r[0] == "P_H(rho2,sigma2)").unwrap();
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.75);
    assert_eq!(&row[2], "3/4");
}

#[test]
fn out_path_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("detect.json");
    let out = statdisc(&[
        "detect",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["experiment"], "detect");
    assert_eq!(r["config"]["out"], path.to_str().unwrap());
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["frobnicate"],
        vec!["scan", "--statistics", "anyon"],
        vec!["discriminate", "--prior0", "1.5"],
        vec!["detect", "--lambda", "0.7"],
        vec!["purify", "--r", "1.5"],
        vec!["discriminate", "--pair", "rho-sigma", "--n", "3"],
        vec!["scan", "--n", "0"],
    ] {
        let out = statdisc(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("Usage"),
            "{args:?}"
        );
    }
}

#[test]
fn capacity_exits_65() {
    for args in [["scan", "--n", "9"], ["classical", "--n", "9"]] {
        let out = statdisc(&args);
        assert_eq!(out.status.code(), Some(65), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(statdisc(&["--help"]).status.code(), Some(0));
    assert_eq!(statdisc(&["--version"]).status.code(), Some(0));
}
