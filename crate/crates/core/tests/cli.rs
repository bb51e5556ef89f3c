use std::fs;
use std::process::{Command, Output};

use bloch_pair::curve::CurveTable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bloch-pair"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn telp_curve_starts_at_three() {
    let o = run(&[
        "curve",
        "--quantity",
        "telp",
        "--p",
        "0",
        "--seq",
        "1",
        "--teq",
        "-0.5",
        "--steps",
        "11",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut data = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(data.next(), Some("t,value"));
    assert_eq!(data.next(), Some("0,3"));
    assert_eq!(data.count(), 10);
    assert!(text.contains("#time_unit=t in units of T1a"));
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let args = [
        "curve",
        "--quantity",
        "doe",
        "--p",
        "0.5",
        "--alpha-a",
        "0.5",
        "--steps",
        "101",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn json_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let o = run(&[
        "curve",
        "--quantity",
        "fidelity",
        "--p",
        "0",
        "--alpha-a",
        "0.5",
        "--teq",
        "-1",
        "--steps",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let table = CurveTable::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(table.meta.spec.lambda1, Some(1.0));
    assert!((table.rows[0].1 - 1.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        run(&["curve", "--quantity", "doe", "--tmax", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["curve", "--quantity", "doe", "--lambda1", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["state", "--p", "2"]).status.code(), Some(1));
    assert_eq!(run(&["figure", "9"]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn state_reports_bell_values() {
    let o = run(&["state", "--p", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["doe"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["horodecki"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(v["diagnostics"]["physical"], true);
}

#[test]
fn evolve_reports_both_ppt_values() {
    let o = run(&["evolve", "--p", "0", "--t", "0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ppt_paper"].as_f64(), Some(-0.25));
    assert_eq!(v["ppt_oracle"].as_f64(), Some(-0.25));
}

#[test]
fn window_orders_families() {
    let end = |p: &str| {
        let o = run(&["window", "--p", p]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        (
            v["entangled_until"].as_f64().unwrap(),
            v["teleportation"]["telp"]["t"].as_f64().unwrap(),
        )
    };
    let (life0, win0) = end("0");
    let (life5, win5) = end("0.5");
    assert!(life5 > life0);
    assert!(win5 > win0);
}

#[test]
fn figure_writes_named_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "figure",
        "3-body",
        "--steps",
        "21",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let mut names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "fig3-body_seq0.5.csv",
            "fig3-body_seq0.7.csv",
            "fig3-body_seq0.8.csv",
            "fig3-body_seq0.9.csv",
            "fig3-body_seq1.csv"
        ]
    );
}

#[test]
fn all_figures() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "all", "--steps", "51", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 55);
}

#[test]
fn validate_json_lists_checks() {
    let o = run(&["validate", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    let failed = checks.iter().any(|c| c["status"] == "FAIL");
    assert_eq!(o.status.code(), Some(if failed { 2 } else { 0 }));
    let cp = checks.iter().find(|c| c["id"] == "cp-check-at-zero").unwrap();
    assert!(cp["detail"].as_str().unwrap().contains("expected-paper-literal"));
    assert_eq!(v["tables"].as_array().unwrap().len(), 3);
}
