use std::process::{Command, Output};

use isosector::sector::{Classification, Winner};

const BIN: &str = env!("CARGO_BIN_EXE_iso-sector");

fn iso(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = iso(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn classify_json_deserializes_into_the_library_type() {
    let text = stdout(&["classify", "--p", "1", "--theta", "2.3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema"], "iso-sector/1");
    assert_eq!(doc["command"], "classify");
    let c: Classification = serde_json::from_value(doc["result"].clone()).unwrap();
    assert_eq!(c.winner, Winner::Undulary);
    assert_eq!(c.theta0, 2.3);
}

#[test]
fn classify_csv_names_the_undulary() {
    let text = stdout(&["classify", "--p", "1", "--theta", "2.3"]);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "undulary");
    assert_eq!(row[0].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn phase_output_is_reproducible() {
    let args = ["phase", "--p-grid", "0.5:2:lin:4", "--theta-grid", "0.5:3.5:lin:7"];
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    assert_eq!(first.lines().count(), 1 + 28);
}

#[test]
fn period_report_has_one_row_per_radius() {
    let text = stdout(&["period", "--p", "2", "--r1-grid", "1.001:50:log:200"]);
    assert_eq!(text.lines().count(), 201);
}

#[test]
fn disk_example_picks_the_edge_semicircle() {
    let text = stdout(&["disk", "--a", "2", "--theta", "4.7124", "--area", "8"]);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "edge-semicircle");
}

#[test]
fn undulary_svg_has_a_dense_polyline() {
    let svg = stdout(&["undulary", "--p", "2", "--theta", "1.95", "--nodes", "64", "--format", "svg"]);
    let points =
        svg.split("points=\"").skip(1).map(|s| s.split('"').next().unwrap().split_whitespace().count()).max().unwrap();
    assert!(points >= 512, "{points}");
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let path = std::env::temp_dir().join(format!("iso-sector-{}.csv", std::process::id()));
    let args = ["rn-demo", "--n", "3", "--p", "-2"];
    let direct = stdout(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(stdout(&with_out).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes_distinguish_usage_and_domain_errors() {
    assert_eq!(iso(&["disk", "--a", "2", "--theta", "1"]).status.code(), Some(2));
    assert_eq!(iso(&["rn-check", "--n", "3", "--profile", "cubic"]).status.code(), Some(1));
    assert_eq!(iso(&["classify", "--p", "1", "--theta", "0"]).status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["inequality", "--p", "1", "--trials", "500", "--seed", "3"];
    let run = |threads: &str| {
        let out = Command::new(BIN).args(args).env("ISO_SECTOR_THREADS", threads).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
    let bad = Command::new(BIN).args(args).env("ISO_SECTOR_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
