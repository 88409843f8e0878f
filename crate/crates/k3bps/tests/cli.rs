//! End-to-end checks of the command-line interface: output shapes,
//! cross-format value consistency, and byte-for-byte determinism.

use std::process::{Command, Output};

fn k3bps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3bps"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

#[test]
fn kkv_table_default_contains_the_published_values() {
    let out = k3bps(&["kkv-table"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let entries = json["entries"].as_array().expect("entries");
    let lookup = |g: i64, h: i64| -> Option<String> {
        entries
            .iter()
            .find(|e| e["g"] == g && e["h"] == h)
            .map(|e| e["r"].as_str().unwrap().to_string())
    };
    assert_eq!(lookup(0, 4).as_deref(), Some("25650"));
    assert_eq!(lookup(4, 4).as_deref(), Some("5"));
    assert_eq!(lookup(1, 3).as_deref(), Some("-800"));
    assert_eq!(lookup(3, 2), None); // vanishes above the diagonal
}

#[test]
fn kkv_table_hmax_zero_is_the_seed_row() {
    let out = k3bps(&["kkv-table", "--hmax", "0", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "g,h,r\n0,0,1\n");
}

#[test]
fn csv_and_json_agree() {
    let json_out = k3bps(&["kkv-table", "--hmax", "4"]);
    let csv_out = k3bps(&["kkv-table", "--hmax", "4", "--format", "csv"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&json_out)).expect("json");
    let mut from_json: Vec<(i64, i64, String)> = json["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["g"].as_i64().unwrap(),
                e["h"].as_i64().unwrap(),
                e["r"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let mut from_csv: Vec<(i64, i64, String)> = stdout(&csv_out)
        .lines()
        .skip(1)
        .map(|line| {
            let mut it = line.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().to_string(),
            )
        })
        .collect();
    from_json.sort();
    from_csv.sort();
    assert_eq!(from_json, from_csv);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["kkv-table", "--hmax", "5"],
        vec!["quartic-theta", "--q-order", "3"],
        vec!["i-series", "--h", "2", "--y-order", "8"],
        vec!["lattice", "disc", "--gram", &gram_file()],
        vec!["verify", "recursion"],
    ] {
        let a = stdout(&k3bps(&args));
        let b = stdout(&k3bps(&args));
        assert_eq!(a, b, "two runs of {args:?} differ");
        assert!(!a.is_empty());
    }
}

fn gram_file() -> String {
    let path = std::env::temp_dir().join("k3bps-test-gram.json");
    std::fs::write(&path, r#"{"rank": 1, "gram": [[4]]}"#).expect("write");
    path.to_string_lossy().into_owned()
}

#[test]
fn quartic_theta_heads() {
    let out = k3bps(&["quartic-theta", "--q-order", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("exponent,coefficient"));
    assert_eq!(lines.next(), Some("0,-1"));
    assert_eq!(lines.next(), Some("1,108"));
    assert_eq!(lines.next(), Some("9/8,320"));
}

#[test]
fn quartic_bps_degree_one() {
    let out = k3bps(&["quartic-bps", "--dmax", "1", "--gmax", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "g,d,n\n0,1,320\n1,1,0\n");
}

#[test]
fn lattice_commands() {
    let gram = gram_file();
    let out = k3bps(&["lattice", "disc", "--gram", &gram]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(json["discriminant"], "4");
    assert_eq!(json["group_order"], "4");
    assert_eq!(json["classes_mod_negation"].as_array().unwrap().len(), 3);

    let out = k3bps(&["lattice", "coset", "--gram", &gram, "--degrees", "1"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(json["coset"][0], "1/4");

    let out = k3bps(&[
        "lattice",
        "multiplicity",
        "--gram",
        &gram,
        "--h",
        "1",
        "--degrees",
        "4",
        "--disc",
        "16",
        "--coset",
        "0",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(json["count"], 2);
}

#[test]
fn verify_kkv_suite_passes() {
    let out = k3bps(&["verify", "kkv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS kkv/golden-table"));
    assert!(text.contains("0 failed"));
}

#[test]
fn orders_below_one_are_rejected() {
    let out = k3bps(&["yau-zaslow", "--q-order", "0"]);
    assert!(!out.status.success());
    let out = k3bps(&["i-series", "--h", "1", "--y-order", "-3"]);
    assert!(!out.status.success());
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = k3bps(&["verify", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn dictionary_check_command() {
    let out = k3bps(&["dictionary-check", "--gmax", "2", "--dmax", "2", "--lambda-order", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join("k3bps-test-out.json");
    let _ = std::fs::remove_file(&path);
    let out = k3bps(&["yau-zaslow", "--q-order", "5", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).expect("file written");
    let json: serde_json::Value = serde_json::from_str(&text).expect("json");
    assert_eq!(json["terms"][4]["coefficient"], "25650");
}
