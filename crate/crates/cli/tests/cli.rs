use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use surgery_hfk::builtin;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualhfk"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn ranks(v: &Value) -> Vec<(i64, u64)> {
    v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["sbar"].as_i64().unwrap(), c["rank"].as_u64().unwrap()))
        .collect()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("trefoil.cfk");
    fs::write(&good, builtin("trefoil-rh").unwrap().serialize()).unwrap();
    let o = run(&["validate", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "valid");

    let broken = dir.path().join("broken.cfk");
    fs::write(
        &broken,
        "gen a A=1\ngen b A=0\ngen c A=-1\narr b a 0 1\narr b c 1 0\nflip a b\nflip c c\n",
    )
    .unwrap();
    let o = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("flip"));

    let empty = dir.path().join("empty.cfk");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&run(&["validate", empty.to_str().unwrap()])), 3);

    let garbage = dir.path().join("garbage.cfk");
    fs::write(&garbage, "gen a A=zero\n").unwrap();
    assert_eq!(code(&run(&["hfk", "--knot", garbage.to_str().unwrap()])), 3);
}

#[test]
fn hfk_examples() {
    let v = json(&["hfk", "--knot", "trefoil-rh", "--p", "1", "--q", "2"]);
    let r = ranks(&v);
    assert!(r.contains(&(-2, 1)) && r.contains(&(2, 1)));
    assert!(r
        .iter()
        .all(|&(s, rank)| (-2..=2).contains(&s) || rank == 0));
    assert_eq!(v["window_predicted"], serde_json::json!([-2, 2]));
    assert_eq!(v["window_computed"], serde_json::json!([-2, 2]));
    assert_eq!(v["stable"], true);
    assert_eq!(v["version"], surgery_hfk::VERSION);
    assert!(v["bound"].as_i64().unwrap() > 0);

    let table = run(&["hfk", "--knot", "trefoil-rh", "--p", "1", "--q", "2"]);
    assert_eq!(code(&table), 0);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["-2", "1"]));
    assert!(text
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["2", "1"]));

    let v = json(&["hfk", "--knot", "builtin:unknot", "--p", "3", "--q", "2"]);
    for (s, rank) in ranks(&v) {
        assert_eq!(rank, u64::from((0..=2).contains(&s)), "class {s}");
    }
    let v = json(&[
        "hfk",
        "--knot",
        "unknot",
        "--p",
        "3",
        "--q",
        "2",
        "--classes",
        "0..2",
    ]);
    assert_eq!(ranks(&v), vec![(0, 1), (1, 1), (2, 1)]);
    let v = json(&["hfk", "--knot", "trefoil-rh", "--classes", "-1,1"]);
    assert_eq!(ranks(&v), vec![(-1, 1), (1, 1)]);
    assert_eq!(v["window_computed"], serde_json::json!([-1, 1]));
}

#[test]
fn usage_and_semantic_errors() {
    assert_eq!(code(&run(&["hfk", "--knot", "builtin:none"])), 2);
    assert_eq!(code(&run(&["hfk", "--knot", "no-such-knot"])), 2);
    assert_eq!(
        code(&run(&["hfk", "--knot", "unknot", "--p", "2", "--q", "4"])),
        2
    );
    assert_eq!(code(&run(&["hfk", "--knot", "unknot", "--p", "0"])), 2);
    assert_eq!(code(&run(&["hfk"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(
        code(&run(&[
            "crosscheck",
            "--knot",
            "unknot",
            "--n",
            "5",
            "--domain",
            "halfplane-i:0"
        ])),
        2
    );
}

#[test]
fn unstable_run_is_reported() {
    // The hat cone with no auxiliary layers changes once layers are added.
    let o = run(&[
        "hfk",
        "--knot",
        "trefoil-rh",
        "--bound",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 4);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stable"], false);
    assert_eq!(v["bound"], 0);
    assert_eq!(
        code(&run(&[
            "hf",
            "--knot",
            "trefoil-rh",
            "--p",
            "1",
            "--q",
            "2",
            "--bound",
            "0"
        ])),
        4
    );
}

#[test]
fn hf_examples() {
    let v = json(&["hf", "--knot", "unknot", "--p", "5", "--q", "1"]);
    assert_eq!(v["total"], 5);
    assert_eq!(ranks(&v), (0..5).map(|s| (s, 1)).collect::<Vec<_>>());
    assert_eq!(
        json(&["hf", "--knot", "unknot", "--p", "1", "--q", "1"])["total"],
        1
    );
    assert_eq!(
        json(&["hf", "--knot", "trefoil-rh", "--p", "5", "--q", "1"])["total"],
        5
    );

    let o = run(&["hf", "--knot", "unknot", "--p", "3", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(o.stdout).unwrap(),
        "sbar,rank\n0,1\n1,1\n2,1\n"
    );
}

#[test]
fn crosscheck_examples() {
    let o = run(&["crosscheck", "--knot", "trefoil-rh", "--n", "7"]);
    assert_eq!(code(&o), 0);
    let v = json(&["crosscheck", "--knot", "figure8", "--n", "7"]);
    assert_eq!(v["agree"], true);
    assert!(v["first_mismatch"].is_null());
    let o = run(&["crosscheck", "--knot", "trefoil-rh", "--n", "1"]);
    assert_eq!(code(&o), 5);
}

#[test]
fn window_zeta_and_s3check() {
    let v = json(&["window", "--knot", "figure8", "--p", "5", "--q", "3"]);
    assert_eq!(v["window_predicted"], serde_json::json!([-3, 7]));
    assert_eq!(v["window_computed"], serde_json::json!([-3, 7]));

    let v = json(&["zeta", "--knot", "unknot", "--n", "1"]);
    assert_eq!(v["slopes"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(
        code(&run(&["zeta", "--knot", "unknot", "--n", "4", "--s", "2"])),
        5
    );

    let v = json(&["s3check", "--knot", "trefoil-rh"]);
    assert_eq!(v["consistent_with_s3"], false);
    let windows: Vec<Value> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["window_computed"].clone())
        .collect();
    assert_eq!(
        windows,
        vec![
            serde_json::json!([-1, 1]),
            serde_json::json!([-2, 2]),
            serde_json::json!([-3, 3])
        ]
    );
    let v = json(&["s3check", "--knot", "unknot", "--q-list", "1,2,3"]);
    assert_eq!(v["consistent_with_s3"], true);
    let o = run(&["s3check", "--knot", "figure8", "--q-list", "2"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("not S3"));
}

#[test]
fn json_is_byte_identical_and_output_file_matches() {
    let args = [
        "hfk", "--knot", "figure8", "--p", "3", "--q", "2", "--format", "json",
    ];
    let a = run(&args).stdout;
    let b = run(&args).stdout;
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let o = run(&with_file);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), a);
}

#[test]
fn knot_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t25.cfk");
    fs::write(&path, builtin("t25").unwrap().serialize()).unwrap();
    let from_file = json(&["hfk", "--knot", path.to_str().unwrap(), "--p", "2"]);
    let from_builtin = json(&["hfk", "--knot", "t25", "--p", "2"]);
    assert_eq!(from_file["knot"], "t25");
    assert_eq!(ranks(&from_file), ranks(&from_builtin));
}
