use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::{json, Value};

fn adlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adlab")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = adlab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    adlab(args).status.code().expect("exited normally")
}

#[test]
fn frattini_of_double_three() {
    let v = ok_json(&["group", "frattini", "--spec", "double:3"]);
    assert!(v["rank"].as_u64().unwrap() >= 4);
    assert_eq!(v["prime"], 3);
}

#[test]
fn six_implies_five() {
    let v = ok_json(&["conditions", "implies", "--from", "6", "--to", "5"]);
    assert_eq!(v["verdict"], "proved");
    assert_eq!(v["path"], json!(["6->5"]));
}

#[test]
fn gaussian_field_at_two() {
    let v = ok_json(&["field", "splitting", "--field", "Q(i)", "--prime", "2"]);
    assert_eq!(v, json!({"e": 2, "f": 1, "g": 1}));
}

#[test]
fn refutation_names_an_example() {
    let v = ok_json(&["conditions", "implies", "--from", "9", "--to", "5"]);
    assert_eq!(v["verdict"], "refuted");
    assert!(v["example"].is_string());
}

#[test]
fn matrix_completeness_by_mode() {
    let v = ok_json(&["conditions", "matrix"]);
    assert_eq!(v["undecided"], 0);
    // The tame clique excludes 2*, and no example separates anything from it.
    let v = ok_json(&["--mode", "tame", "conditions", "matrix"]);
    assert_eq!(v["undecided"], 8);
    // Without the non-Galois example nothing separates 1, 5 or 9 from 2.
    let v = ok_json(&["--mode", "galois-mk", "conditions", "complete"]);
    assert_eq!(v["undecided"], json!([["1", "2"], ["5", "2"], ["9", "2"]]));
}

#[test]
fn ablation_leaves_gaps() {
    let v = ok_json(&["conditions", "complete", "--without", "ex4"]);
    assert_eq!(v["complete"], false);
}

#[test]
fn mode_mismatch_is_a_domain_error() {
    assert_eq!(code(&["--mode", "tame", "conditions", "implies", "--from", "6", "--to", "5"]), 1);
    assert_eq!(code(&["--mode", "tame", "conditions", "implies", "--from", "6*", "--to", "1*"]), 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["group"]), 2);
    assert_eq!(code(&["group", "frattini"]), 2);
    assert_eq!(code(&["--mode", "weird", "conditions", "closure"]), 2);
    assert_eq!(code(&["brauer", "solve", "--spec", "{not json"]), 2);
    assert_eq!(code(&["brauer", "solve", "--spec", "@/nonexistent/file.json"]), 2);
    assert_eq!(code(&["group", "frattini", "--spec", "heis:4"]), 1);
    assert_eq!(code(&["field", "splitting", "--field", "Q(sqrt:", "--prime", "2"]), 1);
    assert_eq!(code(&["example", "verify", "--id", "ex9"]), 1);
    assert_eq!(code(&["example", "verify", "--id", "nogal", "--n", "2"]), 1);
}

#[test]
fn domain_error_goes_to_stderr() {
    let out = adlab(&["group", "info", "--spec", "nonsense:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("GroupError::"));
}

#[test]
fn certificate_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("adlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let exported = ok_json(&["example", "export", "--id", "ex4", "--p", "3"]);
    let path = dir.join("ex4.json");
    std::fs::write(&path, serde_json::to_string(&exported).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let from_file = ok_json(&["example", "verify", "--file", p]);
    let built_in = ok_json(&["example", "verify", "--id", "ex4", "--p", "3"]);
    assert_eq!(from_file, built_in);
    assert_eq!(from_file["status"], "PASS");

    // A registry holding only ex4 refutes 5 => 9 and nothing of ex1's.
    let v = ok_json(&["--registry", p, "conditions", "implies", "--from", "5", "--to", "9"]);
    assert_eq!(v["verdict"], "refuted");
    let v = ok_json(&["--registry", p, "conditions", "implies", "--from", "9", "--to", "3"]);
    assert_eq!(v["verdict"], "undecided");

    // Tampering with an expected value makes replay fail with exit 1.
    let mut bad = exported.clone();
    let step = bad["steps"].as_array_mut().unwrap().iter_mut().find(|s| s["op"] == "brauer.index").unwrap();
    step["expected"] = json!(9);
    std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = adlab(&["example", "verify", "--file", p]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "FAIL");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn brauer_class_round_trip() {
    let class = json!({"base_field": "K", "invariants": [
        {"slot": "nu", "num": 1, "den": 27}, {"slot": "varpi", "num": 26, "den": 27}
    ]});
    let text = class.to_string();
    let made = ok_json(&["brauer", "make", "--class", &text]);
    assert_eq!(made["index"], 27);
    let again = ok_json(&["brauer", "make", "--class", &made["class"].to_string()]);
    assert_eq!(made, again);

    let rel = json!({"galois": true, "records": [
        {"key": {"slot": {"slot": "nu"}}, "g_rel": 3, "n_rel": 1},
        {"key": {"slot": {"slot": "varpi"}}, "g_rel": 1, "n_rel": 3}
    ]});
    let r = ok_json(&["brauer", "restrict", "--class", &text, "--rel", &rel.to_string()]);
    assert_eq!(r["index"], 27);
    assert_eq!(r["class"]["invariants"].as_array().unwrap().len(), 4);

    let unbalanced = json!({"base_field": "K", "invariants": [{"slot": "nu", "num": 1, "den": 3}]});
    assert_eq!(code(&["brauer", "make", "--class", &unbalanced.to_string()]), 1);
}

#[test]
fn solver_and_adequacy() {
    let spec = json!({"field": "K", "slots": [
        {"slot": "a", "max_order": 27, "exact_order": 27},
        {"slot": "b", "max_order": 27}
    ]});
    let v = ok_json(&["brauer", "solve", "--spec", &spec.to_string()]);
    assert_eq!(v["feasible"], true);
    let v = ok_json(&["brauer", "adequate", "--degrees", "27,27,3", "--n", "27"]);
    assert_eq!(v["adequate"], true);
    let v = ok_json(&["brauer", "adequate", "--degrees", "27,9", "--n", "27"]);
    assert_eq!(v["adequate"], false);
}

#[test]
fn liedahl_and_local() {
    let v = ok_json(&["liedahl", "check", "--spec", "meta:5:25:0:6", "--field", "Q(zeta:5)"]);
    assert_eq!(v["status"], "satisfied");
    assert_eq!(v["witness"]["t"], 6);
    let v = ok_json(&["liedahl", "check", "--spec", "meta:5:25:0:6", "--field", "Q(zeta:100)"]);
    assert_eq!(v["status"], "failed");
    let v = ok_json(&["local", "rank", "--p", "5", "--e", "2"]);
    assert_eq!(v["rank"], 3);
    let v = ok_json(&["local", "rank", "--datum", r#"{"p":5,"d":2,"e":2,"f":1,"s":0}"#]);
    assert_eq!(v["rank"], 3);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["conditions", "matrix"],
        vec!["group", "metacyclic", "--spec", "meta:5:25:0:6"],
        vec!["example", "verify", "--id", "ex2", "--p", "3"],
    ] {
        assert_eq!(adlab(&args).stdout, adlab(&args).stdout, "{args:?}");
    }
}

fn junk_token() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("group".to_string()),
        Just("brauer".to_string()),
        Just("conditions".to_string()),
        Just("--spec".to_string()),
        Just("--from".to_string()),
        Just("--class".to_string()),
        Just("{".to_string()),
        Just("heis:0".to_string()),
        "[a-z:0-9{}\\[\\]\"-]{0,12}",
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn malformed_invocations_never_crash(args in prop::collection::vec(junk_token(), 0..5)) {
        let out = Command::new(env!("CARGO_BIN_EXE_adlab")).args(&args).output().unwrap();
        let c = out.status.code();
        prop_assert!(matches!(c, Some(0..=2)), "{:?} exited with {:?}", args, c);
    }
}
