use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rbcm(args: &[&str]) -> (i32, Value, String) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_rbcm")).args(args).output().unwrap();
    let json: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_7_3_4_full() {
    let (code, json, _) = rbcm(&["classify", "--a", "7", "--b", "3", "--c", "4", "--verify-level", "full"]);
    assert_eq!(code, 0);
    let sols = json["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 4);
    for s in sols {
        assert_eq!(s["verified"], Value::Bool(true));
        for key in ["a", "b", "c", "z1", "z", "w", "u_tilde", "u1", "v1", "t", "d", "ell", "genus"] {
            assert!(s.get(key).is_some(), "missing {key}");
        }
    }
    assert_eq!(json["pairwise_distinct"], Value::Bool(true));
    assert_eq!(json["quotient_profiles"], Value::Bool(true));
}

#[test]
fn classify_rejects_b_equal_c() {
    let (code, json, err) = rbcm(&["classify", "--a", "6", "--b", "3", "--c", "3"]);
    assert_eq!(code, 2);
    assert!(json["error"].as_str().unwrap().contains("b≠c"));
    assert!(err.contains("b≠c"));
}

#[test]
fn classify_c_below_b_has_no_solutions() {
    let (code, json, _) = rbcm(&["classify", "--a", "7", "--b", "4", "--c", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json["solutions"].as_array().unwrap().len(), 0);
    assert!(json["necessary"]["reason"].as_str().unwrap().contains("c > b required"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rbcm(&["classify", "--a", "7"]).0, 2);
    assert_eq!(rbcm(&["bruteforce", "--group", "Q(8)"]).0, 2);
    assert_eq!(rbcm(&["bruteforce", "--group", "Z8", "--guided"]).0, 2);
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    let args = ["classify", "--a", "7", "--b", "3", "--c", "4"];
    let one = rbcm(&[&["--workers", "1"][..], &args[..]].concat()).1;
    let many = rbcm(&[&["--workers", "4"][..], &args[..]].concat()).1;
    assert_eq!(one, many);
    let b1 = rbcm(&["--workers", "1", "bruteforce", "--group", "L(8,2,3)"]).1;
    let b4 = rbcm(&["--workers", "4", "bruteforce", "--group", "L(8,2,3)"]).1;
    assert_eq!(b1, b4);
}

#[test]
fn bruteforce_small_groups() {
    let (code, json, _) = rbcm(&["bruteforce", "--group", "Z8", "--exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(json["oracle_agreement"], Value::Bool(true));
    for m in json["maps"].as_array().unwrap() {
        assert_eq!(m["verified"], Value::Bool(true));
    }
    let (code, json, _) = rbcm(&["bruteforce", "--group", "L(8,2,3)"]);
    assert_eq!(code, 0);
    assert_eq!(json["complete"], Value::Bool(true));
}

#[test]
fn bruteforce_budget_exits_3() {
    let (code, json, _) = rbcm(&["bruteforce", "--group", "Z32", "--max-order", "16"]);
    assert_eq!(code, 3);
    assert_eq!(json["complete"], Value::Bool(false));
    let (code, json, _) = rbcm(&["bruteforce", "--group", "D(7,3,4)", "--guided", "--max-candidates", "10"]);
    assert_eq!(code, 3);
    assert_eq!(json["complete"], Value::Bool(false));
}

#[test]
fn emitted_maps_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = rbcm(&["classify", "--a", "7", "--b", "3", "--c", "4", "--write-maps", path(dir.path())]);
    assert_eq!(code, 0);
    let file = dir.path().join("D(7,3,4)-z1-1.json");
    let (code, json, _) = rbcm(&["verify", path(&file)]);
    assert_eq!(code, 0, "{json}");
    assert_eq!(json["balance"]["t"], 31);

    let (code, json, _) = rbcm(&["verify", path(&file), "--quotient", "a^16"]);
    assert_eq!(code, 0, "{json}");
    assert_eq!(json["quotient"]["t_preserved"], Value::Bool(true));
    assert_eq!(json["quotient"]["profile"]["psi_plus_squared_is_identity"], Value::Bool(true));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let pi = doc["skew"]["pi"].as_array_mut().unwrap();
    let i = pi.iter().position(|p| p != 1).unwrap();
    pi[i] = Value::from(1);
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let (code, json, _) = rbcm(&["verify", path(&bad)]);
    assert_eq!(code, 1);
    assert!(json["witness"]["eta"].is_array() && json["witness"]["mu"].is_array());

    std::fs::write(&bad, "{\"group\": \"D(7,3,4)\"").unwrap();
    assert_eq!(rbcm(&["verify", path(&bad)]).0, 2);
}

#[test]
fn genus_and_quotient_commands() {
    let dir = tempfile::tempdir().unwrap();
    rbcm(&["classify", "--a", "7", "--b", "3", "--c", "4", "--write-maps", path(dir.path())]);
    let file = dir.path().join("D(7,3,4)-z1-0.json");
    let (code, json, _) = rbcm(&["genus", path(&file)]);
    assert_eq!(code, 0);
    let g = &json["genus"];
    let (v, e, f) = (g["vertices"].as_i64().unwrap(), g["edges"].as_i64().unwrap(), g["faces"].as_i64().unwrap());
    assert_eq!(2 - 2 * g["genus"].as_i64().unwrap(), v - e + f);
    let (code, json, _) = rbcm(&["quotient", path(&file), "--by", "a^16"]);
    assert_eq!(code, 0);
    assert_eq!(json["target"], "L(16,8,1)");
    assert_eq!(json["balance"]["t"], 15);
}

#[test]
fn info_lists_three_index_two_subgroups() {
    let (code, json, _) = rbcm(&["info", "--group", "L(16,4,5)"]);
    assert_eq!(code, 0);
    assert_eq!(json["index2_subgroups"].as_array().unwrap().len(), 3);
}
