use std::process::{Command, Output};

use serde_json::Value;

fn ekr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekr")).args(args).output().expect("run ekr")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn gl5_table_weights() {
    let out = ekr(&["spectrum", "--family", "gl", "--q", "5", "--weights", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["max"], 23.0);
    assert_eq!(v["min"], -1.0);
    assert_eq!(v["ratio_bound"], 20.0);
    assert_eq!(v["exact"]["ratio_bound"], "20");
}

#[test]
fn agl3_lp() {
    let out = ekr(&["lp", "--family", "agl", "--q", "3", "--permute-seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rounded"], 5);
    assert_eq!(v["bound"], 72.0);
    assert_eq!(v["permuted_agrees"], true);
}

#[test]
fn spectrum_csv_columns() {
    let out = ekr(&["spectrum", "--family", "sl", "--q", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("character_label,eigenvalue,multiplicity"));
    let total: u64 = lines.map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 24);
}

#[test]
fn certificate_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("lift.json");
    let out = ekr(&["construct", "agl-lift", "--q", "3", "-o", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = ekr(&["verify", good.to_str().unwrap(), "--translates", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["size"], 36);

    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    let ids: Vec<u64> = cert["ids"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    // swap in an element outside the set; 36 members leave 396 candidates
    let outsider = (0..432u64).find(|x| !ids.contains(x)).unwrap();
    cert["ids"][5] = outsider.into();
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();
    let out = ekr(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let mut wrong_size = cert.clone();
    wrong_size["ids"][5] = ids[5].into();
    wrong_size["size"] = 37.into();
    std::fs::write(&bad, serde_json::to_string(&wrong_size).unwrap()).unwrap();
    assert_eq!(ekr(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ekr(&["spectrum", "--family", "gl", "--q", "6"]).status.code(), Some(1));
    assert_eq!(ekr(&["spectrum", "--family", "xyz", "--q", "5"]).status.code(), Some(1));
    assert_eq!(ekr(&["construct", "psl-stabilizer", "--q", "7"]).status.code(), Some(1));
    assert_eq!(ekr(&["weights", "--family", "agl", "--q", "3"]).status.code(), Some(1));
    assert_eq!(ekr(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn exhausted_budget_exits_three() {
    let out = ekr(&["search", "--family", "pgl", "--q", "11", "--target", "two-intersecting", "--node-limit", "50"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["optimality"], "LowerBound");
    assert!(v["size"].as_u64().unwrap() >= 14);
}

#[test]
fn proved_search() {
    let out = ekr(&["search", "--family", "agl", "--q", "3", "--target", "coclique"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["size"], 45);
    assert_eq!(v["optimality"], "Proved");
}

#[test]
fn output_is_reproducible() {
    let args = ["construct", "pgl-two-intersecting", "--q", "9"];
    let a = ekr(&args);
    let b = ekr(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["size"], 11);
}

#[test]
fn gram_and_bounds() {
    let out = ekr(&["gram", "--family", "gl", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rank"], 26);
    let out = ekr(&["gram", "--family", "sl", "--q", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 42);
    assert_eq!(v["matches_stated"], false);
    let out = ekr(&["bounds", "--family", "gl", "--q", "3"]);
    assert_eq!(json(&out)["clique_coclique_bound"], 6);
}

#[test]
fn reproduce_subset() {
    let out = ekr(&["reproduce", "--q"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["failed"], 0);
    let out = ekr(&["reproduce", "--q", "4", "--criteria", "1,5,7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = ekr(&["reproduce", "--q", "5", "--criteria", "4", "--format", "text"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}
