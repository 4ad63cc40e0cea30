use std::process::{Command, Output};

use serde_json::Value;

fn lll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lll"))
        .args(args)
        .env_remove("LLL_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn generate_cycle_and_comb() {
    let h = json(&lll(&["generate", "cycle", "4"]));
    assert_eq!(h["events"], 4);
    assert_eq!(h["variables"], 4);
    assert_eq!(h["edges"].as_array().unwrap().len(), 8);
    let c = json(&lll(&["generate", "comb", "4", "3"]));
    assert_eq!(c["events"], 4);
    let s = json(&lll(&["generate", "hstar"]));
    assert_eq!(s["events"], 5);
}

#[test]
fn generate_unknown_family_is_invalid_input() {
    assert_eq!(lll(&["generate", "bogus"]).status.code(), Some(2));
}

#[test]
fn generate_to_file_then_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let p = path.to_str().unwrap();
    assert!(lll(&["generate", "cycle", "3", "--out", p]).status.success());
    let r = json(&lll(&["boundary", "--bigraph", p, "--dir", "1,1,1"]));
    assert_eq!(r["method"], "cycle");
    let lambda = r["lambda"].as_f64().unwrap();
    assert!((lambda - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-11);
}

#[test]
fn boundary_auto_on_path_uses_tree() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(&dir, "g.json", r#"{"vertices":3,"edges":[[1,2],[2,3]]}"#);
    let h = lll(&["generate", "canonical-of", "--graph", &g]);
    let hp = write(&dir, "h.json", &String::from_utf8(h.stdout).unwrap());
    let r = json(&lll(&["boundary", "--bigraph", &hp, "--dir", "1,1,1"]));
    assert_eq!(r["method"], "tree");
    let s = json(&lll(&["shearer-boundary", "--graph", &g, "--dir", "1,1,1"]));
    let diff = r["lambda"].as_f64().unwrap() - s["lambda"].as_f64().unwrap();
    assert!(diff.abs() < 1e-9);
}

#[test]
fn shearer_square_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(&dir, "g.json", r#"{"vertices":4,"edges":[[1,2],[2,3],[3,4],[4,1]]}"#);
    let r = json(&lll(&["shearer", "--graph", &g, "--p", "0.25,0.25,0.25,0.25"]));
    assert_eq!(r["interior"], true);
    assert!(r["min_q"].as_f64().unwrap() > 0.0);
}

#[test]
fn classify_square_is_gapful() {
    let v = json(&lll(&["classify", "--n", "4", "--numeric", "--dirs", "3"]));
    assert_eq!(v["status"], "gapful");
    let rules: Vec<&str> = v["trace"].as_array().unwrap().iter().map(|s| s["rule"].as_str().unwrap()).collect();
    assert!(rules.contains(&"cyclic-containment"));
    let rows = v["numeric"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["margin"].as_f64().unwrap() > 0.0));
}

#[test]
fn witness_cycle_gapful_evaluates() {
    let e = json(&lll(&["witness", "--method", "cycle-gapful", "--n", "4", "--evaluate"]));
    assert_eq!(e["exclusive"], true);
    assert!((e["union"].as_f64().unwrap() - 0.875).abs() < 1e-12);
    let w = json(&lll(&["witness", "--method", "cycle-gapful", "--n", "4"]));
    assert!(w["partitions"].is_array());
    assert!(w["indicators"].is_array());
}

#[test]
fn witness_tree_has_decimal_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(&dir, "h.json", r#"{"events":2,"variables":1,"edges":[[1,1],[2,1]]}"#);
    let w = lll(&["witness", "--method", "tree", "--bigraph", &h, "--dir", "1,1"]);
    assert!(w.status.success());
    let v: Value = serde_json::from_slice(&w.stdout).unwrap();
    let b = &v["events"][1]["boxes"][0][0];
    assert_eq!(b["lo"], "0");
    let hi: f64 = b["hi"].as_str().unwrap().parse().unwrap();
    assert!((hi - 0.5).abs() < 1e-9);
}

#[test]
fn witness_h43() {
    let e = json(&lll(&["witness", "--method", "h43", "--p", "0.4,0.3,0.2,0.1", "--evaluate"]));
    assert_eq!(e["exclusive"], true);
    assert!((e["union"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn oracle_exterior_shared_pair() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(&dir, "h.json", r#"{"events":2,"variables":1,"edges":[[1,1],[2,1]]}"#);
    let yes = json(&lll(&["oracle", "exterior", "--bigraph", &h, "--q", "0.6,0.5"]));
    assert!(yes["certificate"].is_object());
    let no = json(&lll(&["oracle", "exterior", "--bigraph", &h, "--q", "0.3,0.4"]));
    assert!(no["certificate"].is_null());
    let mup = json(&lll(&["oracle", "mup", "--bigraph", &h, "--p", "0.3,0.4"]));
    assert!((mup["value"].as_f64().unwrap() - 0.7).abs() < 1e-3);
}

#[test]
fn cap_exceeded_exit_code() {
    let out = lll(&["oracle", "boundary", "--n", "3", "--dir", "1,1,1", "--cells-cap", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_inputs_exit_two() {
    assert_eq!(lll(&["boundary", "--n", "3", "--dir", "1,1"]).status.code(), Some(2));
    assert_eq!(lll(&["boundary", "--n", "3", "--dir", "a,b,c"]).status.code(), Some(2));
    assert_eq!(lll(&["boundary", "--bigraph", "/nonexistent.json", "--dir", "1"]).status.code(), Some(2));
    assert_eq!(lll(&["boundary", "--method", "tree", "--n", "4", "--dir", "1,1,1,1"]).status.code(), Some(2));
    assert_eq!(lll(&["shearer-boundary", "--tol", "0.5", "--graph", "x", "--dir", "1"]).status.code(), Some(2));
}

#[test]
fn sweep_csv_square_positive_and_reproducible() {
    let a = lll(&["sweep", "--n", "4", "--count", "10", "--seed", "11"]);
    let b = lll(&["sweep", "--n", "4", "--count", "10", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut r = csv::Reader::from_reader(a.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|row| row[3].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn sweep_path_has_zero_margin() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(&dir, "h.json", r#"{"events":3,"variables":2,"edges":[[1,1],[2,1],[2,2],[3,2]]}"#);
    let out = lll(&["sweep", "--bigraph", &h, "--count", "5"]);
    assert!(out.status.success());
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    for row in r.records() {
        assert!(row.unwrap()[3].parse::<f64>().unwrap().abs() <= 1e-9);
    }
}

#[test]
fn config_file_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "c.toml", "format = \"json\"\nseed = 3\n");
    let out = Command::new(env!("CARGO_BIN_EXE_lll"))
        .args(["--config", &cfg, "sweep", "--n", "3", "--count", "2"])
        .env("LLL_THREADS", "2")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 2);
    let bad = write(&dir, "bad.toml", "bogus_key = 1\n");
    assert_eq!(lll(&["--config", &bad, "generate", "hstar"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_lll"))
        .args(["generate", "hstar"])
        .env("LLL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bigraph_json_round_trips_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let first = lll(&["generate", "comb", "5", "3"]);
    let p = write(&dir, "h.json", &String::from_utf8(first.stdout.clone()).unwrap());
    let v = json(&lll(&["classify", "--bigraph", &p]));
    assert!(v["status"].is_string());
    let parsed: lll_core::Bigraph = serde_json::from_slice(&first.stdout).unwrap();
    let again = serde_json::to_value(&parsed).unwrap();
    assert_eq!(again, serde_json::from_slice::<Value>(&first.stdout).unwrap());
}
