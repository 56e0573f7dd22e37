use std::path::Path;
use std::process::Command;

use hts_core::examples::square_pillowcase;
use hts::format::write_surface;
use serde_json::Value;

fn hts(args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_hts")).args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn ok_json(args: &[&str]) -> Value {
    let (code, out, err) = hts(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn err_code(args: &[&str]) -> (i32, String) {
    let (code, out, err) = hts(args);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&err).unwrap();
    assert!(v["message"].is_string());
    (code, v["code"].as_str().unwrap().to_string())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn pillowcase(dir: &Path, h1: &str, h2: &str, q: &str) -> String {
    let (code, out, _) = hts(&["pillowcase", "--h1", h1, "--h2", h2, "--q", q]);
    assert_eq!(code, 0);
    write(dir, &format!("l_{}_{}_{}.json", h1, h2, q).replace('/', "_"), &out)
}

#[test]
fn square_l_decomposes_into_equal_halves() {
    let dir = tempfile::tempdir().unwrap();
    let f = pillowcase(dir.path(), "1", "1", "1");
    let d = ok_json(&["decompose", &f]);
    let cyl = d["cylinders"].as_array().unwrap();
    assert_eq!(cyl.len(), 2);
    assert!(cyl.iter().all(|c| c["weight"] == "1/2"));
}

#[test]
fn pillowcase_output_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let f = pillowcase(dir.path(), "2/3", "5/4", "1/3");
    let v = ok_json(&["validate", &f]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["genus"], 0);
    assert_eq!(v["stratum"]["orders"], serde_json::json!([-1, -1, -1, -1, -1, 1]));
    let again = ok_json(&["act", &f, "--matrix", "1,0,0,1"]);
    assert_eq!(again, serde_json::from_str::<Value>(&std::fs::read_to_string(&f).unwrap()).unwrap());
}

#[test]
fn mismatched_edges_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.json",
        r#"{"version":1,"polygons":[[["0","0"],["1","0"],["1","1"],["0","2"]]],"gluings":[[[0,0],[0,2],"T"],[[0,1],[0,3],"T"]]}"#,
    );
    assert_eq!(err_code(&["validate", &f]), (1, "EdgeMismatch".to_string()));
    assert_eq!(err_code(&["validate", "/nonexistent/x.json"]), (1, "Io".to_string()));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = pillowcase(dir.path(), "1", "1", "1/2");
    assert_eq!(err_code(&[]).0, 2);
    assert_eq!(err_code(&["frobnicate"]).0, 2);
    assert_eq!(err_code(&["pillowcase", "--h1", "x", "--h2", "1", "--q", "1"]), (2, "Usage".to_string()));
    assert_eq!(err_code(&["act", &f, "--matrix", "1,0,0,1", "--lambda", "0,1"]).0, 2);
    assert_eq!(err_code(&["act", &f, "--matrix", "1,0,0"]).0, 2);
    assert_eq!(err_code(&["pillowcase", "--h1", "-1", "--h2", "1", "--q", "1"]), (1, "NonPositiveParameter".to_string()));
    let (code, out, _) = hts(&["flow-density", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("t, distance"));
    assert!(hts(&["sc-path", "--help"]).1.contains("t, h1, h2, D"));
}

#[test]
fn actions() {
    let dir = tempfile::tempdir().unwrap();
    let f = pillowcase(dir.path(), "1", "1", "1/2");
    let v = ok_json(&["act", &f, "--lambda", "-1/2,2"]);
    let g = write(dir.path(), "g.json", &v.to_string());
    assert_eq!(ok_json(&["validate", &g])["area"], "6/1");
    let h = ok_json(&["act", &f, "--horocycle", "-1/3"]);
    let h = write(dir.path(), "h.json", &h.to_string());
    assert_eq!(ok_json(&["classify", &h])["tag"], "Case2");
    let geo = ok_json(&["act", &f, "--geodesic", "0.5"]);
    assert_eq!(geo["exact"], false);
    let geo = write(dir.path(), "geo.json", &geo.to_string());
    assert_eq!(err_code(&["validate", &geo]), (1, "ParseError".to_string()));
    assert_eq!(err_code(&["act", &f, "--matrix", "1,0,0,-1"]).0, 1);
}

#[test]
fn classify_and_normalize() {
    let dir = tempfile::tempdir().unwrap();
    let f = pillowcase(dir.path(), "1", "2", "1/2");
    let sheared = ok_json(&["act", &f, "--matrix", "3,1,0,3"]);
    let s = write(dir.path(), "s.json", &sheared.to_string());
    let c = ok_json(&["classify", &s]);
    assert_eq!((c["tag"].as_str().unwrap(), c["cylinders"].as_u64().unwrap()), ("Case2", 2));
    let t = ok_json(&["to-L", &s]);
    assert_eq!(t["verified"], true);
    assert_eq!(t["params"], serde_json::json!({"h1": "1/1", "h2": "2/1", "q": "1/2"}));
    let sq = write(dir.path(), "sq.json", &write_surface(&square_pillowcase()));
    assert_eq!(err_code(&["classify", &sq]), (1, "WrongStratum".to_string()));
}

#[test]
fn cover_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write(dir.path(), "sq.json", &write_surface(&square_pillowcase()));
    let c = ok_json(&["cover", &sq, "--branch", "0,1,2,3"]);
    let c = write(dir.path(), "c.json", &c.to_string());
    let v = ok_json(&["validate", &c]);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["stratum"]["orders"], serde_json::json!([]));
    assert_eq!(err_code(&["cover", &sq, "--branch", "0,1,2"]), (1, "BadBranchSet".to_string()));
    let svg = dir.path().join("c.svg");
    let r = ok_json(&["render", &c, "--svg", svg.to_str().unwrap()]);
    assert_eq!(r["polygons"], 4);
    assert!(std::fs::read_to_string(&svg).unwrap().trim_end().ends_with("</svg>"));
}

#[test]
fn flow_density_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let args = ["flow-density", "--weights", "1/3,2/3", "--eps", "0.05", "--r", "40", "--step", "0.5", "--csv", csv.to_str().unwrap()];
    let (c1, o1, _) = hts(&args);
    let t1 = std::fs::read(&csv).unwrap();
    let (c2, o2, _) = hts(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert_eq!(t1, std::fs::read(&csv).unwrap());
    let text = String::from_utf8(t1).unwrap();
    assert_eq!(text.lines().next(), Some("t,distance"));
    assert_eq!(text.lines().count(), 1 + 161);
    let v: Value = serde_json::from_str(&o1).unwrap();
    assert_eq!(v["samples"], 161);
    let lin = ok_json(&["flow-density", "--weights", "1/3,2/3", "--family", "linear", "--r", "10"]);
    assert_eq!(lin["fraction"].as_f64(), Some(1.0));
    assert_eq!(err_code(&["flow-density", "--weights", "1/3,1/3"]), (1, "BadWeights".to_string()));
}

#[test]
fn sc_path_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let args = ["sc-path", "--q", "0.5", "--tmin", "1e-3", "--tmax", "1e-2", "--per-decade", "4", "--csv", csv.to_str().unwrap()];
    let (c1, o1, e1) = hts(&args);
    assert_eq!(c1, 0, "{e1}");
    let t1 = std::fs::read(&csv).unwrap();
    let (_, o2, _) = hts(&args);
    assert_eq!(o1, o2);
    assert_eq!(t1, std::fs::read(&csv).unwrap());
    let text = String::from_utf8(t1).unwrap();
    assert_eq!(text.lines().next(), Some("t,h1,h2,D"));
    assert_eq!(text.lines().count(), 6);
    let v: Value = serde_json::from_str(&o1).unwrap();
    assert_eq!(v["h1_positive"], true);
    assert_eq!(v["fit"]["samples"], 5);
    assert_eq!(err_code(&["sc-path", "--q", "2", "--tmin", "1e-3", "--tmax", "1e-2"]), (1, "BadParameters".to_string()));
}
