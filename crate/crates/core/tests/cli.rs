use std::process::{Command, Output};

use serde_json::Value;

fn ttgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttgeo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn enumerate_counts() {
    for (args, n) in [
        (vec!["enumerate", "--surface", "s04"], 13),
        (vec!["enumerate", "--surface", "s04", "--up-to-mirror"], 8),
        (vec!["enumerate", "--surface", "s11"], 1),
    ] {
        let out = ttgeo(&args);
        assert!(out.status.success());
        assert_eq!(json(&out)["count"], n);
    }
}

#[test]
fn enumerate_expect_mismatch_fails() {
    assert_eq!(ttgeo(&["enumerate", "--surface", "s04", "--expect", "13"]).status.code(), Some(0));
    assert_eq!(ttgeo(&["enumerate", "--surface", "s04", "--expect", "12"]).status.code(), Some(1));
}

#[test]
fn verify_cayley_passes() {
    let out = ttgeo(&["verify", "--suite", "cayley", "--radius", "6"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn verify_qi_s11_uses_four_three() {
    let out = ttgeo(&["verify", "--suite", "qi", "--surface", "s11", "--radius", "8"]);
    assert!(out.status.success());
    let r = &json(&out)["reports"][0];
    assert_eq!(r["passed"], true);
    assert_eq!((r["details"]["k"].as_u64(), r["details"]["c"].as_u64()), (Some(4), Some(3)));
    assert!(r["certified_pairs"].as_u64().unwrap() > 0);
}

#[test]
fn export_farey_dot_is_deterministic() {
    let a = ttgeo(&["export", "farey", "--format", "dot", "--depth", "3"]);
    let b = ttgeo(&["export", "farey", "--format", "dot", "--depth", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("graph G {"));
    assert!(text.trim_end().ends_with('}'));
    assert_eq!(text.matches(" -- ").count(), 1 + 4 + 8 + 16);
}

#[test]
fn export_objects_as_json() {
    for obj in ["farey", "dual", "linegraph", "ball", "cayley", "image"] {
        let out = ttgeo(&["export", obj, "--format", "json", "--radius", "2", "--depth", "2"]);
        assert!(out.status.success(), "{obj}");
        let v = json(&out);
        assert!(!v["vertices"].as_array().unwrap().is_empty(), "{obj}");
    }
}

#[test]
fn ball_writes_file() {
    let dir = std::env::temp_dir().join(format!("ttgeo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ball.json");
    let out = ttgeo(&["ball", "--surface", "s04", "--radius", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 33);
    assert_eq!(v["vertices"][0]["depth"], 0);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn act_moves_slopes() {
    let out = ttgeo(&["act", "1,1;0,1", "--seed", &fixture("s11_seed.json")]);
    assert!(out.status.success());
    let t = ttgeo::TrainTrack::from_json_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let (a, b) = ttgeo::measures::slope_pair(&t).unwrap();
    assert_eq!((a.to_string(), b.to_string()), ("1/0".to_string(), "1/1".to_string()));
}

#[test]
fn bounds_and_bad_input_fail() {
    for args in [
        vec!["ball", "--surface", "s11", "--radius", "13"],
        vec!["ball", "--surface", "s04", "--radius", "10"],
        vec!["export", "farey", "--depth", "17"],
        vec!["act", "1,2;3,4", "--seed", "missing.json"],
        vec!["verify", "--suite", "bogus"],
        vec!["enumerate", "--surface", "s22"],
    ] {
        let out = ttgeo(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
