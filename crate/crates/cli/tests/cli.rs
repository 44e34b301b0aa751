use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn divgon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divgon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generated_grid_has_gonality_three() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert!(divgon(&["gen", "grid", "3", "4", "-o", s(&g)]).status.success());
    let out = divgon(&["gonality", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "3\n");
    let out = divgon(&["--format", "json", "treewidth", s(&g)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["treewidth"], 3);
}

#[test]
fn gen_to_stdout_and_witness_file() {
    let dir = TempDir::new().unwrap();
    let out = divgon(&["gen", "banana", "3"]);
    assert_eq!(stdout(&out), "2 3\n0 1\n0 1\n0 1\n");
    let g = write(dir.path(), "b3.txt", &stdout(&out));
    let w = dir.path().join("w.json");
    assert!(divgon(&["gonality", s(&g), "--witness-out", s(&w)]).status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(v["gonality"], 2);
    assert_eq!(v["witness"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).sum::<i64>(), 2);
}

#[test]
fn rank_reduce_fire_equiv() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "b2.txt", "2 2\n0 1\n0 1\n");
    let d = write(dir.path(), "d.txt", "1 0\n");
    let e = write(dir.path(), "e.txt", "0 1\n");
    let f = write(dir.path(), "f.txt", "2 0\n");
    assert_eq!(stdout(&divgon(&["rank", s(&g), s(&d)])), "0\n");
    assert_eq!(stdout(&divgon(&["reduce", s(&g), s(&f), "--at", "1"])), "0 2\n");
    let illegal = divgon(&["fire", s(&g), s(&d), "--set", "0", "--legal"]);
    assert_eq!(illegal.status.code(), Some(1));
    assert!(stdout(&illegal).starts_with("illegal"));
    assert_eq!(stdout(&divgon(&["fire", s(&g), s(&d), "--set", "0"])), "-1 2\n");
    let no = divgon(&["equiv", s(&g), s(&d), s(&e)]);
    assert_eq!((no.status.code(), stdout(&no)), (Some(1), "not equivalent\n".to_string()));
    let e2 = write(dir.path(), "e2.txt", "0 2\n");
    let yes = divgon(&["--format", "json", "equiv", s(&g), s(&f), s(&e2)]);
    assert_eq!(yes.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&yes)).unwrap();
    assert_eq!(v["equivalent"], true);
}

#[test]
fn brambles() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let b = write(dir.path(), "b.json", r#"{"members":[[0],[1],[2],[3]]}"#);
    let out = divgon(&["bramble", "order", s(&g), s(&b)]);
    assert_eq!(stdout(&out).lines().next(), Some("4"));
    assert_eq!(stdout(&divgon(&["bramble", "check", s(&g), s(&b)])), "true\n");
    assert_eq!(stdout(&divgon(&["treewidth", s(&g), "--bramble", s(&b)])), "3\n");
    let p = write(dir.path(), "p3.txt", "3 2\n0 1\n1 2\n");
    let far = write(dir.path(), "far.json", r#"{"members":[[0],[2]]}"#);
    assert_eq!(divgon(&["bramble", "check", s(&p), s(&far)]).status.code(), Some(1));
}

#[test]
fn theorem_suite() {
    let out = divgon(&["verify", "theorem", "--suite", "all-connected-n<=4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("violations: 0"), "{text}");
    let out = divgon(&["--format", "json", "verify", "theorem", "--suite", "all-connected-n≤3"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(divgon(&["verify", "theorem", "--suite", "all-connected-n<=9"]).status.code(), Some(2));
}

#[test]
fn morphisms() {
    let dir = TempDir::new().unwrap();
    let c4 = write(dir.path(), "c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let p3 = write(dir.path(), "p3.txt", "3 2\n0 1\n1 2\n");
    let m = write(
        dir.path(),
        "m.json",
        r#"{"vertex_map":[0,1,2,1],"edge_map":[{"edge":0,"to_edge":0},{"edge":1,"to_edge":1},{"edge":2,"to_edge":1},{"edge":3,"to_edge":0}]}"#,
    );
    let d = write(dir.path(), "d.txt", "0 1 0\n");
    let out = divgon(&["morphism", "check", s(&c4), s(&p3), s(&m), "--require", "homomorphism"]);
    assert_eq!(stdout(&out), "degree 2\nm 2 1 2 1\n");
    assert_eq!(stdout(&divgon(&["morphism", "pullback", s(&c4), s(&p3), s(&m), s(&d)])), "0 1 0 1\n");
    let out = divgon(&["morphism", "certify", s(&c4), s(&p3), s(&m), s(&d)]);
    assert_eq!(stdout(&out), "0 1 0 1\nbound 2\n");
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"vertex_map":[0,1,2,2],"edge_map":[{"edge":0,"to_edge":0},{"edge":1,"to_edge":1},{"edge":2,"to_vertex":2},{"edge":3,"to_edge":0}]}"#,
    );
    assert_eq!(divgon(&["morphism", "check", s(&c4), s(&p3), s(&bad)]).status.code(), Some(1));
}

#[test]
fn metric_commands() {
    let dir = TempDir::new().unwrap();
    let mg = write(dir.path(), "mg.txt", "2 2\n0 1 1/2\n0 1 1/3\n");
    let w = write(
        dir.path(),
        "w.json",
        r#"{"divisor":[{"vertex":0,"c":1},{"vertex":1,"c":1}],"witnesses":[
            {"vertex":0,"divisor":[{"vertex":0,"c":1},{"vertex":1,"c":1}],"function":{"edges":[[["0","0"],["1/2","0"]],[["0","0"],["1/3","0"]]]}},
            {"vertex":1,"divisor":[{"vertex":0,"c":1},{"vertex":1,"c":1}],"function":{"edges":[[["0","0"],["1/2","0"]],[["0","0"],["1/3","0"]]]}}]}"#,
    );
    let out = divgon(&["--format", "json", "metric", "transfer", s(&mg), s(&w)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["bound"].as_i64(), v["scale"].as_str()), (Some(2), Some("6")));
    let unit = write(dir.path(), "u.txt", "2 2\n0 1 1\n0 1 1\n");
    let f = write(dir.path(), "f.json", r#"{"edges":[[["0","0"],["1","0"]],[["0","0"],["1/2","1"],["1","0"]]]}"#);
    let out = divgon(&["metric", "div", s(&unit), s(&f)]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn errors_exit_two_with_json_on_stderr() {
    let out = divgon(&["gonality", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(v["error"], "io");
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.txt", "2 1\n0 0\n");
    let out = divgon(&["gonality", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(v["error"], "format");
    assert_eq!(divgon(&["gen", "nosuch", "3"]).status.code(), Some(2));
}
