use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn ssratio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssratio"))
        .args(args)
        .env_remove("SSRATIO_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = ssratio(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_cube_star_one_is_a_path_of_length_three() {
    let g: Value = serde_json::from_str(&ok(&["gen", "--family", "cube_star", "--d", "1"])).unwrap();
    assert_eq!(g["n"], 4);
    let edges = g["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    let mut degree = [0; 4];
    for e in edges {
        degree[e[0].as_u64().unwrap() as usize] += 1;
        degree[e[1].as_u64().unwrap() as usize] += 1;
    }
    degree.sort();
    assert_eq!(degree, [1, 1, 2, 2]);
}

#[test]
fn gen_delta_one_is_a_six_cycle() {
    let g: Value = serde_json::from_str(&ok(&["gen", "--family", "delta", "--d", "1", "--seed", "0"])).unwrap();
    assert_eq!(g["n"], 6);
    let edges = g["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 6);
    // connected and 2-regular on six vertices means a single 6-cycle
    let mut adj = vec![Vec::new(); 6];
    for e in edges {
        let (u, v) = (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize);
        adj[u].push(v);
        adj[v].push(u);
    }
    assert!(adj.iter().all(|a| a.len() == 2));
    let (mut prev, mut cur, mut steps) = (0, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        (prev, cur) = (cur, next);
        steps += 1;
    }
    assert_eq!(steps, 6);
}

#[test]
fn gen_file_round_trip_is_byte_identical() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    ok(&["gen", "--family", "delta", "--d", "2", "--seed", "7", "--out", p(&first)]);
    ok(&["gen", "--family", "file", "--graph", p(&first), "--out", p(&second)]);
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn bound_lp_on_the_path() {
    assert_eq!(ok(&["bound", "--family", "cube_star", "--d", "1", "--mode", "worst", "--method", "lp"]), "3/2\n");
}

#[test]
fn bound_certificate_writes_a_checkable_certificate() {
    let dir = tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = ok(&[
        "bound", "--family", "cube_star", "--d", "5", "--mode", "worst", "--method", "certificate",
        "--cert-out", p(&cert),
    ]);
    assert_eq!(out, "7/2\nverdict: valid\n");
    let check = ok(&["cert", "--check", p(&cert), "--format", "json"]);
    let v: Value = serde_json::from_str(&check).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["bound"], "7/2");
}

#[test]
fn bound_average_certificate_on_seeded_delta() {
    let out = ok(&[
        "bound", "--family", "delta", "--d", "3", "--seed", "7", "--mode", "average", "--method", "certificate",
        "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "5/2");
    assert_eq!(v["verdict"], "valid");
    assert_eq!(v["seed"], 7);
}

#[test]
fn bound_lp_too_large_suggests_certificates() {
    let o = ssratio(&["bound", "--family", "cube_star", "--d", "3", "--method", "lp"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--method certificate"), "{}", stderr(&o));
}

#[test]
fn bound_certificate_rejects_family_without_construction() {
    let o = ssratio(&["bound", "--family", "hypercube", "--d", "2", "--method", "certificate"]);
    assert!(!o.status.success());
}

#[test]
fn scheme_ratios_match_examples() {
    let v: Value =
        serde_json::from_str(&ok(&["scheme", "--family", "cube_star", "--d", "2", "--q", "11", "--format", "json"]))
            .unwrap();
    assert_eq!(v["ratios"]["max"], "2");
    assert_eq!(v["verification"]["perfect"], true);
    let v: Value =
        serde_json::from_str(&ok(&["scheme", "--family", "delta", "--d", "1", "--q", "7", "--format", "json"]))
            .unwrap();
    assert_eq!(v["ratios"]["average"], "3/2");
}

#[test]
fn scheme_on_single_edge_file() {
    let dir = tempdir().unwrap();
    let graph = dir.path().join("k2.json");
    let k2 = r#"{"n": 2, "edges": [[0, 1]], "labels": [{"kind": "plain", "copy": null, "coord": null}, {"kind": "plain", "copy": null, "coord": null}]}"#;
    fs::write(&graph, k2).unwrap();
    let v: Value = serde_json::from_str(&ok(&[
        "scheme", "--family", "file", "--graph", p(&graph), "--q", "3", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(v["ratios"]["max"], "1");
}

#[test]
fn broken_scheme_exits_nonzero_and_names_the_violation() {
    let dir = tempdir().unwrap();
    let scheme = dir.path().join("scheme.json");
    ok(&["scheme", "--family", "cube_star", "--d", "1", "--out", p(&scheme)]);
    let mut s: Value = serde_json::from_str(&fs::read_to_string(&scheme).unwrap()).unwrap();
    // vertex 0 owns its centre row first and then one leaf row per neighbour
    let leaf = s["participants"][0][0].as_u64().unwrap() as usize + 1;
    for x in s["rows"][leaf].as_array_mut().unwrap() {
        *x = Value::from(0);
    }
    fs::write(&scheme, s.to_string()).unwrap();
    let o = ssratio(&["scheme", "--family", "cube_star", "--d", "1", "--scheme", p(&scheme)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("violation: edge"), "{}", stderr(&o));
}

#[test]
fn scheme_rejects_composite_modulus() {
    let o = ssratio(&["scheme", "--family", "cube_star", "--d", "1", "--q", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

const HEADER: &str = "family,d,seed,mode,vertices,max_degree,lower,lower_method,upper,match";

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(HEADER));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn half(d: usize) -> String {
    if d.is_multiple_of(2) {
        ((d + 2) / 2).to_string()
    } else {
        format!("{}/2", d + 2)
    }
}

#[test]
fn report_worst_on_cube_star() {
    let rows = csv_rows(&ok(&["report", "--family", "cube_star", "--from", "1", "--to", "4"]));
    assert_eq!(rows.len(), 4);
    for (i, r) in rows.iter().enumerate() {
        let d = i + 1;
        assert_eq!(r[1], d.to_string());
        assert_eq!(r[6], half(d));
        assert_eq!(r[8], half(d));
        assert_eq!(r[9], "true");
    }
}

#[test]
fn report_average_on_delta_with_seeds() {
    let rows = csv_rows(&ok(&["report", "--family", "delta", "--from", "1", "--to", "3", "--seeds", "0,1,7"]));
    assert_eq!(rows.len(), 9);
    for r in &rows {
        let d: usize = r[1].parse().unwrap();
        assert_eq!(r[3], "average");
        assert_eq!((r[6].as_str(), r[8].as_str(), r[9].as_str()), (half(d).as_str(), half(d).as_str(), "true"));
    }
    let seeds: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(&seeds[..3], ["0", "1", "7"]);
}

#[test]
fn report_with_lp_lower_bounds() {
    let rows = csv_rows(&ok(&["report", "--family", "delta", "--from", "1", "--to", "1", "--method", "lp"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][6], "3/2");
    assert_eq!(rows[0][7], "lp");
}

#[test]
fn report_empty_range_is_header_only() {
    assert_eq!(ok(&["report", "--from", "3", "--to", "2"]), format!("{HEADER}\n"));
}

#[test]
fn report_is_independent_of_worker_count() {
    let args = ["report", "--from", "1", "--to", "3", "--seeds", "0,7"];
    let one = Command::new(env!("CARGO_BIN_EXE_ssratio")).args(args).env("SSRATIO_WORKERS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_ssratio")).args(args).env("SSRATIO_WORKERS", "4").output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn report_json_rows_parse() {
    let v: Value = serde_json::from_str(&ok(&["report", "--from", "1", "--to", "2", "--format", "json"])).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["match"] == true));
}

#[test]
fn cert_to_stdout_round_trips() {
    let o = ssratio(&["cert", "--family", "delta", "--d", "2", "--seed", "1", "--mode", "average"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("verdict: valid"));
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, &o.stdout).unwrap();
    let check = ok(&["cert", "--check", p(&path), "--mode", "average"]);
    assert!(check.contains("average bound: 2"), "{check}");
}

#[test]
fn tampered_certificate_fails_the_check() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c.json");
    ok(&["cert", "--family", "cube_star", "--d", "2", "--out", p(&path)]);
    let mut c: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    c["steps"].as_array_mut().unwrap().pop();
    fs::write(&path, c.to_string()).unwrap();
    let o = ssratio(&["cert", "--check", p(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("invalid"));
}
