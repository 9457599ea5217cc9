use std::process::{Command, Output};

use corona_core::io::{render_tiling, vec2_from_json};
use corona_core::{catalog, Vec2};
use serde_json::Value;

fn corona(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corona"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn limit_json(args: &[&str]) -> Value {
    let out = corona(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("json document")
}

fn exact_vertices(doc: &Value) -> Vec<Vec2> {
    doc["vertices_exact"]
        .as_array()
        .expect("vertex array")
        .iter()
        .enumerate()
        .map(|(i, v)| vec2_from_json(v, &format!("vertices_exact[{i}]")).expect("exact vertex"))
        .collect()
}

#[test]
fn square_point_limit_is_the_unit_square() {
    let doc = limit_json(&["limit", "--tiling", "catalog:4.4.4.4", "--adjacency", "point"]);
    let got = exact_vertices(&doc);
    let want: Vec<Vec2> = [(-1, -1), (1, -1), (1, 1), (-1, 1)]
        .iter()
        .map(|&(x, y)| Vec2::from_ints(x, y))
        .collect();
    assert_eq!(got, want);
    assert_eq!(doc["m"], 1);
    assert_eq!(doc["oracle_agrees"], true);
    assert_eq!(doc["certificate"]["passed"], true);
}

#[test]
fn snub_square_edge_limit_has_eight_vertices() {
    let doc = limit_json(&["limit", "--tiling", "catalog:3.3.4.3.4", "--adjacency", "edge"]);
    assert_eq!(doc["vertex_count"], 8);
    assert_eq!(exact_vertices(&doc).len(), 8);
    let approx = doc["vertices_approx"].as_array().unwrap();
    assert_eq!(approx.len(), 8);
    for (exact, approx) in exact_vertices(&doc).iter().zip(approx) {
        let (x, y) = exact.to_f64();
        let ax = approx[0].as_f64().unwrap();
        let ay = approx[1].as_f64().unwrap();
        assert!((x - ax).abs() < 1e-11 && (y - ay).abs() < 1e-11);
    }
}

#[test]
fn json_file_round_trip_reparses_exact_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let out = corona(&[
        "limit",
        "--tiling",
        "catalog:2-16",
        "--adjacency",
        "point",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let want = catalog::get("2-16").unwrap();
    let mut got = exact_vertices(&doc);
    let mut golden = want.golden_for(corona_core::tiling::AdjacencyKind::Point).unwrap().to_vec();
    got.sort();
    golden.sort();
    assert_eq!(got, golden);
}

#[test]
fn csv_has_one_row_per_vertex() {
    let out = corona(&["limit", "--tiling", "catalog:4.8.8", "--adjacency", "edge", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    let doc = limit_json(&["limit", "--tiling", "catalog:4.8.8", "--adjacency", "edge"]);
    assert_eq!(lines.len(), 1 + doc["vertex_count"].as_u64().unwrap() as usize);
    assert!(lines.iter().all(|l| l.split(',').count() == 10));
}

#[test]
fn tiling_file_matches_catalog_and_custom_needs_a_star() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let spec = catalog::get("6.6.6").unwrap().spec;
    std::fs::write(&path, render_tiling(&spec, None)).unwrap();
    let p = path.to_str().unwrap();
    let from_file = limit_json(&["limit", "--tiling", p, "--adjacency", "edge"]);
    let from_catalog = limit_json(&["limit", "--tiling", "catalog:6.6.6", "--adjacency", "edge"]);
    assert_eq!(from_file["vertices_exact"], from_catalog["vertices_exact"]);
    let out = corona(&["limit", "--tiling", p, "--adjacency", "custom"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = corona(&["limit", "--tiling", missing.to_str().unwrap(), "--adjacency", "point"]);
    assert_eq!(out.status.code(), Some(2));
    let out = corona(&["limit", "--tiling", "catalog:9.9.9", "--adjacency", "point"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UNKNOWN_TILING"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = corona(&["validate", "--tiling", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

fn sizes(adjacency: &str) -> Vec<usize> {
    let out = corona(&[
        "grow",
        "--tiling",
        "catalog:4.4.4.4",
        "--adjacency",
        adjacency,
        "--steps",
        "3",
        "--seed-cell",
        "0,0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn square_corona_sizes() {
    assert_eq!(sizes("edge"), [1, 5, 13, 25]);
    assert_eq!(sizes("point"), [1, 9, 25, 49]);
}

#[test]
fn speed_matches_the_limit_along_a_diagonal() {
    let out = corona(&[
        "speed",
        "--tiling",
        "catalog:4.4.4.4",
        "--adjacency",
        "edge",
        "--steps",
        "20",
        "--direction",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("limit: 0.5"), "{text}");
    let last = text.lines().last().unwrap();
    assert_eq!(last.split_whitespace().nth(2), Some("0.5"));
}

#[test]
fn render_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for what in ["tiling", "coronas", "velocities"] {
        let a = dir.path().join(format!("{what}-a.svg"));
        let b = dir.path().join(format!("{what}-b.svg"));
        for path in [&a, &b] {
            let out = corona(&[
                "render",
                "--tiling",
                "catalog:3.3.4.3.4",
                "--what",
                what,
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0));
        }
        let first = std::fs::read(&a).unwrap();
        assert_eq!(first, std::fs::read(&b).unwrap());
        let text = String::from_utf8(first).unwrap();
        assert!(text.starts_with("<?xml") && text.contains("version=\"1.1\"") && text.ends_with("</svg>\n"));
    }
}

#[test]
fn verify_accepts_a_two_uniform_edge_limit() {
    let out = corona(&[
        "verify",
        "--tiling",
        "catalog:2-15",
        "--adjacency",
        "edge",
        "--steps",
        "60",
        "--seeds",
        "2",
    ]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("vertices: 16"));
    assert!(text.contains("oracle_agrees: true"));
    assert!(text.contains("verified: true"));
}

#[test]
fn list_names_every_catalog_key() {
    let out = corona(&["list", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let keys: Vec<&str> = doc.as_array().unwrap().iter().map(|r| r["key"].as_str().unwrap()).collect();
    assert_eq!(keys, catalog::keys());
}
