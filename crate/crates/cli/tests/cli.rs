use std::f64::consts::PI;
use std::process::{Command, Output};

fn sacenter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sacenter"))
        .args(args)
        .output()
        .expect("run sacenter")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV document, parsed as numbers.
fn rows(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let data = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, data)
}

#[test]
fn eval_disc_center() {
    let out = stdout(&sacenter(&["eval", "--fixture", "disc:1,512", "--h", "1", "--at", "0,0"]));
    let v: f64 = out.trim().parse().unwrap();
    assert!((v - 2.0 * PI * (1.0 - 0.5f64.sqrt())).abs() < 1e-6, "{v}");
}

#[test]
fn two_discs_have_two_centers() {
    let out = stdout(&sacenter(&["center", "--fixture", "two_discs:1,4,256", "--h", "0.1"]));
    let (header, data) = rows(&out);
    assert_eq!(header, "x1,x2,value");
    assert_eq!(data.len(), 2);
    let mut xs: Vec<f64> = data.iter().map(|r| r[0]).collect();
    xs.sort_by(f64::total_cmp);
    assert!((xs[0] + 2.0).abs() < 0.01 && (xs[1] - 2.0).abs() < 0.01, "{xs:?}");
    assert!(data.iter().all(|r| r[1].abs() < 1e-6));
}

#[test]
fn small_grid_has_a_header_and_four_rows() {
    let out = stdout(&sacenter(&["eval", "--fixture", "square:1", "--h", "1", "--grid", "2"]));
    let (header, data) = rows(&out);
    assert_eq!(header, "x1,x2,value");
    assert_eq!(data.len(), 4);
    // row-major: x varies fastest
    assert!(data[0][0] < data[1][0] && data[0][1] == data[1][1]);
}

#[test]
fn grid_respects_the_square_symmetry() {
    let out = stdout(&sacenter(&[
        "eval", "--fixture", "square:1", "--h", "0.7", "--grid", "7", "--bounds", "-0.1,-0.1,1.1,1.1",
    ]));
    let (_, data) = rows(&out);
    let at = |x: f64, y: f64| -> f64 {
        data.iter()
            .find(|r| (r[0] - x).abs() < 1e-9 && (r[1] - y).abs() < 1e-9)
            .map(|r| r[2])
            .unwrap()
    };
    for r in &data {
        let (x, y, v) = (r[0], r[1], r[2]);
        for w in [at(1.0 - x, y), at(x, 1.0 - y), at(y, x)] {
            assert!((w - v).abs() < 1e-9, "{x} {y}: {v} vs {w}");
        }
    }
}

#[test]
fn laplacian_is_negative_inside_convex_fixtures() {
    for (fixture, bounds) in [("square:1", "0.05,0.05,0.95,0.95"), ("pentagon", "0.4,0.3,1,0.8")] {
        for h in ["0.1", "1", "10"] {
            let out = stdout(&sacenter(&[
                "hess", "--fixture", fixture, "--h", h, "--grid", "5", "--bounds", bounds,
            ]));
            let (header, data) = rows(&out);
            assert_eq!(header, "x1,x2,value,g1,g2,lap");
            assert_eq!(data.len(), 25);
            assert!(data.iter().all(|r| r[5] < 0.0), "{fixture} h = {h}");
        }
    }
}

#[test]
fn outputs_are_deterministic_and_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let o = sacenter(&["center", "--fixture", "lshape", "--h", "0.5", "--seed", "7", "--json", "--out", p]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let grid = |name: &str| {
        let path = dir.path().join(name);
        let o = sacenter(&["grad", "--fixture", "star", "--h", "1", "--grid", "4,3", "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(grid("a.csv"), grid("b.csv"));
    // only the four targets, no temporaries left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
}

#[test]
fn region_json_lists_the_polygon() {
    let out = stdout(&sacenter(&["ufr", "--fixture", "square:1"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let poly = v["polygon"].as_array().unwrap();
    assert!(!poly.is_empty());
    for p in poly {
        assert!((p["x"].as_f64().unwrap() - 0.5).abs() < 1e-2);
        assert!((p["y"].as_f64().unwrap() - 0.5).abs() < 1e-2);
    }
    assert!(v["min_dist"].as_f64().unwrap() > 0.49);
    assert!(v.get("slabs").is_none());
}

#[test]
fn one_dimensional_sweep() {
    let out = stdout(&sacenter(&["sweep", "--interval", "2", "--hs", "1,3"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("h,source,x"));
    let at_one: Vec<&str> = lines.filter(|l| l.starts_with("1,")).collect();
    assert_eq!(at_one.len(), 4);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| sacenter(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["eval", "--fixture", "square:1", "--h", "1"]), 1);
    assert_eq!(code(&["eval", "--fixture", "blob", "--h", "1", "--at", "0,0"]), 1);
    assert_eq!(code(&["eval", "--fixture", "square:1", "--h", "-1", "--at", "0,0"]), 1);
    assert_eq!(code(&["eval", "--fixture", "square:1", "--h", "1", "--grid", "1"]), 1);
    assert_eq!(code(&["eval", "--fixture", "square:1", "--h", "1", "--grid", "3", "--bounds", "-5,-5,5,5"]), 1);
    assert_eq!(code(&["eval", "--domain", "/nonexistent.json", "--h", "1", "--at", "0,0"]), 1);
    assert_eq!(code(&["check", "--suite", "12"]), 1);
}

#[test]
fn domain_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.json");
    std::fs::write(&path, r#"{"polygons": [[[0,0],[0,1],[1,1],[1,0]]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let from_file = stdout(&sacenter(&["eval", "--domain", p, "--h", "1", "--at", "0.3,0.4"]));
    let from_fixture = stdout(&sacenter(&["eval", "--fixture", "square:1", "--h", "1", "--at", "0.3,0.4"]));
    assert_eq!(from_file, from_fixture);
}

#[test]
fn check_runs_a_subset() {
    let o = sacenter(&["check", "--suite", "1,5", "--seed", "42"]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("PASS  1 ")));
    assert!(out.lines().any(|l| l.starts_with("PASS  5 ")));
}
