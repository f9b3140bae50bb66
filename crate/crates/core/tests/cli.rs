use std::path::Path;
use std::process::{Command, Output};

use ambush::environment::HeightGrid;
use ambush::io::ascii_grid::write_ascii_grid;

const ARTIFACTS: [&str; 4] = ["strategy.geojson", "strategy.svg", "metrics.csv", "report.json"];

const DIAMOND_ROADS: &str = r#"{
  "nodes": [
    {"id": 1, "lat": 43.7300, "lon": 7.4200},
    {"id": 2, "lat": 43.7310, "lon": 7.4220},
    {"id": 3, "lat": 43.7290, "lon": 7.4220},
    {"id": 4, "lat": 43.7300, "lon": 7.4240}
  ],
  "ways": [
    {"id": 10, "nodes": [1, 2, 4], "maxspeed": 13.9},
    {"id": 20, "nodes": [1, 3, 4], "maxspeed": 13.9}
  ]
}"#;

fn ambush(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ambush"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_terrain(dir: &Path) {
    let grid = HeightGrid::from_fn(21, 21, 10.0, |x, y| 0.05 * x + 0.02 * y).unwrap();
    std::fs::write(dir.join("terrain.asc"), write_ascii_grid(&grid)).unwrap();
    std::fs::write(
        dir.join("scenario.json"),
        r#"{"source": {"heightmap": "terrain.asc"}, "origin": [15, 100], "destination": [185, 100], "reach": 40, "n_nodes": 100}"#,
    )
    .unwrap();
}

#[test]
fn solve_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(&["solve", "--scenario", "scenario.json", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ARTIFACTS {
        let bytes = std::fs::read(dir.path().join("run").join(name)).unwrap();
        assert!(!bytes.is_empty(), "{name} is empty");
    }
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("run/report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "optimal");
    assert!(stdout(&out).contains("z*"));
}

#[test]
fn symmetric_road_diamond_splits_evenly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("roads.json"), DIAMOND_ROADS).unwrap();
    std::fs::write(
        dir.path().join("scenario.json"),
        r#"{"source": {"road_graph": "roads.json"},
            "origin": {"lat": 43.7300, "lon": 7.4200},
            "destination": {"lat": 43.7300, "lon": 7.4240}}"#,
    )
    .unwrap();
    let out = ambush(&["solve", "--scenario", "scenario.json", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("run/report.json")).unwrap()).unwrap();
    let v = report["outcome"].as_f64().unwrap();
    assert!((v - 0.5).abs() <= 1e-9, "V = {v}");
}

#[test]
fn missing_destination_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"source": {"heightmap": "terrain.asc"}, "origin": [15, 100]}"#,
    )
    .unwrap();
    let out = ambush(&["solve", "--scenario", "bad.json", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("destination"));
    assert!(!dir.path().join("run").exists());
}

#[test]
fn unreadable_terrain_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("scenario.json"),
        r#"{"source": {"heightmap": "nowhere.asc"}, "origin": [15, 100], "destination": [185, 100]}"#,
    )
    .unwrap();
    let out = ambush(&["solve", "--scenario", "scenario.json", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("nowhere.asc"));
}

#[test]
fn validate_echoes_the_resolved_configuration() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(&["validate", "--scenario", "scenario.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let start = text.find('{').unwrap();
    let echoed: serde_json::Value = serde_json::from_str(&text[start..]).unwrap();
    assert_eq!(echoed["n_nodes"], 100);
    assert_eq!(echoed["reach"], 40.0);
    assert_eq!(echoed["vehicle"], "car");
    assert!(!dir.path().join("ambush-out").exists());
}

#[test]
fn validate_reports_every_missing_field() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"source": {"heightmap": "terrain.asc"}}"#).unwrap();
    let out = ambush(&["validate", "--scenario", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("origin") && err.contains("destination"), "{err}");
}

#[test]
fn sweep_needs_sizes() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(&["sweep", "--scenario", "scenario.json", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("sizes"));
}

#[test]
fn sweep_repeats_the_random_method_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(
        &[
            "sweep", "--scenario", "scenario.json", "--out", "run", "--sizes", "50,100", "--methods", "rdm,uniD",
            "--seeds", "10",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("run/sweep.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    for n in ["50", "100"] {
        assert_eq!(rows.iter().filter(|r| r[0] == "rdm" && r[1] == n).count(), 10);
        assert_eq!(rows.iter().filter(|r| r[0] == "uniD" && r[1] == n).count(), 1);
    }
    assert_eq!(stdout(&out), csv);
}

#[test]
fn simulate_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(
        &["simulate", "--scenario", "scenario.json", "--out", "run", "--trials", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("trials"));
}

#[test]
fn simulate_agrees_with_the_analytic_outcome() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(
        &["simulate", "--scenario", "scenario.json", "--out", "run", "--trials", "20000"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("run/simulation.json")).unwrap()).unwrap();
    assert_eq!(report["within_3se"], true);
}

#[test]
fn identical_inputs_give_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    for out in ["a", "b"] {
        let o = ambush(&["solve", "--scenario", "scenario.json", "--out", out], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ARTIFACTS {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert!(a == b, "{name} differs between runs");
    }
}

#[test]
fn overrides_take_precedence_over_the_file() {
    let dir = tempfile::tempdir().unwrap();
    write_terrain(dir.path());
    let out = ambush(
        &["solve", "--scenario", "scenario.json", "--out", "run", "--nodes", "49", "--method", "uni8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("run/metrics.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((row[0], row[1]), ("uni8", "49"));
}
