use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use graph_uncertainty::io::{read_csv_rows, read_edge_list, read_point_cloud};
use serde_json::Value;
use tempfile::TempDir;

const SMALL_SENSOR: &str = "sensor:40,0.35,3";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graph-uncertainty"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn points(v: &Value) -> Vec<[f64; 2]> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| [p[0].as_f64().unwrap(), p[1].as_f64().unwrap()])
        .collect()
}

fn shoelace(p: &[[f64; 2]]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

fn out_dir(tmp: &TempDir, name: &str) -> String {
    tmp.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn bipartite_range_is_the_unit_square() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "b");
    run_ok(&["range", "--graph", "fixture:bipartite4", "--out", &dir]);
    let doc = json(&Path::new(&dir).join("range.json"));
    assert!((shoelace(&points(&doc["outer"])) - 1.0).abs() < 1e-6);
    assert!((doc["area_gap"].as_f64().unwrap()).abs() < 1e-9);
    for key in ["fg", "fg*", "f*g", "f*g*"] {
        assert!((doc["sigma1_corners"][key].as_f64().unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn verify_fixtures() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "b");
    run_ok(&["verify", "--graph", "fixture:bipartite4", "--samples", "2000", "--out", &dir]);
    let doc = json(&Path::new(&dir).join("verify.json"));
    assert_eq!(doc["pass"], Value::Bool(true));
    assert_eq!(doc["all_corners_vacuous"], Value::Bool(true));

    let dir = out_dir(&tmp, "k");
    run_ok(&["verify", "--graph", "fixture:complete4", "--samples", "2000", "--out", &dir]);
    let doc = json(&Path::new(&dir).join("verify.json"));
    assert_eq!(doc["attains_one_one"], Value::Bool(true));
    assert!((doc["sigma1"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn verify_strict_pair_on_random_graph() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "v");
    let edges = tmp.path().join("g.txt");
    fs::write(&edges, "n 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 3\n1 4\n").unwrap();
    run_ok(&[
        "verify",
        "--graph",
        edges.to_str().unwrap(),
        "--pair",
        "custom:f=1/0.5/0.2/0.1/0.3/0,g=1/0.8/0.4/0.1/0/0.2",
        "--angles",
        "uniform:32",
        "--samples",
        "3000",
        "--out",
        &dir,
    ]);
    let doc = json(&Path::new(&dir).join("verify.json"));
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"strict-uncertainty"));
    assert!(doc["sigma1"].as_f64().unwrap() < 1.0 - 1e-12);
}

#[test]
fn outputs_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    let a = out_dir(&tmp, "a");
    let b = out_dir(&tmp, "b");
    for dir in [&a, &b] {
        run_ok(&["range", "--graph", SMALL_SENSOR, "--angles", "adaptive:1e-3,64", "--out", dir]);
        run_ok(&["spectrum", "--graph", SMALL_SENSOR, "--pair", "distance-projection:bandwidth=10", "--out", dir]);
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for name in names {
        let x = fs::read(Path::new(&a).join(&name)).unwrap();
        let y = fs::read(Path::new(&b).join(&name)).unwrap();
        assert_eq!(x, y, "{name:?} differs between runs");
    }
    let header = fs::read_to_string(Path::new(&a).join("boundary.csv")).unwrap();
    assert!(header.lines().nth(1).unwrap().contains("seed=3"));
}

#[test]
fn svg_outputs_are_well_formed() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "s");
    run_ok(&["range", "--graph", SMALL_SENSOR, "--angles", "uniform:16", "--scatter", "r", "--out", &dir]);
    run_ok(&["spectrum", "--graph", SMALL_SENSOR, "--format", "svg", "--out", &dir]);
    run_ok(&["eigvec", "--graph", "fixture:complete4", "--k", "1", "--format", "svg", "--out", &dir]);
    let mut count = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "svg") {
            let text = fs::read_to_string(&path).unwrap();
            let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{path:?}: {e}"));
            assert_eq!(doc.root_element().tag_name().name(), "svg");
            count += 1;
        }
    }
    assert_eq!(count, 4);
}

#[test]
fn csv_round_trips_through_readers() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "r");
    run_ok(&["range", "--graph", SMALL_SENSOR, "--angles", "uniform:24", "--out", &dir]);
    let rows = read_csv_rows(&fs::read_to_string(Path::new(&dir).join("boundary.csv")).unwrap()).unwrap();
    let doc = json(&Path::new(&dir).join("range.json"));
    let expected = points(&doc["boundary_points"]);
    assert_eq!(rows.len(), expected.len());
    for (r, e) in rows.iter().zip(&expected) {
        assert_eq!(r.as_slice(), e.as_slice());
    }

    let gdir = out_dir(&tmp, "g");
    run_ok(&["graph", "build", "--graph", SMALL_SENSOR, "--out", &gdir]);
    let cloud = read_point_cloud(&fs::read_to_string(Path::new(&gdir).join("points.csv")).unwrap()).unwrap();
    let edges_path = Path::new(&gdir).join("edges.txt");
    let graph = read_edge_list(&fs::read_to_string(&edges_path).unwrap()).unwrap();
    assert_eq!(cloud.len(), 40);
    assert_eq!(graph.n(), 40);

    let points_path = Path::new(&gdir).join("points.csv");
    let again = out_dir(&tmp, "g2");
    run_ok(&["graph", "build", "--graph", points_path.to_str().unwrap(), "--radius", "0.35", "--out", &again]);
    let rebuilt = read_edge_list(&fs::read_to_string(Path::new(&again).join("edges.txt")).unwrap()).unwrap();
    assert_eq!(rebuilt.adjacency(), graph.adjacency());
    let summary = run_ok(&["graph", "inspect", "--graph", edges_path.to_str().unwrap()]);
    assert!(summary.contains(&format!("edges: {}", graph.edge_count())));
}

#[test]
fn rotated_scatter_stays_inside_outer_polygon() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "r");
    let stdout = run_ok(&[
        "range", "--graph", SMALL_SENSOR, "--scatter", "r", "--theta", "9pi/20", "--angles", "uniform:32",
        "--format", "json", "--out", &dir,
    ]);
    assert!(stdout.contains("scatter points inside outer polygon: 40/40"), "{stdout}");
}

#[test]
fn bandlimited_top_eigenvector() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "e");
    let pair = "distance-projection:bandwidth=10";
    let mut m = Vec::new();
    for k in ["1", "2", "5"] {
        run_ok(&["eigvec", "--graph", SMALL_SENSOR, "--pair", pair, "--k", k, "--format", "json", "--out", &dir]);
        let doc = json(&Path::new(&dir).join(format!("eigvec_s{k}.json")));
        assert!(doc["energy_outside_band"].as_f64().unwrap() < 1e-9);
        m.push(doc["m"].as_f64().unwrap());
    }
    assert!(m[0] > m[1] && m[0] > m[2]);
}

#[test]
fn all_ones_pair_has_unit_spectrum() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "s");
    run_ok(&[
        "spectrum", "--graph", "fixture:complete4", "--pair", "custom:f=1/1/1/1,g=1/1/1/1", "--format", "json",
        "--out", &dir,
    ]);
    let doc = json(&Path::new(&dir).join("spectrum.json"));
    let pairs = doc["pairs"].as_array().unwrap();
    let custom = pairs.last().unwrap();
    assert_eq!(custom["pair"], "custom");
    for s in custom["sigma"].as_array().unwrap() {
        assert!((s.as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn config_file_with_flag_override() {
    let tmp = TempDir::new().unwrap();
    let cfg = tmp.path().join("run.cfg");
    let dir = out_dir(&tmp, "from-file");
    fs::write(
        &cfg,
        format!(
            "# small run\n[graph]\nsource = {SMALL_SENSOR}\n\n[pair]\nkind = distance-projection\nbandwidth = 8\n\n[angles]\nschedule = uniform:12\n\n[output]\ndir = {dir}\nformat = json\n"
        ),
    )
    .unwrap();
    run_ok(&["range", "--config", cfg.to_str().unwrap()]);
    let doc = json(&Path::new(&dir).join("range.json"));
    assert_eq!(doc["angles"].as_array().unwrap().len(), 12);
    assert_eq!(doc["meta"]["pair"], "distance-projection:bandwidth=8");

    let other = out_dir(&tmp, "override");
    run_ok(&["range", "--config", cfg.to_str().unwrap(), "--angles", "uniform:20", "--out", &other]);
    let doc = json(&Path::new(&other).join("range.json"));
    assert_eq!(doc["angles"].as_array().unwrap().len(), 20);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "x");
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["range", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["range", "--out", &dir]).status.code(), Some(1));
    let missing = tmp.path().join("missing.csv");
    assert_eq!(
        run(&["range", "--graph", missing.to_str().unwrap(), "--out", &dir]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["range", "--graph", "fixture:complete4", "--pair", "gaussian", "--out", &dir]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["eigvec", "--graph", "fixture:complete4", "--k", "5", "--out", &dir]).status.code(),
        Some(1)
    );
    let two = tmp.path().join("two.txt");
    fs::write(&two, "n 2\n0 1\n").unwrap();
    let out = run(&["range", "--graph", two.to_str().unwrap(), "--pair", "custom:f=1/0,g=1/0", "--out", &dir]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n >= 3"));
    let bad = tmp.path().join("bad.csv");
    fs::write(&bad, "0.1,0.2\n0.3,oops\n").unwrap();
    let out = run(&["range", "--graph", bad.to_str().unwrap(), "--out", &dir]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn dual_coefficient_violations_fail_verify_by_name() {
    let tmp = TempDir::new().unwrap();
    let dir = out_dir(&tmp, "ll");
    let common = ["--graph", "sensor:40,0.35,2", "--angles", "uniform:16", "--samples", "500", "--out"];
    let mut args = vec!["verify", "--pair", "laplace-laplace"];
    args.extend(common);
    args.push(&dir);
    let out = run(&args);
    let doc = json(&Path::new(&dir).join("verify.json"));
    let filters = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "filters")
        .unwrap();
    assert_eq!(filters["pass"], false);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("filters"));

    let mut args = vec!["verify", "--pair", "laplace-laplace:dual=false"];
    args.extend(common);
    args.push(&dir);
    assert_eq!(run(&args).status.code(), Some(0));
}
