use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pinwheel(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pinwheel"));
    cmd.args(args).env_remove("PINWHEEL_CACHE");
    if let Some(c) = cache {
        cmd.arg("--cache-dir").arg(c);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn generate_level_zero_is_one_tile() {
    let v = json(&pinwheel(&["generate", "--level", "0", "--format", "json"], None));
    assert_eq!(v["data"]["tiles"].as_array().unwrap().len(), 1);
    assert_eq!(v["data"]["level"], 0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["rule_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn generate_json_round_trips() {
    use pinwheel_core::geom::{Patch, TilePose};
    use pinwheel_core::substitution::{patch, pinwheel_rule};

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p2.json");
    let o = pinwheel(&["generate", "--level", "2", "--format", "json", "--out", file.to_str().unwrap()], None);
    assert!(stdout(&o).contains("25 tiles"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    let tiles: Vec<TilePose> = serde_json::from_value(v["data"]["tiles"].clone()).unwrap();
    assert_eq!(tiles.len(), 25);
    let loaded = Patch::new(tiles);
    assert!(loaded.interiors_disjoint());
    assert_eq!(loaded, patch(2, &pinwheel_rule(), 9).unwrap().tiles);
}

#[test]
fn generate_svg_level_one() {
    let o = pinwheel(&["generate", "--level", "1", "--format", "svg"], None);
    let svg = stdout(&o);
    assert_eq!(svg.matches("<polygon").count(), 6);
    // The supertile outline.
    assert!(
        svg.contains("-2.000000000000,-1.000000000000 2.000000000000,1.000000000000 3.000000000000,-1.000000000000")
    );
    for cap in svg.split("points=\"").skip(1) {
        for pair in cap.split('"').next().unwrap().split(' ') {
            let (x, y) = pair.split_once(',').unwrap();
            let (x, y): (f64, f64) = (x.parse().unwrap(), -y.parse::<f64>().unwrap());
            assert!((-2.0..=3.0).contains(&x) && (-1.0..=1.0).contains(&y));
        }
    }
}

#[test]
fn exit_codes() {
    let cap = pinwheel(&["generate", "--level", "10"], None);
    assert_eq!(cap.status.code(), Some(2));
    let missing = pinwheel(&["--rule", "/definitely/not/here.json", "generate", "--level", "0"], None);
    assert_eq!(missing.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("rule.json");
    let mut rule: Value =
        serde_json::from_str(&pinwheel_core::substitution::pinwheel_rule().to_json().unwrap()).unwrap();
    rule["children"][4]["trans"]["x"] = serde_json::json!([3, 1]);
    fs::write(&bad, rule.to_string()).unwrap();
    let invalid = pinwheel(&["--rule", bad.to_str().unwrap(), "generate", "--level", "0"], None);
    assert_eq!(invalid.status.code(), Some(1));
    let unwritable =
        pinwheel(&["generate", "--level", "0", "--format", "json", "--out", "/definitely/not/here.json"], None);
    assert_eq!(unwritable.status.code(), Some(3));
}

#[test]
fn rule_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rule.json");
    fs::write(&file, pinwheel_core::substitution::pinwheel_rule().to_json().unwrap()).unwrap();
    let a = stdout(&pinwheel(&["generate", "--level", "3", "--format", "json"], None));
    let b =
        stdout(&pinwheel(&["--rule", file.to_str().unwrap(), "generate", "--level", "3", "--format", "json"], None));
    assert_eq!(a, b);
}

/// One pass over the cached pipelines: the enumeration runs once.
#[test]
fn cached_pipelines() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");

    let text = stdout(&pinwheel(&["coronas"], Some(&cache)));
    assert!(text.contains("classes = 108 (54 + 54 mirrored)"), "{text}");
    let hash_dirs: Vec<_> = fs::read_dir(&cache).unwrap().collect();
    assert_eq!(hash_dirs.len(), 1);

    let text = stdout(&pinwheel(&["perron"], Some(&cache)));
    assert!(text.contains("lambda = 5; D = 33000; gcd = 1; rank(A−5I) = 107"), "{text}");

    let text = stdout(&pinwheel(&["gaplabel"], Some(&cache)));
    assert_eq!(text.lines().last(), Some("module = (1/264)·Z[1/5]"));

    let report = json(&pinwheel(&["gaplabel", "--format", "json"], Some(&cache)));
    assert_eq!(report["data"], serde_json::json!({"coefficient": [1, 264], "base": 5, "gcd": 1, "denominator": 33000}));

    // Determinism: identical invocations give identical bytes.
    let a = stdout(&pinwheel(&["perron", "--format", "csv"], Some(&cache)));
    let b = stdout(&pinwheel(&["perron", "--format", "csv"], Some(&cache)));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 109);

    let m = stdout(&pinwheel(&["matrix", "--format", "csv"], Some(&cache)));
    let rows: Vec<Vec<i64>> = m.lines().map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 108);
    assert!((0..108).all(|j| rows.iter().map(|r| r[j]).sum::<i64>() == 5));

    let sheet = stdout(&pinwheel(&["coronas", "--format", "svg"], Some(&cache)));
    assert_eq!(sheet.matches("<g ").count(), 108);

    let vector = dir.path().join("ones.json");
    fs::write(&vector, serde_json::to_string(&vec![1; 108]).unwrap()).unwrap();
    let text = stdout(&pinwheel(&["state", "--vector", vector.to_str().unwrap(), "--level", "1"], Some(&cache)));
    assert_eq!(text.trim(), "state = 1");
    let v = json(&pinwheel(&["freq", "--class", "0", "--level", "1", "--format", "json"], Some(&cache)));
    assert_eq!(v["data"]["in_module"], true);

    let h = json(&pinwheel(&["complex", "cohomology", "--format", "json"], Some(&cache)));
    let ranks: Vec<u64> =
        h["data"]["degrees"].as_array().unwrap().iter().map(|d| d["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [1, 1, 13]);
    let text = stdout(&pinwheel(&["complex", "subst-action"], Some(&cache)));
    assert!(text.contains("commutes with boundary: true"), "{text}");
    assert!(text.contains("refinement matrix = A ⊗ I8: true"), "{text}");
    let text = stdout(&pinwheel(&["complex", "build"], Some(&cache)));
    assert!(text.contains("283 vertices, 1134 edges, 864 triangles"), "{text}");

    // Cache safety: results survive deleting or corrupting the cache.
    let cached = json(&pinwheel(&["perron", "--format", "json"], Some(&cache)));
    let entry = fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path().join("classes.json");
    fs::write(&entry, "{ not json").unwrap();
    let fresh = json(&pinwheel(&["perron", "--format", "json"], Some(&cache)));
    assert_eq!(cached, fresh);
}
