use std::fs;
use std::path::Path;

use tempfile::TempDir;

const EIGHT_OBJECTS: &str = r#"{"camera_id":"cam1","frame_id":"f0001","timestamp_ms":1600000000000,"objects":[{"track_id":"t01","class":"car","lane":6,"avg_speed_mps":6.0},{"track_id":"t02","class":"car","lane":6,"avg_speed_mps":1.76},{"track_id":"t03","class":"car","lane":6,"avg_speed_mps":8.0},{"track_id":"t04","class":"person","lane":6,"avg_speed_mps":5.0},{"track_id":"t05","class":"person"},{"track_id":"t06","class":"truck","lane":6,"avg_speed_mps":6.9},{"track_id":"t07","class":"unknown"},{"track_id":"t08","class":"unknown"}]}"#;

const GOLDEN: &str = "There are 8 object(s) in the scene. \
From the object(s), 3 are car, 2 are person, 1 is a truck, and 2 are unknown. \
The first car is moving with the average speed of 6.0 m/s. \
The second car is moving with the average speed of 1.76 m/s. \
The third car is moving with the average speed of 8.0 m/s. \
The first person is moving with the average speed of 5.0 m/s. \
The first truck is moving with the average speed of 6.9 m/s. \
In lane 6 we see first car, second car, third car, first person, and first truck.";

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tmkg(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = tmkg_cli::run(args.iter().copied(), &mut out, &mut err);
    Out { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = p(dir, name);
    fs::write(&path, text).unwrap();
    path
}

const SYNTH: &str = r#"{"synth": {"frames": 30, "camera_id": "c", "noise_bound": 1,
  "rates": [{"lane": 1, "class": "car", "count": 2, "speed_mps": 9.0},
            {"lane": 2, "class": "bike", "count": 1, "speed_mps": 4.0}],
  "episodes": [{"start_frame": 10, "end_frame": 15, "lane": 1, "extra_car_count": 6}]}}"#;

fn synth_kg(dir: &TempDir) -> String {
    let cfg = write(dir, "cfg.json", SYNTH);
    let (d, kg) = (p(dir, "d.jsonl"), p(dir, "g.nt"));
    assert_eq!(tmkg(&["synth", "--config", &cfg, "--seed", "3", "--out", &d]).code, 0);
    assert_eq!(tmkg(&["ingest", "--in", &d, "--kg", &kg]).code, 0);
    kg
}

#[test]
fn stats_on_empty_snapshot() {
    let dir = TempDir::new().unwrap();
    let kg = write(&dir, "empty.nt", "");
    let out = tmkg(&["stats", "--kg", &kg]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "{\"triples\":0,\"scenes\":0}\n");
}

#[test]
fn ingest_then_lexicalize_eight_objects() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.jsonl", EIGHT_OBJECTS);
    let kg = p(&dir, "out.nt");
    let out = tmkg(&["ingest", "--in", &input, "--kg", &kg]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = tmkg(&["lexicalize", "--kg", &kg]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let line: serde_json::Value = serde_json::from_str(out.stdout.trim()).unwrap();
    assert_eq!(line["text"], GOLDEN);
    assert_eq!(line["scene"], "http://example.org/tmkg/scene/cam1/f0001");
    assert_eq!(fs::read_to_string(&input).unwrap(), EIGHT_OBJECTS);
}

#[test]
fn usage_errors_exit_1() {
    let out = tmkg(&["similar"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("Usage"), "{}", out.stderr);
    assert_eq!(tmkg(&["similar", "--scene", "tmi:scene/a/b"]).code, 1);
    assert_eq!(tmkg(&["frobnicate"]).code, 1);
    assert_eq!(tmkg(&["--help"]).code, 0);
}

#[test]
fn bad_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.jsonl", "{not json}\n");
    let out = tmkg(&["ingest", "--in", &bad, "--kg", &p(&dir, "g.nt")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1"), "{}", out.stderr);
    assert_eq!(tmkg(&["stats", "--kg", &p(&dir, "missing.nt")]).code, 2);
    let kg = write(&dir, "g2.nt", "<a> <b> .\n");
    assert_eq!(tmkg(&["stats", "--kg", &kg]).code, 2);
}

#[test]
fn remote_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    let kg = synth_kg(&dir);
    // Nothing listens on the discard port.
    let out = tmkg(&[
        "query",
        "--kg",
        &kg,
        "--text",
        "cars",
        "--k",
        "1",
        "--embedder",
        "remote",
        "--endpoint",
        "http://127.0.0.1:9",
    ]);
    assert_eq!(out.code, 3, "{}", out.stderr);
    assert_eq!(tmkg(&["query", "--kg", &kg, "--text", "cars", "--embedder", "remote"]).code, 1);
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let kg = synth_kg(&dir);
    let scene = "tmi:scene/c/f00012";
    let runs = [
        vec!["stats", "--kg", &kg],
        vec!["lexicalize", "--kg", &kg],
        vec!["export", "--kg", &kg],
        vec!["similar", "--kg", &kg, "--scene", scene, "--backend", "structural", "--k", "3"],
        vec!["similar", "--kg", &kg, "--scene", scene, "--backend", "lexical", "--k", "3"],
        vec!["similar", "--kg", &kg, "--scene", scene, "--backend", "semantic", "--k", "3"],
        vec!["query", "--kg", &kg, "--text", "many cars in lane 1", "--k", "3"],
        vec!["match", "--kg", &kg, "--pattern", "?s tm:hasObject ?o", "--pattern", "?o rdf:type tm:Bike"],
    ];
    for args in &runs {
        let a = tmkg(args);
        let b = tmkg(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.stderr);
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let sim = tmkg(&runs[3]).stdout;
    assert_eq!(sim.lines().count(), 3);
    assert!(!sim.contains("f00012\""));
    let bikes = fs::read_to_string(p(&dir, "d.jsonl")).unwrap().matches("\"class\":\"bike\"").count();
    assert!(bikes > 0);
    assert_eq!(tmkg(&runs[7]).stdout.lines().count(), bikes);
}

#[test]
fn congestion_and_features_files() {
    let dir = TempDir::new().unwrap();
    let kg = synth_kg(&dir);
    let rules = write(
        &dir,
        "rules.json",
        r#"[{"name":"queue","all":[{"feature":"count:car:lane:1","op":">=","value":6}],"label":"traffic_queue"}]"#,
    );
    let (report, feats) = (p(&dir, "report.json"), p(&dir, "f.jsonl"));
    assert_eq!(tmkg(&["congestion", "--kg", &kg, "--rules", &rules, "--out", &report]).code, 0);
    let reports: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(reports.len(), 30);
    let top: Vec<&str> = reports[..6].iter().map(|r| r["scene"].as_str().unwrap()).collect();
    for frame in 10..=15 {
        assert!(top.iter().any(|s| s.ends_with(&format!("f{frame:05}"))), "{top:?}");
    }
    assert_eq!(reports[0]["labels"][0], "traffic_queue");

    assert_eq!(tmkg(&["features", "--kg", &kg, "--out", &feats]).code, 0);
    let first: serde_json::Value =
        serde_json::from_str(fs::read_to_string(&feats).unwrap().lines().next().unwrap()).unwrap();
    assert!(first["features"]["count:car"].as_f64().unwrap() >= 1.0);
}

#[test]
fn export_import_round_trip() {
    let dir = TempDir::new().unwrap();
    let kg = synth_kg(&dir);
    let exported = p(&dir, "x.nt");
    let copy = p(&dir, "copy.nt");
    assert_eq!(tmkg(&["export", "--kg", &kg, "--out", &exported]).code, 0);
    assert_eq!(tmkg(&["import", "--in", &exported, "--kg", &copy]).code, 0);
    assert_eq!(fs::read(&kg).unwrap(), fs::read(&copy).unwrap());
}

#[test]
fn config_supplies_kg_and_background() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.jsonl", EIGHT_OBJECTS);
    write(
        &dir,
        "bg.nt",
        "<http://example.org/tmkg/road/1> <http://example.org/tmo#hasLaneCount> \"3\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n",
    );
    let cfg = write(&dir, "cfg.json", r#"{"paths": {"kg": "snap.nt", "background": ["bg.nt"]}}"#);
    assert_eq!(tmkg(&["ingest", "--config", &cfg, "--in", &input]).code, 0);
    assert!(Path::new(&p(&dir, "snap.nt")).exists());
    let out = tmkg(&["match", "--config", &cfg, "--pattern", "?r tm:hasLaneCount ?n"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().count(), 1);

    let broken = write(&dir, "broken.json", r#"{"hashing": {"m": 0}}"#);
    assert_eq!(tmkg(&["stats", "--config", &broken, "--kg", &p(&dir, "snap.nt")]).code, 2);
}
