#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use tmkg::ingest::{DetectionRecord, ObjectDetection};
use tmkg::kg::{Binding, PatternTerm, Term, Triple, TriplePattern};

/// The eight-object scene used as the lexicalization golden.
pub const EIGHT_OBJECT_JSONL: &str = r#"{"camera_id":"cam1","frame_id":"f0001","timestamp_ms":1600000000000,"objects":[{"track_id":"t01","class":"car","lane":6,"avg_speed_mps":6.0,"trajectory":null,"bbox":null},{"track_id":"t02","class":"car","lane":6,"avg_speed_mps":1.76,"trajectory":null,"bbox":null},{"track_id":"t03","class":"car","lane":6,"avg_speed_mps":8.0,"trajectory":null,"bbox":null},{"track_id":"t04","class":"person","lane":6,"avg_speed_mps":5.0,"trajectory":null,"bbox":null},{"track_id":"t05","class":"person","lane":null,"avg_speed_mps":null,"trajectory":null,"bbox":null},{"track_id":"t06","class":"truck","lane":6,"avg_speed_mps":6.9,"trajectory":null,"bbox":null},{"track_id":"t07","class":"unknown","lane":null,"avg_speed_mps":null,"trajectory":null,"bbox":null},{"track_id":"t08","class":"unknown","lane":null,"avg_speed_mps":null,"trajectory":null,"bbox":null}]}"#;

pub const EIGHT_OBJECT_SENTENCES: [&str; 4] = [
    "There are 8 object(s) in the scene.",
    "From the object(s), 3 are car, 2 are person, 1 is a truck, and 2 are unknown.",
    "The first car is moving with the average speed of 6.0 m/s. The second car is moving with the average speed of 1.76 m/s. The third car is moving with the average speed of 8.0 m/s. The first person is moving with the average speed of 5.0 m/s. The first truck is moving with the average speed of 6.9 m/s.",
    "In lane 6 we see first car, second car, third car, first person, and first truck.",
];

pub fn record(camera: &str, frame: &str, ts: i64, objects: Vec<ObjectDetection>) -> DetectionRecord {
    DetectionRecord { camera_id: camera.into(), frame_id: frame.into(), timestamp_ms: ts, objects }
}

pub fn obj(track: &str, class: &str, lane: Option<u32>, speed: Option<f64>) -> ObjectDetection {
    let mut o = ObjectDetection::new(track, class);
    o.lane = lane;
    o.avg_speed_mps = speed;
    o
}

/// Two cars in lane 3 at 7.74 and 5.31 m/s and a bike.
pub fn two_car_bike_scene() -> DetectionRecord {
    record(
        "cam1",
        "target",
        5000,
        vec![
            obj("a1", "car", Some(3), Some(7.74)),
            obj("a2", "car", Some(3), Some(5.31)),
            obj("a3", "bike", None, None),
        ],
    )
}

/// Probe: two cars in lane 3 at about 5 m/s and a bike.
pub fn two_car_bike_probe() -> DetectionRecord {
    record(
        "probe",
        "p0",
        0,
        vec![obj("p1", "car", Some(3), Some(5.0)), obj("p2", "car", Some(3), Some(5.0)), obj("p3", "bike", None, None)],
    )
}

/// Random scene that is never a two-car/one-bike lane-3 scene: no bikes, lanes other than 3.
pub fn dissimilar_scene<R: Rng>(rng: &mut R, frame: &str) -> DetectionRecord {
    let classes = ["car", "truck", "person", "unknown"];
    let lanes = [1, 2, 4, 5];
    let n = rng.gen_range(1..=6);
    let objects = (0..n)
        .map(|i| {
            let class = *classes.choose(rng).unwrap();
            let lane = if rng.gen_bool(0.8) { Some(*lanes.choose(rng).unwrap()) } else { None };
            let speed =
                if rng.gen_bool(0.7) { Some((rng.gen_range(0.0..20.0f64) * 100.0).round() / 100.0) } else { None };
            obj(&format!("d{i}"), class, lane, speed)
        })
        .collect();
    record("cam1", frame, rng.gen_range(0..1_000_000), objects)
}

/// Random detection stream over a small vocabulary.
pub fn random_stream<R: Rng>(rng: &mut R, frames: usize, max_objects: usize) -> Vec<DetectionRecord> {
    let classes = ["car", "truck", "bike", "person", "unknown", "bus"];
    (0..frames)
        .map(|f| {
            let n = rng.gen_range(0..=max_objects);
            let objects = (0..n)
                .map(|i| {
                    let mut o = obj(
                        &format!("t{i}"),
                        classes.choose(rng).unwrap(),
                        rng.gen_bool(0.7).then(|| rng.gen_range(1..5)),
                        rng.gen_bool(0.6).then(|| (rng.gen_range(0.0..30.0f64) * 100.0).round() / 100.0),
                    );
                    if rng.gen_bool(0.2) {
                        o.trajectory = Some(vec![(0.0, 0.0, rng.gen_range(0..100)).into(), (1.0, 1.0, 200).into()]);
                    }
                    o
                })
                .collect();
            record(&format!("cam{}", rng.gen_range(0..2)), &format!("f{f}"), rng.gen_range(0..10_000), objects)
        })
        .collect()
}

fn bind(pt: &PatternTerm, value: &Term, b: &mut Binding) -> bool {
    match pt {
        PatternTerm::Const(c) => c == value,
        PatternTerm::Var(v) => match b.get(v) {
            Some(existing) => existing == value,
            None => {
                b.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

/// Nested-loop BGP evaluation straight over a triple list.
pub fn brute_force_match(triples: &[Triple], patterns: &[TriplePattern]) -> BTreeSet<Binding> {
    fn go(triples: &[Triple], patterns: &[TriplePattern], b: Binding, out: &mut BTreeSet<Binding>) {
        let Some((first, rest)) = patterns.split_first() else {
            out.insert(b);
            return;
        };
        for t in triples {
            let mut nb = b.clone();
            if bind(&first.s, &Term::Iri(t.s.clone()), &mut nb)
                && bind(&first.p, &Term::Iri(t.p.clone()), &mut nb)
                && bind(&first.o, &t.o, &mut nb)
            {
                go(triples, rest, nb, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(triples, patterns, Binding::new(), &mut out);
    out
}

/// Random 1-3 pattern query: constants sampled from the graph, a few shared variables.
pub fn random_query<R: Rng>(rng: &mut R, triples: &[Triple]) -> Vec<TriplePattern> {
    let vars = ["a", "b", "c", "d"];
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let t = triples.choose(rng).unwrap();
            let mut pick = |value: Term| -> PatternTerm {
                if rng.gen_bool(0.55) {
                    PatternTerm::Var(vars.choose(rng).unwrap().to_string())
                } else {
                    PatternTerm::Const(value)
                }
            };
            TriplePattern { s: pick(Term::Iri(t.s.clone())), p: pick(Term::Iri(t.p.clone())), o: pick(t.o.clone()) }
        })
        .collect()
}

/// Standalone FNV-1a 64 over `domain ‖ seed_le ‖ key`.
pub fn oracle_fnv(domain: u8, seed: u64, key: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let bytes = std::iter::once(domain).chain(seed.to_le_bytes()).chain(key.bytes());
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn sparse_cosine(f: &BTreeMap<String, f64>, g: &BTreeMap<String, f64>) -> f64 {
    let dot: f64 = f.iter().map(|(k, v)| v * g.get(k).unwrap_or(&0.0)).sum();
    let nf: f64 = f.values().map(|v| v * v).sum::<f64>().sqrt();
    let ng: f64 = g.values().map(|v| v * v).sum::<f64>().sqrt();
    if nf == 0.0 || ng == 0.0 {
        0.0
    } else {
        dot / (nf * ng)
    }
}
