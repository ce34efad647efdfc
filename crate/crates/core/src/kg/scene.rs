//! Scene instantiation (detections to triples) and the read side: scene
//! subgraph extraction and a structured view over a scene's triples.

use std::collections::BTreeSet;

use super::graph::Graph;
use super::ontology::{self as tm, TMI};
use super::term::{Iri, Term, Triple};
use super::KgError;
use crate::ingest::DetectionRecord;

/// Percent-encodes everything outside the unreserved set so minted IRIs are
/// injective in their components.
fn encode_segment(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

pub fn scene_iri(camera_id: &str, frame_id: &str) -> Iri {
    Iri::new_unchecked(format!("{TMI}scene/{}/{}", encode_segment(camera_id), encode_segment(frame_id)))
}

pub fn camera_iri(camera_id: &str) -> Iri {
    Iri::new_unchecked(format!("{TMI}camera/{}", encode_segment(camera_id)))
}

pub fn object_iri(camera_id: &str, frame_id: &str, track_id: &str) -> Iri {
    Iri::new_unchecked(format!(
        "{TMI}obj/{}/{}/{}",
        encode_segment(camera_id),
        encode_segment(frame_id),
        encode_segment(track_id)
    ))
}

pub fn lane_iri(camera_id: &str, lane: u32) -> Iri {
    Iri::new_unchecked(format!("{TMI}lane/{}/{lane}", encode_segment(camera_id)))
}

/// Maps one validated detection record to its triples.
pub fn instantiate_scene(record: &DetectionRecord) -> BTreeSet<Triple> {
    let scene = scene_iri(&record.camera_id, &record.frame_id);
    let mut out = BTreeSet::new();
    out.insert(Triple::new(scene.clone(), tm::rdf_type(), tm::scene()));
    out.insert(Triple::new(scene.clone(), tm::at_time(), Term::integer(record.timestamp_ms)));
    out.insert(Triple::new(scene.clone(), tm::captured_by(), camera_iri(&record.camera_id)));

    for obj in &record.objects {
        let o = object_iri(&record.camera_id, &record.frame_id, &obj.track_id);
        out.insert(Triple::new(scene.clone(), tm::has_object(), o.clone()));
        out.insert(Triple::new(o.clone(), tm::rdf_type(), tm::class_for_label(&obj.class_label)));
        out.insert(Triple::new(o.clone(), tm::track_id(), Term::string(obj.track_id.clone())));
        if let Some(speed) = obj.avg_speed_mps {
            out.insert(Triple::new(o.clone(), tm::average_speed(), Term::decimal(speed)));
        }
        if let Some(t) = obj.first_seen_ms() {
            out.insert(Triple::new(o.clone(), tm::at_time(), Term::integer(t)));
        }
        if let Some(lane) = obj.lane {
            let l = lane_iri(&record.camera_id, lane);
            out.insert(Triple::new(o.clone(), tm::in_lane(), l.clone()));
            out.insert(Triple::new(l.clone(), tm::rdf_type(), tm::lane()));
            out.insert(Triple::new(l, tm::lane_number(), Term::integer(lane as i64)));
        }
    }
    out
}

/// Scene IRIs in the graph, sorted.
pub fn scenes(graph: &Graph) -> Vec<Iri> {
    let mut v = graph.subjects(&tm::rdf_type(), &tm::scene().into());
    v.sort();
    v
}

fn asserted_about(graph: &Graph, s: &Iri) -> Vec<Triple> {
    graph.triples_matching(Some(s), None, None).into_iter().filter(|t| graph.contains_asserted(t)).collect()
}

/// The scene node's triples plus those of the objects and lanes it reaches
/// through `tm:hasObject` / `tm:inLane`. Entailed triples are left out.
pub fn scene_subgraph(graph: &Graph, scene: &Iri) -> Result<BTreeSet<Triple>, KgError> {
    if !graph.contains_asserted(&Triple::new(scene.clone(), tm::rdf_type(), tm::scene())) {
        return Err(KgError::UnknownScene(scene.as_str().to_string()));
    }
    let mut out: BTreeSet<Triple> = asserted_about(graph, scene).into_iter().collect();
    let mut lanes = BTreeSet::new();
    let objects: Vec<Iri> =
        out.iter().filter(|t| t.p == tm::has_object()).filter_map(|t| t.o.as_iri().cloned()).collect();
    for obj in objects {
        for t in asserted_about(graph, &obj) {
            if t.p == tm::in_lane() {
                if let Some(l) = t.o.as_iri() {
                    lanes.insert(l.clone());
                }
            }
            out.insert(t);
        }
    }
    for lane in lanes {
        out.extend(asserted_about(graph, &lane));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub iri: Iri,
    /// Lowercase class label (`car`, `truck`, ...).
    pub class: String,
    pub track_id: String,
    pub first_seen_ms: i64,
    pub speed_mps: Option<f64>,
    pub lane: Option<u32>,
    pub lane_iri: Option<Iri>,
    /// 1-based position among same-class objects by first appearance.
    pub ordinal: usize,
}

/// Structured reading of a scene subgraph.
///
/// Objects are ordered by class label, then first-appearance time, then
/// track id; `ordinal` counts within each class in that order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneView {
    pub iri: Option<Iri>,
    pub timestamp_ms: Option<i64>,
    pub objects: Vec<SceneObject>,
}

impl SceneView {
    pub fn from_triples(triples: &BTreeSet<Triple>) -> Self {
        let ty = tm::rdf_type();
        let scene_class: Term = tm::scene().into();
        let iri = triples.iter().find(|t| t.p == ty && t.o == scene_class).map(|t| t.s.clone());
        let Some(scene) = iri.clone() else {
            return Self::default();
        };
        let about = |s: &Iri, p: &Iri| -> Vec<&Term> {
            triples.iter().filter(|t| &t.s == s && &t.p == p).map(|t| &t.o).collect()
        };
        let timestamp_ms = about(&scene, &tm::at_time()).first().and_then(|t| t.as_f64()).map(|x| x as i64);

        let mut objects: Vec<SceneObject> = about(&scene, &tm::has_object())
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .map(|o| {
                let class = about(&o, &ty)
                    .into_iter()
                    .filter_map(|t| t.as_iri())
                    .map(|c| match tm::label_for_class(c) {
                        Some(l) => l.to_string(),
                        None => local_name(c).to_lowercase(),
                    })
                    .min()
                    .unwrap_or_else(|| "unknown".to_string());
                let track_id = about(&o, &tm::track_id())
                    .first()
                    .and_then(|t| t.as_lexical())
                    .map(str::to_string)
                    .unwrap_or_else(|| o.as_str().to_string());
                let first_seen_ms = about(&o, &tm::at_time())
                    .first()
                    .and_then(|t| t.as_f64())
                    .map(|x| x as i64)
                    .or(timestamp_ms)
                    .unwrap_or(0);
                let speed_mps = about(&o, &tm::average_speed()).first().and_then(|t| t.as_f64());
                let lane_iri = about(&o, &tm::in_lane()).first().and_then(|t| t.as_iri()).cloned();
                let lane = lane_iri.as_ref().and_then(|l| {
                    about(l, &tm::lane_number())
                        .first()
                        .and_then(|t| t.as_f64())
                        .map(|n| n as u32)
                        .or_else(|| l.as_str().rsplit('/').next()?.parse().ok())
                });
                SceneObject { iri: o, class, track_id, first_seen_ms, speed_mps, lane, lane_iri, ordinal: 0 }
            })
            .collect();

        objects.sort_by(|a, b| {
            (&a.class, a.first_seen_ms, &a.track_id, &a.iri).cmp(&(&b.class, b.first_seen_ms, &b.track_id, &b.iri))
        });
        let mut prev: Option<String> = None;
        let mut k = 0;
        for o in &mut objects {
            if prev.as_deref() != Some(o.class.as_str()) {
                prev = Some(o.class.clone());
                k = 0;
            }
            k += 1;
            o.ordinal = k;
        }
        Self { iri, timestamp_ms, objects }
    }

    /// Class labels with their counts, alphabetical.
    pub fn class_counts(&self) -> Vec<(&str, usize)> {
        let mut out: Vec<(&str, usize)> = Vec::new();
        for o in &self.objects {
            match out.last_mut() {
                Some((c, n)) if *c == o.class => *n += 1,
                _ => out.push((&o.class, 1)),
            }
        }
        out
    }
}

/// Label part of an IRI: text after the last `#` or `/`.
pub fn local_name(iri: &Iri) -> &str {
    let s = iri.as_str();
    s.rfind(['#', '/']).map_or(s, |i| &s[i + 1..])
}
