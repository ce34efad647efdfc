//! Template lexicalization of scene subgraphs and background axioms.
//!
//! Scene sentences come in a fixed order: object count, class composition,
//! one speed sentence per object with a speed, one sentence per occupied lane.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::kg::ontology::{self as tm, TMI};
use crate::kg::{Graph, Iri, SceneObject, SceneView, Term, Triple};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDescription {
    #[serde(rename = "scene")]
    pub scene_iri: String,
    #[serde(skip)]
    pub sentences: Vec<String>,
    pub text: String,
}

impl SceneDescription {
    pub fn new(scene_iri: impl Into<String>, sentences: Vec<String>) -> Self {
        let text = sentences.join(" ");
        Self { scene_iri: scene_iri.into(), sentences, text }
    }
}

const ORDINALS: [&str; 10] =
    ["first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth"];

pub fn ordinal_word(n: usize) -> String {
    match n {
        1..=10 => ORDINALS[n - 1].to_string(),
        _ => format!("{n}th"),
    }
}

const NUMBER_WORDS: [&str; 13] =
    ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve"];

pub fn number_word(n: i64) -> String {
    match usize::try_from(n) {
        Ok(i) if i < NUMBER_WORDS.len() => NUMBER_WORDS[i].to_string(),
        _ => n.to_string(),
    }
}

/// Speed with two fraction digits rounded half-up on the shortest decimal
/// form of `x`, then one trailing zero trimmed: `6` is `6.0`, `6.9` is `6.9`,
/// `1.755` is `1.76`.
pub fn format_speed(x: f64) -> String {
    let negative = x < 0.0;
    let repr = format!("{}", x.abs());
    let (int_part, frac_part) = repr.split_once('.').unwrap_or((&repr, ""));
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    digits.push(frac.first().copied().unwrap_or(0));
    digits.push(frac.get(1).copied().unwrap_or(0));
    if frac.get(2).is_some_and(|&d| d >= 5) {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - 2;
    let int_str: String = digits[..split].iter().map(|d| (d + b'0') as char).collect();
    let mut frac_str: String = digits[split..].iter().map(|d| (d + b'0') as char).collect();
    if frac_str.ends_with('0') {
        frac_str.pop();
    }
    let int_str = match int_str.trim_start_matches('0') {
        "" => "0",
        s => s,
    };
    let sign = if negative && (int_str != "0" || frac_str.bytes().any(|b| b != b'0')) { "-" } else { "" };
    format!("{sign}{int_str}.{frac_str}")
}

/// `a`, `a, and b`, `a, b, and c`.
fn oxford_join(parts: &[String]) -> String {
    match parts {
        [] => String::new(),
        [only] => only.clone(),
        [init @ .., last] => format!("{}, and {}", init.join(", "), last),
    }
}

fn member(o: &SceneObject) -> String {
    format!("{} {}", ordinal_word(o.ordinal), o.class)
}

pub fn describe_view(view: &SceneView) -> SceneDescription {
    let mut sentences = vec![format!("There are {} object(s) in the scene.", view.objects.len())];
    if !view.objects.is_empty() {
        let parts: Vec<String> = view
            .class_counts()
            .into_iter()
            .map(|(class, n)| if n == 1 { format!("{n} is a {class}") } else { format!("{n} are {class}") })
            .collect();
        sentences.push(format!("From the object(s), {}.", oxford_join(&parts)));
    }
    for o in &view.objects {
        if let Some(speed) = o.speed_mps {
            sentences.push(format!(
                "The {} is moving with the average speed of {} m/s.",
                member(o),
                format_speed(speed)
            ));
        }
    }
    let mut lanes: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for o in &view.objects {
        if let Some(l) = o.lane {
            lanes.entry(l).or_default().push(member(o));
        }
    }
    for (lane, members) in lanes {
        sentences.push(format!("In lane {lane} we see {}.", oxford_join(&members)));
    }
    let iri = view.iri.as_ref().map(|i| i.as_str().to_string()).unwrap_or_default();
    SceneDescription::new(iri, sentences)
}

pub fn describe_scene(scene: &BTreeSet<Triple>) -> SceneDescription {
    describe_view(&SceneView::from_triples(scene))
}

/// Lowercased label: the part after a known instance namespace, else the
/// local name after `#` or the last `/`.
fn label(iri: &Iri) -> String {
    let s = iri.as_str();
    let local = s.strip_prefix(TMI).unwrap_or_else(|| crate::kg::local_name(iri));
    local.to_lowercase()
}

/// Verbalizes background axioms (subclass, disjointness, lane counts), sorted.
pub fn lexicalize_background(graph: &Graph) -> Vec<String> {
    let asserted = |p: Iri| -> Vec<Triple> {
        graph.triples_matching(None, Some(&p), None).into_iter().filter(|t| graph.contains_asserted(t)).collect()
    };
    let subclass: Vec<(Iri, Iri)> =
        asserted(tm::subclass_of()).into_iter().filter_map(|t| Some((t.s, t.o.as_iri()?.clone()))).collect();
    let disjoint: BTreeSet<(Iri, Iri)> =
        asserted(tm::disjoint_with()).into_iter().filter_map(|t| Some((t.s, t.o.as_iri()?.clone()))).collect();

    let mut out = BTreeSet::new();
    for (a, c) in &subclass {
        let siblings: Vec<&Iri> = subclass
            .iter()
            .filter(|(b, c2)| c2 == c && b != a && disjoint.contains(&(a.clone(), b.clone())))
            .map(|(b, _)| b)
            .collect();
        if siblings.is_empty() {
            out.insert(format!("{} is a {}.", label(a), label(c)));
        } else {
            for b in siblings {
                out.insert(format!("{} is a {} different from a {}.", label(a), label(c), label(b)));
            }
        }
    }
    for t in asserted(tm::has_lane_count()) {
        if let Term::Literal { .. } = &t.o {
            if let Some(n) = t.o.as_f64() {
                out.insert(format!("{} has {} lanes.", label(&t.s), number_word(n as i64)));
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{DetectionRecord, ObjectDetection};
    use crate::kg::{import_background, instantiate_scene, ontology::DEFAULT_AXIOMS};

    fn obj(track: &str, class: &str, lane: Option<u32>, speed: Option<f64>) -> ObjectDetection {
        let mut o = ObjectDetection::new(track, class);
        o.lane = lane;
        o.avg_speed_mps = speed;
        o
    }

    fn describe(objects: Vec<ObjectDetection>) -> SceneDescription {
        describe_scene(&instantiate_scene(&DetectionRecord {
            camera_id: "c".into(),
            frame_id: "f".into(),
            timestamp_ms: 0,
            objects,
        }))
    }

    #[test]
    fn speed_table() {
        let got: Vec<String> = [6.0, 1.76, 8.0, 5.0, 6.9, 7.74, 5.31, 5.52].iter().map(|&x| format_speed(x)).collect();
        assert_eq!(got, ["6.0", "1.76", "8.0", "5.0", "6.9", "7.74", "5.31", "5.52"]);
    }

    #[test]
    fn speed_rounding_edges() {
        assert_eq!(format_speed(1.755), "1.76");
        assert_eq!(format_speed(2.675), "2.68");
        assert_eq!(format_speed(9.995), "10.0");
        assert_eq!(format_speed(0.004), "0.0");
        assert_eq!(format_speed(0.0), "0.0");
        assert_eq!(format_speed(12.1), "12.1");
        assert_eq!(format_speed(4.56789), "4.57");
    }

    #[test]
    fn ordinals_and_numbers() {
        assert_eq!(ordinal_word(1), "first");
        assert_eq!(ordinal_word(10), "tenth");
        assert_eq!(ordinal_word(11), "11th");
        assert_eq!(number_word(3), "three");
        assert_eq!(number_word(12), "twelve");
        assert_eq!(number_word(13), "13");
    }

    #[test]
    fn empty_scene() {
        let d = describe(vec![]);
        assert_eq!(d.sentences, vec!["There are 0 object(s) in the scene."]);
    }

    #[test]
    fn single_class_composition() {
        let d = describe(vec![obj("1", "car", None, None)]);
        assert_eq!(d.sentences[1], "From the object(s), 1 is a car.");
    }

    #[test]
    fn table_one_scene() {
        let d = describe(vec![
            obj("1", "car", Some(3), Some(7.74)),
            obj("2", "car", Some(3), Some(5.31)),
            obj("3", "bike", None, None),
        ]);
        assert_eq!(
            d.sentences,
            vec![
                "There are 3 object(s) in the scene.",
                "From the object(s), 1 is a bike, and 2 are car.",
                "The first car is moving with the average speed of 7.74 m/s.",
                "The second car is moving with the average speed of 5.31 m/s.",
                "In lane 3 we see first car, and second car.",
            ]
        );
        assert_eq!(d.text, d.sentences.join(" "));
    }

    #[test]
    fn lanes_ascending() {
        let d = describe(vec![obj("1", "car", Some(7), None), obj("2", "truck", Some(2), None)]);
        assert_eq!(d.sentences[2], "In lane 2 we see first truck.");
        assert_eq!(d.sentences[3], "In lane 7 we see first car.");
    }

    #[test]
    fn background_sentences() {
        let mut g = Graph::new();
        assert!(lexicalize_background(&g).is_empty());
        import_background(&mut g, DEFAULT_AXIOMS).unwrap();
        import_background(
            &mut g,
            "<http://example.org/tmkg/road/1> <http://example.org/tmo#hasLaneCount> \"3\"^^<http://www.w3.org/2001/XMLSchema#integer> .",
        )
        .unwrap();
        assert_eq!(
            lexicalize_background(&g),
            vec!["car is a vehicle.", "road/1 has three lanes.", "truck is a vehicle different from a car."]
        );
    }
}
