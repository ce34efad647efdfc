use std::collections::{BTreeMap, BTreeSet};

use crate::kg::ontology as tm;
use crate::kg::{Iri, SceneView, Term, Triple};

/// Renders a scene's triples with instance IRIs replaced by stable tokens:
/// the scene becomes `SCENE`, objects `{class}#{ordinal}`, lanes
/// `LANE#{number}`. Time, camera and track-id triples are dropped and speeds
/// are rounded to whole m/s, so scenes that differ only in identifiers or
/// timing canonicalize identically.
pub fn canonicalize_scene(scene: &BTreeSet<Triple>) -> BTreeSet<String> {
    let view = SceneView::from_triples(scene);
    let mut names: BTreeMap<&Iri, String> = BTreeMap::new();
    if let Some(s) = &view.iri {
        names.insert(s, "SCENE".into());
    }
    for o in &view.objects {
        names.insert(&o.iri, format!("{}#{}", o.class, o.ordinal));
        if let (Some(l), Some(n)) = (&o.lane_iri, o.lane) {
            names.insert(l, format!("LANE#{n}"));
        }
    }
    let dropped = [tm::at_time(), tm::captured_by(), tm::track_id()];
    let speed = tm::average_speed();
    let iri_token = |i: &Iri| names.get(i).cloned().unwrap_or_else(|| i.to_curie());

    scene
        .iter()
        .filter(|t| !dropped.contains(&t.p))
        .map(|t| {
            let o = match &t.o {
                Term::Iri(i) => iri_token(i),
                lit if t.p == speed => match lit.as_f64() {
                    Some(x) => format!("{}", x.round() as i64),
                    None => lit.to_compact(),
                },
                lit => lit.as_lexical().unwrap_or_default().to_string(),
            };
            format!("{} {} {}", iri_token(&t.s), t.p.to_curie(), o)
        })
        .collect()
}
