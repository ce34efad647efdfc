//! The traffic monitoring knowledge graph.

mod graph;
pub mod ntriples;
pub mod ontology;
mod pattern;
mod scene;
mod term;

use thiserror::Error;

pub use graph::{Graph, IndexOrder};
pub use pattern::{match_pattern, parse_pattern, Binding, PatternTerm, TriplePattern};
pub use scene::{
    camera_iri, instantiate_scene, lane_iri, local_name, object_iri, scene_iri, scene_subgraph, scenes, SceneObject,
    SceneView,
};
pub use term::{Datatype, Iri, Term, Triple};

use crate::ingest::DetectionRecord;

#[derive(Debug, Error)]
pub enum KgError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("not an absolute IRI: {0:?}")]
    InvalidIri(String),
    #[error("invalid literal {lexical:?} for datatype <{datatype}>")]
    InvalidLiteral { lexical: String, datatype: String },
    #[error("bad pattern {pattern:?}: {reason}")]
    Pattern { pattern: String, reason: String },
    #[error("empty pattern list")]
    EmptyPattern,
    #[error("unknown scene <{0}>")]
    UnknownScene(String),
}

/// Unions N-Triples background knowledge into `graph`; returns the number of new triples.
pub fn import_background(graph: &mut Graph, triples_text: &str) -> Result<usize, KgError> {
    let triples = ntriples::parse(triples_text)?;
    Ok(graph.extend(triples))
}

/// Canonical N-Triples: asserted triples, one per line, sorted.
pub fn export_graph(graph: &Graph) -> String {
    ntriples::serialize(&graph.asserted().collect::<Vec<_>>())
}

pub fn import_graph(text: &str) -> Result<Graph, KgError> {
    Ok(Graph::from_triples(ntriples::parse(text)?))
}

/// Graph holding the default ontology axioms plus every record's scene.
pub fn build_graph<'a>(records: impl IntoIterator<Item = &'a DetectionRecord>) -> Graph {
    let mut g = Graph::new();
    let axioms = ntriples::parse(ontology::DEFAULT_AXIOMS).expect("default axioms parse");
    g.extend(axioms.into_iter().chain(records.into_iter().flat_map(instantiate_scene)));
    g
}
