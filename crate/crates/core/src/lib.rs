//! Traffic monitoring knowledge graph.
//!
//! Per-frame object detections are instantiated into a triple store against a
//! small traffic ontology. On top of the graph sit three reasoning surfaces:
//!
//! * [`rules`]: median-scene deviation ranking and declarative threshold rules,
//! * [`similarity`]: scene similarity search (graph structure, lexical, semantic),
//! * [`lexicalize`] + [`nlquery`]: template scene descriptions and
//!   natural-language retrieval over them.

pub mod features;
pub mod ingest;
pub mod kg;
pub mod lexicalize;
pub mod nlquery;
pub mod rules;
pub mod similarity;
pub mod text;

pub use features::{extract_features, hash_features, HashedVector, SceneFeatures};
pub use ingest::{parse_detections, validate_record, DetectionRecord, ObjectDetection};
pub use kg::{Graph, Iri, Term, Triple};
pub use lexicalize::{describe_scene, lexicalize_background, SceneDescription};
pub use rules::{apply_rules, rank_congestion, CongestionReport, Rule};
pub use similarity::{Backend, SimilarityHit};
