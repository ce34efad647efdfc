//! Scene similarity: graph structure (Jaccard over canonical triples),
//! lexical (term-frequency cosine over descriptions) and semantic (embedding
//! cosine), plus a k-NN index over each.

mod canonical;
mod index;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg::{Iri, Triple};
use crate::lexicalize::SceneDescription;
use crate::nlquery::EmbedError;
use crate::text::term_frequencies;

pub use canonical::canonicalize_scene;
pub use index::{build_index, knn_query, IndexParams, Probe, SimilarityIndex};

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("unknown backend {0:?} (expected structural, lexical or semantic)")]
    UnknownBackend(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("the structural backend needs a scene probe, not text")]
    TextProbe,
    #[error(transparent)]
    Feature(#[from] crate::features::FeatureError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Structural,
    Lexical,
    Semantic,
}

impl FromStr for Backend {
    type Err = SimilarityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "structural" => Ok(Backend::Structural),
            "lexical" => Ok(Backend::Lexical),
            "semantic" => Ok(Backend::Semantic),
            other => Err(SimilarityError::UnknownBackend(other.to_string())),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Structural => "structural",
            Backend::Lexical => "lexical",
            Backend::Semantic => "semantic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityHit {
    #[serde(rename = "scene", serialize_with = "iri_str")]
    pub scene_iri: Iri,
    pub score: f64,
    pub backend: Backend,
}

fn iri_str<S: serde::Serializer>(iri: &Iri, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(iri.as_str())
}

/// Sorts by score descending, ties by IRI ascending, and keeps `k`.
pub(crate) fn rank(mut scored: Vec<(Iri, f64)>, k: usize, backend: Backend) -> Vec<SimilarityHit> {
    scored.sort_by(|a, b| match b.1.total_cmp(&a.1) {
        Ordering::Equal => a.0.cmp(&b.0),
        o => o,
    });
    scored.into_iter().take(k).map(|(scene_iri, score)| SimilarityHit { scene_iri, score, backend }).collect()
}

/// Jaccard index of two canonical sets; 1 when both are empty.
pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

pub fn structural_similarity(a: &BTreeSet<Triple>, b: &BTreeSet<Triple>) -> f64 {
    jaccard(&canonicalize_scene(a), &canonicalize_scene(b))
}

/// Term-frequency cosine of two texts; 1 when both have no tokens.
pub fn text_cosine(a: &str, b: &str) -> f64 {
    let ta = term_frequencies(a);
    let tb = term_frequencies(b);
    if ta.is_empty() && tb.is_empty() {
        return 1.0;
    }
    let dot: f64 = ta.iter().map(|(k, v)| v * tb.get(k).copied().unwrap_or(0.0)).sum();
    let na: f64 = ta.values().map(|v| v * v).sum::<f64>().sqrt();
    let nb: f64 = tb.values().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).min(1.0)
    }
}

pub fn lexical_similarity(a: &SceneDescription, b: &SceneDescription) -> f64 {
    text_cosine(&a.text, &b.text)
}
