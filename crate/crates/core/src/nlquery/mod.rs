//! Natural-language scene retrieval over scene descriptions.
//!
//! The embedder is pluggable: a deterministic builtin (hashed TF-IDF) or a
//! remote HTTP service. The builtin has no notion of negation, so a query like
//! "no cars" still matches car scenes; that needs a real language model behind
//! the remote contract.

mod builtin;
mod remote;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg::Iri;
use crate::lexicalize::SceneDescription;
use crate::similarity::{rank, Backend, SimilarityHit};

pub use builtin::{embed_builtin, CorpusStats};
pub use remote::{embed_remote, DEFAULT_TIMEOUT};

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("embedding dimension must be at least 1")]
    ZeroDimension,
    #[error("remote embedder requires an endpoint")]
    MissingEndpoint,
    #[error("remote embedder timed out after {0:?}")]
    Timeout(Duration),
    #[error("remote embedder returned HTTP {0}")]
    Status(u16),
    #[error("remote embedder dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("remote embedder transport error: {0}")]
    Transport(String),
    #[error("remote embedder bad response: {0}")]
    BadResponse(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("invalid scene IRI in description: {0:?}")]
    SceneIri(String),
}

impl EmbedError {
    /// Failures attributable to the remote service.
    pub fn is_remote(&self) -> bool {
        matches!(
            self,
            EmbedError::Timeout(_)
                | EmbedError::Status(_)
                | EmbedError::DimensionMismatch { .. }
                | EmbedError::Transport(_)
                | EmbedError::BadResponse(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
}

impl EmbeddingVector {
    /// L2-normalizes; the zero vector stays zero.
    pub fn normalized(mut values: Vec<f64>) -> Self {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbedderKind {
    Builtin,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbedderSpec {
    pub kind: EmbedderKind,
    pub dim: usize,
    pub endpoint: Option<String>,
    pub seed: u64,
    pub timeout_ms: u64,
}

impl Default for EmbedderSpec {
    fn default() -> Self {
        Self {
            kind: EmbedderKind::Builtin,
            dim: 1024,
            endpoint: None,
            seed: 0,
            timeout_ms: DEFAULT_TIMEOUT.as_millis() as u64,
        }
    }
}

impl EmbedderSpec {
    pub fn remote(endpoint: impl Into<String>) -> Self {
        Self { kind: EmbedderKind::Remote, endpoint: Some(endpoint.into()), ..Self::default() }
    }

    fn embed(&self, texts: &[&str], stats: &CorpusStats) -> Result<Vec<EmbeddingVector>, EmbedError> {
        match self.kind {
            EmbedderKind::Builtin => embed_builtin(texts, stats, self.dim, self.seed),
            EmbedderKind::Remote => {
                let endpoint = self.endpoint.as_deref().ok_or(EmbedError::MissingEndpoint)?;
                embed_remote(texts, endpoint, Duration::from_millis(self.timeout_ms))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SemanticIndex {
    spec: EmbedderSpec,
    stats: CorpusStats,
    entries: Vec<(Iri, EmbeddingVector)>,
}

impl SemanticIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }
}

pub fn build_semantic_index(
    descriptions: &[SceneDescription],
    spec: &EmbedderSpec,
) -> Result<SemanticIndex, EmbedError> {
    if descriptions.is_empty() {
        return Err(EmbedError::EmptyCorpus);
    }
    if spec.kind == EmbedderKind::Remote && spec.endpoint.is_none() {
        return Err(EmbedError::MissingEndpoint);
    }
    let iris = descriptions
        .iter()
        .map(|d| Iri::new(d.scene_iri.clone()).map_err(|_| EmbedError::SceneIri(d.scene_iri.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let texts: Vec<&str> = descriptions.iter().map(|d| d.text.as_str()).collect();
    let stats = CorpusStats::from_texts(texts.iter().copied());
    let vectors = spec.embed(&texts, &stats)?;
    let dim = vectors.first().map_or(0, EmbeddingVector::dim);
    if let Some(v) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(EmbedError::DimensionMismatch { expected: dim, found: v.dim() });
    }
    Ok(SemanticIndex { spec: spec.clone(), stats, entries: iris.into_iter().zip(vectors).collect() })
}

/// Ranks indexed scenes by cosine to the embedded query text.
pub fn semantic_query(index: &SemanticIndex, text: &str, k: usize) -> Result<Vec<SimilarityHit>, EmbedError> {
    if k == 0 {
        return Err(EmbedError::ZeroK);
    }
    let q = index
        .spec
        .embed(&[text], &index.stats)?
        .pop()
        .ok_or_else(|| EmbedError::BadResponse("no vector for query".into()))?;
    if let Some((_, first)) = index.entries.first() {
        if first.dim() != q.dim() {
            return Err(EmbedError::DimensionMismatch { expected: first.dim(), found: q.dim() });
        }
    }
    let scored = index.entries.iter().map(|(iri, v)| (iri.clone(), v.dot(&q))).collect();
    Ok(rank(scored, k, Backend::Semantic))
}
