use std::collections::BTreeSet;

use super::{canonicalize_scene, jaccard, rank, text_cosine, Backend, SimilarityError, SimilarityHit};
use crate::features::{hash_pairs, HashedVector, DEFAULT_DIM};
use crate::kg::{Iri, SceneView, Triple};
use crate::lexicalize::{describe_view, SceneDescription};
use crate::nlquery::{build_semantic_index, semantic_query, EmbedderSpec, SemanticIndex};

#[derive(Debug, Clone, PartialEq)]
pub struct IndexParams {
    /// Hashed dimension of the structural pre-filter.
    pub m: usize,
    pub seed: u64,
    /// Structural candidates rescored with exact Jaccard (at least `k`).
    pub rescore: usize,
    pub embedder: EmbedderSpec,
}

impl Default for IndexParams {
    fn default() -> Self {
        Self { m: DEFAULT_DIM, seed: 0, rescore: 64, embedder: EmbedderSpec::default() }
    }
}

/// A k-NN query: a scene subgraph or free text.
#[derive(Debug, Clone)]
pub enum Probe {
    Scene(BTreeSet<Triple>),
    Text(String),
}

#[derive(Debug)]
struct Entry {
    iri: Iri,
    canonical: BTreeSet<String>,
    description: SceneDescription,
}

#[derive(Debug)]
pub struct SimilarityIndex {
    backend: Backend,
    params: IndexParams,
    entries: Vec<Entry>,
    hashed: Vec<HashedVector>,
    semantic: Option<SemanticIndex>,
}

impl SimilarityIndex {
    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn hash_canonical(c: &BTreeSet<String>, m: usize, seed: u64) -> Result<HashedVector, SimilarityError> {
    Ok(hash_pairs(c.iter().map(|s| (s.as_str(), 1.0)), m, seed)?)
}

/// Builds an index over scene subgraphs. Scenes without a scene node are skipped.
pub fn build_index(
    scenes: &[BTreeSet<Triple>],
    backend: Backend,
    params: IndexParams,
) -> Result<SimilarityIndex, SimilarityError> {
    let entries: Vec<Entry> = scenes
        .iter()
        .filter_map(|s| {
            let view = SceneView::from_triples(s);
            Some(Entry { iri: view.iri.clone()?, canonical: canonicalize_scene(s), description: describe_view(&view) })
        })
        .collect();
    if entries.is_empty() {
        return Err(SimilarityError::EmptyCorpus);
    }
    let hashed = match backend {
        Backend::Structural => {
            entries.iter().map(|e| hash_canonical(&e.canonical, params.m, params.seed)).collect::<Result<_, _>>()?
        }
        _ => Vec::new(),
    };
    let semantic = match backend {
        Backend::Semantic => {
            let descs: Vec<SceneDescription> = entries.iter().map(|e| e.description.clone()).collect();
            Some(build_semantic_index(&descs, &params.embedder)?)
        }
        _ => None,
    };
    Ok(SimilarityIndex { backend, params, entries, hashed, semantic })
}

fn probe_text(probe: &Probe) -> String {
    match probe {
        Probe::Text(t) => t.clone(),
        Probe::Scene(s) => describe_view(&SceneView::from_triples(s)).text,
    }
}

/// Top-`k` scenes for `probe`, score descending, ties by IRI ascending.
pub fn knn_query(index: &SimilarityIndex, probe: &Probe, k: usize) -> Result<Vec<SimilarityHit>, SimilarityError> {
    if k == 0 {
        return Err(SimilarityError::ZeroK);
    }
    match index.backend {
        Backend::Structural => {
            let Probe::Scene(scene) = probe else {
                return Err(SimilarityError::TextProbe);
            };
            let canonical = canonicalize_scene(scene);
            let hv = hash_canonical(&canonical, index.params.m, index.params.seed)?;
            let prefilter: Vec<(Iri, f64)> =
                index.entries.iter().zip(&index.hashed).map(|(e, h)| (e.iri.clone(), hv.cosine(h))).collect();
            let pool = index.params.rescore.max(k);
            let candidates = rank(prefilter, pool, Backend::Structural);
            let rescored: Vec<(Iri, f64)> = candidates
                .into_iter()
                .map(|hit| {
                    let e = index.entries.iter().find(|e| e.iri == hit.scene_iri).expect("candidate from index");
                    (hit.scene_iri, jaccard(&canonical, &e.canonical))
                })
                .collect();
            Ok(rank(rescored, k, Backend::Structural))
        }
        Backend::Lexical => {
            let text = probe_text(probe);
            let scored =
                index.entries.iter().map(|e| (e.iri.clone(), text_cosine(&text, &e.description.text))).collect();
            Ok(rank(scored, k, Backend::Lexical))
        }
        Backend::Semantic => {
            let sem = index.semantic.as_ref().expect("semantic index built for semantic backend");
            Ok(semantic_query(sem, &probe_text(probe), k)?)
        }
    }
}
