//! Python bindings for the traffic scene knowledge graph.

use std::collections::{BTreeMap, BTreeSet};

use pyo3::exceptions::{PyConnectionError, PyKeyError, PyValueError};
use pyo3::prelude::*;

use tmkg::features::{extract_features, SceneFeatures};
use tmkg::ingest::{parse_detections, serialize_detections, synthesize_scenes, SynthConfig};
use tmkg::kg::{self as core_kg, ontology, Iri, Triple};
use tmkg::lexicalize::describe_scene;
use tmkg::nlquery::{build_semantic_index, semantic_query, EmbedError, EmbedderSpec};
use tmkg::rules::{parse_rules, rank_congestion};
use tmkg::similarity::{build_index, knn_query, Backend, IndexParams, Probe, SimilarityError};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn embed_err(e: EmbedError) -> PyErr {
    if e.is_remote() {
        PyConnectionError::new_err(e.to_string())
    } else {
        value_err(e)
    }
}

fn similarity_err(e: SimilarityError) -> PyErr {
    match e {
        SimilarityError::Embed(e) => embed_err(e),
        e => value_err(e),
    }
}

fn parse_iri(text: &str) -> PyResult<Iri> {
    let text = text.trim();
    let full = match text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
        Some(inner) => inner.to_string(),
        None => ontology::expand(text).unwrap_or_else(|| text.to_string()),
    };
    Iri::new(full).map_err(value_err)
}

/// `(iri, deviation, percentile, labels)`
type ReportRow = (String, f64, f64, Vec<String>);

/// An RDF graph of traffic scenes.
#[pyclass(name = "Graph")]
struct PyGraph {
    inner: core_kg::Graph,
}

impl PyGraph {
    fn scene(&self, scene: &str) -> PyResult<BTreeSet<Triple>> {
        let iri = parse_iri(scene)?;
        core_kg::scene_subgraph(&self.inner, &iri).map_err(|e| PyKeyError::new_err(e.to_string()))
    }

    fn corpus(&self) -> Vec<BTreeSet<Triple>> {
        core_kg::scenes(&self.inner)
            .iter()
            .map(|s| core_kg::scene_subgraph(&self.inner, s).expect("listed scene exists"))
            .collect()
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new() -> Self {
        Self { inner: core_kg::Graph::new() }
    }

    /// Graph built from detection JSONL plus the default axioms.
    #[staticmethod]
    fn from_detections(jsonl: &str) -> PyResult<Self> {
        let records = parse_detections(jsonl).map_err(value_err)?;
        Ok(Self { inner: core_kg::build_graph(&records) })
    }

    #[staticmethod]
    fn from_ntriples(text: &str) -> PyResult<Self> {
        Ok(Self { inner: core_kg::import_graph(text).map_err(value_err)? })
    }

    /// Adds N-Triples background knowledge; returns the number of new triples.
    fn add_background(&mut self, text: &str) -> PyResult<usize> {
        core_kg::import_background(&mut self.inner, text).map_err(value_err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn export(&self) -> String {
        core_kg::export_graph(&self.inner)
    }

    fn scenes(&self) -> Vec<String> {
        core_kg::scenes(&self.inner).iter().map(|s| s.as_str().to_string()).collect()
    }

    /// Basic graph pattern match. Each binding maps variable names to N-Triples terms.
    #[pyo3(name = "match")]
    fn match_patterns(&self, patterns: Vec<String>) -> PyResult<Vec<BTreeMap<String, String>>> {
        let patterns =
            patterns.iter().map(|p| core_kg::parse_pattern(p)).collect::<Result<Vec<_>, _>>().map_err(value_err)?;
        let bindings = core_kg::match_pattern(&self.inner, &patterns).map_err(value_err)?;
        Ok(bindings.into_iter().map(|b| b.into_iter().map(|(k, v)| (k, v.to_string())).collect()).collect())
    }

    fn describe(&self, scene: &str) -> PyResult<String> {
        Ok(describe_scene(&self.scene(scene)?).text)
    }

    fn background_sentences(&self) -> Vec<String> {
        tmkg::lexicalize_background(&self.inner)
    }

    fn features(&self, scene: &str) -> PyResult<BTreeMap<String, f64>> {
        Ok(extract_features(&self.scene(scene)?).iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    /// Scenes most similar to `scene`, excluding itself, as `(iri, score)` pairs.
    #[pyo3(signature = (scene, backend = "structural", k = 5))]
    fn similar(&self, scene: &str, backend: &str, k: usize) -> PyResult<Vec<(String, f64)>> {
        let backend: Backend = backend.parse().map_err(value_err)?;
        let probe = self.scene(scene)?;
        let own = parse_iri(scene)?;
        let index = build_index(&self.corpus(), backend, IndexParams::default()).map_err(similarity_err)?;
        let hits = knn_query(&index, &Probe::Scene(probe), k.saturating_add(1)).map_err(similarity_err)?;
        Ok(hits
            .into_iter()
            .filter(|h| h.scene_iri != own)
            .take(k)
            .map(|h| (h.scene_iri.as_str().to_string(), h.score))
            .collect())
    }

    /// Free-text retrieval; pass `endpoint` to use a remote embedder.
    #[pyo3(signature = (text, k = 5, endpoint = None))]
    fn query(&self, text: &str, k: usize, endpoint: Option<String>) -> PyResult<Vec<(String, f64)>> {
        let spec = endpoint.map_or_else(EmbedderSpec::default, EmbedderSpec::remote);
        let descriptions: Vec<_> = self.corpus().iter().map(describe_scene).collect();
        let index = build_semantic_index(&descriptions, &spec).map_err(embed_err)?;
        let hits = semantic_query(&index, text, k).map_err(embed_err)?;
        Ok(hits.into_iter().map(|h| (h.scene_iri.as_str().to_string(), h.score)).collect())
    }

    /// Congestion ranking, most deviant scene first.
    #[pyo3(signature = (rules_json = None))]
    fn congestion(&self, rules_json: Option<&str>) -> PyResult<Vec<ReportRow>> {
        let rules = rules_json.map(parse_rules).transpose().map_err(value_err)?.unwrap_or_default();
        let batch: Vec<_> = core_kg::scenes(&self.inner)
            .into_iter()
            .map(|s| {
                let f = extract_features(&core_kg::scene_subgraph(&self.inner, &s).expect("listed scene exists"));
                (s, f)
            })
            .collect();
        let reports = rank_congestion(&batch, &rules).map_err(value_err)?;
        Ok(reports
            .into_iter()
            .map(|r| (r.scene_iri.as_str().to_string(), r.deviation, r.percentile, r.fired_labels))
            .collect())
    }
}

/// Formats a speed the way scene descriptions do.
#[pyfunction]
fn format_speed(x: f64) -> String {
    tmkg::lexicalize::format_speed(x)
}

/// Signed feature hashing; returns the nonzero buckets.
#[pyfunction]
#[pyo3(signature = (features, m = 4096, seed = 0))]
fn hash_features(features: BTreeMap<String, f64>, m: usize, seed: u64) -> PyResult<BTreeMap<usize, f64>> {
    let f: SceneFeatures = features.into_iter().collect();
    let v = tmkg::hash_features(&f, m, seed).map_err(value_err)?;
    Ok(v.nonzero().collect())
}

/// Synthetic detection stream from a JSON config; returns `(jsonl, congested_frame_ids)`.
#[pyfunction]
fn synthesize(config_json: &str, seed: u64) -> PyResult<(String, Vec<String>)> {
    let cfg: SynthConfig = serde_json::from_str(config_json).map_err(value_err)?;
    let out = synthesize_scenes(&cfg, seed).map_err(value_err)?;
    let congested = out.truth.into_iter().filter(|t| t.congested).map(|t| t.frame_id).collect();
    Ok((serialize_detections(&out.records), congested))
}

#[pymodule]
fn tmkg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(format_speed, m)?)?;
    m.add_function(wrap_pyfunction!(hash_features, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    Ok(())
}
