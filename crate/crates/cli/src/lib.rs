//! Command-line front end for the traffic scene knowledge graph.
//!
//! [`run`] takes the argument list without the program name and writes
//! machine-readable output to `stdout`, diagnostics to `stderr`.

mod config;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use tmkg::features::{extract_features, SceneFeatures};
use tmkg::ingest::{parse_detections, serialize_detections, synthesize_scenes};
use tmkg::kg::{
    build_graph, export_graph, import_background, import_graph, match_pattern, ontology, parse_pattern, scene_subgraph,
    scenes, Graph, Iri, Triple,
};
use tmkg::lexicalize::describe_scene;
use tmkg::nlquery::{build_semantic_index, semantic_query, EmbedError, EmbedderKind};
use tmkg::rules::{parse_rules, rank_congestion};
use tmkg::similarity::{build_index, knn_query, Backend, IndexParams, Probe, SimilarityError};

pub use config::Config;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Remote(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Remote(_) => 3,
        }
    }
}

impl From<EmbedError> for CliError {
    fn from(e: EmbedError) -> Self {
        match e {
            e if e.is_remote() => CliError::Remote(e.to_string()),
            EmbedError::MissingEndpoint => CliError::Usage(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<SimilarityError> for CliError {
    fn from(e: SimilarityError) -> Self {
        match e {
            SimilarityError::Embed(e) => e.into(),
            SimilarityError::TextProbe | SimilarityError::ZeroK => CliError::Usage(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tmkg", version, about = "Traffic scene knowledge graph toolkit")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmbedderArg {
    Builtin,
    Remote,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BackendArg {
    Structural,
    Lexical,
    Semantic,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Structural => Backend::Structural,
            BackendArg::Lexical => Backend::Lexical,
            BackendArg::Semantic => Backend::Semantic,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic detection stream from the config's `synth` section.
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Per-frame congestion ground truth (JSONL).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Build a KG snapshot from detection JSONL.
    Ingest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kg: Option<PathBuf>,
        /// Background knowledge in N-Triples; repeatable.
        #[arg(long)]
        background: Vec<PathBuf>,
    },
    /// Describe scenes in English (JSONL).
    Lexicalize {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long)]
        scene: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-scene feature vectors (JSONL).
    Features {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank scenes by deviation from the batch median and apply rules.
    Congestion {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scenes most similar to a given scene.
    Similar {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long)]
        scene: String,
        #[arg(long, value_enum, default_value = "structural")]
        backend: BackendArg,
        #[arg(long, default_value_t = 5)]
        k: usize,
    },
    /// Free-text scene retrieval.
    Query {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long)]
        text: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, value_enum)]
        embedder: Option<EmbedderArg>,
        #[arg(long)]
        endpoint: Option<String>,
    },
    /// Basic graph pattern match; one `--pattern` per triple pattern.
    Match {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long = "pattern", required = true)]
        patterns: Vec<String>,
    },
    /// Triple and scene counts.
    Stats {
        #[arg(long)]
        kg: Option<PathBuf>,
    },
    /// Write the snapshot in canonical N-Triples.
    Export {
        #[arg(long)]
        kg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load N-Triples into a new snapshot.
    Import {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kg: Option<PathBuf>,
    },
}

pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("tmkg")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{text}");
                0
            } else {
                let _ = write!(stderr, "{text}");
                1
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}"))),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn kg_path(flag: Option<PathBuf>, cfg: &Config) -> Result<PathBuf, CliError> {
    flag.or_else(|| cfg.paths.kg.clone())
        .ok_or_else(|| CliError::Usage("missing --kg (or paths.kg in the config)".into()))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    import_graph(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Accepts `<iri>`, a CURIE with a known prefix, or a bare absolute IRI.
fn parse_scene(arg: &str) -> Result<Iri, CliError> {
    let arg = arg.trim();
    let text = match arg.strip_prefix('<').and_then(|a| a.strip_suffix('>')) {
        Some(inner) => inner.to_string(),
        None => ontology::expand(arg).unwrap_or_else(|| arg.to_string()),
    };
    Iri::new(text).map_err(|e| CliError::Usage(format!("bad scene IRI {arg:?}: {e}")))
}

fn all_scenes(graph: &Graph) -> Vec<(Iri, BTreeSet<Triple>)> {
    scenes(graph)
        .into_iter()
        .map(|s| {
            let sub = scene_subgraph(graph, &s).expect("listed scene exists");
            (s, sub)
        })
        .collect()
}

#[derive(Serialize)]
struct Stats {
    triples: usize,
    scenes: usize,
}

fn stats_line(graph: &Graph) -> String {
    json_line(&Stats { triples: graph.len(), scenes: scenes(graph).len() })
}

#[derive(Serialize)]
struct FeatureLine<'a> {
    scene: &'a str,
    features: &'a SceneFeatures,
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Synth { seed, out, truth } => {
            let synth = cfg
                .synth
                .as_ref()
                .ok_or_else(|| CliError::Usage("synth needs a config with a \"synth\" section".into()))?;
            let output = synthesize_scenes(synth, seed).map_err(|e| CliError::Input(e.to_string()))?;
            write_file(&out, &serialize_detections(&output.records))?;
            if let Some(path) = truth {
                let text: String = output.truth.iter().map(json_line).collect();
                write_file(&path, &text)?;
            }
        }
        Command::Ingest { input, kg, background } => {
            let kg = kg_path(kg, &cfg)?;
            let records = parse_detections(&read_file(&input)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
            let mut graph = build_graph(&records);
            for path in cfg.paths.background.iter().chain(&background) {
                import_background(&mut graph, &read_file(path)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            write_file(&kg, &export_graph(&graph))?;
            emit(None, stdout, &stats_line(&graph))?;
        }
        Command::Lexicalize { kg, scene, out } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            let selected = match scene {
                Some(s) => {
                    let iri = parse_scene(&s)?;
                    let sub = scene_subgraph(&graph, &iri).map_err(|e| CliError::Input(e.to_string()))?;
                    vec![(iri, sub)]
                }
                None => all_scenes(&graph),
            };
            let text: String = selected.iter().map(|(_, sub)| json_line(&describe_scene(sub))).collect();
            emit(out.as_deref(), stdout, &text)?;
        }
        Command::Features { kg, out } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            let text: String = all_scenes(&graph)
                .iter()
                .map(|(iri, sub)| json_line(&FeatureLine { scene: iri.as_str(), features: &extract_features(sub) }))
                .collect();
            write_file(&out, &text)?;
        }
        Command::Congestion { kg, rules, out } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            let rules = match rules.or(cfg.rules.clone()) {
                Some(path) => {
                    parse_rules(&read_file(&path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
                }
                None => Vec::new(),
            };
            let batch: Vec<_> =
                all_scenes(&graph).into_iter().map(|(iri, sub)| (iri, extract_features(&sub))).collect();
            let reports = rank_congestion(&batch, &rules).map_err(|e| CliError::Input(e.to_string()))?;
            let mut text = serde_json::to_string_pretty(&reports).expect("serializable");
            text.push('\n');
            write_file(&out, &text)?;
        }
        Command::Similar { kg, scene, backend, k } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            let iri = parse_scene(&scene)?;
            let probe = scene_subgraph(&graph, &iri).map_err(|e| CliError::Input(e.to_string()))?;
            let corpus: Vec<_> = all_scenes(&graph).into_iter().map(|(_, sub)| sub).collect();
            let params = IndexParams {
                m: cfg.hashing.m,
                seed: cfg.hashing.seed,
                embedder: cfg.embedder.clone(),
                ..IndexParams::default()
            };
            let index = build_index(&corpus, backend.into(), params)?;
            // The probe scene is in the corpus; report the others.
            let hits = knn_query(&index, &Probe::Scene(probe), k.saturating_add(1))?;
            let text: String = hits.iter().filter(|h| h.scene_iri != iri).take(k).map(json_line).collect();
            emit(None, stdout, &text)?;
        }
        Command::Query { kg, text, k, embedder, endpoint } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            let mut spec = cfg.embedder.clone();
            if let Some(kind) = embedder {
                spec.kind = match kind {
                    EmbedderArg::Builtin => EmbedderKind::Builtin,
                    EmbedderArg::Remote => EmbedderKind::Remote,
                };
            }
            if endpoint.is_some() {
                spec.endpoint = endpoint;
            }
            let descriptions: Vec<_> = all_scenes(&graph).iter().map(|(_, sub)| describe_scene(sub)).collect();
            let index = build_semantic_index(&descriptions, &spec)?;
            let hits = semantic_query(&index, &text, k)?;
            emit(None, stdout, &hits.iter().map(json_line).collect::<String>())?;
        }
        Command::Match { kg, patterns } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            let patterns = patterns
                .iter()
                .map(|p| parse_pattern(p))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Input(e.to_string()))?;
            let bindings = match_pattern(&graph, &patterns).map_err(|e| CliError::Input(e.to_string()))?;
            let text: String = bindings
                .iter()
                .map(|b| {
                    let row: serde_json::Map<String, serde_json::Value> =
                        b.iter().map(|(k, v)| (k.clone(), v.to_string().into())).collect();
                    json_line(&row)
                })
                .collect();
            emit(None, stdout, &text)?;
        }
        Command::Stats { kg } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            emit(None, stdout, &stats_line(&graph))?;
        }
        Command::Export { kg, out } => {
            let graph = load_graph(&kg_path(kg, &cfg)?)?;
            emit(out.as_deref(), stdout, &export_graph(&graph))?;
        }
        Command::Import { input, kg } => {
            let kg = kg_path(kg, &cfg)?;
            let graph = load_graph(&input)?;
            write_file(&kg, &export_graph(&graph))?;
            emit(None, stdout, &stats_line(&graph))?;
        }
    }
    Ok(())
}
