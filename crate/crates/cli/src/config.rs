use std::path::{Path, PathBuf};

use serde::Deserialize;
use tmkg::features::DEFAULT_DIM;
use tmkg::ingest::SynthConfig;
use tmkg::nlquery::EmbedderSpec;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub kg: Option<PathBuf>,
    pub background: Vec<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hashing {
    pub m: usize,
    pub seed: u64,
}

impl Default for Hashing {
    fn default() -> Self {
        Self { m: DEFAULT_DIM, seed: 0 }
    }
}

/// Run configuration loaded from `--config`. Every section is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub paths: Paths,
    pub hashing: Hashing,
    pub embedder: EmbedderSpec,
    pub rules: Option<PathBuf>,
    pub synth: Option<SynthConfig>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = crate::read_file(path)?;
        let cfg: Config =
            serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        // Relative paths resolve against the config file's directory.
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        let cfg = Config {
            paths: Paths {
                kg: cfg.paths.kg.map(resolve),
                background: cfg.paths.background.into_iter().map(resolve).collect(),
            },
            rules: cfg.rules.map(resolve),
            ..cfg
        };
        if cfg.hashing.m == 0 || cfg.embedder.dim == 0 {
            return Err(CliError::Input(format!("{}: dimensions must be at least 1", path.display())));
        }
        for p in cfg.paths.background.iter().chain(&cfg.rules) {
            if !p.exists() {
                return Err(CliError::Input(format!("{}: no such file {}", path.display(), p.display())));
            }
        }
        Ok(cfg)
    }
}
