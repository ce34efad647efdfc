use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{EmbedError, EmbeddingVector};
use crate::features::hashing::{bucket, DOMAIN_TOKEN};
use crate::text::{term_frequencies, tokenize};

/// Document frequencies frozen at index build.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_docs: usize,
    pub df: BTreeMap<String, usize>,
}

impl CorpusStats {
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut stats = Self::default();
        for t in texts {
            stats.n_docs += 1;
            let uniq: BTreeSet<String> = tokenize(t).into_iter().collect();
            for tok in uniq {
                *stats.df.entry(tok).or_insert(0) += 1;
            }
        }
        stats
    }

    /// `ln((N + 1) / (df + 1) + 1)`; unseen tokens have `df = 0`.
    pub fn idf(&self, token: &str) -> f64 {
        let df = self.df.get(token).copied().unwrap_or(0) as f64;
        ((self.n_docs as f64 + 1.0) / (df + 1.0) + 1.0).ln()
    }
}

/// TF-IDF weights hashed (unsigned) into `dim` buckets, then L2-normalized.
pub fn embed_builtin(
    texts: &[&str],
    stats: &CorpusStats,
    dim: usize,
    seed: u64,
) -> Result<Vec<EmbeddingVector>, EmbedError> {
    if dim == 0 {
        return Err(EmbedError::ZeroDimension);
    }
    Ok(texts
        .iter()
        .map(|text| {
            let mut values = vec![0.0; dim];
            for (tok, tf) in term_frequencies(text) {
                values[bucket(DOMAIN_TOKEN, seed, &tok, dim)] += tf * stats.idf(&tok);
            }
            EmbeddingVector::normalized(values)
        })
        .collect())
}
