//! Triple-based scene features and their hashed form.
//!
//! Keys:
//! `count:total`, `count:{class}`, `count:{class}:lane:{L}`,
//! `lane_occupancy:{L}`, `speed_mean:{class}`, `speed_max:{class}`.

pub mod hashing;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg::{SceneView, Triple};

pub use hashing::{hash_features, hash_pairs, HashedVector, DEFAULT_DIM};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("hash dimension must be at least 1")]
    ZeroDimension,
}

/// Sparse feature map. Zero values are never stored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SceneFeatures(BTreeMap<String, f64>);

impl SceneFeatures {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value for `key`; absent keys read as 0.
    pub fn get(&self, key: &str) -> f64 {
        self.0.get(key).copied().unwrap_or(0.0)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: f64) {
        let key = key.into();
        if value == 0.0 {
            self.0.remove(&key);
        } else {
            self.0.insert(key, value);
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// Union of both key sets.
    pub fn union_keys<'a>(&'a self, other: &'a Self) -> BTreeSet<&'a str> {
        self.keys().chain(other.keys()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for k in self.union_keys(other) {
            out.insert(k, self.get(k) + other.get(k));
        }
        out
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.iter().map(|(k, v)| (k.to_string(), v * alpha)).collect()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.iter().map(|(k, v)| v * other.get(k)).sum()
    }

    pub fn cosine(&self, other: &Self) -> f64 {
        let d = (self.dot(self) * other.dot(other)).sqrt();
        if d == 0.0 {
            0.0
        } else {
            self.dot(other) / d
        }
    }
}

impl FromIterator<(String, f64)> for SceneFeatures {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut f = Self::new();
        for (k, v) in iter {
            f.insert(k, v);
        }
        f
    }
}

/// Features of one scene subgraph.
pub fn extract_features(scene: &BTreeSet<Triple>) -> SceneFeatures {
    features_of_view(&SceneView::from_triples(scene))
}

pub fn features_of_view(view: &SceneView) -> SceneFeatures {
    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
    let mut bump = |k: String| *counts.entry(k).or_insert(0.0) += 1.0;
    let mut speeds: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for o in &view.objects {
        bump("count:total".into());
        bump(format!("count:{}", o.class));
        if let Some(lane) = o.lane {
            bump(format!("count:{}:lane:{lane}", o.class));
            bump(format!("lane_occupancy:{lane}"));
        }
        if let Some(s) = o.speed_mps {
            speeds.entry(&o.class).or_default().push(s);
        }
    }
    let mut f: SceneFeatures = counts.into_iter().collect();
    for (class, v) in speeds {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        f.insert(format!("speed_mean:{class}"), mean);
        f.insert(format!("speed_max:{class}"), max);
    }
    f
}
