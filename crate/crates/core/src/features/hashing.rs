//! Signed feature hashing over FNV-1a 64.
//!
//! A key `j` goes to bucket `FNV(0x01 ‖ seed_le ‖ j) mod m` with sign `+1` when
//! the top bit of `FNV(0x02 ‖ seed_le ‖ j)` is clear, `-1` otherwise.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FeatureError, SceneFeatures};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub const DOMAIN_BUCKET: u8 = 0x01;
pub const DOMAIN_SIGN: u8 = 0x02;
pub const DOMAIN_TOKEN: u8 = 0x03;

pub const DEFAULT_DIM: usize = 4096;

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// FNV-1a 64 of `domain ‖ seed (8 bytes LE) ‖ key`.
pub fn keyed_hash(domain: u8, seed: u64, key: &str) -> u64 {
    let mut h = FNV_OFFSET;
    let mut feed = |b: u8| h = (h ^ b as u64).wrapping_mul(FNV_PRIME);
    feed(domain);
    seed.to_le_bytes().into_iter().for_each(&mut feed);
    key.bytes().for_each(feed);
    h
}

pub fn bucket(domain: u8, seed: u64, key: &str, m: usize) -> usize {
    (keyed_hash(domain, seed, key) % m as u64) as usize
}

pub fn sign(seed: u64, key: &str) -> f64 {
    if keyed_hash(DOMAIN_SIGN, seed, key) >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Signed hashed vector in `dim` dimensions, stored as its nonzero buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashedVector {
    pub dim: usize,
    pub seed: u64,
    buckets: BTreeMap<usize, f64>,
}

impl HashedVector {
    pub fn zeros(dim: usize, seed: u64) -> Self {
        Self { dim, seed, buckets: BTreeMap::new() }
    }

    pub fn get(&self, i: usize) -> f64 {
        self.buckets.get(&i).copied().unwrap_or(0.0)
    }

    /// Nonzero `(bucket, value)` pairs in bucket order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.buckets.iter().map(|(&i, &v)| (i, v))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.nonzero() {
            out[i] = v;
        }
        out
    }

    fn add_at(&mut self, i: usize, x: f64) {
        let slot = self.buckets.entry(i).or_insert(0.0);
        *slot += x;
        if *slot == 0.0 {
            self.buckets.remove(&i);
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        let (small, large) = if self.buckets.len() <= other.buckets.len() { (self, other) } else { (other, self) };
        small.nonzero().map(|(i, v)| v * large.get(i)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.buckets.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Cosine similarity; 0 when either side is the zero vector.
    pub fn cosine(&self, other: &Self) -> f64 {
        let d = self.norm() * other.norm();
        if d == 0.0 {
            0.0
        } else {
            self.dot(other) / d
        }
    }
}

/// Hashes arbitrary `(key, value)` pairs into an `m`-dimensional signed sum.
pub fn hash_pairs<'a>(
    pairs: impl IntoIterator<Item = (&'a str, f64)>,
    m: usize,
    seed: u64,
) -> Result<HashedVector, FeatureError> {
    if m == 0 {
        return Err(FeatureError::ZeroDimension);
    }
    let mut v = HashedVector::zeros(m, seed);
    for (key, value) in pairs {
        v.add_at(bucket(DOMAIN_BUCKET, seed, key, m), sign(seed, key) * value);
    }
    Ok(v)
}

pub fn hash_features(f: &SceneFeatures, m: usize, seed: u64) -> Result<HashedVector, FeatureError> {
    hash_pairs(f.iter(), m, seed)
}
