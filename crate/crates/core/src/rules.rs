//! Congestion reasoning: deviation of each frame's features from the batch
//! median, and declarative threshold rules.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::SceneFeatures;
use crate::kg::Iri;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("empty batch")]
    EmptyBatch,
    #[error("invalid rules file: {0}")]
    Parse(String),
    #[error("rule {0:?} has no conditions")]
    NoConditions(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Comparator {
    pub fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Gt => lhs > rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub feature: String,
    pub op: Comparator,
    pub value: f64,
}

/// Conjunction of threshold conditions producing `label`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    #[serde(rename = "all")]
    pub conditions: Vec<Condition>,
    pub label: String,
}

impl Rule {
    pub fn fires(&self, f: &SceneFeatures) -> bool {
        self.conditions.iter().all(|c| c.op.holds(f.get(&c.feature), c.value))
    }
}

/// Parses a JSON rules file: `[{"name", "all": [{"feature", "op", "value"}], "label"}]`.
pub fn parse_rules(json: &str) -> Result<Vec<Rule>, RuleError> {
    let rules: Vec<Rule> = serde_json::from_str(json).map_err(|e| RuleError::Parse(e.to_string()))?;
    if let Some(r) = rules.iter().find(|r| r.conditions.is_empty()) {
        return Err(RuleError::NoConditions(r.name.clone()));
    }
    Ok(rules)
}

/// Labels of the rules that fire, in rule order, without repeats.
pub fn apply_rules(rules: &[Rule], f: &SceneFeatures) -> Vec<String> {
    let mut labels: Vec<String> = Vec::new();
    for r in rules.iter().filter(|r| r.fires(f)) {
        if !labels.contains(&r.label) {
            labels.push(r.label.clone());
        }
    }
    labels
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Componentwise median over the union of keys, absent entries read as 0.
pub fn median_features(batch: &[SceneFeatures]) -> Result<SceneFeatures, RuleError> {
    if batch.is_empty() {
        return Err(RuleError::EmptyBatch);
    }
    let keys: std::collections::BTreeSet<&str> = batch.iter().flat_map(|f| f.keys()).collect();
    let mut out = SceneFeatures::new();
    let mut column = Vec::with_capacity(batch.len());
    for k in keys {
        column.clear();
        column.extend(batch.iter().map(|f| f.get(k)));
        out.insert(k, median(&mut column));
    }
    Ok(out)
}

/// L1 distance over the union of keys.
pub fn deviation_score(f: &SceneFeatures, median: &SceneFeatures) -> f64 {
    f.union_keys(median).into_iter().map(|k| (f.get(k) - median.get(k)).abs()).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongestionReport {
    #[serde(rename = "scene", with = "iri_string")]
    pub scene_iri: Iri,
    pub deviation: f64,
    /// Fraction of the other frames with strictly smaller deviation.
    pub percentile: f64,
    #[serde(rename = "labels")]
    pub fired_labels: Vec<String>,
}

mod iri_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::kg::Iri;

    pub fn serialize<S: Serializer>(iri: &Iri, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(iri.as_str())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Iri, D::Error> {
        let s = String::deserialize(d)?;
        Iri::new(s).map_err(serde::de::Error::custom)
    }
}

/// Deviation of every frame from the batch median, most deviated first.
pub fn rank_congestion(batch: &[(Iri, SceneFeatures)], rules: &[Rule]) -> Result<Vec<CongestionReport>, RuleError> {
    let feats: Vec<SceneFeatures> = batch.iter().map(|(_, f)| f.clone()).collect();
    let med = median_features(&feats)?;
    let deviations: Vec<f64> = feats.iter().map(|f| deviation_score(f, &med)).collect();
    let n = batch.len();
    let mut sorted = deviations.clone();
    sorted.sort_by(f64::total_cmp);
    let mut reports: Vec<CongestionReport> = batch
        .iter()
        .zip(&deviations)
        .map(|((iri, f), &d)| {
            let smaller = sorted.partition_point(|&x| x < d);
            CongestionReport {
                scene_iri: iri.clone(),
                deviation: d,
                percentile: if n == 1 { 1.0 } else { smaller as f64 / (n - 1) as f64 },
                fired_labels: apply_rules(rules, f),
            }
        })
        .collect();
    reports.sort_by(|a, b| match b.deviation.total_cmp(&a.deviation) {
        Ordering::Equal => a.scene_iri.cmp(&b.scene_iri),
        o => o,
    });
    Ok(reports)
}
