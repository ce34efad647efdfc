//! Detection streams: the JSON Lines exchange format, record validation and a
//! seeded scene synthesizer.

mod synth;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use synth::{synthesize_scenes, Episode, GroundTruth, LaneRate, SynthConfig, SynthOutput};

/// Object classes the ontology names explicitly. Other labels are kept as-is.
pub const KNOWN_CLASSES: [&str; 5] = ["bike", "car", "person", "truck", "unknown"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("duplicate record (camera_id={camera_id}, frame_id={frame_id})")]
    DuplicateFrame { camera_id: String, frame_id: String },
    #[error("invalid record {camera_id}/{frame_id}: {reason}")]
    Invalid { camera_id: String, frame_id: String, reason: String },
    #[error("invalid synth config: {0}")]
    Config(String),
}

/// One trajectory sample: image position and capture time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, i64)", into = "(f64, f64, i64)")]
pub struct TrajectorySample {
    pub x: f64,
    pub y: f64,
    pub t_ms: i64,
}

impl From<(f64, f64, i64)> for TrajectorySample {
    fn from((x, y, t_ms): (f64, f64, i64)) -> Self {
        Self { x, y, t_ms }
    }
}

impl From<TrajectorySample> for (f64, f64, i64) {
    fn from(s: TrajectorySample) -> Self {
        (s.x, s.y, s.t_ms)
    }
}

/// Pixel bounding box `(x, y, w, h)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl From<[f64; 4]> for BBox {
    fn from([x, y, w, h]: [f64; 4]) -> Self {
        Self { x, y, w, h }
    }
}

impl From<BBox> for [f64; 4] {
    fn from(b: BBox) -> Self {
        [b.x, b.y, b.w, b.h]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectDetection {
    pub track_id: String,
    #[serde(rename = "class")]
    pub class_label: String,
    #[serde(default)]
    pub lane: Option<u32>,
    #[serde(default)]
    pub avg_speed_mps: Option<f64>,
    #[serde(default)]
    pub trajectory: Option<Vec<TrajectorySample>>,
    #[serde(default)]
    pub bbox: Option<BBox>,
}

impl ObjectDetection {
    pub fn new(track_id: impl Into<String>, class_label: impl Into<String>) -> Self {
        Self {
            track_id: track_id.into(),
            class_label: class_label.into(),
            lane: None,
            avg_speed_mps: None,
            trajectory: None,
            bbox: None,
        }
    }

    pub fn with_lane(mut self, lane: u32) -> Self {
        self.lane = Some(lane);
        self
    }

    pub fn with_speed(mut self, mps: f64) -> Self {
        self.avg_speed_mps = Some(mps);
        self
    }

    /// Timestamp of the first trajectory sample, if any.
    pub fn first_seen_ms(&self) -> Option<i64> {
        self.trajectory.as_ref().and_then(|t| t.first()).map(|s| s.t_ms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub camera_id: String,
    pub frame_id: String,
    pub timestamp_ms: i64,
    #[serde(default)]
    pub objects: Vec<ObjectDetection>,
}

/// Parses a JSON Lines detection stream. Blank lines are skipped.
pub fn parse_detections(text: &str) -> Result<Vec<DetectionRecord>, IngestError> {
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: DetectionRecord =
            serde_json::from_str(line).map_err(|e| IngestError::Malformed { line: lineno, reason: e.to_string() })?;
        let record =
            validate_record(record).map_err(|e| IngestError::Malformed { line: lineno, reason: e.to_string() })?;
        if !seen.insert((record.camera_id.clone(), record.frame_id.clone())) {
            return Err(IngestError::DuplicateFrame { camera_id: record.camera_id, frame_id: record.frame_id });
        }
        records.push(record);
    }
    Ok(records)
}

/// Serializes records in the JSON Lines format read by [`parse_detections`].
pub fn serialize_detections(records: &[DetectionRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("detection records always serialize"));
        out.push('\n');
    }
    out
}

/// Checks record invariants and lowercases class labels.
pub fn validate_record(mut record: DetectionRecord) -> Result<DetectionRecord, IngestError> {
    let invalid = |r: &DetectionRecord, reason: String| IngestError::Invalid {
        camera_id: r.camera_id.clone(),
        frame_id: r.frame_id.clone(),
        reason,
    };
    if record.timestamp_ms < 0 {
        return Err(invalid(&record, "negative timestamp_ms".into()));
    }
    let mut tracks = HashSet::new();
    for obj in &mut record.objects {
        obj.class_label = obj.class_label.trim().to_lowercase();
    }
    for obj in &record.objects {
        if obj.class_label.is_empty() {
            return Err(invalid(&record, format!("track {}: empty class", obj.track_id)));
        }
        if !tracks.insert(obj.track_id.as_str()) {
            return Err(invalid(&record, format!("duplicate track_id {}", obj.track_id)));
        }
        if let Some(speed) = obj.avg_speed_mps {
            if !speed.is_finite() || speed < 0.0 {
                return Err(invalid(
                    &record,
                    format!("track {}: avg_speed_mps must be >= 0, got {speed}", obj.track_id),
                ));
            }
        }
        if let Some(traj) = &obj.trajectory {
            if traj.windows(2).any(|w| w[1].t_ms <= w[0].t_ms) {
                return Err(invalid(
                    &record,
                    format!("track {}: trajectory timestamps not strictly increasing", obj.track_id),
                ));
            }
        }
    }
    Ok(record)
}
