use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DetectionRecord, IngestError, ObjectDetection};

/// Steady-state object count for one class in one lane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaneRate {
    pub lane: u32,
    pub class: String,
    pub count: u32,
    /// Mean speed; objects get a uniform draw in `[0.5, 1.5] * speed_mps`.
    #[serde(default)]
    pub speed_mps: Option<f64>,
}

/// Extra cars injected into a lane for frames `start_frame..=end_frame`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub start_frame: usize,
    pub end_frame: usize,
    pub lane: u32,
    pub extra_car_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub frames: usize,
    #[serde(default = "default_camera")]
    pub camera_id: String,
    #[serde(default)]
    pub start_ms: i64,
    #[serde(default = "default_interval")]
    pub frame_interval_ms: i64,
    #[serde(default)]
    pub rates: Vec<LaneRate>,
    /// Per (lane, class, frame) count jitter is uniform on `-noise_bound..=noise_bound`,
    /// clamped so counts stay non-negative.
    #[serde(default)]
    pub noise_bound: u32,
    #[serde(default)]
    pub episodes: Vec<Episode>,
    /// Speed of injected cars. Queues crawl.
    #[serde(default = "default_episode_speed")]
    pub episode_speed_mps: f64,
}

fn default_camera() -> String {
    "cam0".into()
}

fn default_interval() -> i64 {
    1000
}

fn default_episode_speed() -> f64 {
    1.0
}

impl SynthConfig {
    pub fn new(frames: usize) -> Self {
        Self {
            frames,
            camera_id: default_camera(),
            start_ms: 0,
            frame_interval_ms: default_interval(),
            rates: Vec::new(),
            noise_bound: 0,
            episodes: Vec::new(),
            episode_speed_mps: default_episode_speed(),
        }
    }

    fn check(&self) -> Result<(), IngestError> {
        for (i, a) in self.episodes.iter().enumerate() {
            if a.start_frame > a.end_frame {
                return Err(IngestError::Config(format!(
                    "episode {i}: start_frame {} > end_frame {}",
                    a.start_frame, a.end_frame
                )));
            }
            for b in &self.episodes[i + 1..] {
                if a.lane == b.lane && a.start_frame <= b.end_frame && b.start_frame <= a.end_frame {
                    return Err(IngestError::Config(format!(
                        "overlapping episodes on lane {}: {}-{} and {}-{}",
                        a.lane, a.start_frame, a.end_frame, b.start_frame, b.end_frame
                    )));
                }
            }
        }
        if self.start_ms < 0 || self.frame_interval_ms < 0 {
            return Err(IngestError::Config("timestamps must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub frame_id: String,
    pub congested: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthOutput {
    pub records: Vec<DetectionRecord>,
    pub truth: Vec<GroundTruth>,
}

/// Generates a deterministic detection stream for `(config, seed)`.
pub fn synthesize_scenes(config: &SynthConfig, seed: u64) -> Result<SynthOutput, IngestError> {
    config.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(config.frames);
    let mut truth = Vec::with_capacity(config.frames);

    for frame in 0..config.frames {
        let frame_id = format!("f{frame:05}");
        let mut objects = Vec::new();
        let mut next_track = 0usize;
        let mut push = |objects: &mut Vec<ObjectDetection>, class: &str, lane: u32, speed: Option<f64>| {
            let mut o = ObjectDetection::new(format!("t{next_track:04}"), class).with_lane(lane);
            o.avg_speed_mps = speed;
            objects.push(o);
            next_track += 1;
        };

        for rate in &config.rates {
            let jitter = if config.noise_bound > 0 {
                let b = config.noise_bound as i64;
                rng.gen_range(-b..=b)
            } else {
                0
            };
            let n = (rate.count as i64 + jitter).max(0) as usize;
            for _ in 0..n {
                let speed = rate.speed_mps.map(|s| round2(s * rng.gen_range(0.5..=1.5)));
                push(&mut objects, &rate.class, rate.lane, speed);
            }
        }

        let mut congested = false;
        for ep in &config.episodes {
            if (ep.start_frame..=ep.end_frame).contains(&frame) {
                congested = true;
                for _ in 0..ep.extra_car_count {
                    let speed = round2(config.episode_speed_mps * rng.gen_range(0.5..=1.5));
                    push(&mut objects, "car", ep.lane, Some(speed));
                }
            }
        }

        records.push(DetectionRecord {
            camera_id: config.camera_id.clone(),
            frame_id: frame_id.clone(),
            timestamp_ms: config.start_ms + frame as i64 * config.frame_interval_ms,
            objects,
        });
        truth.push(GroundTruth { frame_id, congested });
    }
    Ok(SynthOutput { records, truth })
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
