mod common;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmkg::features::extract_features;
use tmkg::ingest::{synthesize_scenes, Episode, LaneRate, SynthConfig};
use tmkg::kg::{build_graph, instantiate_scene, scene_iri, scene_subgraph, scenes};
use tmkg::lexicalize::describe_scene;
use tmkg::rules::rank_congestion;

use common::*;

#[test]
fn description_ignores_object_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for mut r in random_stream(&mut rng, 30, 8) {
        let before = describe_scene(&instantiate_scene(&r)).text;
        r.objects.shuffle(&mut rng);
        assert_eq!(describe_scene(&instantiate_scene(&r)).text, before);
    }
}

#[test]
fn empty_scene_has_one_sentence() {
    let d = describe_scene(&instantiate_scene(&record("c", "f", 0, vec![])));
    assert_eq!(d.text, "There are 0 object(s) in the scene.");
}

#[test]
fn episode_frames_deviate_more() {
    let mut cfg = SynthConfig::new(120);
    for lane in 1..=2 {
        cfg.rates.push(LaneRate { lane, class: "car".into(), count: 3, speed_mps: Some(8.0) });
    }
    cfg.noise_bound = 1;
    cfg.episodes.push(Episode { start_frame: 40, end_frame: 70, lane: 1, extra_car_count: 6 });
    let out = synthesize_scenes(&cfg, 9).unwrap();
    let graph = build_graph(&out.records);
    let batch: Vec<_> = scenes(&graph)
        .into_iter()
        .map(|s| {
            let f = extract_features(&scene_subgraph(&graph, &s).unwrap());
            (s, f)
        })
        .collect();
    let reports = rank_congestion(&batch, &[]).unwrap();
    let mean = |congested: bool| {
        let devs: Vec<f64> = out
            .truth
            .iter()
            .filter(|t| t.congested == congested)
            .map(|t| {
                let iri = scene_iri(&cfg.camera_id, &t.frame_id);
                reports.iter().find(|r| r.scene_iri == iri).unwrap().deviation
            })
            .collect();
        devs.iter().sum::<f64>() / devs.len() as f64
    };
    assert!(mean(true) > mean(false));
}
