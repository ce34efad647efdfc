mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmkg::kg::{
    build_graph, export_graph, import_graph, match_pattern, parse_pattern, scene_iri, scene_subgraph, Graph, Term,
    Triple,
};

use common::*;

#[test]
fn random_queries_agree_with_nested_loops() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let graph = build_graph(&random_stream(&mut rng, 6, 5));
        let all: Vec<Triple> = graph.iter().collect();
        for _ in 0..25 {
            let q = random_query(&mut rng, &all);
            let got: BTreeSet<_> = match_pattern(&graph, &q).unwrap().into_iter().collect();
            assert_eq!(got, brute_force_match(&all, &q), "{q:?}");
        }
    }
}

#[test]
fn export_is_a_fixpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let graph = build_graph(&random_stream(&mut rng, 5, 6));
        let text = export_graph(&graph);
        let again = export_graph(&import_graph(&text).unwrap());
        assert_eq!(text, again);
    }
    assert_eq!(export_graph(&Graph::new()), "");
}

#[test]
fn join_finds_the_bike() {
    let graph = build_graph(&[two_car_bike_scene()]);
    let q = [parse_pattern("?s tm:hasObject ?o").unwrap(), parse_pattern("?o rdf:type tm:Bike").unwrap()];
    let hits = match_pattern(&graph, &q).unwrap();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["s"], Term::Iri(scene_iri("cam1", "target")));
}

#[test]
fn subclass_entailment_is_visible_to_queries_only() {
    let graph = build_graph(&[two_car_bike_scene()]);
    let cars = match_pattern(&graph, &[parse_pattern("?x rdf:type tm:Vehicle").unwrap()]).unwrap();
    assert_eq!(cars.len(), 2);
    let typed_vehicle = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://example.org/tmo#Vehicle>";
    assert!(!export_graph(&graph).contains(typed_vehicle));
    let scene = scene_subgraph(&graph, &scene_iri("cam1", "target")).unwrap();
    assert!(scene.iter().all(|t| t.o.to_string() != "<http://example.org/tmo#Vehicle>"));
}

#[test]
fn insertion_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let records = random_stream(&mut rng, 8, 5);
    let forward = build_graph(&records);
    let backward = build_graph(records.iter().rev());
    assert_eq!(export_graph(&forward), export_graph(&backward));
}
