mod common;

use common::kgfuzz::{apply_valid, reaches, try_invalid};
use fairdoc::modelkg::{
    export_json, export_triples, import_json, Direction, EntityQuery, KnowledgeGraph, RelationKind,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_graph(seed: u64, steps: usize) -> KnowledgeGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kg = KnowledgeGraph::new();
    for _ in 0..steps {
        apply_valid(&mut rng, &mut kg);
    }
    kg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valid_mutations_keep_graph_consistent(seed in any::<u64>(), steps in 1usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut kg = KnowledgeGraph::new();
        for _ in 0..steps {
            let what = apply_valid(&mut rng, &mut kg);
            let report = kg.validate();
            prop_assert!(!report.has_errors(), "after {}: {:?}", what, report.errors);
        }
    }

    #[test]
    fn invalid_mutations_are_rejected_without_effect(seed in any::<u64>(), steps in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut kg = random_graph(seed ^ 0x5eed, steps);
        for _ in 0..10 {
            let before = kg.clone();
            let (what, rejected) = try_invalid(&mut rng, &mut kg);
            prop_assert!(rejected, "{} was not rejected", what);
            prop_assert_eq!(&kg, &before, "{} changed the graph", what);
        }
    }

    #[test]
    fn neighbors_mirror_the_edge_list(seed in any::<u64>(), steps in 1usize..60) {
        let kg = random_graph(seed, steps);
        for e in kg.entities() {
            let out = kg.neighbors(&e.id, Direction::Out, None)?;
            let inn = kg.neighbors(&e.id, Direction::In, None)?;
            let both = kg.neighbors(&e.id, Direction::Both, None)?;
            prop_assert_eq!(out.len(), kg.relations().filter(|t| t.src == e.id).count());
            prop_assert_eq!(inn.len(), kg.relations().filter(|t| t.dst == e.id).count());
            prop_assert_eq!(both.len(), out.len() + inn.len());
            for n in &out {
                prop_assert!(kg.relations().any(|t| t.src == e.id && t.dst == n.entity.id && t.relation == n.relation));
            }
            for r in RelationKind::ALL {
                let filtered = kg.neighbors(&e.id, Direction::Both, Some(*r))?;
                prop_assert!(filtered.iter().all(|n| n.relation == *r));
            }
        }
        // kind filter agrees with a plain scan
        for e in kg.entities() {
            let q = EntityQuery { kind: Some(e.kind), ..Default::default() };
            prop_assert!(kg.find_entities(&q).iter().any(|h| h.id == e.id));
        }
    }

    #[test]
    fn generalizes_stays_acyclic(seed in any::<u64>(), steps in 1usize..80) {
        let kg = random_graph(seed, steps);
        for t in kg.relations().filter(|t| t.relation == RelationKind::Generalizes) {
            prop_assert!(!reaches(&kg, &t.dst, &t.src), "cycle through {} -> {}", t.src, t.dst);
        }
    }

    #[test]
    fn json_round_trip_is_byte_identical(seed in any::<u64>(), steps in 0usize..60) {
        let kg = random_graph(seed, steps);
        let bytes = export_json(&kg);
        let back = import_json(&bytes)?;
        prop_assert_eq!(&back, &kg);
        prop_assert_eq!(export_json(&back), bytes);
    }

    #[test]
    fn triples_are_deterministic(seed in any::<u64>(), steps in 0usize..40) {
        let kg = random_graph(seed, steps);
        let a = export_triples(&kg, "https://example.org/kg/")?;
        let b = export_triples(&import_json(&export_json(&kg))?, "https://example.org/kg/")?;
        prop_assert_eq!(&a, &b);
        let text = String::from_utf8(a).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort();
        prop_assert_eq!(lines, sorted);
    }
}
