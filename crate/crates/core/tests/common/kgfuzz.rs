//! Random graph mutations with known outcomes.

use std::collections::BTreeSet;

use fairdoc::modelkg::{DedupPolicy, EntityKind, KgError, KnowledgeGraph, NewEntity, RelationKind};
use rand::seq::SliceRandom;
use rand::Rng;

const LABELS: [&str; 8] = ["Alpha", "Beta", "Gamma", "Delta", "Heat Equation", "Boolean", "Julia", "Egyptology"];

fn ids_of(kg: &KnowledgeGraph, kind: EntityKind) -> Vec<String> {
    kg.entities().filter(|e| e.kind == kind).map(|e| e.id.clone()).collect()
}

/// Reachability along generalizes edges, computed from the raw edge list.
pub fn reaches(kg: &KnowledgeGraph, from: &str, to: &str) -> bool {
    let mut stack = vec![from.to_string()];
    let mut seen = BTreeSet::new();
    while let Some(n) = stack.pop() {
        if n == to {
            return true;
        }
        if seen.insert(n.clone()) {
            stack.extend(
                kg.relations()
                    .filter(|t| t.relation == RelationKind::Generalizes && t.src == n)
                    .map(|t| t.dst.clone()),
            );
        }
    }
    false
}

fn random_entity<R: Rng>(rng: &mut R) -> NewEntity {
    let kind = *EntityKind::ALL.choose(rng).unwrap();
    let label = format!("{} {}", LABELS.choose(rng).unwrap(), rng.gen_range(0..4));
    let mut e = NewEntity::new(kind, label);
    if rng.gen_bool(0.2) {
        e = e.external_id(*["doi", "wikidata", "swmath"].choose(rng).unwrap(), format!("X{}", rng.gen_range(0..6)));
    }
    if rng.gen_bool(0.2) {
        e = e.description("some \"quoted\"\ntext").attribute("formula", "a + b");
    }
    e
}

/// Applies one mutation that must succeed. Returns a short description.
pub fn apply_valid<R: Rng>(rng: &mut R, kg: &mut KnowledgeGraph) -> String {
    if kg.len() < 2 || rng.gen_bool(0.4) {
        let e = random_entity(rng);
        let policy = if rng.gen_bool(0.5) { DedupPolicy::Reuse } else { DedupPolicy::Force };
        let desc = format!("create {:?} {policy:?}", e.label);
        kg.create_entity(e, policy).unwrap_or_else(|err| panic!("{desc}: {err}"));
        return desc;
    }
    for _ in 0..50 {
        let relation = *RelationKind::ALL.choose(rng).unwrap();
        let (Some(src), Some(dst)) = (
            ids_of(kg, relation.domain()).choose(rng).cloned(),
            ids_of(kg, relation.range()).choose(rng).cloned(),
        ) else {
            continue;
        };
        if relation == RelationKind::Generalizes && reaches(kg, &dst, &src) {
            continue;
        }
        let desc = format!("{src} {} {dst}", relation.name());
        kg.add_relation(&src, relation, &dst).unwrap_or_else(|err| panic!("{desc}: {err}"));
        return desc;
    }
    let e = random_entity(rng);
    kg.create_entity(e, DedupPolicy::Force).unwrap();
    "create (fallback)".into()
}

/// Attempts one mutation that must be rejected with the named error.
/// Returns (description, rejected as expected).
pub fn try_invalid<R: Rng>(rng: &mut R, kg: &mut KnowledgeGraph) -> (String, bool) {
    let all: Vec<(String, EntityKind, String)> = kg.entities().map(|e| (e.id.clone(), e.kind, e.label.clone())).collect();
    match rng.gen_range(0..6) {
        0 => {
            let r = kg.create_entity(NewEntity::new(EntityKind::Quantity, " \t"), DedupPolicy::Force);
            ("empty label".into(), r == Err(KgError::EmptyLabel))
        }
        1 => {
            let e = NewEntity::new(EntityKind::Publication, "P").external_id("DOI", "10.1/x");
            let r = kg.create_entity(e, DedupPolicy::Force);
            ("uppercase scheme".into(), matches!(r, Err(KgError::InvalidExternalId { .. })))
        }
        2 if !all.is_empty() => {
            let (_, kind, label) = all.choose(rng).unwrap().clone();
            let r = kg.create_entity(NewEntity::new(kind, label), DedupPolicy::Strict);
            ("strict duplicate".into(), matches!(r, Err(KgError::DuplicateEntity { .. })))
        }
        3 if !all.is_empty() => {
            let (src, src_kind, _) = all.choose(rng).unwrap().clone();
            let (dst, dst_kind, _) = all.choose(rng).unwrap().clone();
            let wrong: Vec<RelationKind> = RelationKind::ALL
                .iter()
                .copied()
                .filter(|r| r.domain() != src_kind || r.range() != dst_kind)
                .collect();
            let relation = *wrong.choose(rng).unwrap();
            let r = kg.add_relation(&src, relation, &dst);
            (format!("{src} {} {dst}", relation.name()), matches!(r, Err(KgError::DomainRangeViolation { .. })))
        }
        4 => {
            let src = all.first().map(|e| e.0.clone()).unwrap_or_else(|| "ghost-1".into());
            let r = kg.add_relation(&src, RelationKind::Combines, "ghost-000000");
            ("missing entity".into(), matches!(r, Err(KgError::MissingEntity(_))))
        }
        _ => {
            let edges: Vec<(String, String)> = kg
                .relations()
                .filter(|t| t.relation == RelationKind::Generalizes)
                .map(|t| (t.src.clone(), t.dst.clone()))
                .collect();
            let (src, dst) = match edges.choose(rng) {
                Some((a, b)) => (b.clone(), a.clone()),
                None => match ids_of(kg, EntityKind::MathematicalModel).choose(rng) {
                    Some(m) => (m.clone(), m.clone()),
                    None => {
                        let r = kg.create_entity(NewEntity::new(EntityKind::Quantity, ""), DedupPolicy::Force);
                        return ("empty label".into(), r == Err(KgError::EmptyLabel));
                    }
                },
            };
            let r = kg.add_relation(&src, RelationKind::Generalizes, &dst);
            (format!("cycle {src} -> {dst}"), matches!(r, Err(KgError::CycleIntroduced { .. })))
        }
    }
}
