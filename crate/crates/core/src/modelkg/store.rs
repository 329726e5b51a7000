use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{DedupPolicy, Entity, EntityKind, KgError, NewEntity, RelationKind, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeGraph {
    pub(super) entities: BTreeMap<String, Entity>,
    pub(super) relations: BTreeSet<Triple>,
    pub(super) version: u64,
    pub(super) next_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CreateOutcome {
    pub id: String,
    pub created: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Neighbor {
    pub relation: RelationKind,
    pub direction: Direction,
    /// Relation name for outgoing edges, inverse reading for incoming ones.
    pub reading: &'static str,
    pub entity: Entity,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityQuery {
    pub kind: Option<EntityKind>,
    /// Case-insensitive substring of the label.
    pub label: Option<String>,
    /// `(scheme, value)` that must be present.
    pub external_id: Option<(String, String)>,
}

fn valid_scheme(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

pub(crate) fn check_entity_fields(label: &str, external_ids: &BTreeMap<String, String>) -> Result<(), KgError> {
    if label.trim().is_empty() {
        return Err(KgError::EmptyLabel);
    }
    for (scheme, value) in external_ids {
        if !valid_scheme(scheme) || value.trim().is_empty() {
            return Err(KgError::InvalidExternalId { scheme: scheme.clone() });
        }
    }
    Ok(())
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Incremented by every mutation that changes the graph.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.get(id)
    }

    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn relations(&self) -> impl Iterator<Item = &Triple> {
        self.relations.iter()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn contains_relation(&self, t: &Triple) -> bool {
        self.relations.contains(t)
    }

    fn get(&self, id: &str) -> Result<&Entity, KgError> {
        self.entities.get(id).ok_or_else(|| KgError::MissingEntity(id.to_string()))
    }

    /// Existing entity of the same kind sharing an external id, else one with
    /// the identical label.
    pub fn find_match(&self, new: &NewEntity) -> Option<&Entity> {
        let same_kind = || self.entities.values().filter(|e| e.kind == new.kind);
        same_kind()
            .find(|e| {
                new.external_ids
                    .iter()
                    .any(|(scheme, value)| e.external_ids.get(scheme) == Some(value))
            })
            .or_else(|| same_kind().find(|e| e.label == new.label))
    }

    fn mint_id(&mut self, kind: EntityKind) -> String {
        loop {
            self.next_seq += 1;
            let id = format!("{}-{:06}", kind.id_prefix(), self.next_seq);
            if !self.entities.contains_key(&id) {
                return id;
            }
        }
    }

    pub fn create_entity(&mut self, new: NewEntity, policy: DedupPolicy) -> Result<CreateOutcome, KgError> {
        check_entity_fields(&new.label, &new.external_ids)?;
        if let Some(existing) = self.find_match(&new) {
            match policy {
                DedupPolicy::Reuse => {
                    return Ok(CreateOutcome { id: existing.id.clone(), created: false });
                }
                DedupPolicy::Strict => {
                    return Err(KgError::DuplicateEntity { existing: existing.id.clone() });
                }
                DedupPolicy::Force => {}
            }
        }
        let id = self.mint_id(new.kind);
        self.entities.insert(
            id.clone(),
            Entity {
                id: id.clone(),
                kind: new.kind,
                label: new.label,
                description: new.description,
                external_ids: new.external_ids,
                attributes: new.attributes,
            },
        );
        self.version += 1;
        Ok(CreateOutcome { id, created: true })
    }

    /// Checks a prospective edge against the current graph without storing it.
    pub fn check_relation(&self, src: &str, relation: RelationKind, dst: &str) -> Result<(), KgError> {
        let s = self.get(src)?;
        let d = self.get(dst)?;
        if s.kind != relation.domain() || d.kind != relation.range() {
            return Err(KgError::DomainRangeViolation {
                relation,
                expected_domain: relation.domain(),
                expected_range: relation.range(),
                src_kind: s.kind,
                dst_kind: d.kind,
            });
        }
        if relation == RelationKind::Generalizes && self.generalizes_path(dst, src) {
            return Err(KgError::CycleIntroduced { src: src.to_string(), dst: dst.to_string() });
        }
        Ok(())
    }

    /// Stores the edge; `Ok(false)` if it already existed.
    pub fn add_relation(&mut self, src: &str, relation: RelationKind, dst: &str) -> Result<bool, KgError> {
        self.check_relation(src, relation, dst)?;
        let added = self.relations.insert(Triple::new(src, relation, dst));
        if added {
            self.version += 1;
        }
        Ok(added)
    }

    /// Whether `to` is reachable from `from` along generalizes edges (a node reaches itself).
    fn generalizes_path(&self, from: &str, to: &str) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(node) = stack.pop() {
            if node == to {
                return true;
            }
            if !seen.insert(node) {
                continue;
            }
            stack.extend(
                self.relations
                    .iter()
                    .filter(|t| t.relation == RelationKind::Generalizes && t.src == node)
                    .map(|t| t.dst.as_str()),
            );
        }
        false
    }

    /// Inserts an entity without any checks. Only for building damaged
    /// graphs in tests and repair tooling; see [`KnowledgeGraph::validate`].
    #[doc(hidden)]
    pub fn insert_entity_unchecked(&mut self, entity: Entity) {
        self.entities.insert(entity.id.clone(), entity);
        self.version += 1;
    }

    /// Inserts an edge without any checks. See [`Self::insert_entity_unchecked`].
    #[doc(hidden)]
    pub fn insert_relation_unchecked(&mut self, triple: Triple) {
        self.relations.insert(triple);
        self.version += 1;
    }

    /// All filters are conjunctive; ordered by label, then id.
    pub fn find_entities(&self, query: &EntityQuery) -> Vec<&Entity> {
        let needle = query.label.as_ref().map(|s| s.to_lowercase());
        let mut hits: Vec<&Entity> = self
            .entities
            .values()
            .filter(|e| query.kind.is_none_or(|k| e.kind == k))
            .filter(|e| needle.as_ref().is_none_or(|n| e.label.to_lowercase().contains(n.as_str())))
            .filter(|e| {
                query
                    .external_id
                    .as_ref()
                    .is_none_or(|(scheme, value)| e.external_ids.get(scheme) == Some(value))
            })
            .collect();
        hits.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.id.cmp(&b.id)));
        hits
    }

    pub fn neighbors(
        &self,
        id: &str,
        direction: Direction,
        filter: Option<RelationKind>,
    ) -> Result<Vec<Neighbor>, KgError> {
        self.get(id)?;
        let mut out = Vec::new();
        for t in &self.relations {
            if filter.is_some_and(|f| f != t.relation) {
                continue;
            }
            if t.src == id && direction != Direction::In {
                if let Some(e) = self.entities.get(&t.dst) {
                    out.push(Neighbor {
                        relation: t.relation,
                        direction: Direction::Out,
                        reading: t.relation.name(),
                        entity: e.clone(),
                    });
                }
            }
            if t.dst == id && direction != Direction::Out {
                if let Some(e) = self.entities.get(&t.src) {
                    out.push(Neighbor {
                        relation: t.relation,
                        direction: Direction::In,
                        reading: t.relation.inverse_name(),
                        entity: e.clone(),
                    });
                }
            }
        }
        out.sort_by(|a, b| {
            (a.direction, a.relation.name(), &a.entity.label, &a.entity.id)
                .cmp(&(b.direction, b.relation.name(), &b.entity.label, &b.entity.id))
        });
        Ok(out)
    }

    /// Ids of entities reached from `id` along `relation` (outgoing), sorted by label.
    pub(super) fn targets(&self, id: &str, relation: RelationKind) -> Vec<&Entity> {
        let mut v: Vec<&Entity> = self
            .relations
            .iter()
            .filter(|t| t.src == id && t.relation == relation)
            .filter_map(|t| self.entities.get(&t.dst))
            .collect();
        v.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.id.cmp(&b.id)));
        v
    }

    /// Sources of `relation` edges ending at `id`, sorted by label.
    pub(super) fn sources(&self, id: &str, relation: RelationKind) -> Vec<&Entity> {
        let mut v: Vec<&Entity> = self
            .relations
            .iter()
            .filter(|t| t.dst == id && t.relation == relation)
            .filter_map(|t| self.entities.get(&t.src))
            .collect();
        v.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.id.cmp(&b.id)));
        v
    }
}
