//! Typed knowledge graph of mathematical models and the workflows using them.
//!
//! Entities carry one of thirteen [`EntityKind`]s; edges use the fixed
//! [`RelationKind`] table and must respect its domain and range. The
//! `generalizes` subgraph stays acyclic. Every mutating call validates before
//! it writes, so a graph built through this API always passes
//! [`KnowledgeGraph::validate`].

mod card;
mod io;
mod schema;
mod store;
mod validate;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use card::{EntitySummary, FormulationCard, ModelCard, ProblemCard, PublicationRoles, QuantityCard, TaskCard};
pub use io::{export_json, export_triples, import_json, KG_SCHEMA};
pub use schema::{EntityKind, RelationKind};
pub(crate) use store::check_entity_fields;
pub use store::{CreateOutcome, Direction, EntityQuery, KnowledgeGraph, Neighbor};
pub use validate::{Finding, GraphReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KgError {
    #[error("entity label must not be empty")]
    EmptyLabel,
    #[error("external id `{scheme}` must have a nonempty value and a lowercase scheme")]
    InvalidExternalId { scheme: String },
    #[error("entity already exists as `{existing}`")]
    DuplicateEntity { existing: String },
    #[error("unknown entity kind `{0}`")]
    InvalidKind(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("no entity with id `{0}`")]
    MissingEntity(String),
    #[error("{relation} expects {expected_domain} -> {expected_range}, got {src_kind} -> {dst_kind}")]
    DomainRangeViolation {
        relation: RelationKind,
        expected_domain: EntityKind,
        expected_range: EntityKind,
        src_kind: EntityKind,
        dst_kind: EntityKind,
    },
    #[error("generalizes {src} -> {dst} would close a cycle")]
    CycleIntroduced { src: String, dst: String },
    #[error("`{id}` is a {found}, expected {expected}")]
    WrongKind { id: String, expected: EntityKind, found: EntityKind },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("relation {relation} references missing entity `{missing}`")]
    DanglingReference { relation: String, missing: String },
    #[error("invalid base IRI `{0}`")]
    InvalidIri(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    pub id: String,
    pub kind: EntityKind,
    pub label: String,
    #[serde(default)]
    pub description: String,
    /// Scheme (`doi`, `wikidata`, `swmath`, `zbmath`, `mardi`, ...) to value.
    #[serde(default)]
    pub external_ids: BTreeMap<String, String>,
    #[serde(default)]
    pub attributes: BTreeMap<String, String>,
}

/// Creation request; the store assigns the id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewEntity {
    pub kind: EntityKind,
    pub label: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub external_ids: BTreeMap<String, String>,
    #[serde(default)]
    pub attributes: BTreeMap<String, String>,
}

impl NewEntity {
    pub fn new(kind: EntityKind, label: impl Into<String>) -> Self {
        Self {
            kind,
            label: label.into(),
            description: String::new(),
            external_ids: BTreeMap::new(),
            attributes: BTreeMap::new(),
        }
    }

    pub fn description(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }

    pub fn external_id(mut self, scheme: impl Into<String>, value: impl Into<String>) -> Self {
        self.external_ids.insert(scheme.into(), value.into());
        self
    }

    pub fn attribute(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.attributes.insert(key.into(), value.into());
        self
    }
}

/// What `create_entity` does when a matching entity (same kind and a shared
/// external id or identical label) already exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DedupPolicy {
    #[default]
    Reuse,
    Strict,
    Force,
}

impl std::str::FromStr for DedupPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reuse" => Ok(DedupPolicy::Reuse),
            "strict" => Ok(DedupPolicy::Strict),
            "force" => Ok(DedupPolicy::Force),
            other => Err(format!("unknown dedup policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triple {
    pub src: String,
    pub relation: RelationKind,
    pub dst: String,
}

impl Triple {
    pub fn new(src: impl Into<String>, relation: RelationKind, dst: impl Into<String>) -> Self {
        Self { src: src.into(), relation, dst: dst.into() }
    }
}
