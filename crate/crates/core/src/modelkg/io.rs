//! Canonical JSON documents and line-oriented triple export.

use std::collections::{BTreeMap, BTreeSet};

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use super::store::check_entity_fields;
use super::{Entity, KgError, KnowledgeGraph, Triple};

/// Schema tag of the JSON document; moves together with the questionnaire
/// template version.
pub const KG_SCHEMA: &str = "fairdoc.kg/1.0";

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
const DC_DESCRIPTION: &str = "http://purl.org/dc/terms/description";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KgDoc {
    schema: String,
    version: u64,
    next_seq: u64,
    entities: Vec<Entity>,
    relations: Vec<Triple>,
}

pub fn export_json(kg: &KnowledgeGraph) -> Vec<u8> {
    let doc = KgDoc {
        schema: KG_SCHEMA.to_string(),
        version: kg.version,
        next_seq: kg.next_seq,
        entities: kg.entities.values().cloned().collect(),
        relations: kg.relations.iter().cloned().collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("graph document serializes");
    bytes.push(b'\n');
    bytes
}

fn violation(path: impl Into<String>, message: impl Into<String>) -> KgError {
    KgError::SchemaViolation { path: path.into(), message: message.into() }
}

/// Parses and fully validates a graph document. Nothing is partially loaded:
/// any structural or semantic problem rejects the whole document.
pub fn import_json(bytes: &[u8]) -> Result<KnowledgeGraph, KgError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let doc: KgDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        violation(path, e.into_inner().to_string())
    })?;
    if doc.schema != KG_SCHEMA {
        return Err(violation("schema", format!("expected `{KG_SCHEMA}`, found `{}`", doc.schema)));
    }

    let mut entities = BTreeMap::new();
    for (i, e) in doc.entities.into_iter().enumerate() {
        if e.id.trim().is_empty() {
            return Err(violation(format!("entities[{i}].id"), "empty id"));
        }
        check_entity_fields(&e.label, &e.external_ids).map_err(|err| violation(format!("entities[{i}]"), err.to_string()))?;
        if entities.contains_key(&e.id) {
            return Err(violation(format!("entities[{i}].id"), format!("duplicate id `{}`", e.id)));
        }
        entities.insert(e.id.clone(), e);
    }

    let mut kg = KnowledgeGraph {
        entities,
        relations: BTreeSet::new(),
        version: doc.version,
        next_seq: doc.next_seq,
    };
    for t in doc.relations {
        for end in [&t.src, &t.dst] {
            if !kg.entities.contains_key(end) {
                return Err(KgError::DanglingReference {
                    relation: format!("{} {} {}", t.src, t.relation, t.dst),
                    missing: end.clone(),
                });
            }
        }
        kg.check_relation(&t.src, t.relation, &t.dst)?;
        kg.relations.insert(t);
    }
    Ok(kg)
}

fn check_base_iri(base: &str) -> Result<(), KgError> {
    let bad = || KgError::InvalidIri(base.to_string());
    if base.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`')) {
        return Err(bad());
    }
    let url = url::Url::parse(base).map_err(|_| bad())?;
    if url.cannot_be_a_base() {
        return Err(bad());
    }
    Ok(())
}

fn literal(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

const SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'.').remove(b'-').remove(b'_');

fn iri_segment(text: &str) -> String {
    utf8_percent_encode(text, SEGMENT).to_string()
}

/// N-Triples style export. Subjects are `base_iri + id`; kinds, relations,
/// external ids and attributes get predicate IRIs under the same base.
/// Lines are sorted, so the output is a pure function of the graph.
pub fn export_triples(kg: &KnowledgeGraph, base_iri: &str) -> Result<Vec<u8>, KgError> {
    check_base_iri(base_iri)?;
    let node = |id: &str| format!("<{base_iri}{}>", iri_segment(id));
    let mut lines = Vec::new();
    for e in kg.entities.values() {
        let s = node(&e.id);
        lines.push(format!("{s} <{RDF_TYPE}> <{base_iri}class/{}> .", e.kind.name()));
        lines.push(format!("{s} <{RDFS_LABEL}> {} .", literal(&e.label)));
        lines.push(format!("{s} <{DC_DESCRIPTION}> {} .", literal(&e.description)));
        for (scheme, value) in &e.external_ids {
            lines.push(format!("{s} <{base_iri}id/{}> {} .", iri_segment(scheme), literal(value)));
        }
        for (key, value) in &e.attributes {
            lines.push(format!("{s} <{base_iri}attribute/{}> {} .", iri_segment(key), literal(value)));
        }
    }
    for t in &kg.relations {
        lines.push(format!("{} <{base_iri}relation/{}> {} .", node(&t.src), t.relation.name(), node(&t.dst)));
    }
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    Ok(out.into_bytes())
}
