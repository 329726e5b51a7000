use serde::Serialize;

use super::session::{AnswerValue, DocumentationSession};
use super::template::{ids, QuestionnaireTemplate};
use super::DocError;
use crate::metafetch::{CandidateSource, DoiLookup, PublicationMeta, Resolver};
use crate::modelkg::{EntityKind, EntityQuery, KnowledgeGraph, NewEntity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Kg,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub provenance: Provenance,
    /// Graph id, catalogue id, or DOI.
    pub id: String,
    pub label: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<EntityKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<CandidateSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub publication: Option<PublicationMeta>,
}

impl Suggestion {
    /// Entity to stage when the user accepts an external catalogue candidate.
    pub fn to_new_entity(&self) -> Option<NewEntity> {
        let (kind, source) = (self.kind?, self.source?);
        let scheme = serde_json::to_value(source).ok()?.as_str()?.to_string();
        Some(NewEntity::new(kind, &self.label).description(&self.description).external_id(scheme, &self.id))
    }
}

/// Candidates for a question. Entity questions search the graph by kind and
/// `text`, then the external catalogues. Publication questions offer the
/// resolved metadata of the DOI answer. Lookup failures give no candidates.
pub fn suggest(
    template: &QuestionnaireTemplate,
    session: &DocumentationSession,
    qid: &str,
    text: &str,
    kg: &KnowledgeGraph,
    resolver: &Resolver,
) -> Result<Vec<Suggestion>, DocError> {
    let q = template.question(qid).ok_or_else(|| DocError::UnknownQuestion(qid.to_string()))?;
    let text = text.trim();

    if qid == ids::PUBLICATION_DOI || ids::PUBLICATION_LINKED.contains(&qid) {
        let Some(AnswerValue::Doi(doi)) = session.answer(ids::PUBLICATION_DOI) else {
            return Ok(Vec::new());
        };
        return Ok(match resolver.resolve_doi(doi) {
            Ok(DoiLookup::Found(meta)) => vec![Suggestion {
                provenance: Provenance::External,
                id: meta.doi.clone(),
                label: meta.title.clone(),
                description: format!("{} ({})", meta.authors.join(", "), meta.year),
                kind: Some(EntityKind::Publication),
                source: None,
                publication: Some(meta),
            }],
            _ => Vec::new(),
        });
    }

    let Some(kind) = q.answer_type.entity_kind() else {
        return Ok(Vec::new());
    };
    let query = EntityQuery {
        kind: Some(kind),
        label: (!text.is_empty()).then(|| text.to_string()),
        external_id: None,
    };
    let mut out: Vec<Suggestion> = kg
        .find_entities(&query)
        .into_iter()
        .map(|e| Suggestion {
            provenance: Provenance::Kg,
            id: e.id.clone(),
            label: e.label.clone(),
            description: e.description.clone(),
            kind: Some(e.kind),
            source: None,
            publication: None,
        })
        .collect();
    out.extend(resolver.search_external(text, kind).into_iter().map(|c| Suggestion {
        provenance: Provenance::External,
        id: c.id,
        label: c.label,
        description: c.description,
        kind: Some(kind),
        source: Some(c.source),
        publication: None,
    }));
    Ok(out)
}
