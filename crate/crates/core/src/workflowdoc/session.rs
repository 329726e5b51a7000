use std::collections::{BTreeMap, BTreeSet};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::template::{ids, AnswerType, Question, QuestionnaireTemplate};
use super::DocError;
use crate::boolpoly::TermOrder;
use crate::metafetch::normalize_doi;
use crate::modelkg::{check_entity_fields, EntityKind, KgError, KnowledgeGraph, NewEntity, RelationKind, Triple};
use crate::rulemine::{FormTag, RuleSet};

pub const SESSION_FORMAT: &str = "fairdoc.session/1";

/// Ids of staged entities start with this; kind prefixes of graph ids never do.
pub const STAGED_PREFIX: &str = "staged-";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum AnswerValue {
    Text(String),
    Term(String),
    Ref(String),
    RefList(Vec<String>),
    Flag(bool),
    Doi(String),
}

impl AnswerValue {
    /// Entity ids referenced by the answer.
    pub fn refs(&self) -> &[String] {
        match self {
            AnswerValue::Ref(id) => std::slice::from_ref(id),
            AnswerValue::RefList(ids) => ids,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionStatus {
    Draft,
    Complete,
    Exported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagedEntity {
    pub id: String,
    pub entity: NewEntity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttachedRule {
    pub text: String,
    pub form: FormTag,
    pub support: usize,
}

/// Summary of a mined rule set linked to the session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulesAttachment {
    pub name: String,
    pub dataset_digest: String,
    pub order: TermOrder,
    pub row_count: usize,
    pub distinct_point_count: usize,
    pub rules: Vec<AttachedRule>,
}

impl RulesAttachment {
    pub fn from_rule_set(name: impl Into<String>, rs: &RuleSet) -> Self {
        Self {
            name: name.into(),
            dataset_digest: rs.dataset_digest.clone(),
            order: rs.order,
            row_count: rs.row_count,
            distinct_point_count: rs.distinct_point_count,
            rules: rs
                .rules
                .iter()
                .map(|r| AttachedRule { text: r.text.clone(), form: r.form.tag(), support: r.support })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportRecord {
    pub workflow_id: String,
    /// Staged id to graph id.
    pub id_map: BTreeMap<String, String>,
    pub exported_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentationSession {
    format: String,
    id: String,
    template_version: String,
    created_at: u64,
    updated_at: u64,
    status: SessionStatus,
    answers: BTreeMap<String, AnswerValue>,
    /// Labels of every referenced entity, captured when the reference was made.
    ref_labels: BTreeMap<String, String>,
    staged_entities: Vec<StagedEntity>,
    staged_relations: Vec<Triple>,
    pending_suggestions: BTreeSet<String>,
    rules: Option<RulesAttachment>,
    export: Option<ExportRecord>,
}

pub(super) fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn mismatch(q: &Question, message: impl Into<String>) -> DocError {
    DocError::TypeMismatch { question: q.id.clone(), expected: q.answer_type.name().to_string(), message: message.into() }
}

impl DocumentationSession {
    pub fn new(template: &QuestionnaireTemplate) -> Self {
        let now = unix_now();
        let mut s = Self {
            format: SESSION_FORMAT.to_string(),
            id: uuid::Uuid::new_v4().to_string(),
            template_version: template.version.clone(),
            created_at: now,
            updated_at: now,
            status: SessionStatus::Draft,
            answers: BTreeMap::new(),
            ref_labels: BTreeMap::new(),
            staged_entities: Vec::new(),
            staged_relations: Vec::new(),
            pending_suggestions: BTreeSet::new(),
            rules: None,
            export: None,
        };
        s.refresh_status(template);
        s
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn template_version(&self) -> &str {
        &self.template_version
    }

    pub fn created_at(&self) -> u64 {
        self.created_at
    }

    pub fn updated_at(&self) -> u64 {
        self.updated_at
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn answers(&self) -> &BTreeMap<String, AnswerValue> {
        &self.answers
    }

    pub fn answer(&self, qid: &str) -> Option<&AnswerValue> {
        self.answers.get(qid)
    }

    pub fn ref_label(&self, id: &str) -> Option<&str> {
        self.ref_labels.get(id).map(String::as_str)
    }

    pub fn staged_entities(&self) -> &[StagedEntity] {
        &self.staged_entities
    }

    pub fn staged_relations(&self) -> &[Triple] {
        &self.staged_relations
    }

    /// Questions with a suggestion waiting for review, e.g. publication
    /// details after a DOI was entered.
    pub fn pending_suggestions(&self) -> &BTreeSet<String> {
        &self.pending_suggestions
    }

    pub fn rules(&self) -> Option<&RulesAttachment> {
        self.rules.as_ref()
    }

    pub fn export_record(&self) -> Option<&ExportRecord> {
        self.export.as_ref()
    }

    fn check_version(&self, template: &QuestionnaireTemplate) -> Result<(), DocError> {
        if self.template_version != template.version {
            return Err(DocError::VersionMismatch {
                expected: template.version.clone(),
                found: self.template_version.clone(),
            });
        }
        Ok(())
    }

    fn staged(&self, id: &str) -> Option<&StagedEntity> {
        self.staged_entities.iter().find(|s| s.id == id)
    }

    /// Kind and label of a graph entity or a staged one.
    pub fn resolve_ref(&self, kg: &KnowledgeGraph, id: &str) -> Option<(EntityKind, String)> {
        if let Some(s) = self.staged(id) {
            return Some((s.entity.kind, s.entity.label.clone()));
        }
        kg.entity(id).map(|e| (e.kind, e.label.clone()))
    }

    fn check_ref(&self, q: &Question, kg: &KnowledgeGraph, kind: EntityKind, id: &str) -> Result<String, DocError> {
        let (found, label) = self
            .resolve_ref(kg, id)
            .ok_or_else(|| DocError::UnknownEntityRef { question: q.id.clone(), id: id.to_string() })?;
        if found != kind {
            return Err(mismatch(q, format!("`{id}` is a {found}, expected {kind}")));
        }
        Ok(label)
    }

    fn checked_value(
        &self,
        q: &Question,
        kg: &KnowledgeGraph,
        value: AnswerValue,
    ) -> Result<(AnswerValue, Vec<(String, String)>), DocError> {
        let mut labels = Vec::new();
        let value = match (&q.answer_type, value) {
            (AnswerType::FreeText, AnswerValue::Text(s)) => {
                let s = s.trim();
                if s.is_empty() {
                    return Err(mismatch(q, "empty text"));
                }
                AnswerValue::Text(s.to_string())
            }
            (AnswerType::ControlledTerm { allowed }, AnswerValue::Term(t)) => {
                if !allowed.contains(&t) {
                    return Err(mismatch(q, format!("`{t}` is not one of {allowed:?}")));
                }
                AnswerValue::Term(t)
            }
            (AnswerType::EntityRef { kind }, AnswerValue::Ref(id)) => {
                labels.push((id.clone(), self.check_ref(q, kg, *kind, &id)?));
                AnswerValue::Ref(id)
            }
            (AnswerType::EntityRefList { kind }, AnswerValue::RefList(list)) => {
                if list.is_empty() {
                    return Err(mismatch(q, "empty list"));
                }
                let mut seen = BTreeSet::new();
                let mut kept = Vec::new();
                for id in list {
                    if seen.insert(id.clone()) {
                        labels.push((id.clone(), self.check_ref(q, kg, *kind, &id)?));
                        kept.push(id);
                    }
                }
                AnswerValue::RefList(kept)
            }
            (AnswerType::BooleanFlag, AnswerValue::Flag(b)) => AnswerValue::Flag(b),
            (AnswerType::DoiString, AnswerValue::Doi(d)) => {
                AnswerValue::Doi(normalize_doi(&d).map_err(|e| mismatch(q, e.to_string()))?)
            }
            (_, other) => return Err(mismatch(q, format!("got a {} value", value_kind(&other)))),
        };
        Ok((value, labels))
    }

    pub fn set_answer(
        &mut self,
        template: &QuestionnaireTemplate,
        kg: &KnowledgeGraph,
        qid: &str,
        value: AnswerValue,
    ) -> Result<(), DocError> {
        self.check_version(template)?;
        let q = template.question(qid).ok_or_else(|| DocError::UnknownQuestion(qid.to_string()))?;
        let (value, labels) = self.checked_value(q, kg, value)?;
        self.ref_labels.extend(labels);
        if qid == ids::PUBLICATION_DOI {
            for linked in ids::PUBLICATION_LINKED {
                if !self.answers.contains_key(linked) {
                    self.pending_suggestions.insert(linked.to_string());
                }
            }
        }
        self.pending_suggestions.remove(qid);
        self.answers.insert(qid.to_string(), value);
        self.touch(template);
        Ok(())
    }

    pub fn clear_answer(&mut self, template: &QuestionnaireTemplate, qid: &str) -> Result<bool, DocError> {
        self.check_version(template)?;
        template.question(qid).ok_or_else(|| DocError::UnknownQuestion(qid.to_string()))?;
        let removed = self.answers.remove(qid).is_some();
        if qid == ids::PUBLICATION_DOI {
            for linked in ids::PUBLICATION_LINKED {
                self.pending_suggestions.remove(linked);
            }
        }
        if removed {
            self.touch(template);
        }
        Ok(removed)
    }

    /// Stages an entity for creation at export and returns its session-local id.
    pub fn stage_entity(&mut self, entity: NewEntity) -> Result<String, DocError> {
        check_entity_fields(&entity.label, &entity.external_ids).map_err(|e| DocError::kg(None, e))?;
        let id = format!("{STAGED_PREFIX}{}", self.staged_entities.len() + 1);
        self.ref_labels.insert(id.clone(), entity.label.clone());
        self.staged_entities.push(StagedEntity { id: id.clone(), entity });
        self.updated_at = unix_now();
        Ok(id)
    }

    /// Stages an edge between staged or existing entities; domain and range
    /// are checked now, acyclicity at export. `Ok(false)` if already staged.
    pub fn stage_relation(
        &mut self,
        kg: &KnowledgeGraph,
        src: &str,
        relation: RelationKind,
        dst: &str,
    ) -> Result<bool, DocError> {
        let lookup = |id: &str| {
            self.resolve_ref(kg, id)
                .ok_or_else(|| DocError::kg(None, KgError::MissingEntity(id.to_string())))
        };
        let (src_kind, src_label) = lookup(src)?;
        let (dst_kind, dst_label) = lookup(dst)?;
        if src_kind != relation.domain() || dst_kind != relation.range() {
            return Err(DocError::kg(
                None,
                KgError::DomainRangeViolation {
                    relation,
                    expected_domain: relation.domain(),
                    expected_range: relation.range(),
                    src_kind,
                    dst_kind,
                },
            ));
        }
        let t = Triple::new(src, relation, dst);
        if self.staged_relations.contains(&t) {
            return Ok(false);
        }
        self.ref_labels.insert(src.to_string(), src_label);
        self.ref_labels.insert(dst.to_string(), dst_label);
        self.staged_relations.push(t);
        self.updated_at = unix_now();
        Ok(true)
    }

    pub fn attach_rules(&mut self, attachment: RulesAttachment) {
        self.rules = Some(attachment);
        self.updated_at = unix_now();
    }

    /// Mandatory questions without an answer, in template order.
    pub fn completeness(&self, template: &QuestionnaireTemplate) -> Vec<String> {
        template
            .questions()
            .filter(|q| q.mandatory && !self.answers.contains_key(&q.id))
            .map(|q| q.id.clone())
            .collect()
    }

    fn refresh_status(&mut self, template: &QuestionnaireTemplate) {
        self.status = if self.completeness(template).is_empty() {
            SessionStatus::Complete
        } else {
            SessionStatus::Draft
        };
    }

    /// Any edit leaves the exported state; the previous export record stays.
    fn touch(&mut self, template: &QuestionnaireTemplate) {
        self.updated_at = unix_now();
        self.refresh_status(template);
    }

    pub(super) fn mark_exported(&mut self, record: ExportRecord) {
        self.updated_at = record.exported_at;
        self.export = Some(record);
        self.status = SessionStatus::Exported;
    }

    /// Id under which a referenced entity is known: the graph id once exported.
    pub fn display_id<'a>(&'a self, id: &'a str) -> &'a str {
        self.export
            .as_ref()
            .and_then(|r| r.id_map.get(id))
            .map(String::as_str)
            .unwrap_or(id)
    }
}

fn value_kind(v: &AnswerValue) -> &'static str {
    match v {
        AnswerValue::Text(_) => "text",
        AnswerValue::Term(_) => "term",
        AnswerValue::Ref(_) => "ref",
        AnswerValue::RefList(_) => "ref_list",
        AnswerValue::Flag(_) => "flag",
        AnswerValue::Doi(_) => "doi",
    }
}

pub fn save_session(session: &DocumentationSession) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(session).expect("session serializes");
    bytes.push(b'\n');
    bytes
}

fn violation(path: impl Into<String>, message: impl Into<String>) -> DocError {
    DocError::SchemaViolation { path: path.into(), message: message.into() }
}

/// Parses a saved session and re-checks everything that does not need the
/// graph: answer shapes against the template, staged ids, status invariants.
pub fn load_session(bytes: &[u8], template: &QuestionnaireTemplate) -> Result<DocumentationSession, DocError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let s: DocumentationSession = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        violation(path, e.into_inner().to_string())
    })?;
    if s.format != SESSION_FORMAT {
        return Err(violation("format", format!("expected `{SESSION_FORMAT}`, found `{}`", s.format)));
    }
    s.check_version(template)?;

    for (i, st) in s.staged_entities.iter().enumerate() {
        if st.id != format!("{STAGED_PREFIX}{}", i + 1) {
            return Err(violation(format!("staged_entities[{i}].id"), format!("expected {STAGED_PREFIX}{}", i + 1)));
        }
        check_entity_fields(&st.entity.label, &st.entity.external_ids)
            .map_err(|e| violation(format!("staged_entities[{i}]"), e.to_string()))?;
    }
    for (qid, value) in &s.answers {
        let path = format!("answers.{qid}");
        let q = template.question(qid).ok_or_else(|| violation(&path, "unknown question"))?;
        let ok = match (&q.answer_type, value) {
            (AnswerType::FreeText, AnswerValue::Text(t)) => !t.trim().is_empty(),
            (AnswerType::ControlledTerm { allowed }, AnswerValue::Term(t)) => allowed.contains(t),
            (AnswerType::EntityRef { .. }, AnswerValue::Ref(_)) => true,
            (AnswerType::EntityRefList { .. }, AnswerValue::RefList(l)) => !l.is_empty(),
            (AnswerType::BooleanFlag, AnswerValue::Flag(_)) => true,
            (AnswerType::DoiString, AnswerValue::Doi(d)) => normalize_doi(d).as_deref() == Ok(d.as_str()),
            _ => false,
        };
        if !ok {
            return Err(violation(path, format!("value does not fit {}", q.answer_type.name())));
        }
        if let Some(missing) = value.refs().iter().find(|id| !s.ref_labels.contains_key(*id)) {
            return Err(violation(path, format!("no label recorded for `{missing}`")));
        }
    }
    let complete = s.completeness(template).is_empty();
    match s.status {
        SessionStatus::Exported if s.export.is_none() => return Err(violation("status", "exported without export record")),
        SessionStatus::Complete | SessionStatus::Exported if !complete => {
            return Err(violation("status", "mandatory questions unanswered"))
        }
        SessionStatus::Draft if complete => return Err(violation("status", "complete session marked draft")),
        _ => {}
    }
    Ok(s)
}
