use std::collections::BTreeMap;

use serde::Serialize;

use super::session::{unix_now, AnswerValue, DocumentationSession, ExportRecord};
use super::template::{ids, QuestionnaireTemplate};
use super::DocError;
use crate::modelkg::{DedupPolicy, EntityKind, KnowledgeGraph, NewEntity, RelationKind, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportedEntity {
    pub id: String,
    pub kind: EntityKind,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportReport {
    pub workflow_id: String,
    pub created: Vec<ExportedEntity>,
    pub reused: Vec<ExportedEntity>,
    pub relations_added: Vec<Triple>,
}

/// Mutations run against a copy of the graph; the copy replaces the
/// original only when every step succeeded.
struct Run<'a> {
    kg: KnowledgeGraph,
    policy: DedupPolicy,
    fail_after: Option<usize>,
    mutations: usize,
    id_map: BTreeMap<String, String>,
    report: ExportReport,
    session: &'a DocumentationSession,
}

impl Run<'_> {
    fn tick(&mut self) -> Result<(), DocError> {
        if self.fail_after == Some(self.mutations) {
            return Err(DocError::InjectedFault(self.mutations));
        }
        self.mutations += 1;
        Ok(())
    }

    fn entity(&mut self, new: NewEntity, question: Option<&str>) -> Result<String, DocError> {
        self.tick()?;
        let (kind, label) = (new.kind, new.label.clone());
        let out = self.kg.create_entity(new, self.policy).map_err(|e| DocError::kg(question, e))?;
        let record = ExportedEntity { id: out.id.clone(), kind, label };
        if out.created {
            self.report.created.push(record);
        } else if !self.report.reused.contains(&record) {
            self.report.reused.push(record);
        }
        Ok(out.id)
    }

    fn resolve(&self, id: &str) -> String {
        self.id_map.get(id).cloned().unwrap_or_else(|| id.to_string())
    }

    fn relation(&mut self, src: &str, relation: RelationKind, dst: &str, question: Option<&str>) -> Result<(), DocError> {
        self.tick()?;
        let (src, dst) = (self.resolve(src), self.resolve(dst));
        if self.kg.add_relation(&src, relation, &dst).map_err(|e| DocError::kg(question, e))? {
            self.report.relations_added.push(Triple::new(src, relation, dst));
        }
        Ok(())
    }

    fn refs(&self, qid: &str) -> Vec<String> {
        self.session.answer(qid).map(|v| v.refs().to_vec()).unwrap_or_default()
    }

    fn text(&self, qid: &str) -> Option<String> {
        match self.session.answer(qid)? {
            AnswerValue::Text(s) | AnswerValue::Term(s) | AnswerValue::Doi(s) => Some(s.clone()),
            AnswerValue::Flag(b) => Some(b.to_string()),
            _ => None,
        }
    }

    /// Edges `src -relation-> each answer of qid`, or reversed.
    fn fan(&mut self, src: &str, relation: RelationKind, qid: &str, reversed: bool) -> Result<(), DocError> {
        for other in self.refs(qid) {
            if reversed {
                self.relation(&other, relation, src, Some(qid))?;
            } else {
                self.relation(src, relation, &other, Some(qid))?;
            }
        }
        Ok(())
    }
}

pub fn export_to_kg(
    template: &QuestionnaireTemplate,
    session: &mut DocumentationSession,
    kg: &mut KnowledgeGraph,
    policy: DedupPolicy,
) -> Result<ExportReport, DocError> {
    export_to_kg_with_fault(template, session, kg, policy, None)
}

/// [`export_to_kg`] that fails on purpose before mutation number
/// `fail_after` (zero-based). For atomicity tests.
#[doc(hidden)]
pub fn export_to_kg_with_fault(
    template: &QuestionnaireTemplate,
    session: &mut DocumentationSession,
    kg: &mut KnowledgeGraph,
    policy: DedupPolicy,
    fail_after: Option<usize>,
) -> Result<ExportReport, DocError> {
    if session.template_version() != template.version {
        return Err(DocError::VersionMismatch {
            expected: template.version.clone(),
            found: session.template_version().to_string(),
        });
    }
    let missing = session.completeness(template);
    if !missing.is_empty() {
        return Err(DocError::IncompleteSession { missing });
    }
    for (qid, value) in session.answers() {
        for id in value.refs() {
            if session.resolve_ref(kg, id).is_none() {
                return Err(DocError::UnknownEntityRef { question: qid.clone(), id: id.clone() });
            }
        }
    }

    let mut run = Run {
        kg: kg.clone(),
        policy,
        fail_after,
        mutations: 0,
        id_map: BTreeMap::new(),
        report: ExportReport { workflow_id: String::new(), created: vec![], reused: vec![], relations_added: vec![] },
        session,
    };

    for staged in session.staged_entities() {
        let id = run.entity(staged.entity.clone(), None)?;
        run.id_map.insert(staged.id.clone(), id);
    }

    let publication = match run.text(ids::PUBLICATION_DOI) {
        Some(doi) => {
            let label = run.text(ids::PUBLICATION_TITLE).unwrap_or_else(|| doi.clone());
            let mut new = NewEntity::new(EntityKind::Publication, label).external_id("doi", doi);
            if let Some(authors) = run.text(ids::PUBLICATION_AUTHORS) {
                new = new.attribute("authors", authors);
            }
            Some(run.entity(new, Some(ids::PUBLICATION_DOI))?)
        }
        None => None,
    };

    let title = run.text(ids::TITLE).unwrap_or_default();
    let mut workflow = NewEntity::new(EntityKind::Workflow, title)
        .description(run.text(ids::OBJECTIVE).unwrap_or_default());
    for key in [ids::WORKFLOW_KIND, ids::DATA_AVAILABLE, ids::CODE_AVAILABLE, ids::DETERMINISTIC, ids::ENVIRONMENT] {
        if let Some(v) = run.text(key) {
            workflow = workflow.attribute(key, v);
        }
    }
    let w = run.entity(workflow, Some(ids::TITLE))?;
    run.report.workflow_id = w.clone();

    for t in session.staged_relations() {
        run.relation(&t.src, t.relation, &t.dst, None)?;
    }

    let model = run.refs(ids::MODEL).first().cloned().unwrap_or_default();
    run.fan(&w, RelationKind::WorkflowInField, ids::RESEARCH_FIELDS, false)?;
    if let Some(p) = &publication {
        run.relation(&w, RelationKind::WorkflowPublication, p, Some(ids::PUBLICATION_DOI))?;
        let role = match run.text(ids::PUBLICATION_ROLE).as_deref() {
            Some("invents") => RelationKind::Invents,
            Some("studies") => RelationKind::Studies,
            Some("surveys") => RelationKind::Surveys,
            _ => RelationKind::Uses,
        };
        run.relation(p, role, &model, Some(ids::PUBLICATION_ROLE))?;
    }
    run.relation(&w, RelationKind::WorkflowUsesModel, &model, Some(ids::MODEL))?;
    if let Some(problem) = run.refs(ids::RESEARCH_PROBLEM).first().cloned() {
        run.relation(&model, RelationKind::AddressesProblem, &problem, Some(ids::RESEARCH_PROBLEM))?;
        run.fan(&problem, RelationKind::ProblemInField, ids::RESEARCH_FIELDS, false)?;
    }
    run.fan(&model, RelationKind::FormalizedBy, ids::FORMULATIONS, false)?;
    run.fan(&model, RelationKind::AppliesModel, ids::TASKS, true)?;
    run.fan(&model, RelationKind::Generalizes, ids::GENERALIZES, false)?;
    run.fan(&model, RelationKind::Generalizes, ids::SPECIALIZES, true)?;
    run.fan(&model, RelationKind::Combines, ids::COMBINES, false)?;
    run.fan(&w, RelationKind::WorkflowUsesMethod, ids::METHODS, false)?;
    run.fan(&w, RelationKind::WorkflowUsesSoftware, ids::SOFTWARE, false)?;
    run.fan(&w, RelationKind::WorkflowOnHardware, ids::HARDWARE, false)?;
    run.fan(&w, RelationKind::WorkflowInputData, ids::INPUT_DATA, false)?;
    run.fan(&w, RelationKind::WorkflowOutputData, ids::OUTPUT_DATA, false)?;

    let Run { kg: updated, id_map, report, .. } = run;
    *kg = updated;
    session.mark_exported(ExportRecord { workflow_id: w, id_map, exported_at: unix_now() });
    Ok(report)
}
