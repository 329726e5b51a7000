//! Questionnaire-driven documentation of research workflows.
//!
//! A [`DocumentationSession`] collects typed answers to the four-section
//! [`QuestionnaireTemplate`]. Entities that do not exist yet (a new model,
//! its formulations, quantities, tasks) are staged inside the session and
//! only written to the knowledge graph by [`export_to_kg`], which applies all
//! of its mutations or none.

mod export;
mod session;
mod suggest;
mod template;
mod wiki;

use thiserror::Error;

use crate::modelkg::KgError;

pub use export::{export_to_kg, export_to_kg_with_fault, ExportReport, ExportedEntity};
pub use session::{
    load_session, save_session, AnswerValue, AttachedRule, DocumentationSession, ExportRecord, RulesAttachment,
    SessionStatus, StagedEntity, SESSION_FORMAT, STAGED_PREFIX,
};
pub use suggest::{suggest, Provenance, Suggestion};
pub use template::{default_template, ids, AnswerType, Question, QuestionnaireTemplate, Section, TEMPLATE_VERSION};
pub use wiki::{render_wiki, WikiPage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("unknown question `{0}`")]
    UnknownQuestion(String),
    #[error("answer to `{question}` must be {expected}: {message}")]
    TypeMismatch { question: String, expected: String, message: String },
    #[error("answer to `{question}` references unknown entity `{id}`")]
    UnknownEntityRef { question: String, id: String },
    #[error("session is incomplete; missing {missing:?}")]
    IncompleteSession { missing: Vec<String> },
    #[error("template version {found} does not match {expected}")]
    VersionMismatch { expected: String, found: String },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("{}{source}", question.as_ref().map(|q| format!("while exporting `{q}`: ")).unwrap_or_default())]
    Kg { question: Option<String>, source: KgError },
    #[error("injected fault after {0} mutations")]
    InjectedFault(usize),
}

impl DocError {
    pub(crate) fn kg(question: Option<&str>, source: KgError) -> Self {
        DocError::Kg { question: question.map(str::to_string), source }
    }
}
