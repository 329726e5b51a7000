use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::modelkg::EntityKind;

pub const TEMPLATE_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AnswerType {
    FreeText,
    ControlledTerm { allowed: Vec<String> },
    EntityRef { kind: EntityKind },
    EntityRefList { kind: EntityKind },
    BooleanFlag,
    DoiString,
}

impl AnswerType {
    pub fn name(&self) -> &'static str {
        match self {
            AnswerType::FreeText => "free_text",
            AnswerType::ControlledTerm { .. } => "controlled_term",
            AnswerType::EntityRef { .. } => "entity_ref",
            AnswerType::EntityRefList { .. } => "entity_ref_list",
            AnswerType::BooleanFlag => "boolean_flag",
            AnswerType::DoiString => "doi_string",
        }
    }

    pub fn entity_kind(&self) -> Option<EntityKind> {
        match self {
            AnswerType::EntityRef { kind } | AnswerType::EntityRefList { kind } => Some(*kind),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub prompt: String,
    pub answer_type: AnswerType,
    pub mandatory: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub id: String,
    pub title: String,
    pub questions: Vec<Question>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionnaireTemplate {
    pub version: String,
    pub sections: Vec<Section>,
}

impl QuestionnaireTemplate {
    pub fn question(&self, id: &str) -> Option<&Question> {
        self.questions().find(|q| q.id == id)
    }

    pub fn questions(&self) -> impl Iterator<Item = &Question> {
        self.sections.iter().flat_map(|s| s.questions.iter())
    }

    /// Question ids that are unique across sections.
    pub fn has_unique_ids(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.questions().all(|q| seen.insert(q.id.as_str()))
    }
}

/// Question ids with a fixed meaning for export and suggestions.
pub mod ids {
    pub const TITLE: &str = "title";
    pub const OBJECTIVE: &str = "objective";
    pub const WORKFLOW_KIND: &str = "workflow_kind";
    pub const PUBLICATION_DOI: &str = "publication_doi";
    pub const PUBLICATION_TITLE: &str = "publication_title";
    pub const PUBLICATION_AUTHORS: &str = "publication_authors";
    pub const PUBLICATION_ROLE: &str = "publication_role";
    pub const RESEARCH_FIELDS: &str = "research_fields";
    pub const MODEL: &str = "model";
    pub const RESEARCH_PROBLEM: &str = "research_problem";
    pub const FORMULATIONS: &str = "formulations";
    pub const TASKS: &str = "tasks";
    pub const GENERALIZES: &str = "generalizes_models";
    pub const SPECIALIZES: &str = "specializes_models";
    pub const COMBINES: &str = "combines_models";
    pub const METHODS: &str = "methods";
    pub const SOFTWARE: &str = "software";
    pub const HARDWARE: &str = "hardware";
    pub const INPUT_DATA: &str = "input_data";
    pub const OUTPUT_DATA: &str = "output_data";
    pub const DATA_AVAILABLE: &str = "data_available";
    pub const CODE_AVAILABLE: &str = "code_available";
    pub const DETERMINISTIC: &str = "deterministic";
    pub const ENVIRONMENT: &str = "environment_notes";

    /// Filled from the metadata of the DOI answer.
    pub const PUBLICATION_LINKED: [&str; 2] = [PUBLICATION_TITLE, PUBLICATION_AUTHORS];
}

fn q(id: &str, prompt: &str, answer_type: AnswerType, mandatory: bool) -> Question {
    Question { id: id.to_string(), prompt: prompt.to_string(), answer_type, mandatory }
}

fn terms(list: &[&str]) -> AnswerType {
    AnswerType::ControlledTerm { allowed: list.iter().map(|s| s.to_string()).collect() }
}

fn one(kind: EntityKind) -> AnswerType {
    AnswerType::EntityRef { kind }
}

fn many(kind: EntityKind) -> AnswerType {
    AnswerType::EntityRefList { kind }
}

pub fn default_template() -> QuestionnaireTemplate {
    use ids::*;
    use EntityKind as K;
    let sections = vec![
        Section {
            id: "general".into(),
            title: "General Aspects".into(),
            questions: vec![
                q(TITLE, "Workflow title", AnswerType::FreeText, true),
                q(OBJECTIVE, "Research objective", AnswerType::FreeText, true),
                q(WORKFLOW_KIND, "Workflow kind", terms(&["modeling", "simulation", "optimization", "analysis"]), false),
                q(PUBLICATION_DOI, "DOI of the related publication", AnswerType::DoiString, false),
                q(PUBLICATION_TITLE, "Publication title", AnswerType::FreeText, false),
                q(PUBLICATION_AUTHORS, "Publication authors", AnswerType::FreeText, false),
                q(PUBLICATION_ROLE, "Role of the publication for the model", terms(&["invents", "studies", "surveys", "uses"]), false),
                q(RESEARCH_FIELDS, "Scientific fields", many(K::ResearchField), true),
            ],
        },
        Section {
            id: "models".into(),
            title: "Models, Variables and Parameters".into(),
            questions: vec![
                q(MODEL, "Mathematical model", one(K::MathematicalModel), true),
                q(RESEARCH_PROBLEM, "Research problem addressed", one(K::ResearchProblem), false),
                q(FORMULATIONS, "Mathematical formulations", many(K::MathematicalFormulation), false),
                q(TASKS, "Computational tasks", many(K::ComputationalTask), false),
                q(GENERALIZES, "Models generalized by this model", many(K::MathematicalModel), false),
                q(SPECIALIZES, "Models specialized by this model", many(K::MathematicalModel), false),
                q(COMBINES, "Models combined by this model", many(K::MathematicalModel), false),
            ],
        },
        Section {
            id: "process".into(),
            title: "Process Information".into(),
            questions: vec![
                q(METHODS, "Methods", many(K::Method), false),
                q(SOFTWARE, "Software", many(K::Software), true),
                q(HARDWARE, "Hardware", many(K::Hardware), false),
                q(INPUT_DATA, "Input data", many(K::Dataset), false),
                q(OUTPUT_DATA, "Output data", many(K::Dataset), false),
            ],
        },
        Section {
            id: "reproducibility".into(),
            title: "Reproducibility".into(),
            questions: vec![
                q(DATA_AVAILABLE, "Data publicly available", AnswerType::BooleanFlag, true),
                q(CODE_AVAILABLE, "Code publicly available", AnswerType::BooleanFlag, true),
                q(DETERMINISTIC, "Results are deterministic", AnswerType::BooleanFlag, false),
                q(ENVIRONMENT, "Environment notes", AnswerType::FreeText, false),
            ],
        },
    ];
    QuestionnaireTemplate { version: TEMPLATE_VERSION.to_string(), sections }
}
