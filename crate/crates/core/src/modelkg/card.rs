//! Aggregated one-stop view of a model and its ontology neighbourhood.

use serde::Serialize;

use super::{Entity, EntityKind, KgError, KnowledgeGraph, RelationKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntitySummary {
    pub id: String,
    pub kind: EntityKind,
    pub label: String,
}

impl From<&Entity> for EntitySummary {
    fn from(e: &Entity) -> Self {
        Self { id: e.id.clone(), kind: e.kind, label: e.label.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemCard {
    pub problem: EntitySummary,
    pub fields: Vec<EntitySummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantityCard {
    pub quantity: EntitySummary,
    pub kinds: Vec<EntitySummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulationCard {
    pub formulation: EntitySummary,
    pub formula: Option<String>,
    pub quantities: Vec<QuantityCard>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaskCard {
    pub task: EntitySummary,
    pub formulations: Vec<FormulationCard>,
    pub inputs: Vec<QuantityCard>,
    pub outputs: Vec<QuantityCard>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PublicationRoles {
    pub invents: Vec<EntitySummary>,
    pub studies: Vec<EntitySummary>,
    pub surveys: Vec<EntitySummary>,
    pub uses: Vec<EntitySummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelCard {
    pub model: EntitySummary,
    pub description: String,
    pub problems: Vec<ProblemCard>,
    pub formulations: Vec<FormulationCard>,
    pub tasks: Vec<TaskCard>,
    pub publications: PublicationRoles,
    /// Models this one generalizes.
    pub generalizes: Vec<EntitySummary>,
    /// Models generalizing this one.
    pub specializes: Vec<EntitySummary>,
    pub combines: Vec<EntitySummary>,
    pub combined_in: Vec<EntitySummary>,
}

fn summaries(v: Vec<&Entity>) -> Vec<EntitySummary> {
    v.into_iter().map(EntitySummary::from).collect()
}

impl KnowledgeGraph {
    fn quantity_card(&self, q: &Entity) -> QuantityCard {
        QuantityCard {
            quantity: q.into(),
            kinds: summaries(self.targets(&q.id, RelationKind::HasQuantityKind)),
        }
    }

    fn formulation_card(&self, f: &Entity) -> FormulationCard {
        FormulationCard {
            formulation: f.into(),
            formula: f.attributes.get("formula").cloned(),
            quantities: self
                .targets(&f.id, RelationKind::ContainsQuantity)
                .into_iter()
                .map(|q| self.quantity_card(q))
                .collect(),
        }
    }

    pub fn model_card(&self, model_id: &str) -> Result<ModelCard, KgError> {
        let model = self
            .entity(model_id)
            .ok_or_else(|| KgError::MissingEntity(model_id.to_string()))?;
        if model.kind != EntityKind::MathematicalModel {
            return Err(KgError::WrongKind {
                id: model_id.to_string(),
                expected: EntityKind::MathematicalModel,
                found: model.kind,
            });
        }
        let id = model_id;
        let problems = self
            .targets(id, RelationKind::AddressesProblem)
            .into_iter()
            .map(|p| ProblemCard {
                problem: p.into(),
                fields: summaries(self.targets(&p.id, RelationKind::ProblemInField)),
            })
            .collect();
        let formulations = self
            .targets(id, RelationKind::FormalizedBy)
            .into_iter()
            .map(|f| self.formulation_card(f))
            .collect();
        let tasks = self
            .sources(id, RelationKind::AppliesModel)
            .into_iter()
            .map(|t| TaskCard {
                task: t.into(),
                formulations: self
                    .targets(&t.id, RelationKind::TaskFormulation)
                    .into_iter()
                    .map(|f| self.formulation_card(f))
                    .collect(),
                inputs: self
                    .targets(&t.id, RelationKind::InputQuantity)
                    .into_iter()
                    .map(|q| self.quantity_card(q))
                    .collect(),
                outputs: self
                    .targets(&t.id, RelationKind::OutputQuantity)
                    .into_iter()
                    .map(|q| self.quantity_card(q))
                    .collect(),
            })
            .collect();
        Ok(ModelCard {
            model: model.into(),
            description: model.description.clone(),
            problems,
            formulations,
            tasks,
            publications: PublicationRoles {
                invents: summaries(self.sources(id, RelationKind::Invents)),
                studies: summaries(self.sources(id, RelationKind::Studies)),
                surveys: summaries(self.sources(id, RelationKind::Surveys)),
                uses: summaries(self.sources(id, RelationKind::Uses)),
            },
            generalizes: summaries(self.targets(id, RelationKind::Generalizes)),
            specializes: summaries(self.sources(id, RelationKind::Generalizes)),
            combines: summaries(self.targets(id, RelationKind::Combines)),
            combined_in: summaries(self.sources(id, RelationKind::Combines)),
        })
    }
}
