use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::KgError;

/// Node kinds. The first eight are the model ontology classes, the rest
/// describe the surrounding workflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntityKind {
    ResearchField,
    ResearchProblem,
    MathematicalModel,
    MathematicalFormulation,
    Quantity,
    QuantityKind,
    ComputationalTask,
    Publication,
    Workflow,
    Method,
    Software,
    Dataset,
    Hardware,
}

impl EntityKind {
    pub const ALL: [EntityKind; 13] = [
        EntityKind::ResearchField,
        EntityKind::ResearchProblem,
        EntityKind::MathematicalModel,
        EntityKind::MathematicalFormulation,
        EntityKind::Quantity,
        EntityKind::QuantityKind,
        EntityKind::ComputationalTask,
        EntityKind::Publication,
        EntityKind::Workflow,
        EntityKind::Method,
        EntityKind::Software,
        EntityKind::Dataset,
        EntityKind::Hardware,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::ResearchField => "ResearchField",
            EntityKind::ResearchProblem => "ResearchProblem",
            EntityKind::MathematicalModel => "MathematicalModel",
            EntityKind::MathematicalFormulation => "MathematicalFormulation",
            EntityKind::Quantity => "Quantity",
            EntityKind::QuantityKind => "QuantityKind",
            EntityKind::ComputationalTask => "ComputationalTask",
            EntityKind::Publication => "Publication",
            EntityKind::Workflow => "Workflow",
            EntityKind::Method => "Method",
            EntityKind::Software => "Software",
            EntityKind::Dataset => "Dataset",
            EntityKind::Hardware => "Hardware",
        }
    }

    /// Prefix of minted ids.
    pub fn id_prefix(self) -> &'static str {
        match self {
            EntityKind::ResearchField => "field",
            EntityKind::ResearchProblem => "problem",
            EntityKind::MathematicalModel => "model",
            EntityKind::MathematicalFormulation => "formulation",
            EntityKind::Quantity => "quantity",
            EntityKind::QuantityKind => "quantitykind",
            EntityKind::ComputationalTask => "task",
            EntityKind::Publication => "publication",
            EntityKind::Workflow => "workflow",
            EntityKind::Method => "method",
            EntityKind::Software => "software",
            EntityKind::Dataset => "dataset",
            EntityKind::Hardware => "hardware",
        }
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntityKind {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KgError::InvalidKind(s.to_string()))
    }
}

macro_rules! relation_table {
    ($( $variant:ident => $name:literal, $inverse:literal, $domain:ident -> $range:ident; )*) => {
        /// Edge kinds with fixed domain and range. Only one direction of each
        /// semantic pair is stored; the inverse reading is derived at query time.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum RelationKind {
            $( #[serde(rename = $name)] $variant, )*
        }

        impl RelationKind {
            pub const ALL: &'static [RelationKind] = &[ $( RelationKind::$variant, )* ];

            pub fn name(self) -> &'static str {
                match self { $( RelationKind::$variant => $name, )* }
            }

            /// Reading of the edge from its target, e.g. `specializes` for `generalizes`.
            pub fn inverse_name(self) -> &'static str {
                match self { $( RelationKind::$variant => $inverse, )* }
            }

            pub fn domain(self) -> EntityKind {
                match self { $( RelationKind::$variant => EntityKind::$domain, )* }
            }

            pub fn range(self) -> EntityKind {
                match self { $( RelationKind::$variant => EntityKind::$range, )* }
            }
        }
    };
}

relation_table! {
    AddressesProblem => "addressesProblem", "addressedBy", MathematicalModel -> ResearchProblem;
    ProblemInField => "problemInField", "fieldOfProblem", ResearchProblem -> ResearchField;
    FormalizedBy => "formalizedBy", "formalizes", MathematicalModel -> MathematicalFormulation;
    ContainsQuantity => "containsQuantity", "quantityOf", MathematicalFormulation -> Quantity;
    HasQuantityKind => "hasQuantityKind", "kindOf", Quantity -> QuantityKind;
    AppliesModel => "appliesModel", "appliedBy", ComputationalTask -> MathematicalModel;
    TaskFormulation => "taskFormulation", "formulationOfTask", ComputationalTask -> MathematicalFormulation;
    InputQuantity => "inputQuantity", "inputOf", ComputationalTask -> Quantity;
    OutputQuantity => "outputQuantity", "outputOf", ComputationalTask -> Quantity;
    Invents => "invents", "inventedIn", Publication -> MathematicalModel;
    Studies => "studies", "studiedIn", Publication -> MathematicalModel;
    Surveys => "surveys", "surveyedIn", Publication -> MathematicalModel;
    Uses => "uses", "usedIn", Publication -> MathematicalModel;
    Generalizes => "generalizes", "specializes", MathematicalModel -> MathematicalModel;
    Combines => "combines", "combinedIn", MathematicalModel -> MathematicalModel;
    WorkflowUsesModel => "workflowUsesModel", "modelOfWorkflow", Workflow -> MathematicalModel;
    WorkflowUsesMethod => "workflowUsesMethod", "methodOfWorkflow", Workflow -> Method;
    WorkflowUsesSoftware => "workflowUsesSoftware", "softwareOfWorkflow", Workflow -> Software;
    WorkflowInputData => "workflowInputData", "inputDataOf", Workflow -> Dataset;
    WorkflowOutputData => "workflowOutputData", "outputDataOf", Workflow -> Dataset;
    WorkflowOnHardware => "workflowOnHardware", "hardwareOfWorkflow", Workflow -> Hardware;
    WorkflowInField => "workflowInField", "fieldOfWorkflow", Workflow -> ResearchField;
    WorkflowPublication => "workflowPublication", "publicationOfWorkflow", Workflow -> Publication;
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = KgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationKind::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| KgError::UnknownRelation(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in EntityKind::ALL {
            assert_eq!(k.name().parse::<EntityKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        for &r in RelationKind::ALL {
            assert_eq!(r.name().parse::<RelationKind>().unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.name()));
        }
        assert_eq!(RelationKind::ALL.len(), 23);
        assert!(matches!("Theorem".parse::<EntityKind>(), Err(KgError::InvalidKind(_))));
    }

    #[test]
    fn generalizes_reads_as_specializes() {
        assert_eq!(RelationKind::Generalizes.inverse_name(), "specializes");
        assert_eq!(RelationKind::HasQuantityKind.domain(), EntityKind::Quantity);
    }
}
