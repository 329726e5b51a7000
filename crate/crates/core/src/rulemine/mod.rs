//! Logical rule mining over binary object data.
//!
//! Rows of a [`Dataset`] are points of `{0,1}^n`. The reduced Gröbner basis of
//! their vanishing ideal is a finite, complete description of every boolean
//! identity the data satisfies; each basis element is classified into a
//! readable [`RuleForm`] and rendered as a logical statement.

mod classify;
mod dataset;
mod json;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use classify::{classify_rule, render_form, FormTag, RuleForm};
pub use dataset::{DataRow, Dataset, ID_COLUMN};
pub use json::{export_rules_json, import_rules_json, RULES_FORMAT};

use crate::boolpoly::{buchberger_moeller, BoolPoly, PolyError, TermOrder, VariableContext};

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("row {row}, column `{column}`: expected 0 or 1, found `{value}`")]
    NonBinaryCell { row: usize, column: String, value: String },
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("row {row} has an empty object id")]
    EmptyObjectId { row: usize },
    #[error("duplicate object id `{0}`")]
    DuplicateObjectId(String),
    #[error("dataset has no rows")]
    EmptyDataset,
    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("the zero polynomial is not a rule")]
    ZeroPolynomial,
    #[error("the constant 1 cannot vanish on a nonempty dataset")]
    ContradictionPolynomial,
    #[error("no display name for variable index {0}")]
    NameMissing(usize),
    #[error("rule set was mined from {expected}, dataset is {found}")]
    DigestMismatch { expected: String, found: String },
    #[error("dataset properties differ from the rule set's")]
    PropertyMismatch,
    #[error("invalid rules document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// One Gröbner basis element read as a logical rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub polynomial: BoolPoly,
    pub form: RuleForm,
    pub text: String,
    /// Rows on which some monomial of the polynomial is 1.
    pub support: usize,
}

impl Rule {
    fn from_polynomial(polynomial: BoolPoly, rows: &[DataRow]) -> Result<Self, RuleError> {
        let form = classify_rule(&polynomial)?;
        let text = render_form(&form, polynomial.context().names())?;
        let support = support_of(&polynomial, rows);
        Ok(Rule { polynomial, form, text, support })
    }

    /// Text over alternative display names (e.g. long property labels).
    pub fn render(&self, names: &[String]) -> Result<String, RuleError> {
        render_form(&self.form, names)
    }
}

fn support_of(f: &BoolPoly, rows: &[DataRow]) -> usize {
    rows.iter()
        .filter(|r| f.monomials().any(|m| m.eval_bits(r.point.bits())))
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub context: Arc<VariableContext>,
    pub order: TermOrder,
    /// Ascending leading monomial.
    pub rules: Vec<Rule>,
    /// [`Dataset::content_digest`] of the mined data.
    pub dataset_digest: String,
    pub row_count: usize,
    pub distinct_point_count: usize,
    pub duplicate_count: usize,
}

impl RuleSet {
    /// Number of Gröbner basis elements.
    pub fn basis_size(&self) -> usize {
        self.rules.len()
    }

    /// Count of rules per classified form.
    pub fn form_counts(&self) -> BTreeMap<FormTag, usize> {
        let mut counts = BTreeMap::new();
        for r in &self.rules {
            *counts.entry(r.form.tag()).or_default() += 1;
        }
        counts
    }
}

/// Mines the rule set of a dataset: deduplicate rows, compute the reduced
/// basis of their vanishing ideal, classify and render every element.
pub fn mine_rules(ds: &Dataset, order: TermOrder) -> Result<RuleSet, RuleError> {
    if ds.rows().is_empty() {
        return Err(RuleError::EmptyDataset);
    }
    let gb = buchberger_moeller(&ds.points(), ds.context(), order)?;
    let rules = gb
        .basis
        .into_iter()
        .map(|g| Rule::from_polynomial(g, ds.rows()))
        .collect::<Result<Vec<_>, _>>()?;
    let distinct = ds.distinct_point_count();
    Ok(RuleSet {
        context: ds.context().clone(),
        order,
        rules,
        dataset_digest: ds.content_digest(),
        row_count: ds.rows().len(),
        distinct_point_count: distinct,
        duplicate_count: ds.rows().len() - distinct,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCheck {
    pub index: usize,
    pub text: String,
    pub violations: usize,
    pub support: usize,
    pub violating_objects: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dataset_digest: String,
    /// Whether the dataset is the one the rules were mined from.
    pub same_dataset: bool,
    pub total_violations: usize,
    pub rules: Vec<RuleCheck>,
}

/// Checks every rule against every row. A dataset other than the mining
/// source requires `allow_other_dataset`.
pub fn validate_rules(rs: &RuleSet, ds: &Dataset, allow_other_dataset: bool) -> Result<ValidationReport, RuleError> {
    if rs.context.names() != ds.property_names() {
        return Err(RuleError::PropertyMismatch);
    }
    let digest = ds.content_digest();
    let same_dataset = digest == rs.dataset_digest;
    if !same_dataset && !allow_other_dataset {
        return Err(RuleError::DigestMismatch {
            expected: rs.dataset_digest.clone(),
            found: digest,
        });
    }
    let rules: Vec<RuleCheck> = rs
        .rules
        .iter()
        .enumerate()
        .map(|(index, rule)| {
            let violating_objects: Vec<String> = ds
                .rows()
                .iter()
                .filter(|r| rule.polynomial.eval(&r.point).unwrap_or(true))
                .map(|r| r.object_id.clone())
                .collect();
            RuleCheck {
                index,
                text: rule.text.clone(),
                violations: violating_objects.len(),
                support: support_of(&rule.polynomial, ds.rows()),
                violating_objects,
            }
        })
        .collect();
    Ok(ValidationReport {
        dataset_digest: digest,
        same_dataset,
        total_violations: rules.iter().map(|r| r.violations).sum(),
        rules,
    })
}
