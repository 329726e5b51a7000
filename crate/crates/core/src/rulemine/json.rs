//! Canonical JSON for rule sets. Field order is fixed by the struct layout and
//! maps are sorted, so equal rule sets serialize to identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{classify_rule, render_form, FormTag, Rule, RuleError, RuleSet};
use crate::boolpoly::{parse_poly, TermOrder, VariableContext};

pub const RULES_FORMAT: &str = "fairdoc.rules/1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RulesDoc {
    format: String,
    order: TermOrder,
    properties: Vec<String>,
    dataset_digest: String,
    row_count: usize,
    distinct_point_count: usize,
    duplicate_count: usize,
    basis_size: usize,
    form_counts: BTreeMap<FormTag, usize>,
    rules: Vec<RuleDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    polynomial: String,
    form: FormTag,
    text: String,
    support: usize,
}

pub fn export_rules_json(rs: &RuleSet) -> Vec<u8> {
    let doc = RulesDoc {
        format: RULES_FORMAT.to_string(),
        order: rs.order,
        properties: rs.context.names().to_vec(),
        dataset_digest: rs.dataset_digest.clone(),
        row_count: rs.row_count,
        distinct_point_count: rs.distinct_point_count,
        duplicate_count: rs.duplicate_count,
        basis_size: rs.basis_size(),
        form_counts: rs.form_counts(),
        rules: rs
            .rules
            .iter()
            .map(|r| RuleDoc {
                polynomial: r.polynomial.render(rs.order),
                form: r.form.tag(),
                text: r.text.clone(),
                support: r.support,
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("rules document serializes");
    bytes.push(b'\n');
    bytes
}

/// Reads a document written by [`export_rules_json`]; forms and texts are
/// recomputed from the polynomials and must agree with the stored ones.
pub fn import_rules_json(bytes: &[u8]) -> Result<RuleSet, RuleError> {
    let doc: RulesDoc = serde_json::from_slice(bytes).map_err(|e| RuleError::InvalidDocument(e.to_string()))?;
    if doc.format != RULES_FORMAT {
        return Err(RuleError::InvalidDocument(format!("unsupported format `{}`", doc.format)));
    }
    let ctx = Arc::new(VariableContext::new(doc.properties)?);
    let mut rules = Vec::with_capacity(doc.rules.len());
    for (k, r) in doc.rules.into_iter().enumerate() {
        let polynomial = parse_poly(&r.polynomial, &ctx)?;
        let form = classify_rule(&polynomial)?;
        let text = render_form(&form, ctx.names())?;
        if form.tag() != r.form || text != r.text {
            return Err(RuleError::InvalidDocument(format!(
                "rule {k}: stored form/text do not match its polynomial"
            )));
        }
        rules.push(Rule { polynomial, form, text, support: r.support });
    }
    let rs = RuleSet {
        context: ctx,
        order: doc.order,
        rules,
        dataset_digest: doc.dataset_digest,
        row_count: doc.row_count,
        distinct_point_count: doc.distinct_point_count,
        duplicate_count: doc.duplicate_count,
    };
    if rs.basis_size() != doc.basis_size || rs.form_counts() != doc.form_counts {
        return Err(RuleError::InvalidDocument("summary counts do not match rules".into()));
    }
    Ok(rs)
}
