use std::fmt::Write as _;

use serde::Serialize;

use super::session::{AnswerValue, DocumentationSession, SessionStatus};
use super::template::{ids, QuestionnaireTemplate};
use super::DocError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WikiPage {
    pub title: String,
    pub markdown: String,
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn entity(session: &DocumentationSession, id: &str) -> String {
    let label = session.ref_label(id).unwrap_or(id);
    format!("{} (`{}`)", one_line(label), session.display_id(id))
}

fn value_text(session: &DocumentationSession, v: &AnswerValue) -> String {
    match v {
        AnswerValue::Text(s) | AnswerValue::Term(s) => one_line(s),
        AnswerValue::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
        AnswerValue::Doi(d) => format!("[{d}](https://doi.org/{d})"),
        AnswerValue::Ref(id) => entity(session, id),
        AnswerValue::RefList(list) => list.iter().map(|id| entity(session, id)).collect::<Vec<_>>().join(", "),
    }
}

/// Markdown summary: H1 title, one H2 per template section with
/// `**prompt:** value` lines for answered questions, then the staged model
/// structure and the attached rules analysis if present. Unless `force`,
/// draft sessions are refused.
pub fn render_wiki(
    template: &QuestionnaireTemplate,
    session: &DocumentationSession,
    force: bool,
) -> Result<WikiPage, DocError> {
    if session.status() == SessionStatus::Draft && !force {
        return Err(DocError::IncompleteSession { missing: session.completeness(template) });
    }
    let title = match session.answer(ids::TITLE) {
        Some(AnswerValue::Text(t)) => one_line(t),
        _ => "Untitled workflow".to_string(),
    };
    let mut md = format!("# {title}\n");
    for section in &template.sections {
        let _ = write!(md, "\n## {}\n", section.title);
        let lines: Vec<String> = section
            .questions
            .iter()
            .filter_map(|q| session.answer(&q.id).map(|v| format!("**{}:** {}", q.prompt, value_text(session, v))))
            .collect();
        if !lines.is_empty() {
            let _ = write!(md, "\n{}\n", lines.join("\n\n"));
        }
        if section.id == "models" && !session.staged_relations().is_empty() {
            md.push_str("\n### Model structure\n\n");
            for t in session.staged_relations() {
                let _ = writeln!(md, "- {} *{}* {}", entity(session, &t.src), t.relation.name(), entity(session, &t.dst));
            }
        }
    }
    if let Some(rules) = session.rules() {
        let _ = write!(
            md,
            "\n## Rules Analysis\n\n**Dataset:** {}\n\n**Dataset digest:** `{}`\n\n**Term order:** {}\n\n\
             **Objects:** {} ({} distinct)\n\n**Rules:** {}\n\n",
            one_line(&rules.name),
            rules.dataset_digest,
            rules.order,
            rules.row_count,
            rules.distinct_point_count,
            rules.rules.len()
        );
        for r in &rules.rules {
            let _ = writeln!(md, "- `{}` ({}, support {})", r.text, r.form.as_str(), r.support);
        }
    }
    Ok(WikiPage { title, markdown: md })
}
