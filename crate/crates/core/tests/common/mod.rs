//! Shared helpers for integration tests: fixture paths, golden files and the
//! scripted Logical Data Analysis documentation run.
#![allow(dead_code)]

pub mod kgfuzz;

use std::path::PathBuf;

use fairdoc::metafetch::{Resolver, ResolverConfig};
use fairdoc::modelkg::{EntityKind, KnowledgeGraph, NewEntity, RelationKind};
use fairdoc::rulemine::{mine_rules, Dataset};
use fairdoc::boolpoly::TermOrder;
use fairdoc::workflowdoc::{
    default_template, ids, suggest, AnswerValue, DocumentationSession, Provenance, QuestionnaireTemplate,
    RulesAttachment,
};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures_dir().join(rel)
}

pub fn offline_resolver() -> Resolver {
    Resolver::new(ResolverConfig::offline(fixtures_dir()))
}

/// Compares against a golden file; `FAIRDOC_BLESS=1` rewrites it instead.
pub fn assert_golden(rel: &str, actual: &[u8]) {
    let path = fixture(rel);
    if std::env::var_os("FAIRDOC_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("golden {}: {e}", path.display()));
    if expected != actual {
        panic!(
            "golden mismatch for {rel}\n--- expected\n{}\n--- actual\n{}",
            String::from_utf8_lossy(&expected),
            String::from_utf8_lossy(actual)
        );
    }
}

fn text(s: &str) -> AnswerValue {
    AnswerValue::Text(s.to_string())
}

/// Accepts the only external candidate for `label` on an entity question.
fn stage_external(
    t: &QuestionnaireTemplate,
    s: &mut DocumentationSession,
    qid: &str,
    label: &str,
    kg: &KnowledgeGraph,
    resolver: &Resolver,
) -> String {
    let hits = suggest(t, s, qid, label, kg, resolver).unwrap();
    let ext: Vec<_> = hits.iter().filter(|c| c.provenance == Provenance::External).collect();
    assert_eq!(ext.len(), 1, "external candidates for {label}: {hits:?}");
    s.stage_entity(ext[0].to_new_entity().unwrap()).unwrap()
}

/// Documents the Logical Data Analysis workflow: an object comparison model
/// formalized by a boolean ring, with one task that has its own formulation,
/// input and output quantities. Returns a complete, not yet exported session.
pub fn logical_data_analysis(kg: &KnowledgeGraph, resolver: &Resolver) -> DocumentationSession {
    use EntityKind as K;
    use RelationKind as R;
    let t = default_template();
    let mut s = DocumentationSession::new(&t);
    let set = |s: &mut DocumentationSession, qid: &str, v: AnswerValue| s.set_answer(&t, kg, qid, v).unwrap();

    set(&mut s, ids::TITLE, text("Logical Data Analysis"));
    set(
        &mut s,
        ids::OBJECTIVE,
        text("Discern rules behind the destruction patterns of statues from the Cachette de Karnak."),
    );
    set(&mut s, ids::WORKFLOW_KIND, AnswerValue::Term("analysis".into()));
    set(&mut s, ids::PUBLICATION_DOI, AnswerValue::Doi("https://doi.org/10.1000/demo".into()));
    let cite = suggest(&t, &s, ids::PUBLICATION_TITLE, "", kg, resolver).unwrap();
    assert_eq!(cite.len(), 1);
    let meta = cite[0].publication.clone().expect("fixture DOI resolves");
    set(&mut s, ids::PUBLICATION_TITLE, text(&meta.title));
    set(&mut s, ids::PUBLICATION_AUTHORS, text(&meta.authors.join(", ")));
    set(&mut s, ids::PUBLICATION_ROLE, AnswerValue::Term("uses".into()));

    let field = stage_external(&t, &mut s, ids::RESEARCH_FIELDS, "egypt", kg, resolver);
    let problem = s
        .stage_entity(NewEntity::new(K::ResearchProblem, "Destruction Patterns of Egyptian Statues"))
        .unwrap();
    let model = s
        .stage_entity(
            NewEntity::new(K::MathematicalModel, "Object Comparison Model")
                .description("Compares objects through the presence or absence of properties."),
        )
        .unwrap();
    let ring = s
        .stage_entity(
            NewEntity::new(K::MathematicalFormulation, "Boolean Ring").attribute("formula", "B_n = F_2[x_1..x_n]/(x_i^2 + x_i)"),
        )
        .unwrap();
    let property = s.stage_entity(NewEntity::new(K::Quantity, "Object Property")).unwrap();
    let boolean = s.stage_entity(NewEntity::new(K::QuantityKind, "Boolean")).unwrap();
    let boolean_poly = s.stage_entity(NewEntity::new(K::QuantityKind, "Boolean Polynomial")).unwrap();
    let task = s.stage_entity(NewEntity::new(K::ComputationalTask, "Extraction of Logical Rules")).unwrap();
    let ideal = s
        .stage_entity(
            NewEntity::new(K::MathematicalFormulation, "Vanishing Ideal of Object Points")
                .attribute("formula", "I(P) = { f in B_n : f(p) = 0 for all p in P }"),
        )
        .unwrap();
    let input = s.stage_entity(NewEntity::new(K::Quantity, "object properties")).unwrap();
    let output = s.stage_entity(NewEntity::new(K::Quantity, "logical rules")).unwrap();

    for (a, r, b) in [
        (&ring, R::ContainsQuantity, &property),
        (&property, R::HasQuantityKind, &boolean),
        (&task, R::TaskFormulation, &ideal),
        (&ideal, R::ContainsQuantity, &input),
        (&ideal, R::ContainsQuantity, &output),
        (&task, R::InputQuantity, &input),
        (&task, R::OutputQuantity, &output),
        (&input, R::HasQuantityKind, &boolean),
        (&output, R::HasQuantityKind, &boolean_poly),
    ] {
        assert!(s.stage_relation(kg, a, r, b).unwrap());
    }

    let julia = stage_external(&t, &mut s, ids::SOFTWARE, "julia", kg, resolver);
    let oscar = stage_external(&t, &mut s, ids::SOFTWARE, "oscar", kg, resolver);
    let method = s.stage_entity(NewEntity::new(K::Method, "Rules and Pattern Algorithm")).unwrap();
    let data_in = s
        .stage_entity(NewEntity::new(K::Dataset, "Encoded Cachette Objects").description("333 objects, 16 binary properties"))
        .unwrap();
    let data_out = s.stage_entity(NewEntity::new(K::Dataset, "Mined Logical Rules")).unwrap();

    set(&mut s, ids::RESEARCH_FIELDS, AnswerValue::RefList(vec![field]));
    set(&mut s, ids::MODEL, AnswerValue::Ref(model));
    set(&mut s, ids::RESEARCH_PROBLEM, AnswerValue::Ref(problem));
    set(&mut s, ids::FORMULATIONS, AnswerValue::RefList(vec![ring]));
    set(&mut s, ids::TASKS, AnswerValue::RefList(vec![task]));
    set(&mut s, ids::METHODS, AnswerValue::RefList(vec![method]));
    set(&mut s, ids::SOFTWARE, AnswerValue::RefList(vec![julia, oscar]));
    set(&mut s, ids::INPUT_DATA, AnswerValue::RefList(vec![data_in]));
    set(&mut s, ids::OUTPUT_DATA, AnswerValue::RefList(vec![data_out]));
    set(&mut s, ids::DATA_AVAILABLE, AnswerValue::Flag(false));
    set(&mut s, ids::CODE_AVAILABLE, AnswerValue::Flag(true));
    set(&mut s, ids::DETERMINISTIC, AnswerValue::Flag(true));
    set(&mut s, ids::ENVIRONMENT, text("Julia with the OSCAR package"));

    let csv = std::fs::read(fixture("data/two_rows.csv")).unwrap();
    let rs = mine_rules(&Dataset::load_csv(&csv).unwrap(), TermOrder::default()).unwrap();
    s.attach_rules(RulesAttachment::from_rule_set("two_rows.csv", &rs));
    s
}

/// Truth of a rendered rule statement under an assignment of property
/// names. Independent reading of the rule notation, used to check that the
/// text says the same thing as the polynomial.
pub fn holds(statement: &str, value: &dyn Fn(&str) -> bool) -> bool {
    let s = statement.trim();
    let conj = |c: &str| {
        c.split('∧').map(str::trim).all(|atom| match atom {
            "1" => true,
            name => value(name),
        })
    };
    if let Some(xor) = s.strip_suffix("= 0") {
        return !xor.split('⊕').map(conj).fold(false, |acc, b| acc ^ b);
    }
    if let Some((lhs, rhs)) = s.split_once(" → ") {
        let rhs = rhs.trim();
        let consequent = match rhs.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => holds(inner, value),
            None => conj(rhs),
        };
        return !conj(lhs) || consequent;
    }
    if let Some((lhs, rhs)) = s.split_once(" ⇔ ") {
        return conj(lhs) == conj(rhs);
    }
    if let Some(inner) = s.strip_prefix("¬(").and_then(|r| r.strip_suffix(')')) {
        return !conj(inner);
    }
    if let Some(rest) = s.strip_prefix('¬') {
        return !conj(rest);
    }
    conj(s)
}

/// Seeded synthetic object data: `rows` objects over `props` properties
/// with planted implications `(a, b)` meaning property a implies property b.
pub fn synthetic_dataset(seed: u64, rows: usize, props: usize, planted: &[(usize, usize)]) -> Vec<u8> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("object_id");
    for p in 0..props {
        out.push_str(&format!(",p{:02}", p + 1));
    }
    out.push('\n');
    for r in 0..rows {
        let mut bits: Vec<bool> = (0..props).map(|_| rng.gen_bool(0.35)).collect();
        // repeat until every planted implication holds; closes chains
        loop {
            let mut changed = false;
            for &(a, b) in planted {
                if bits[a] && !bits[b] {
                    bits[b] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        out.push_str(&format!("OBJ{:04}", r + 1));
        for b in bits {
            out.push_str(if b { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out.into_bytes()
}
