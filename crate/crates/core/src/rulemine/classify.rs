use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::RuleError;
use crate::boolpoly::{BoolPoly, Monomial};

/// Logical reading of a polynomial `f` under the constraint `f = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleForm {
    /// `m + 1`: every variable of `m` is present.
    AlwaysPresent(Monomial),
    /// `x`: the property never occurs.
    NeverPresent(Monomial),
    /// `a*c + a = a*(c + 1)`: `a` implies `c`.
    Implication { antecedent: Monomial, consequent: Monomial },
    /// `m1 + m2` with incomparable monomials.
    Equivalence(Monomial, Monomial),
    /// `m` with `deg m > 1`: the properties never occur together.
    Exclusion(Monomial),
    /// `d * r`: whenever `d` holds, the residual rule `r` holds.
    Conditional { factor: Monomial, residual: Box<RuleForm> },
    /// Anything else, read as an XOR identity.
    GeneralXor(Vec<Monomial>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormTag {
    AlwaysPresent,
    NeverPresent,
    Implication,
    Equivalence,
    Exclusion,
    Conditional,
    GeneralXor,
}

impl FormTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FormTag::AlwaysPresent => "always_present",
            FormTag::NeverPresent => "never_present",
            FormTag::Implication => "implication",
            FormTag::Equivalence => "equivalence",
            FormTag::Exclusion => "exclusion",
            FormTag::Conditional => "conditional",
            FormTag::GeneralXor => "general_xor",
        }
    }
}

impl RuleForm {
    pub fn tag(&self) -> FormTag {
        match self {
            RuleForm::AlwaysPresent(_) => FormTag::AlwaysPresent,
            RuleForm::NeverPresent(_) => FormTag::NeverPresent,
            RuleForm::Implication { .. } => FormTag::Implication,
            RuleForm::Equivalence(..) => FormTag::Equivalence,
            RuleForm::Exclusion(_) => FormTag::Exclusion,
            RuleForm::Conditional { .. } => FormTag::Conditional,
            RuleForm::GeneralXor(_) => FormTag::GeneralXor,
        }
    }
}

/// Reading order for monomials inside a rule: by degree, then by variable
/// indices so `x1` comes before `x2`. Independent of the mining term order.
fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.vars().cmp(b.vars()))
}

fn classify_terms(mut terms: Vec<Monomial>) -> Result<RuleForm, RuleError> {
    terms.sort_by(display_cmp);
    match terms.as_slice() {
        [] => Err(RuleError::ZeroPolynomial),
        [m] if m.is_one() => Err(RuleError::ContradictionPolynomial),
        [m] if m.degree() == 1 => Ok(RuleForm::NeverPresent(*m)),
        [m] => Ok(RuleForm::Exclusion(*m)),
        [one, m] if one.is_one() => Ok(RuleForm::AlwaysPresent(*m)),
        [a, b] if a.divides(*b) => Ok(RuleForm::Implication {
            antecedent: *a,
            consequent: b.without(*a),
        }),
        // display order puts the lower degree first, so `b` never strictly divides `a`
        [a, b] => Ok(RuleForm::Equivalence(*a, *b)),
        _ => {
            let factor = terms.iter().skip(1).fold(terms[0], |acc, m| acc.intersect(*m));
            if factor.is_one() {
                Ok(RuleForm::GeneralXor(terms))
            } else {
                let residual = classify_terms(terms.iter().map(|m| m.without(factor)).collect())?;
                Ok(RuleForm::Conditional { factor, residual: Box::new(residual) })
            }
        }
    }
}

/// Maps a nonzero, non-unit polynomial to its logical form.
pub fn classify_rule(f: &BoolPoly) -> Result<RuleForm, RuleError> {
    classify_terms(f.monomials().collect())
}

fn name(names: &[String], index: usize) -> Result<&str, RuleError> {
    match names.get(index) {
        Some(n) if !n.is_empty() => Ok(n),
        _ => Err(RuleError::NameMissing(index)),
    }
}

fn conjunction(m: Monomial, names: &[String], sep: &str) -> Result<String, RuleError> {
    if m.is_one() {
        return Ok("1".to_string());
    }
    let parts = m.vars().map(|v| name(names, v)).collect::<Result<Vec<_>, _>>()?;
    Ok(parts.join(sep))
}

/// Human-readable statement of a rule form over the given property names.
pub fn render_form(form: &RuleForm, names: &[String]) -> Result<String, RuleError> {
    let conj = |m: Monomial| conjunction(m, names, " ∧ ");
    Ok(match form {
        RuleForm::AlwaysPresent(m) => conj(*m)?,
        RuleForm::NeverPresent(m) => format!("¬{}", conj(*m)?),
        RuleForm::Implication { antecedent, consequent } => {
            format!("{} → {}", conj(*antecedent)?, conj(*consequent)?)
        }
        RuleForm::Equivalence(a, b) => format!("{} ⇔ {}", conj(*a)?, conj(*b)?),
        RuleForm::Exclusion(m) => format!("¬({})", conj(*m)?),
        RuleForm::Conditional { factor, residual } => {
            format!("{} → ({})", conj(*factor)?, render_form(residual, names)?)
        }
        RuleForm::GeneralXor(terms) => {
            let parts = terms
                .iter()
                .map(|m| conjunction(*m, names, "∧"))
                .collect::<Result<Vec<_>, _>>()?;
            format!("{} = 0", parts.join(" ⊕ "))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::{parse_poly, VariableContext};
    use std::sync::Arc;

    fn setup() -> (Arc<VariableContext>, Vec<String>) {
        let ctx = Arc::new(VariableContext::numbered(4).unwrap());
        let names = ["head", "base", "arm", "leg"].map(String::from).to_vec();
        (ctx, names)
    }

    fn read(s: &str) -> (RuleForm, String) {
        let (ctx, names) = setup();
        let form = classify_rule(&parse_poly(s, &ctx).unwrap()).unwrap();
        let text = render_form(&form, &names).unwrap();
        (form, text)
    }

    fn m(v: &[usize]) -> Monomial {
        Monomial::from_vars(v.iter().copied())
    }

    #[test]
    fn ladder_cases() {
        assert_eq!(read("x1"), (RuleForm::NeverPresent(m(&[0])), "¬head".into()));
        assert_eq!(read("x1*x2"), (RuleForm::Exclusion(m(&[0, 1])), "¬(head ∧ base)".into()));
        assert_eq!(read("x2 + 1"), (RuleForm::AlwaysPresent(m(&[1])), "base".into()));
        assert_eq!(
            read("x1*x2 + x1"),
            (RuleForm::Implication { antecedent: m(&[0]), consequent: m(&[1]) }, "head → base".into())
        );
        assert_eq!(read("x1*x3*x2 + x1*x3").1, "head ∧ arm → base");
        assert_eq!(read("x1 + x2"), (RuleForm::Equivalence(m(&[0]), m(&[1])), "head ⇔ base".into()));
        assert_eq!(read("x1*x2 + x3").1, "arm ⇔ head ∧ base");
        assert_eq!(
            read("x1 + x2 + x1*x2"),
            (RuleForm::GeneralXor(vec![m(&[0]), m(&[1]), m(&[0, 1])]), "head ⊕ base ⊕ head∧base = 0".into())
        );
        let (form, text) = read("x4*x1 + x4*x2 + x4*x1*x2");
        assert_eq!(form.tag(), FormTag::Conditional);
        assert_eq!(text, "leg → (head ⊕ base ⊕ head∧base = 0)");
    }

    #[test]
    fn zero_and_one_are_not_rules() {
        let (ctx, _) = setup();
        assert!(matches!(classify_rule(&BoolPoly::zero(ctx.clone())), Err(RuleError::ZeroPolynomial)));
        assert!(matches!(classify_rule(&BoolPoly::one(ctx)), Err(RuleError::ContradictionPolynomial)));
    }

    #[test]
    fn missing_names() {
        let (ctx, _) = setup();
        let form = classify_rule(&parse_poly("x1 + x3", &ctx).unwrap()).unwrap();
        let names = vec!["head".to_string(), "base".to_string(), String::new()];
        assert!(matches!(render_form(&form, &names), Err(RuleError::NameMissing(2))));
        assert!(matches!(render_form(&form, &names[..1]), Err(RuleError::NameMissing(2))));
    }
}
