//! Exhaustive checks of a claimed vanishing-ideal basis for small contexts.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{normal_form, BoolPoly, GroebnerResult, Monomial, Point, PolyError, Result, VariableContext};

/// Enumerating `{0,1}^n` stays cheap up to this many variables.
pub const ORACLE_MAX_VARIABLES: usize = 12;

/// `χ_p = ∏ (x_i + p_i + 1)`: 1 at `p`, 0 everywhere else.
pub fn indicator_poly(p: &Point, ctx: &Arc<VariableContext>) -> Result<BoolPoly> {
    if p.len() != ctx.len() {
        return Err(PolyError::ContextMismatch);
    }
    let mut acc = BoolPoly::one(ctx.clone());
    for i in 0..ctx.len() {
        let mut factor = BoolPoly::var(ctx.clone(), i);
        if !p.get(i) {
            factor = factor.add(&BoolPoly::one(ctx.clone()))?;
        }
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OracleReport {
    /// Every basis element is zero on every point.
    pub vanishing: bool,
    /// Every indicator of a point outside `P` reduces to zero.
    pub completeness: bool,
    /// `#standard monomials = #distinct points`, and they are exactly the
    /// monomials outside the leading-term ideal.
    pub standard_count: bool,
    /// Distinct, mutually non-dividing leading monomials; reduced tails.
    pub reduced: bool,
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.vanishing && self.completeness && self.standard_count && self.reduced
    }
}

pub fn verify_gb_oracle(points: &[Point], result: &GroebnerResult) -> Result<OracleReport> {
    let ctx = &result.context;
    let n = ctx.len();
    if n > ORACLE_MAX_VARIABLES {
        return Err(PolyError::ContextTooLarge(n));
    }
    if points.iter().any(|p| p.len() != n) {
        return Err(PolyError::ContextMismatch);
    }
    let order = result.order;
    let distinct: BTreeSet<u64> = points.iter().map(Point::bits).collect();
    let mut report = OracleReport {
        vanishing: true,
        completeness: true,
        standard_count: true,
        reduced: true,
        failures: Vec::new(),
    };

    if result.basis.iter().any(BoolPoly::is_zero) {
        report.reduced = false;
        report.completeness = false;
        report.failures.push("basis contains the zero polynomial".into());
        return Ok(report);
    }

    // (a) vanishing
    for (k, g) in result.basis.iter().enumerate() {
        if let Some(&p) = distinct.iter().find(|&&p| g.eval_bits(p)) {
            report.vanishing = false;
            report
                .failures
                .push(format!("basis element {k} ({}) is 1 at {}", g.render(order), Point::from_bits(p, n)?));
        }
    }

    // (b) completeness: f ∈ I(P) ⇔ f vanishes on P, and the indicators of the
    // complement span the functions vanishing on P
    for q in ctx.all_points().filter(|q| !distinct.contains(&q.bits())) {
        let chi = indicator_poly(&q, ctx)?;
        let nf = normal_form(&chi, &result.basis, order)?;
        if !nf.is_zero() {
            report.completeness = false;
            report
                .failures
                .push(format!("indicator of {q} reduces to {}", nf.render(order)));
        }
    }

    // (c) standard monomials
    let leading: Vec<Monomial> = result.leading_monomials();
    let outside: BTreeSet<Monomial> = (0..1u64 << n)
        .map(Monomial::from_bits)
        .filter(|m| !leading.iter().any(|l| l.divides(*m)))
        .collect();
    let claimed: BTreeSet<Monomial> = result.standard_monomials.iter().copied().collect();
    if result.standard_monomials.len() != distinct.len() || outside.len() != distinct.len() || claimed != outside {
        report.standard_count = false;
        report.failures.push(format!(
            "{} distinct points, {} claimed standard monomials, {} monomials outside the leading ideal",
            distinct.len(),
            result.standard_monomials.len(),
            outside.len()
        ));
    }

    // (d) reducedness
    let unique: BTreeSet<Monomial> = leading.iter().copied().collect();
    if unique.len() != leading.len() {
        report.reduced = false;
        report.failures.push("repeated leading monomials".into());
    }
    for (k, g) in result.basis.iter().enumerate() {
        for m in g.monomials() {
            for (j, l) in leading.iter().enumerate() {
                let own_lead = j == k && m == *l;
                if !own_lead && l.divides(m) {
                    report.reduced = false;
                    report.failures.push(format!(
                        "monomial {} of element {k} is divisible by leading monomial {}",
                        m.display(ctx),
                        l.display(ctx)
                    ));
                }
            }
        }
    }
    Ok(report)
}
