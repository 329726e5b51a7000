use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Monomial, Point, PolyError, Result, TermOrder, VariableContext};

/// Element of `B_n` in algebraic normal form.
#[derive(Debug, Clone)]
pub struct BoolPoly {
    ctx: Arc<VariableContext>,
    terms: BTreeSet<Monomial>,
}

impl PartialEq for BoolPoly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for BoolPoly {}

pub(crate) fn same_context(a: &Arc<VariableContext>, b: &Arc<VariableContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl BoolPoly {
    pub fn zero(ctx: Arc<VariableContext>) -> Self {
        Self { ctx, terms: BTreeSet::new() }
    }

    pub fn one(ctx: Arc<VariableContext>) -> Self {
        Self::monomial(ctx, Monomial::ONE)
    }

    pub fn monomial(ctx: Arc<VariableContext>, m: Monomial) -> Self {
        Self { ctx, terms: BTreeSet::from([m]) }
    }

    pub fn var(ctx: Arc<VariableContext>, index: usize) -> Self {
        Self::monomial(ctx, Monomial::var(index))
    }

    /// XOR-accumulates the given monomials, so repeated entries cancel in pairs.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(ctx: Arc<VariableContext>, monomials: I) -> Self {
        let mut poly = Self::zero(ctx);
        for m in monomials {
            poly.toggle(m);
        }
        poly
    }

    pub fn context(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&Monomial::ONE)
    }

    /// Number of monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.terms.contains(&m)
    }

    /// Monomials in ascending bitset order (not a term order).
    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().copied()
    }

    /// Monomials sorted descending under `order`.
    pub fn sorted_desc(&self, order: TermOrder) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.monomials().collect();
        v.sort_by_key(|&m| std::cmp::Reverse(order.key(m)));
        v
    }

    pub(crate) fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn check_context(&self, other: &BoolPoly) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &BoolPoly) -> Result<BoolPoly> {
        self.check_context(other)?;
        let terms = self.terms.symmetric_difference(&other.terms).copied().collect();
        Ok(BoolPoly { ctx: self.ctx.clone(), terms })
    }

    pub fn mul(&self, other: &BoolPoly) -> Result<BoolPoly> {
        self.check_context(other)?;
        let mut out = BoolPoly::zero(self.ctx.clone());
        for &a in &self.terms {
            for &b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        Ok(out)
    }

    /// `m * self`, used by reduction steps.
    pub fn mul_monomial(&self, m: Monomial) -> BoolPoly {
        BoolPoly::from_monomials(self.ctx.clone(), self.terms.iter().map(|&t| t.mul(m)))
    }

    pub fn eval(&self, p: &Point) -> Result<bool> {
        if p.len() != self.ctx.len() {
            return Err(PolyError::ContextMismatch);
        }
        Ok(self.eval_bits(p.bits()))
    }

    pub(crate) fn eval_bits(&self, bits: u64) -> bool {
        self.terms.iter().filter(|m| m.eval_bits(bits)).count() % 2 == 1
    }

    pub fn leading_monomial(&self, order: TermOrder) -> Result<Monomial> {
        order.max(self.monomials()).ok_or(PolyError::ZeroPolynomial)
    }

    /// Monomials descending under `order`, joined by `" + "`; variables in
    /// context order joined by `"*"`.
    pub fn render(&self, order: TermOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.sorted_desc(order)
            .into_iter()
            .map(|m| m.display(&self.ctx).to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Largest set of variables dividing every monomial.
    pub fn common_factor(&self) -> Monomial {
        let mut it = self.monomials();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(first, |acc, m| acc.intersect(m)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolpoly::parse_poly;

    fn ctx2() -> Arc<VariableContext> {
        Arc::new(VariableContext::numbered(2).unwrap())
    }

    fn p(ctx: &Arc<VariableContext>, s: &str) -> BoolPoly {
        parse_poly(s, ctx).unwrap()
    }

    #[test]
    fn addition() {
        let ctx = Arc::new(VariableContext::numbered(3).unwrap());
        assert_eq!(p(&ctx, "x1 + x2").add(&p(&ctx, "x2 + x3")).unwrap(), p(&ctx, "x1 + x3"));
        let f = p(&ctx, "x1*x2 + x3 + 1");
        assert!(f.add(&f).unwrap().is_zero());
        assert_eq!(f.add(&BoolPoly::zero(ctx.clone())).unwrap(), f);
    }

    #[test]
    fn multiplication() {
        let ctx = ctx2();
        assert_eq!(p(&ctx, "x1").mul(&p(&ctx, "x1")).unwrap(), p(&ctx, "x1"));
        assert!(p(&ctx, "x1").mul(&p(&ctx, "x1*x2 + x2")).unwrap().is_zero());
        let g = p(&ctx, "x1 + 1");
        assert_eq!(g.mul(&g).unwrap(), g);
    }

    #[test]
    fn evaluation() {
        let ctx = ctx2();
        let f = p(&ctx, "x1*x2 + x1");
        assert!(f.eval(&Point::from_slice(&[1, 0]).unwrap()).unwrap());
        assert!(!f.eval(&Point::from_slice(&[1, 1]).unwrap()).unwrap());
        for pt in ctx.all_points() {
            assert!(BoolPoly::one(ctx.clone()).eval(&pt).unwrap());
            assert!(!BoolPoly::zero(ctx.clone()).eval(&pt).unwrap());
        }
        assert_eq!(
            f.eval(&Point::from_slice(&[1, 0, 0]).unwrap()),
            Err(PolyError::ContextMismatch)
        );
    }

    #[test]
    fn leading_monomials() {
        let ctx = ctx2();
        assert_eq!(
            p(&ctx, "x1*x2 + x1").leading_monomial(TermOrder::DegLex).unwrap(),
            Monomial::from_vars([0, 1])
        );
        assert_eq!(p(&ctx, "x1 + x2").leading_monomial(TermOrder::Lex).unwrap(), Monomial::var(0));
        assert_eq!(p(&ctx, "1").leading_monomial(TermOrder::Lex).unwrap(), Monomial::ONE);
        assert_eq!(
            BoolPoly::zero(ctx).leading_monomial(TermOrder::Lex),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn rendering() {
        let ctx = ctx2();
        assert_eq!(p(&ctx, "x2 + x1x2").render(TermOrder::DegLex), "x1*x2 + x2");
        assert_eq!(BoolPoly::zero(ctx.clone()).render(TermOrder::DegLex), "0");
        assert_eq!(BoolPoly::one(ctx).render(TermOrder::DegLex), "1");
    }

    #[test]
    fn context_mismatch() {
        let a = BoolPoly::var(ctx2(), 0);
        let b = BoolPoly::var(Arc::new(VariableContext::new(["a", "b"]).unwrap()), 0);
        assert_eq!(a.add(&b), Err(PolyError::ContextMismatch));
        assert_eq!(a.mul(&b), Err(PolyError::ContextMismatch));
        // structurally equal contexts are compatible
        assert!(a.add(&BoolPoly::var(ctx2(), 1)).is_ok());
    }
}
