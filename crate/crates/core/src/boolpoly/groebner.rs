use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use super::poly::same_context;
use super::{BoolPoly, Monomial, Point, PolyError, Result, TermOrder, VariableContext};

/// Reduced Gröbner basis of a vanishing ideal together with the standard
/// monomials spanning the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerResult {
    pub context: Arc<VariableContext>,
    pub order: TermOrder,
    /// Sorted by ascending leading monomial.
    pub basis: Vec<BoolPoly>,
    /// Sorted ascending under `order`.
    pub standard_monomials: Vec<Monomial>,
}

impl GroebnerResult {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|g| g.leading_monomial(self.order).expect("basis elements are nonzero"))
            .collect()
    }

    /// `f` lies in the ideal iff its normal form vanishes.
    pub fn contains(&self, f: &BoolPoly) -> Result<bool> {
        Ok(normal_form(f, &self.basis, self.order)?.is_zero())
    }
}

/// Work polynomial keyed by term order so the largest monomial pops first.
struct OrderedTerms {
    order: TermOrder,
    terms: BTreeMap<(u32, u64), Monomial>,
}

impl OrderedTerms {
    fn new(order: TermOrder) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    fn toggle(&mut self, m: Monomial) {
        let key = self.order.key(m);
        if self.terms.remove(&key).is_none() {
            self.terms.insert(key, m);
        }
    }

    fn pop_max(&mut self) -> Option<Monomial> {
        self.terms.pop_last().map(|(_, m)| m)
    }
}

/// Fully reduces `f` modulo `basis`.
///
/// Each step takes the largest remaining monomial `m`; if some leading
/// monomial `lm` divides it, `f` becomes `f + q*g` with `q = m \ lm`. Since
/// `q` is disjoint from `lm`, `q*lm = m` exactly, and every tail term
/// `t < lm` gives `q ∪ t`, which divides the ordinary product `q*t < q*lm`.
/// So each step replaces `m` by strictly smaller monomials and the loop
/// terminates in every monomial order.
pub fn normal_form(f: &BoolPoly, basis: &[BoolPoly], order: TermOrder) -> Result<BoolPoly> {
    let mut reducers = Vec::with_capacity(basis.len());
    for g in basis {
        if !same_context(f.context(), g.context()) {
            return Err(PolyError::ContextMismatch);
        }
        let lm = g.leading_monomial(order).map_err(|_| PolyError::ZeroDivisorInBasis)?;
        reducers.push((lm, g));
    }

    let mut work = OrderedTerms::new(order);
    for m in f.monomials() {
        work.toggle(m);
    }
    let mut remainder = BoolPoly::zero(f.context().clone());
    while let Some(m) = work.pop_max() {
        match reducers.iter().find(|(lm, _)| lm.divides(m)) {
            Some(&(lm, g)) => {
                let q = m.without(lm);
                for t in g.monomials().filter(|&t| t != lm) {
                    work.toggle(t.mul(q));
                }
            }
            None => remainder.toggle(m),
        }
    }
    Ok(remainder)
}

/// Dense GF(2) vector over the distinct points.
#[derive(Clone)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64).max(1)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    fn first_one(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * 64 + i)
                }
            })
        })
    }
}

/// Echelon row: evaluation vector, its pivot, and which standard monomials
/// were combined to produce it.
struct EchelonRow {
    values: BitRow,
    pivot: usize,
    combination: BitRow,
}

/// Buchberger–Möller over GF(2): the reduced Gröbner basis of the vanishing
/// ideal of `points` in `B_n` under `order`. Duplicate points are ignored.
pub fn buchberger_moeller(
    points: &[Point],
    ctx: &Arc<VariableContext>,
    order: TermOrder,
) -> Result<GroebnerResult> {
    let n = ctx.len();
    if points.iter().any(|p| p.len() != n) {
        return Err(PolyError::ContextMismatch);
    }
    let distinct: Vec<u64> = points.iter().map(Point::bits).collect::<BTreeSet<_>>().into_iter().collect();
    let npts = distinct.len();

    let evaluate = |m: Monomial| {
        let mut row = BitRow::zeros(npts);
        for (j, &p) in distinct.iter().enumerate() {
            if m.eval_bits(p) {
                row.set(j);
            }
        }
        row
    };

    let mut rows: Vec<EchelonRow> = Vec::new();
    let mut standard: Vec<Monomial> = Vec::new();
    let mut leading: Vec<Monomial> = Vec::new();
    let mut basis: Vec<BoolPoly> = Vec::new();

    let mut pool: BTreeSet<((u32, u64), Monomial)> = BTreeSet::new();
    let mut seen: HashSet<Monomial> = HashSet::new();
    pool.insert((order.key(Monomial::ONE), Monomial::ONE));
    seen.insert(Monomial::ONE);

    while let Some((_, m)) = pool.pop_first() {
        if leading.iter().any(|l| l.divides(m)) {
            continue;
        }
        let mut values = evaluate(m);
        let mut combination = BitRow::zeros(npts);
        for row in &rows {
            if values.get(row.pivot) {
                values.xor_assign(&row.values);
                combination.xor_assign(&row.combination);
            }
        }
        match values.first_one() {
            None => {
                // eval(m) = sum of eval(s) over the combination: m + sum(s) vanishes on P
                let tail = combination.ones().map(|k| standard[k]);
                basis.push(BoolPoly::from_monomials(ctx.clone(), std::iter::once(m).chain(tail)));
                leading.push(m);
            }
            Some(pivot) => {
                combination.set(standard.len());
                rows.push(EchelonRow { values, pivot, combination });
                standard.push(m);
                for i in (0..n).filter(|&i| !m.contains_var(i)) {
                    let next = m.mul(Monomial::var(i));
                    if seen.insert(next) && !leading.iter().any(|l| l.divides(next)) {
                        pool.insert((order.key(next), next));
                    }
                }
            }
        }
    }

    Ok(GroebnerResult {
        context: ctx.clone(),
        order,
        basis,
        standard_monomials: standard,
    })
}
