use std::fmt;

use super::VariableContext;

/// Squarefree monomial stored as a variable bitset; the empty set is `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub const fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn from_vars<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        Monomial(vars.into_iter().fold(0, |acc, v| acc | 1 << v))
    }

    pub fn var(index: usize) -> Self {
        Monomial(1 << index)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains_var(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    /// `self | other`, i.e. `self * other` in the boolean ring.
    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    /// `self \ other`; the cofactor when `other` divides `self`.
    pub fn without(self, other: Monomial) -> Monomial {
        Monomial(self.0 & !other.0)
    }

    pub fn intersect(self, other: Monomial) -> Monomial {
        Monomial(self.0 & other.0)
    }

    pub fn vars(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// Value of the conjunction at a point given as a bitset.
    pub fn eval_bits(self, point_bits: u64) -> bool {
        point_bits & self.0 == self.0
    }

    pub fn display<'a>(self, ctx: &'a VariableContext) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, ctx, sep: "*" }
    }

    pub fn display_with<'a>(self, ctx: &'a VariableContext, sep: &'static str) -> MonomialDisplay<'a> {
        MonomialDisplay { mono: self, ctx, sep }
    }
}

pub struct MonomialDisplay<'a> {
    mono: Monomial,
    ctx: &'a VariableContext,
    sep: &'static str,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono.is_one() {
            return f.write_str("1");
        }
        for (k, v) in self.mono.vars().enumerate() {
            if k > 0 {
                f.write_str(self.sep)?;
            }
            f.write_str(self.ctx.name(v))?;
        }
        Ok(())
    }
}
