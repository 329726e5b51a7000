use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError};

/// Monomial orders restricted to 0/1 exponent vectors, with `x1 > x2 > ... > xn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    Lex,
    #[serde(rename = "deglex")]
    DegLex,
    #[default]
    #[serde(rename = "degrevlex")]
    DegRevLex,
}

impl TermOrder {
    pub const ALL: [TermOrder; 3] = [TermOrder::Lex, TermOrder::DegLex, TermOrder::DegRevLex];

    pub fn name(self) -> &'static str {
        match self {
            TermOrder::Lex => "lex",
            TermOrder::DegLex => "deglex",
            TermOrder::DegRevLex => "degrevlex",
        }
    }

    /// Integer key whose natural order is this term order.
    ///
    /// Lex: the lowest differing index decides, the monomial containing it is
    /// larger, so bit-reversing puts `x1` in the most significant position.
    /// Degrevlex: among equal degrees the highest differing index decides and
    /// the monomial *lacking* it is larger, which is plain comparison of the
    /// complemented word.
    pub fn key(self, m: Monomial) -> (u32, u64) {
        match self {
            TermOrder::Lex => (0, m.bits().reverse_bits()),
            TermOrder::DegLex => (m.degree(), m.bits().reverse_bits()),
            TermOrder::DegRevLex => (m.degree(), !m.bits()),
        }
    }

    pub fn compare(self, a: Monomial, b: Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn max<I: IntoIterator<Item = Monomial>>(self, monomials: I) -> Option<Monomial> {
        monomials.into_iter().max_by_key(|&m| self.key(m))
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TermOrder {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(TermOrder::Lex),
            "deglex" => Ok(TermOrder::DegLex),
            "degrevlex" | "grevlex" => Ok(TermOrder::DegRevLex),
            other => Err(PolyError::UnknownOrder(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Ordering::*;

    fn m(vars: &[usize]) -> Monomial {
        Monomial::from_vars(vars.iter().copied())
    }

    #[test]
    fn documented_comparisons() {
        assert_eq!(TermOrder::DegLex.compare(m(&[1]), m(&[0, 1])), Less);
        assert_eq!(TermOrder::Lex.compare(m(&[1]), m(&[0])), Less);
        for o in TermOrder::ALL {
            assert_eq!(o.compare(m(&[0, 2]), m(&[0, 2])), Equal);
        }
    }

    #[test]
    fn lex_vs_degree_orders() {
        // x1 > x2*x3 in lex, the reverse in degree orders
        assert_eq!(TermOrder::Lex.compare(m(&[0]), m(&[1, 2])), Greater);
        assert_eq!(TermOrder::DegLex.compare(m(&[0]), m(&[1, 2])), Less);
        // x1*x4 vs x2*x3: deglex decides on x1, degrevlex on x4
        assert_eq!(TermOrder::DegLex.compare(m(&[0, 3]), m(&[1, 2])), Greater);
        assert_eq!(TermOrder::DegRevLex.compare(m(&[0, 3]), m(&[1, 2])), Less);
    }

    #[test]
    fn one_is_minimal_and_divisibility_respected() {
        for o in TermOrder::ALL {
            for a in 0u64..16 {
                assert_ne!(o.compare(Monomial::ONE, Monomial::from_bits(a)), Greater);
                for b in 0u64..16 {
                    let (ma, mb) = (Monomial::from_bits(a), Monomial::from_bits(b));
                    if ma.divides(mb) {
                        assert_ne!(o.compare(ma, mb), Greater, "{o} {a:b} {b:b}");
                    }
                }
            }
        }
    }

    #[test]
    fn parse_names() {
        for o in TermOrder::ALL {
            assert_eq!(o.name().parse::<TermOrder>().unwrap(), o);
        }
        assert!("revlex".parse::<TermOrder>().is_err());
        assert_eq!(TermOrder::default(), TermOrder::DegRevLex);
    }
}
