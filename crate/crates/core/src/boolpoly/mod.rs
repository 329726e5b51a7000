//! Polynomials over the boolean ring `B_n = GF(2)[x_1..x_n] / (x_i^2 + x_i)`.
//!
//! Every element is kept in algebraic normal form: a set of squarefree
//! monomials, each monomial a bitset over the variables of a shared
//! [`VariableContext`]. Addition is symmetric difference, multiplication
//! distributes with monomial product equal to set union.
//!
//! The Gröbner machinery is specialised to vanishing ideals of point sets
//! in `{0,1}^n`, computed with the Buchberger–Möller procedure.

mod context;
mod groebner;
mod monomial;
mod oracle;
mod order;
mod parse;
mod poly;

pub use context::{Point, VariableContext, MAX_VARIABLES};
pub use groebner::{buchberger_moeller, normal_form, GroebnerResult};
pub use monomial::Monomial;
pub use oracle::{indicator_poly, verify_gb_oracle, OracleReport, ORACLE_MAX_VARIABLES};
pub use order::TermOrder;
pub use parse::parse_poly;
pub use poly::BoolPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("operands belong to different variable contexts")]
    ContextMismatch,
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("a divisor list contains the zero polynomial")]
    ZeroDivisorInBasis,
    #[error("context has {0} variables; exhaustive checks allow at most {ORACLE_MAX_VARIABLES}")]
    ContextTooLarge(usize),
    #[error("invalid variable context: {0}")]
    InvalidContext(String),
    #[error("unknown term order `{0}`")]
    UnknownOrder(String),
}

pub type Result<T, E = PolyError> = std::result::Result<T, E>;
