//! Documentation of mathematical workflows and models as a typed knowledge
//! graph, plus logical rule mining over binary object data through Gröbner
//! bases of vanishing ideals in the boolean ring.

pub mod boolpoly;
pub mod rulemine;
pub mod modelkg;
pub mod metafetch;
pub mod workflowdoc;
