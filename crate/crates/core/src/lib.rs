//! A reference interpreter for correlated `EXISTS` in a small SPARQL 1.1
//! fragment.
//!
//! Inner patterns are correlated with the current outer solution by
//! normalizing them (every variable renamed fresh, with records of which
//! fresh names produce output and which may be substituted) and then
//! substituting the outer values. Three semantics are supported; they
//! differ in which inner variables count as correlated:
//!
//! * [`Semantics::S1`]: only the in-domain variables of the inner pattern.
//! * [`Semantics::S2`]: additionally variables that occur in expressions.
//! * [`Semantics::S3`]: additionally variables hidden by a sub-select
//!   projection or by the right side of `MINUS`.
//!
//! ```
//! use exists_lab::{eval_query, parse_data, parse_query, Semantics};
//!
//! let data = parse_data(":a :parent :b . :a :country :j . :b :country :j .").unwrap();
//! let query = parse_query(
//!     "SELECT ?parent WHERE { ?parent :country :j
//!        FILTER(EXISTS { SELECT ?child WHERE { ?child :parent ?parent } }) }",
//! )
//! .unwrap();
//! assert_eq!(eval_query(&data, &query, Semantics::S1).unwrap().len(), 2);
//! assert_eq!(eval_query(&data, &query, Semantics::S3).unwrap().len(), 1);
//! ```

pub mod algebra;
pub mod bind;
pub mod cli;
pub mod eval;
pub mod fixtures;
mod lexer;
pub mod normalize;
pub mod parser;
pub mod results;
pub mod scope;
pub mod serialize;
pub mod solution;
pub mod term;
pub mod turtle;

pub use algebra::{Expression, GraphPattern, Variable};
pub use bind::{bind, bind_expression, bind_pattern, encode_values, mapping_substitute};
pub use eval::{eval_expr, eval_pattern, eval_query, EvalError, ExprValue};
pub use lexer::SyntaxError;
pub use normalize::{normalize, normalize_pattern, Fragment, Normalization, NormalizeOptions, Semantics, VarRenaming};
pub use parser::{parse_expression, parse_pattern, parse_query, ParseError};
pub use scope::in_domain;
pub use serialize::serialize;
pub use solution::{SolutionMapping, SolutionSet};
pub use term::{Dataset, Term};
pub use turtle::parse_data;
