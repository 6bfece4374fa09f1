//! Parsing and serialization: the expression grammar, the input document
//! and the pinned report schema.

pub mod parse;
pub mod render;
pub mod schema;

pub use parse::{eval_expr, parse_expr, parse_ratfunc, EvalError, ExprAst, ParseError};
pub use render::{render_ratfunc, report_to_json, report_to_text, SCHEMA_VERSION};
pub use schema::{parse_input_document, sample_input_document, InputDocument};
