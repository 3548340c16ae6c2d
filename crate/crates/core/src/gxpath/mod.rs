//! Path and node expressions: syntax, parsing, classification, evaluation.
//!
//! The expression language has two sorts. *Path expressions* denote binary
//! relations over a graph's nodes (regular path queries with converse,
//! intersection, complement, bounded repetition, and node tests). *Node
//! expressions* denote node sets (boolean combinations of data-value tests
//! and path existence/comparison tests). The two sorts nest through `[phi]`
//! and `<alpha>`.

pub mod ast;
pub mod eval;
mod lexer;
pub mod parser;

use thiserror::Error;

pub use ast::{classify_node, classify_path, to_node_constraint, Fragment, NodeExpr, PathExpr};
pub use eval::{eval_node, eval_path};
pub use parser::{parse_node, parse_path};

/// Errors produced by expression parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    /// The input does not conform to the grammar.
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    /// A repetition `{n,m}` with `n > m`.
    #[error("bad repetition bounds {{{n},{m}}} at byte {position}: lower bound exceeds upper")]
    RepeatBounds { n: u32, m: u32, position: usize },
}
