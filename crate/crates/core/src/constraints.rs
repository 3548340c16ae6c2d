//! Constraint sets: collections of path and node constraints with a textual
//! file format.
//!
//! A *path constraint* `alpha` requires every node pair to be in the denoted
//! relation; a *node constraint* `phi` requires every node to satisfy it.
//! The file format is line-based:
//!
//! ```text
//! # films must have a director
//! node: <directed_by> || ~<type/[data = "Film"]>
//! path: _*
//! ```
//!
//! Blank lines and `#` comments are skipped. Each constraint line is
//! `path: <expression>` or `node: <expression>`.

use std::fmt;

use thiserror::Error;

use crate::gxpath::{
    classify_node, classify_path, parse_node, parse_path, Fragment, NodeExpr, ParseError, PathExpr,
};

/// A finite set of path and node constraints, kept in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    /// Path constraints: each must denote the full pair relation.
    pub path_constraints: Vec<PathExpr>,
    /// Node constraints: each must denote the full node set.
    pub node_constraints: Vec<NodeExpr>,
}

/// Errors raised when reading a constraint file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstraintError {
    /// A line is neither a comment, blank, `path: ...`, nor `node: ...`.
    #[error("line {line}: expected 'path:' or 'node:' prefix")]
    BadLine { line: usize },
    /// The expression on a line failed to parse.
    #[error("line {line}: {source}")]
    Expr {
        line: usize,
        #[source]
        source: ParseError,
    },
}

impl ConstraintSet {
    /// Creates an empty constraint set.
    pub fn new() -> Self {
        ConstraintSet::default()
    }

    /// A set with path constraints only.
    pub fn of_paths(paths: Vec<PathExpr>) -> Self {
        ConstraintSet {
            path_constraints: paths,
            node_constraints: Vec::new(),
        }
    }

    /// A set with node constraints only.
    pub fn of_nodes(nodes: Vec<NodeExpr>) -> Self {
        ConstraintSet {
            path_constraints: Vec::new(),
            node_constraints: nodes,
        }
    }

    /// Total number of constraints.
    pub fn len(&self) -> usize {
        self.path_constraints.len() + self.node_constraints.len()
    }

    /// True when the set has no constraints.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The smallest fragment containing every member constraint. The empty
    /// set classifies as `NodePos`, the bottom of the lattice.
    pub fn classify(&self) -> Fragment {
        let mut frag = Fragment::NodePos;
        for p in &self.path_constraints {
            frag = frag.join(classify_path(p));
        }
        for n in &self.node_constraints {
            frag = frag.join(classify_node(n));
        }
        frag
    }

    /// Parses the line-based file format.
    pub fn parse(src: &str) -> Result<ConstraintSet, ConstraintError> {
        let mut set = ConstraintSet::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if let Some(rest) = text.strip_prefix("path:") {
                let expr = parse_path(rest.trim())
                    .map_err(|source| ConstraintError::Expr { line, source })?;
                set.path_constraints.push(expr);
            } else if let Some(rest) = text.strip_prefix("node:") {
                let expr = parse_node(rest.trim())
                    .map_err(|source| ConstraintError::Expr { line, source })?;
                set.node_constraints.push(expr);
            } else {
                return Err(ConstraintError::BadLine { line });
            }
        }
        Ok(set)
    }
}

impl fmt::Display for ConstraintSet {
    /// Writes the set back in the file format (path constraints first).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.path_constraints {
            writeln!(f, "path: {p}")?;
        }
        for n in &self.node_constraints {
            writeln!(f, "node: {n}")?;
        }
        Ok(())
    }
}
