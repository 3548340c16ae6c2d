//! Abstract syntax of path and node expressions, plus the fragment lattice
//! used to route constraint sets to the right algorithms.
//!
//! `Display` renders an expression back to concrete syntax; the printer
//! inserts parentheses only where the grammar's precedence demands them, so
//! printing and re-parsing is the identity on ASTs.

use std::fmt;

use crate::graph::{DataValue, EdgeLabel};

/// A binary path expression, evaluating to a set of node pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathExpr {
    /// `()` — the identity relation.
    Epsilon,
    /// `_` — one hop along any edge, regardless of label.
    Wildcard,
    /// `a` — one hop along an `a`-labeled edge.
    Forward(EdgeLabel),
    /// `^a` — one hop against an `a`-labeled edge.
    Backward(EdgeLabel),
    /// `[phi]` — the identity relation restricted to nodes satisfying `phi`.
    NodeTest(Box<NodeExpr>),
    /// `p/q` — relational composition.
    Concat(Box<PathExpr>, Box<PathExpr>),
    /// `p|q` — union.
    Union(Box<PathExpr>, Box<PathExpr>),
    /// `p&q` — intersection.
    Intersect(Box<PathExpr>, Box<PathExpr>),
    /// `p*` — reflexive-transitive closure.
    Star(Box<PathExpr>),
    /// `!p` — complement with respect to all node pairs of the graph.
    Complement(Box<PathExpr>),
    /// `p{n,m}` — between `n` and `m` compositions of `p` (inclusive).
    Repeat(Box<PathExpr>, u32, u32),
}

/// A unary node expression, evaluating to a set of nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeExpr {
    /// `~phi` — negation.
    Not(Box<NodeExpr>),
    /// `phi && psi` — conjunction.
    And(Box<NodeExpr>, Box<NodeExpr>),
    /// `phi || psi` — disjunction.
    Or(Box<NodeExpr>, Box<NodeExpr>),
    /// `data = "c"` — the node's data value equals the constant.
    DataEq(DataValue),
    /// `data != "c"` — the node's data value differs from the constant.
    DataNeq(DataValue),
    /// `<p>` — some `p`-path leaves this node.
    HasPath(Box<PathExpr>),
    /// `<p = q>` — a `p`-target and a `q`-target share a data value.
    EqTest(Box<PathExpr>, Box<PathExpr>),
    /// `<p != q>` — a `p`-target and a `q`-target have different data values.
    NeqTest(Box<PathExpr>, Box<PathExpr>),
}

impl PathExpr {
    /// Convenience constructor for `Concat`.
    pub fn then(self, next: PathExpr) -> PathExpr {
        PathExpr::Concat(Box::new(self), Box::new(next))
    }

    /// Convenience constructor for `Union`.
    pub fn or(self, other: PathExpr) -> PathExpr {
        PathExpr::Union(Box::new(self), Box::new(other))
    }

    /// Folds a non-empty list of alternatives into a left-nested union.
    pub fn any_of(mut alts: Vec<PathExpr>) -> PathExpr {
        let first = alts.remove(0);
        alts.into_iter().fold(first, PathExpr::or)
    }

    /// True when the expression avoids `!` and `~` everywhere. Positive
    /// expressions only gain pairs as the graph gains facts.
    pub fn is_positive(&self) -> bool {
        match self {
            PathExpr::Epsilon
            | PathExpr::Wildcard
            | PathExpr::Forward(_)
            | PathExpr::Backward(_) => true,
            PathExpr::NodeTest(phi) => phi.is_positive(),
            PathExpr::Concat(a, b) | PathExpr::Union(a, b) | PathExpr::Intersect(a, b) => {
                a.is_positive() && b.is_positive()
            }
            PathExpr::Star(a) | PathExpr::Repeat(a, _, _) => a.is_positive(),
            PathExpr::Complement(_) => false,
        }
    }
}

impl NodeExpr {
    /// Convenience constructor for `HasPath`.
    pub fn has(path: PathExpr) -> NodeExpr {
        NodeExpr::HasPath(Box::new(path))
    }

    /// True when the expression avoids `!` and `~` everywhere. The data
    /// comparisons (`data != "c"`, `<p = q>`, `<p != q>`) count as positive:
    /// each is witnessed by concrete facts and survives the addition of more.
    pub fn is_positive(&self) -> bool {
        match self {
            NodeExpr::Not(_) => false,
            NodeExpr::And(a, b) | NodeExpr::Or(a, b) => a.is_positive() && b.is_positive(),
            NodeExpr::DataEq(_) | NodeExpr::DataNeq(_) => true,
            NodeExpr::HasPath(p) => p.is_positive(),
            NodeExpr::EqTest(a, b) | NodeExpr::NeqTest(a, b) => a.is_positive() && b.is_positive(),
        }
    }
}

/// The expression fragments, ordered by expressive power.
///
/// `NodePos` ⊆ `Node` and `NodePos` ⊆ `Pos` ⊆ `Full`; `Node` ⊆ `Full`.
/// A single node expression classifies as `NodePos` or `Node`; a single path
/// expression classifies as `Pos` or `Full`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fragment {
    /// Positive node expressions only.
    NodePos,
    /// Node expressions, negation allowed.
    Node,
    /// Positive expressions, path constraints allowed.
    Pos,
    /// Everything.
    Full,
}

impl Fragment {
    fn parts(self) -> (bool, bool) {
        // (node-only, positive)
        match self {
            Fragment::NodePos => (true, true),
            Fragment::Node => (true, false),
            Fragment::Pos => (false, true),
            Fragment::Full => (false, false),
        }
    }

    fn from_parts(node_only: bool, positive: bool) -> Fragment {
        match (node_only, positive) {
            (true, true) => Fragment::NodePos,
            (true, false) => Fragment::Node,
            (false, true) => Fragment::Pos,
            (false, false) => Fragment::Full,
        }
    }

    /// Least upper bound: the smallest fragment containing both operands.
    pub fn join(self, other: Fragment) -> Fragment {
        let (n1, p1) = self.parts();
        let (n2, p2) = other.parts();
        Fragment::from_parts(n1 && n2, p1 && p2)
    }
}

/// Classifies a path expression: `Pos` when positive, `Full` otherwise.
pub fn classify_path(p: &PathExpr) -> Fragment {
    if p.is_positive() {
        Fragment::Pos
    } else {
        Fragment::Full
    }
}

/// Classifies a node expression: `NodePos` when positive, `Node` otherwise.
pub fn classify_node(phi: &NodeExpr) -> Fragment {
    if phi.is_positive() {
        Fragment::NodePos
    } else {
        Fragment::Node
    }
}

/// Turns a path expression into the node constraint stating that the path
/// relation covers all node pairs: requiring `alpha` of every pair is the
/// same as requiring `~<!(alpha)>` of every node.
pub fn to_node_constraint(alpha: &PathExpr) -> NodeExpr {
    NodeExpr::Not(Box::new(NodeExpr::HasPath(Box::new(PathExpr::Complement(
        Box::new(alpha.clone()),
    )))))
}

// Precedence levels used by the printer. Higher binds tighter.
const PATH_UNION: u8 = 1;
const PATH_INTERSECT: u8 = 2;
const PATH_CONCAT: u8 = 3;
const PATH_POSTFIX: u8 = 4;
const PATH_ATOM: u8 = 5;

fn path_prec(p: &PathExpr) -> u8 {
    match p {
        PathExpr::Union(..) => PATH_UNION,
        PathExpr::Intersect(..) => PATH_INTERSECT,
        PathExpr::Concat(..) => PATH_CONCAT,
        PathExpr::Star(..) | PathExpr::Repeat(..) => PATH_POSTFIX,
        _ => PATH_ATOM,
    }
}

fn fmt_path(p: &PathExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = path_prec(p);
    let parens = prec < min;
    if parens {
        write!(f, "(")?;
    }
    match p {
        PathExpr::Epsilon => write!(f, "()")?,
        PathExpr::Wildcard => write!(f, "_")?,
        PathExpr::Forward(a) => write!(f, "{a}")?,
        PathExpr::Backward(a) => write!(f, "^{a}")?,
        PathExpr::NodeTest(phi) => write!(f, "[{phi}]")?,
        PathExpr::Concat(a, b) => {
            // Left-associative: the right child needs strictly tighter binding.
            fmt_path(a, PATH_CONCAT, f)?;
            write!(f, "/")?;
            fmt_path(b, PATH_CONCAT + 1, f)?;
        }
        PathExpr::Union(a, b) => {
            fmt_path(a, PATH_UNION, f)?;
            write!(f, " | ")?;
            fmt_path(b, PATH_UNION + 1, f)?;
        }
        PathExpr::Intersect(a, b) => {
            fmt_path(a, PATH_INTERSECT, f)?;
            write!(f, " & ")?;
            fmt_path(b, PATH_INTERSECT + 1, f)?;
        }
        PathExpr::Star(a) => {
            fmt_path(a, PATH_POSTFIX, f)?;
            write!(f, "*")?;
        }
        PathExpr::Repeat(a, n, m) => {
            fmt_path(a, PATH_POSTFIX, f)?;
            write!(f, "{{{n},{m}}}")?;
        }
        PathExpr::Complement(a) => {
            write!(f, "!")?;
            fmt_path(a, PATH_ATOM, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

/// Escapes a string for inclusion in a double-quoted literal: `"` and `\`
/// gain a backslash, everything else passes through. The lexer inverts
/// exactly this, so arbitrary data values round-trip.
pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

const NODE_OR: u8 = 1;
const NODE_AND: u8 = 2;
const NODE_UNARY: u8 = 3;

fn node_prec(phi: &NodeExpr) -> u8 {
    match phi {
        NodeExpr::Or(..) => NODE_OR,
        NodeExpr::And(..) => NODE_AND,
        _ => NODE_UNARY,
    }
}

fn fmt_node(phi: &NodeExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = node_prec(phi);
    let parens = prec < min;
    if parens {
        write!(f, "(")?;
    }
    match phi {
        NodeExpr::Not(a) => {
            write!(f, "~")?;
            fmt_node(a, NODE_UNARY, f)?;
        }
        NodeExpr::And(a, b) => {
            fmt_node(a, NODE_AND, f)?;
            write!(f, " && ")?;
            fmt_node(b, NODE_AND + 1, f)?;
        }
        NodeExpr::Or(a, b) => {
            fmt_node(a, NODE_OR, f)?;
            write!(f, " || ")?;
            fmt_node(b, NODE_OR + 1, f)?;
        }
        NodeExpr::DataEq(c) => write!(f, "data = \"{}\"", escape_string(c))?,
        NodeExpr::DataNeq(c) => write!(f, "data != \"{}\"", escape_string(c))?,
        NodeExpr::HasPath(p) => write!(f, "<{p}>")?,
        NodeExpr::EqTest(a, b) => write!(f, "<{a} = {b}>")?,
        NodeExpr::NeqTest(a, b) => write!(f, "<{a} != {b}>")?,
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_path(self, 0, f)
    }
}

impl fmt::Display for NodeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(self, 0, f)
    }
}
