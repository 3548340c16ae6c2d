//! Generators encoding logical decision problems as repair instances, with
//! independent brute-force oracles.
//!
//! Three constructions are provided, each pairing a graph, a constraint set,
//! a query pair, and a preference criterion so that the consistent-query
//! answer equals a logical property of the origin instance:
//!
//! - [`build_qbf`]: a quantified boolean formula ∀X∃Y φ(X,Y) is true iff
//!   the query pair is certain under the subset criterion (with a
//!   node-constraint variant and a multiset-criterion variant);
//! - [`build_parity3sat`]: the number of satisfiable formulas in a chain of
//!   3CNF formulas is even iff the query pair is certain under the
//!   cardinality criterion;
//! - [`build_lexmax`]: the lexicographically maximum satisfying assignment
//!   of a 3CNF formula sets its last variable to true iff the query pair is
//!   certain under the weight criterion (or a prioritized-cardinality
//!   flavor).
//!
//! The matching oracles ([`oracle_qbf`], [`oracle_parity`],
//! [`oracle_lexmax`], [`oracle_sat`]) answer the same questions by plain
//! truth tables, independent of every graph engine, so the two routes can
//! be compared end to end.
//!
//! All generated constraint sets are edge-monotone, so the instances run
//! under node-induced search; each instance records that mode. Where the
//! emitted graph deviates from the construction's raw edge-set definitions
//! (self-loop families required by universally quantified constraints, the
//! query-edge parity, the level-zero finish node, data for otherwise
//! data-less nodes), the normalization is listed in the instance and
//! surfaces in its manifest.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::constraints::ConstraintSet;
use crate::cqa::{CqaError, CqaInstance};
use crate::graph::{DataGraph, Fact, NodeId};
use crate::gxpath::ast::{to_node_constraint, PathExpr};
use crate::gxpath::parse_path;
use crate::prefs::{LabelOrder, PreferenceCriterion, Prioritization, WeightFunction};
use crate::repair::SearchMode;

/// Variable cap for the truth-table oracles.
pub const ORACLE_VAR_CAP: usize = 24;

/// Errors raised by the builders and oracles.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    /// A formula or parameter violates the construction's arity bounds.
    #[error("bad arity: {0}")]
    BadArity(String),
    /// A satisfiable formula follows an unsatisfiable one in a parity
    /// chain, violating the problem's precondition.
    #[error("satisfiability must be monotone decreasing across the formula list")]
    NonMonotoneSatSequence,
    /// Too many variables for a truth-table oracle (or a power-of-two data
    /// encoding).
    #[error("{vars} variables exceed the cap of {cap}")]
    TooManyVars { vars: usize, cap: usize },
}

/// A 3CNF formula: clauses of exactly three signed 1-based variable
/// indices (duplicate literals allowed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    /// Validates that every literal references a declared variable.
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<CnfFormula, ReductionError> {
        if num_vars == 0 {
            return Err(ReductionError::BadArity(
                "a formula needs at least one variable".to_string(),
            ));
        }
        for clause in &clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(ReductionError::BadArity(format!(
                        "literal {lit} outside variables 1..{num_vars}"
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// True iff the assignment (bit `i` set = variable `i+1` true)
    /// satisfies every clause.
    fn satisfied_by(&self, mask: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let val = mask & (1 << (lit.unsigned_abs() - 1)) != 0;
                (lit > 0) == val
            })
        })
    }
}

/// A ∀X∃Y formula: the first `x_vars` variables of `formula` are
/// universally quantified, the remaining `y_vars` existentially.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QbfInstance {
    x_vars: usize,
    y_vars: usize,
    formula: CnfFormula,
}

impl QbfInstance {
    /// Validates the X-then-Y indexing: the formula must declare exactly
    /// `x_vars + y_vars` variables.
    pub fn new(
        x_vars: usize,
        y_vars: usize,
        formula: CnfFormula,
    ) -> Result<QbfInstance, ReductionError> {
        if formula.num_vars() != x_vars + y_vars {
            return Err(ReductionError::BadArity(format!(
                "formula declares {} variables, expected {} + {}",
                formula.num_vars(),
                x_vars,
                y_vars
            )));
        }
        Ok(QbfInstance {
            x_vars,
            y_vars,
            formula,
        })
    }

    pub fn x_vars(&self) -> usize {
        self.x_vars
    }

    pub fn y_vars(&self) -> usize {
        self.y_vars
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }
}

/// Which constraint style a quantified-formula instance uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QbfVariant {
    /// Positive path constraints, subset criterion.
    PosPath,
    /// The same constraints wrapped as node constraints, subset criterion.
    NodeVariant,
    /// Positive path constraints, multiset criterion over a discrete label
    /// order, with variable nodes carrying their own name as data.
    MultisetVariant,
}

/// Which criterion flavor a lexicographic-maximum instance uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LexmaxFlavor {
    /// Data weights encode the lexicographic order numerically.
    Weight,
    /// A prioritization with one level per true-polarity node does.
    PrioritizedCardinality,
}

/// The logical instance a generated graph came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Origin {
    Qbf {
        instance: QbfInstance,
        variant: QbfVariant,
    },
    Parity {
        formulas: Vec<CnfFormula>,
    },
    Lexmax {
        formula: CnfFormula,
        flavor: LexmaxFlavor,
    },
}

/// A generated repair instance: everything needed to ask the consistent
/// query answering question the construction encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInstance {
    pub graph: DataGraph,
    pub constraints: ConstraintSet,
    pub query: PathExpr,
    pub source: NodeId,
    pub target: NodeId,
    pub criterion: PreferenceCriterion,
    /// The search mode the instance is sized for (always node-induced:
    /// the edge families are quadratic, the node count small).
    pub mode: SearchMode,
    pub origin: Origin,
    /// Stable identifiers for every point where the emitted graph deviates
    /// from the construction's raw definitions.
    pub normalizations: Vec<String>,
}

impl ReductionInstance {
    /// Repackages the instance for the query-answering engines.
    pub fn to_cqa_instance(&self) -> Result<CqaInstance, CqaError> {
        CqaInstance::new(
            self.graph.clone(),
            self.constraints.clone(),
            self.query.clone(),
            self.source.clone(),
            self.target.clone(),
            self.criterion.clone(),
        )
    }

    /// A deterministic JSON manifest describing the instance (query,
    /// endpoints, criterion, mode, origin, normalizations).
    pub fn manifest_json(&self) -> String {
        let manifest = serde_json::json!({
            "query": self.query.to_string(),
            "source": self.source,
            "target": self.target,
            "criterion": self.criterion.name(),
            "mode": match self.mode {
                SearchMode::FactLattice => "facts",
                SearchMode::NodeInduced => "node-induced",
            },
            "origin": self.origin,
            "normalizations": self.normalizations,
        });
        let mut s =
            serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
        s.push('\n');
        s
    }
}

/// Decides satisfiability of a formula by truth table.
pub fn oracle_sat(f: &CnfFormula) -> Result<bool, ReductionError> {
    if f.num_vars > ORACLE_VAR_CAP {
        return Err(ReductionError::TooManyVars {
            vars: f.num_vars,
            cap: ORACLE_VAR_CAP,
        });
    }
    Ok((0..1u64 << f.num_vars).any(|mask| f.satisfied_by(mask)))
}

/// Decides a ∀X∃Y formula by nested truth tables.
pub fn oracle_qbf(q: &QbfInstance) -> Result<bool, ReductionError> {
    let (r, s) = (q.x_vars, q.y_vars);
    if r + s > ORACLE_VAR_CAP {
        return Err(ReductionError::TooManyVars {
            vars: r + s,
            cap: ORACLE_VAR_CAP,
        });
    }
    Ok((0..1u64 << r).all(|xm| (0..1u64 << s).any(|ym| q.formula.satisfied_by(xm | (ym << r)))))
}

/// True iff the number of satisfiable formulas in the list is even.
pub fn oracle_parity(formulas: &[CnfFormula]) -> Result<bool, ReductionError> {
    let mut count = 0usize;
    for f in formulas {
        if oracle_sat(f)? {
            count += 1;
        }
    }
    Ok(count.is_multiple_of(2))
}

/// The lexicographically maximum satisfying assignment (index 0 = first
/// variable, most significant; true > false), or `None` if unsatisfiable.
pub fn oracle_lexmax(f: &CnfFormula) -> Result<Option<Vec<bool>>, ReductionError> {
    let n = f.num_vars;
    if n > ORACLE_VAR_CAP {
        return Err(ReductionError::TooManyVars {
            vars: n,
            cap: ORACLE_VAR_CAP,
        });
    }
    for num in (0..1u64 << n).rev() {
        // `num` orders assignments lexicographically (first variable most
        // significant); re-index into the oracle's bit-per-variable mask.
        let assignment: Vec<bool> = (0..n).map(|i| num & (1 << (n - 1 - i)) != 0).collect();
        let mask = assignment
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u64, |m, (i, _)| m | (1 << i));
        if f.satisfied_by(mask) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// Accumulates a graph as plain name/data/triple sets, deduplicating edges
/// (clauses with repeated literals would otherwise emit duplicates).
struct GraphDraft {
    nodes: Vec<(String, String)>,
    edges: BTreeSet<(String, String, String)>,
}

impl GraphDraft {
    fn new() -> GraphDraft {
        GraphDraft {
            nodes: Vec::new(),
            edges: BTreeSet::new(),
        }
    }

    fn node(&mut self, id: &str, data: &str) {
        self.nodes.push((id.to_string(), data.to_string()));
    }

    fn edge(&mut self, from: &str, label: &str, to: &str) {
        self.edges
            .insert((from.to_string(), label.to_string(), to.to_string()));
    }

    fn ids(&self) -> Vec<String> {
        self.nodes.iter().map(|(id, _)| id.clone()).collect()
    }

    /// Adds `label` edges between all node pairs (self-pairs included).
    fn complete(&mut self, label: &str) {
        let ids = self.ids();
        for a in &ids {
            for b in &ids {
                self.edge(a, label, b);
            }
        }
    }

    /// Adds a `label` self-loop on every node for which `keep` holds.
    fn self_loops(&mut self, label: &str, keep: impl Fn(&str) -> bool) {
        for id in self.ids() {
            if keep(&id) {
                self.edge(&id, label, &id);
            }
        }
    }

    fn remove_edge(&mut self, from: &str, label: &str, to: &str) {
        self.edges
            .remove(&(from.to_string(), label.to_string(), to.to_string()));
    }

    fn build(self) -> DataGraph {
        DataGraph::build(self.nodes, self.edges).expect("generated graphs are well-formed")
    }
}

fn parse_constraint_paths(srcs: &[&str]) -> Vec<PathExpr> {
    srcs.iter()
        .map(|s| parse_path(s).expect("construction constraints parse"))
        .collect()
}

/// The polarity node encoding a literal: the node whose presence makes the
/// literal true.
fn literal_node(lit: i32, name_of: impl Fn(usize, bool) -> String) -> String {
    name_of(lit.unsigned_abs() as usize, lit > 0)
}

/// Builds the quantified-boolean-formula instance: repairs of the emitted
/// graph correspond to X-assignments extended by a satisfying Y-assignment
/// whenever one exists, and the query pair is certain iff ∀X∃Y φ holds.
///
/// Nodes: one pair of polarity nodes per variable (`tx1`/`bx1`, `ty1`/
/// `by1`, ...), one node per clause (`c1`, ...), and the query endpoints
/// `v`, `w`. Edges: `needs` from each clause to its satisfying polarity
/// nodes plus self-loops elsewhere; `one_v` between all pairs except each
/// (top, bottom) polarity pair; `valid` chaining the clauses, the Y
/// polarity pairs, and back, plus self-loops off the chain; `all` between
/// all pairs; `query` through `c1`.
pub fn build_qbf(
    q: &QbfInstance,
    variant: QbfVariant,
) -> Result<ReductionInstance, ReductionError> {
    let (r, s, m) = (q.x_vars, q.y_vars, q.formula.clauses().len());
    if r < 1 || s < 1 {
        return Err(ReductionError::BadArity(
            "need at least one universally and one existentially quantified variable".to_string(),
        ));
    }
    if m < 1 {
        return Err(ReductionError::BadArity(
            "need at least one clause".to_string(),
        ));
    }
    let x = |i: usize, top: bool| format!("{}x{i}", if top { "t" } else { "b" });
    let y = |i: usize, top: bool| format!("{}y{i}", if top { "t" } else { "b" });
    let c = |j: usize| format!("c{j}");
    let var_data = |name: &str| match variant {
        QbfVariant::MultisetVariant => name.to_string(),
        _ => "null".to_string(),
    };

    let mut g = GraphDraft::new();
    for i in 1..=r {
        for top in [true, false] {
            g.node(&x(i, top), &var_data(&x(i, top)));
        }
    }
    for i in 1..=s {
        for top in [true, false] {
            g.node(&y(i, top), &var_data(&y(i, top)));
        }
    }
    for j in 1..=m {
        g.node(&c(j), "null");
    }
    g.node("v", "null");
    g.node("w", "null");

    let is_clause = |id: &str| id.starts_with('c');
    let is_y = |id: &str| id.starts_with("ty") || id.starts_with("by");
    // needs: clause demands, self-loops elsewhere.
    for (j, clause) in q.formula.clauses().iter().enumerate() {
        for &lit in clause {
            let target = literal_node(lit, |i, top| if i <= r { x(i, top) } else { y(i - r, top) });
            g.edge(&c(j + 1), "needs", &target);
        }
    }
    g.self_loops("needs", |id| !is_clause(id));
    // one_v: complete minus the polarity pairs.
    g.complete("one_v");
    for i in 1..=r {
        g.remove_edge(&x(i, true), "one_v", &x(i, false));
    }
    for i in 1..=s {
        g.remove_edge(&y(i, true), "one_v", &y(i, false));
    }
    // valid: clause chain, then the Y polarity chain, then back to c1;
    // self-loops on everything off the chain.
    for j in 1..m {
        g.edge(&c(j), "valid", &c(j + 1));
    }
    for top in [true, false] {
        g.edge(&c(m), "valid", &y(1, top));
        g.edge(&y(s, top), "valid", &c(1));
    }
    for i in 1..s {
        for from in [true, false] {
            for to in [true, false] {
                g.edge(&y(i, from), "valid", &y(i + 1, to));
            }
        }
    }
    g.self_loops("valid", |id| !is_clause(id) && !is_y(id));
    g.complete("all");
    g.edge("v", "query", &c(1));
    g.edge(&c(1), "query", "w");

    let paths = parse_constraint_paths(&["needs/all", "one_v", "valid/all"]);
    let (constraints, criterion, normalizations) = match variant {
        QbfVariant::PosPath => (
            ConstraintSet::of_paths(paths),
            PreferenceCriterion::Subset,
            vec!["uniform-null-data".to_string()],
        ),
        QbfVariant::NodeVariant => (
            ConstraintSet::of_nodes(paths.iter().map(to_node_constraint).collect()),
            PreferenceCriterion::Subset,
            vec!["uniform-null-data".to_string()],
        ),
        QbfVariant::MultisetVariant => (
            ConstraintSet::of_paths(paths),
            PreferenceCriterion::Multiset(LabelOrder::empty()),
            Vec::new(),
        ),
    };
    Ok(ReductionInstance {
        graph: g.build(),
        constraints,
        query: parse_path("query/query").expect("query parses"),
        source: "v".to_string(),
        target: "w".to_string(),
        criterion,
        mode: SearchMode::NodeInduced,
        origin: Origin::Qbf {
            instance: q.clone(),
            variant,
        },
        normalizations,
    })
}

/// The assignment graph from the construction's correctness argument: the
/// chosen X polarity nodes plus the query endpoints, all `one_v`/`all`
/// edges among them, and `needs`/`valid` self-loops. It is a consistent
/// subgraph of the generated graph for every X-assignment.
pub fn qbf_assignment_graph(
    q: &QbfInstance,
    x_assignment: &[bool],
    variant: QbfVariant,
) -> Result<DataGraph, ReductionError> {
    if x_assignment.len() != q.x_vars {
        return Err(ReductionError::BadArity(format!(
            "assignment covers {} variables, expected {}",
            x_assignment.len(),
            q.x_vars
        )));
    }
    let x = |i: usize, top: bool| format!("{}x{i}", if top { "t" } else { "b" });
    let var_data = |name: &str| match variant {
        QbfVariant::MultisetVariant => name.to_string(),
        _ => "null".to_string(),
    };
    let mut g = GraphDraft::new();
    for (i, &top) in x_assignment.iter().enumerate() {
        let name = x(i + 1, top);
        g.node(&name, &var_data(&name));
    }
    g.node("v", "null");
    g.node("w", "null");
    g.complete("one_v");
    g.complete("all");
    g.self_loops("needs", |_| true);
    g.self_loops("valid", |_| true);
    Ok(g.build())
}

/// Builds the satisfiability-parity instance over a chain of formulas
/// (monotone: once one is unsatisfiable, all later ones must be). The
/// query pair is certain under the cardinality criterion iff the number of
/// satisfiable formulas is even.
///
/// Each formula gets its own clause/polarity nodes (`c1_3` = first clause
/// of the third formula); `finish` nodes `f0..fk` mark where satisfiability
/// ends: `finish` edges exist between all pairs except each (`f`-node,
/// first clause of the next formula), making the two mutually exclusive.
/// Query edges run `v` → first clause → `f`-node → `w` at even positions,
/// and through `f0` alone (with a self-loop) to witness position zero.
pub fn build_parity3sat(formulas: &[CnfFormula]) -> Result<ReductionInstance, ReductionError> {
    let k = formulas.len();
    if k < 1 {
        return Err(ReductionError::BadArity(
            "need at least one formula".to_string(),
        ));
    }
    for (idx, f) in formulas.iter().enumerate() {
        if f.clauses().len() < 2 {
            return Err(ReductionError::BadArity(format!(
                "formula {} has {} clauses, need at least two",
                idx + 1,
                f.clauses().len()
            )));
        }
    }
    let mut sat_prev = true;
    for f in formulas {
        let sat = oracle_sat(f)?;
        if sat && !sat_prev {
            return Err(ReductionError::NonMonotoneSatSequence);
        }
        sat_prev = sat;
    }

    let var = |l: usize, i: usize, top: bool| format!("{}{i}_{l}", if top { "t" } else { "b" });
    let c = |l: usize, j: usize| format!("c{j}_{l}");
    let fin = |l: usize| format!("f{l}");

    let mut g = GraphDraft::new();
    for (idx, f) in formulas.iter().enumerate() {
        let l = idx + 1;
        for j in 1..=f.clauses().len() {
            g.node(&c(l, j), "null");
        }
        for i in 1..=f.num_vars() {
            g.node(&var(l, i, true), "null");
            g.node(&var(l, i, false), "null");
        }
    }
    for l in 0..=k {
        g.node(&fin(l), "null");
    }
    g.node("v", "null");
    g.node("w", "null");

    let is_clause = |id: &str| id.starts_with('c');
    for (idx, f) in formulas.iter().enumerate() {
        let l = idx + 1;
        for (j, clause) in f.clauses().iter().enumerate() {
            for &lit in clause {
                g.edge(
                    &c(l, j + 1),
                    "needs",
                    &literal_node(lit, |i, top| var(l, i, top)),
                );
            }
        }
        // valid: each formula's clauses chain in a cycle, so they survive
        // all together or not at all.
        let m = f.clauses().len();
        for j in 1..m {
            g.edge(&c(l, j), "valid", &c(l, j + 1));
        }
        g.edge(&c(l, m), "valid", &c(l, 1));
    }
    g.self_loops("needs", |id| !is_clause(id));
    g.self_loops("valid", |id| !is_clause(id));
    g.complete("one_v");
    for (idx, f) in formulas.iter().enumerate() {
        let l = idx + 1;
        for i in 1..=f.num_vars() {
            g.remove_edge(&var(l, i, true), "one_v", &var(l, i, false));
        }
    }
    g.complete("all");
    g.complete("finish");
    for l in 0..k {
        g.remove_edge(&fin(l), "finish", &c(l + 1, 1));
    }
    for l in 1..=k {
        if l % 2 == 0 {
            g.edge("v", "query", &c(l, 1));
            g.edge(&c(l, 1), "query", &fin(l));
        }
        g.edge(&fin(l), "query", "w");
    }
    g.edge(&fin(0), "query", "w");
    g.edge("v", "query", &fin(0));
    g.edge(&fin(0), "query", &fin(0));

    Ok(ReductionInstance {
        graph: g.build(),
        constraints: ConstraintSet::of_paths(parse_constraint_paths(&[
            "needs/all",
            "one_v",
            "valid/all",
            "finish",
        ])),
        query: parse_path("query/query/query").expect("query parses"),
        source: "v".to_string(),
        target: "w".to_string(),
        criterion: PreferenceCriterion::Cardinality,
        mode: SearchMode::NodeInduced,
        origin: Origin::Parity {
            formulas: formulas.to_vec(),
        },
        normalizations: vec![
            "all-pairs-all-edges".to_string(),
            "query-even-parity".to_string(),
            "finish-zero-device".to_string(),
            "uniform-null-data".to_string(),
        ],
    })
}

/// Builds the lexicographic-maximum instance: any non-empty repair must
/// represent a satisfying assignment, the criterion makes the
/// lexicographically maximum one optimal, and the query pair is certain
/// iff that assignment sets the last variable to true.
///
/// Polarity nodes carry numeric data (`t1` = 2^n, ..., `tn` = 2, every
/// bottom node 1, clause nodes 2^(n+2)); the weight flavor scores data by
/// value with every edge label weightless except `query` (weight 1, so
/// optimal repairs keep the query edges whenever their endpoints survive).
/// A `valid` chain through the clauses, the polarity pairs, `v`, and `w`
/// forces every non-empty consistent subgraph to contain the full skeleton.
pub fn build_lexmax(
    f: &CnfFormula,
    flavor: LexmaxFlavor,
) -> Result<ReductionInstance, ReductionError> {
    let (n, m) = (f.num_vars(), f.clauses().len());
    if m < 1 {
        return Err(ReductionError::BadArity(
            "need at least one clause".to_string(),
        ));
    }
    if n + 2 > 63 {
        return Err(ReductionError::TooManyVars { vars: n, cap: 61 });
    }
    let var = |i: usize, top: bool| format!("{}{i}", if top { "t" } else { "b" });
    let c = |j: usize| format!("c{j}");

    let mut g = GraphDraft::new();
    for i in 1..=n {
        g.node(&var(i, true), &(1u64 << (n + 1 - i)).to_string());
        g.node(&var(i, false), "1");
    }
    for j in 1..=m {
        g.node(&c(j), &(1u64 << (n + 2)).to_string());
    }
    g.node("v", "0");
    g.node("w", "0");

    let is_clause = |id: &str| id.starts_with('c');
    for (j, clause) in f.clauses().iter().enumerate() {
        for &lit in clause {
            g.edge(&c(j + 1), "needs", &literal_node(lit, var));
        }
    }
    g.self_loops("needs", |id| !is_clause(id));
    g.complete("one_v");
    for i in 1..=n {
        g.remove_edge(&var(i, true), "one_v", &var(i, false));
    }
    // valid: a single chain through clauses, polarity pairs, v, and w,
    // with no self-loops — presence of any node forces the whole skeleton.
    for j in 1..m {
        g.edge(&c(j), "valid", &c(j + 1));
    }
    for top in [true, false] {
        g.edge(&c(m), "valid", &var(1, top));
        g.edge(&var(n, top), "valid", "v");
    }
    for i in 1..n {
        for from in [true, false] {
            for to in [true, false] {
                g.edge(&var(i, from), "valid", &var(i + 1, to));
            }
        }
    }
    g.edge("v", "valid", "w");
    g.edge("w", "valid", &c(1));
    g.complete("all");
    g.edge("v", "query", &var(n, true));
    g.edge(&var(n, true), "query", "w");

    let graph = g.build();
    let (criterion, flavor_normalizations) = match flavor {
        LexmaxFlavor::Weight => {
            let mut data_weights = std::collections::BTreeMap::new();
            for (_, d) in graph.nodes() {
                data_weights.insert(
                    d.to_string(),
                    d.parse::<u64>().expect("data values are numeric"),
                );
            }
            let mut label_weights = std::collections::BTreeMap::new();
            label_weights.insert("query".to_string(), 1);
            (
                PreferenceCriterion::Weight(WeightFunction::new(
                    label_weights,
                    data_weights,
                    Some(0),
                    None,
                )),
                vec!["query-weight-one".to_string()],
            )
        }
        LexmaxFlavor::PrioritizedCardinality => {
            let mut first: BTreeSet<Fact> = (1..=m).map(|j| Fact::Node(c(j))).collect();
            first.insert(Fact::Node("v".to_string()));
            first.insert(Fact::Node("w".to_string()));
            let mut levels = vec![first];
            for i in 1..=n {
                levels.push(BTreeSet::from([Fact::Node(var(i, true))]));
            }
            let mut last: BTreeSet<Fact> = (1..=n).map(|i| Fact::Node(var(i, false))).collect();
            last.extend(
                graph
                    .facts()
                    .into_iter()
                    .filter(|f| matches!(f, Fact::Edge(..))),
            );
            levels.push(last);
            (
                PreferenceCriterion::PrioritizedCardinality(
                    Prioritization::new(levels).expect("levels partition the generated facts"),
                ),
                vec!["prioritization-top-levels".to_string()],
            )
        }
    };
    let mut normalizations = vec![
        "needs-self-loops".to_string(),
        "valid-chain-through-variables".to_string(),
        "endpoint-zero-data".to_string(),
    ];
    normalizations.extend(flavor_normalizations);
    Ok(ReductionInstance {
        graph,
        constraints: ConstraintSet::of_paths(parse_constraint_paths(&[
            "needs/all",
            "one_v",
            "valid/all",
        ])),
        query: parse_path("query/query").expect("query parses"),
        source: "v".to_string(),
        target: "w".to_string(),
        criterion,
        mode: SearchMode::NodeInduced,
        origin: Origin::Lexmax {
            formula: f.clone(),
            flavor,
        },
        normalizations,
    })
}
