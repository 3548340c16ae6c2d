//! Consistency checking and preferred-repair search.
//!
//! A graph is *consistent* with a constraint set when every node constraint
//! holds at every node and every path constraint covers every node pair. A
//! *preferred repair* is a consistent subgraph that no other consistent
//! subgraph strictly beats under the chosen preference criterion.
//!
//! Three engines live here:
//!
//! - [`is_consistent`]: the polynomial check, with a full violation report;
//! - [`repair_node_pos`]: the polynomial fixpoint algorithm for positive
//!   node constraints, where the repair is unique under every criterion;
//! - [`consistent_subsets`] / [`preferred_repairs`]: exhaustive search over
//!   the subset lattice, exact but capped, backing the general decision
//!   operations [`repair_check`], [`repair_exists`], and [`repair_compute`].
//!
//! The exhaustive search has two modes. `FactLattice` walks all well-formed
//! fact subsets (an edge is only considered once both endpoints are kept).
//! `NodeInduced` walks node subsets and takes induced subgraphs; it is only
//! sound for edge-monotone constraint sets, where dropping edges never helps,
//! and is gated accordingly. For monotone sets both modes additionally prune
//! any branch whose already-deleted facts doom every completion: once a kept
//! node or pair violates a constraint in the branch's largest remaining
//! extension, monotonicity dooms all its subsets too.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::constraints::ConstraintSet;
use crate::graph::{DataGraph, Fact, NodeId};
use crate::gxpath::ast::{Fragment, NodeExpr, PathExpr};
use crate::gxpath::eval::{NodeBits, Prepared};
use crate::prefs::{compare, Comparison, PreferenceCriterion, PreferenceError};

/// Errors raised by the repair engines.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepairError {
    /// The instance exceeds the configured (or representable) search cap.
    #[error("instance too large for exhaustive search: {what} = {size} exceeds cap {cap}")]
    InstanceTooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    /// NodeInduced search was requested for a constraint set that is not
    /// edge-monotone, where induced subgraphs do not cover all repairs.
    #[error("node-induced search is unsound here: {0}")]
    ModeUnsound(String),
    /// The constraint set is outside the fragment an algorithm requires.
    #[error("constraint set outside the required fragment: {0}")]
    Fragment(String),
    /// A preference parameter failed validation or arithmetic.
    #[error(transparent)]
    Preference(#[from] PreferenceError),
}

/// Search-space caps for the exhaustive engines. Exceeding a cap is a clean
/// error, never silent truncation. Both caps are additionally bounded by 64,
/// the width of the internal subset masks.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Maximum graph cardinality for `FactLattice` search.
    pub max_facts: usize,
    /// Maximum node count for `NodeInduced` search.
    pub max_nodes: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_facts: 24,
            max_nodes: 22,
        }
    }
}

/// Which lattice the exhaustive search walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// All well-formed subsets of the graph's facts.
    FactLattice,
    /// All induced subgraphs (one per node subset). Requires an
    /// edge-monotone constraint set.
    NodeInduced,
}

/// Outcome of a consistency check, with every violation localized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// True iff both violation lists are empty.
    pub consistent: bool,
    /// `(node-constraint index, node)` pairs where the constraint fails.
    pub node_violations: Vec<(usize, NodeId)>,
    /// `(path-constraint index, from, to)` triples missing from the
    /// constraint's relation.
    pub pair_violations: Vec<(usize, NodeId, NodeId)>,
}

/// The result of a preferred-repair search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairAnswer {
    /// All preferred repairs, deduplicated, in canonical order (greatest
    /// fact-indicator first).
    pub repairs: Vec<DataGraph>,
    /// The criterion they are preferred under.
    pub criterion: PreferenceCriterion,
}

/// Checks a graph against a constraint set, reporting every violation.
pub fn is_consistent(g: &DataGraph, r: &ConstraintSet) -> ConsistencyReport {
    let prep = Prepared::new(g);
    let mut node_violations = Vec::new();
    let mut pair_violations = Vec::new();
    for (i, phi) in r.node_constraints.iter().enumerate() {
        let sat = prep.eval_node(phi);
        for v in 0..prep.n {
            if !sat.get(v) {
                node_violations.push((i, prep.ids[v].to_string()));
            }
        }
    }
    for (i, alpha) in r.path_constraints.iter().enumerate() {
        let rel = prep.eval_path(alpha);
        for u in 0..prep.n {
            for v in 0..prep.n {
                if !rel.get(u, v) {
                    pair_violations.push((i, prep.ids[u].to_string(), prep.ids[v].to_string()));
                }
            }
        }
    }
    ConsistencyReport {
        consistent: node_violations.is_empty() && pair_violations.is_empty(),
        node_violations,
        pair_violations,
    }
}

/// Consistency as a plain boolean, short-circuiting on the first violation.
fn holds(g: &DataGraph, r: &ConstraintSet) -> bool {
    let prep = Prepared::new(g);
    r.node_constraints
        .iter()
        .all(|phi| prep.eval_node(phi).is_all())
        && r.path_constraints
            .iter()
            .all(|alpha| prep.eval_path(alpha).is_full())
}

/// Computes the unique repair for a positive node constraint set by the
/// greatest-fixpoint deletion loop: repeatedly remove every violating node
/// (with incident edges) until none remains.
///
/// Positive node expressions are monotone under subgraph growth, so a node
/// violated in the current graph is violated in every subgraph keeping it;
/// each deletion is forced, and the fixpoint is the unique maximal
/// consistent subgraph — hence the unique repair under every criterion.
pub fn repair_node_pos(g: &DataGraph, r: &ConstraintSet) -> Result<DataGraph, RepairError> {
    if r.classify() != Fragment::NodePos {
        return Err(RepairError::Fragment(
            "the fixpoint repair algorithm needs positive node constraints only".to_string(),
        ));
    }
    let mut current = g.clone();
    loop {
        let prep = Prepared::new(&current);
        let mut keep = BTreeSet::new();
        for v in 0..prep.n {
            keep.insert(prep.ids[v].to_string());
        }
        for phi in &r.node_constraints {
            let sat = prep.eval_node(phi);
            for v in 0..prep.n {
                if !sat.get(v) {
                    keep.remove(prep.ids[v]);
                }
            }
        }
        if keep.len() == current.node_count() {
            return Ok(current);
        }
        current = current
            .induced(&keep)
            .expect("survivors are nodes of the current graph");
    }
}

/// The monotone core of a constraint set: the same constraints with the
/// universal-path idiom `~<!alpha>` unwrapped back to the path constraint
/// `alpha`. Present only when everything else is positive, in which case
/// every constraint's satisfaction at a kept node/pair survives the
/// addition of facts — the property both search prunings rely on.
struct MonotoneCore<'r> {
    paths: Vec<&'r PathExpr>,
    nodes: Vec<&'r NodeExpr>,
}

fn monotone_core(r: &ConstraintSet) -> Option<MonotoneCore<'_>> {
    let mut core = MonotoneCore {
        paths: Vec::new(),
        nodes: Vec::new(),
    };
    for alpha in &r.path_constraints {
        if !alpha.is_positive() {
            return None;
        }
        core.paths.push(alpha);
    }
    for phi in &r.node_constraints {
        if phi.is_positive() {
            core.nodes.push(phi);
            continue;
        }
        // `~<!alpha>` states that alpha covers all pairs; as a core path
        // constraint it is monotone even though its surface syntax is not.
        if let NodeExpr::Not(inner) = phi {
            if let NodeExpr::HasPath(p) = inner.as_ref() {
                if let PathExpr::Complement(alpha) = p.as_ref() {
                    if alpha.is_positive() {
                        core.paths.push(alpha);
                        continue;
                    }
                }
            }
        }
        return None;
    }
    Some(core)
}

/// True when the core holds at all committed nodes and committed pairs of
/// `m` — the largest graph the current search branch can still produce. By
/// monotonicity a failure here dooms every completion of the branch.
fn core_allows(m: &DataGraph, core: &MonotoneCore<'_>, committed: &BTreeSet<NodeId>) -> bool {
    let prep = Prepared::new(m);
    let mut mask = NodeBits::empty(prep.n);
    for id in committed {
        let i = prep
            .index_of(id)
            .expect("committed nodes are kept in every extension");
        mask.set(i);
    }
    for phi in &core.nodes {
        if !prep.eval_node(phi).contains_all(&mask) {
            return false;
        }
    }
    for alpha in &core.paths {
        let rel = prep.eval_path(alpha);
        for id in committed {
            let u = prep.index_of(id).expect("committed node");
            if !rel.row_contains(u, &mask) {
                return false;
            }
        }
    }
    true
}

/// The graph's facts indexed for mask-based search: node facts first in
/// canonical order, then edge facts.
struct FactIndex<'g> {
    ids: Vec<&'g str>,
    data: Vec<&'g str>,
    /// Edge triples as (from-index, label, to-index).
    edges: Vec<(usize, &'g str, usize)>,
}

impl<'g> FactIndex<'g> {
    fn new(g: &'g DataGraph) -> FactIndex<'g> {
        let ids: Vec<&str> = g.node_ids().collect();
        let data: Vec<&str> = g.nodes().map(|(_, d)| d).collect();
        let edges = g
            .edge_triples()
            .map(|(f, l, t)| {
                (
                    ids.binary_search(&f).expect("edge endpoint"),
                    l,
                    ids.binary_search(&t).expect("edge endpoint"),
                )
            })
            .collect();
        FactIndex { ids, data, edges }
    }

    fn total(&self) -> usize {
        self.ids.len() + self.edges.len()
    }

    /// Materializes the subgraph selected by a fact mask (bit `i` = fact `i`
    /// in canonical order). The mask must be well-formed: every selected
    /// edge's endpoints selected too.
    fn subgraph(&self, mask: u64) -> DataGraph {
        let nn = self.ids.len();
        let mut g = DataGraph::new();
        for i in 0..nn {
            if mask & (1 << i) != 0 {
                g.insert_node(self.ids[i].to_string(), self.data[i].to_string())
                    .expect("fresh node");
            }
        }
        for (j, &(f, l, t)) in self.edges.iter().enumerate() {
            if mask & (1 << (nn + j)) != 0 {
                g.insert_edge(
                    self.ids[f].to_string(),
                    l.to_string(),
                    self.ids[t].to_string(),
                )
                .expect("endpoints kept");
            }
        }
        g
    }

    /// The largest mask a branch can still reach: all already-included facts
    /// plus every undecided fact not blocked by an excluded endpoint.
    fn best_extension(&self, next: usize, included: u64, excluded_nodes: u64) -> u64 {
        let nn = self.ids.len();
        let mut m = included;
        for i in next..self.total() {
            let admissible = if i < nn {
                true
            } else {
                let (f, _, t) = self.edges[i - nn];
                excluded_nodes & (1 << f) == 0 && excluded_nodes & (1 << t) == 0
            };
            if admissible {
                m |= 1 << i;
            }
        }
        m
    }

    fn committed_ids(&self, included: u64) -> BTreeSet<NodeId> {
        (0..self.ids.len())
            .filter(|i| included & (1 << i) != 0)
            .map(|i| self.ids[i].to_string())
            .collect()
    }
}

/// Depth-first enumeration of well-formed fact masks, include-branch first
/// (which yields masks in descending canonical-indicator order).
struct LatticeWalk<'a, 'g> {
    idx: &'a FactIndex<'g>,
    core: Option<&'a MonotoneCore<'a>>,
    out: Vec<u64>,
}

impl LatticeWalk<'_, '_> {
    fn run(&mut self) {
        self.step(0, 0, 0);
    }

    fn prune_survives(&self, next: usize, included: u64, excluded_nodes: u64) -> bool {
        match self.core {
            None => true,
            Some(core) => {
                let m = self.idx.best_extension(next, included, excluded_nodes);
                core_allows(
                    &self.idx.subgraph(m),
                    core,
                    &self.idx.committed_ids(included),
                )
            }
        }
    }

    fn step(&mut self, i: usize, included: u64, excluded_nodes: u64) {
        if i == self.idx.total() {
            self.out.push(included);
            return;
        }
        let nn = self.idx.ids.len();
        if i < nn {
            self.step(i + 1, included | (1 << i), excluded_nodes);
            let ex = excluded_nodes | (1 << i);
            if self.prune_survives(i + 1, included, ex) {
                self.step(i + 1, included, ex);
            }
        } else {
            let (f, _, t) = self.idx.edges[i - nn];
            let blocked = excluded_nodes & (1 << f) != 0 || excluded_nodes & (1 << t) != 0;
            if blocked {
                // Forced exclusion: the branch's best extension is unchanged,
                // so no new pruning information arises.
                self.step(i + 1, included, excluded_nodes);
            } else {
                self.step(i + 1, included | (1 << i), excluded_nodes);
                if self.prune_survives(i + 1, included, excluded_nodes) {
                    self.step(i + 1, included, excluded_nodes);
                }
            }
        }
    }
}

/// Depth-first enumeration of node masks for induced-subgraph search.
struct NodeWalk<'a, 'g> {
    g: &'g DataGraph,
    ids: Vec<&'g str>,
    core: &'a MonotoneCore<'a>,
    out: Vec<u64>,
}

impl NodeWalk<'_, '_> {
    fn run(&mut self) {
        self.step(0, 0);
    }

    fn induced_by_mask(&self, mask: u64) -> DataGraph {
        let keep: BTreeSet<NodeId> = (0..self.ids.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.ids[i].to_string())
            .collect();
        self.g.induced(&keep).expect("mask selects graph nodes")
    }

    fn step(&mut self, i: usize, included: u64) {
        if i == self.ids.len() {
            self.out.push(included);
            return;
        }
        self.step(i + 1, included | (1 << i));
        // Excluding node i: the best this branch can reach is the induced
        // subgraph on everything not yet excluded.
        let mut best = included;
        for j in (i + 1)..self.ids.len() {
            best |= 1 << j;
        }
        let committed: BTreeSet<NodeId> = (0..self.ids.len())
            .filter(|j| included & (1 << j) != 0)
            .map(|j| self.ids[j].to_string())
            .collect();
        if core_allows(&self.induced_by_mask(best), self.core, &committed) {
            self.step(i + 1, included);
        }
    }
}

fn effective_cap(cap: usize) -> usize {
    cap.min(64)
}

/// Enumerates consistent subgraphs exhaustively.
///
/// `FactLattice` returns every consistent subset of `g`'s facts;
/// `NodeInduced` returns every consistent induced subgraph. Results come in
/// descending canonical order (the full graph first when consistent).
pub fn consistent_subsets(
    g: &DataGraph,
    r: &ConstraintSet,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<Vec<DataGraph>, RepairError> {
    match mode {
        SearchMode::FactLattice => {
            let cap = effective_cap(cfg.max_facts);
            if g.cardinality() > cap {
                return Err(RepairError::InstanceTooLarge {
                    what: "cardinality",
                    size: g.cardinality(),
                    cap,
                });
            }
            let idx = FactIndex::new(g);
            let core = monotone_core(r);
            let mut walk = LatticeWalk {
                idx: &idx,
                core: core.as_ref(),
                out: Vec::new(),
            };
            walk.run();
            let masks = walk.out;
            Ok(masks
                .into_par_iter()
                .filter_map(|mask| {
                    let sub = idx.subgraph(mask);
                    holds(&sub, r).then_some(sub)
                })
                .collect())
        }
        SearchMode::NodeInduced => {
            let Some(core) = monotone_core(r) else {
                return Err(RepairError::ModeUnsound(
                    "the constraint set is not edge-monotone (negation or complement present)"
                        .to_string(),
                ));
            };
            let cap = effective_cap(cfg.max_nodes);
            if g.node_count() > cap {
                return Err(RepairError::InstanceTooLarge {
                    what: "node count",
                    size: g.node_count(),
                    cap,
                });
            }
            let ids: Vec<&str> = g.node_ids().collect();
            let mut walk = NodeWalk {
                g,
                ids,
                core: &core,
                out: Vec::new(),
            };
            walk.run();
            let masks = walk.out;
            let builder = NodeWalk {
                g,
                ids: g.node_ids().collect(),
                core: &core,
                out: Vec::new(),
            };
            Ok(masks
                .into_par_iter()
                .filter_map(|mask| {
                    let sub = builder.induced_by_mask(mask);
                    holds(&sub, r).then_some(sub)
                })
                .collect())
        }
    }
}

/// Canonical ordering of subgraphs of a common graph: compare the subgraphs'
/// fact-indicator strings over the parent's canonical fact list.
fn indicator_cmp(universe: &[Fact], a: &DataGraph, b: &DataGraph) -> Ordering {
    for fact in universe {
        match (a.contains_fact(fact), b.contains_fact(fact)) {
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
    }
    Ordering::Equal
}

/// The subset-maximal elements of a candidate list, as indices.
fn subset_maximal(cands: &[DataGraph]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(cands[i].cardinality()));
    let mut maximal: Vec<usize> = Vec::new();
    for &i in &order {
        if !maximal.iter().any(|&m| cands[i].is_subset(&cands[m])) {
            maximal.push(i);
        }
    }
    maximal
}

/// Computes all preferred repairs: the consistent subgraphs (per `mode`)
/// that no consistent subgraph strictly beats under `c`.
pub fn preferred_repairs(
    g: &DataGraph,
    r: &ConstraintSet,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<RepairAnswer, RepairError> {
    c.validate_for(g)?;
    let cands = consistent_subsets(g, r, mode, cfg)?;
    let chosen: Vec<usize> = match c {
        PreferenceCriterion::Subset => subset_maximal(&cands),
        PreferenceCriterion::Cardinality
        | PreferenceCriterion::PrioritizedCardinality(_)
        | PreferenceCriterion::Weight(_) => {
            // Total criteria: the preferred repairs are exactly the
            // candidates of maximum measure.
            let mut best: Vec<usize> = Vec::new();
            for i in 0..cands.len() {
                if best.is_empty() {
                    best.push(i);
                    continue;
                }
                match compare(c, &cands[i], &cands[best[0]])? {
                    Comparison::Greater => {
                        best.clear();
                        best.push(i);
                    }
                    Comparison::Equivalent => best.push(i),
                    Comparison::Less => {}
                    Comparison::Incomparable => {
                        unreachable!("total criteria never return Incomparable")
                    }
                }
            }
            best
        }
        PreferenceCriterion::PrioritizedSubset(_) | PreferenceCriterion::Multiset(_) => {
            // Partial criteria: a candidate is preferred unless strictly
            // dominated. Any dominator extends to a subset-maximal one that
            // still dominates (domination is inherited upward through ⊆),
            // so testing against the maximal list suffices.
            let maximal = subset_maximal(&cands);
            let mut keep = Vec::new();
            for i in 0..cands.len() {
                let mut dominated = false;
                for &m in &maximal {
                    if m != i && compare(c, &cands[i], &cands[m])? == Comparison::Less {
                        dominated = true;
                        break;
                    }
                }
                if !dominated {
                    keep.push(i);
                }
            }
            keep
        }
    };
    let universe = g.facts();
    let mut repairs: Vec<DataGraph> = chosen.into_iter().map(|i| cands[i].clone()).collect();
    repairs.sort_by(|a, b| indicator_cmp(&universe, b, a));
    repairs.dedup();
    Ok(RepairAnswer {
        repairs,
        criterion: c.clone(),
    })
}

/// Decides whether `candidate` is a preferred repair of `g`.
pub fn repair_check(
    g: &DataGraph,
    candidate: &DataGraph,
    r: &ConstraintSet,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<bool, RepairError> {
    c.validate_for(g)?;
    if !candidate.is_subset(g) || !holds(candidate, r) {
        return Ok(false);
    }
    let answer = preferred_repairs(g, r, c, mode, cfg)?;
    Ok(answer.repairs.iter().any(|h| h == candidate))
}

/// Decides whether a non-empty preferred repair exists. Equivalent to the
/// existence of any non-empty consistent subgraph: a non-empty candidate is
/// either preferred itself or strictly beaten by something, and under every
/// criterion nothing non-empty is ever beaten only by the empty graph.
pub fn repair_exists(
    g: &DataGraph,
    r: &ConstraintSet,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<bool, RepairError> {
    c.validate_for(g)?;
    let cands = consistent_subsets(g, r, mode, cfg)?;
    Ok(cands.iter().any(|h| !h.is_empty()))
}

/// Computes one preferred repair deterministically: the one whose canonical
/// fact-indicator string is lexicographically greatest.
pub fn repair_compute(
    g: &DataGraph,
    r: &ConstraintSet,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<DataGraph, RepairError> {
    let answer = preferred_repairs(g, r, c, mode, cfg)?;
    Ok(answer
        .repairs
        .into_iter()
        .next()
        .expect("the empty subgraph is always consistent, so repairs exist"))
}
