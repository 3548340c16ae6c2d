//! Consistent query answering: does a query pair hold in *every* preferred
//! repair?
//!
//! Two engines answer the question and cross-check each other:
//!
//! - [`cqa_enumerate`] materializes the preferred repairs and evaluates the
//!   query on each — the baseline, valid for every criterion;
//! - [`cqa_staged`] follows the staged oracle scheme for the three
//!   measure-based criteria: binary-search the optimal measure (cardinality,
//!   weight, or per-level counts left to right), then ask once whether some
//!   optimal consistent subgraph refutes the query. The "oracle" is realized
//!   by one bounded exact enumeration of consistent subgraphs.
//!
//! [`certain_pairs`] batches the enumeration answer over all node pairs, and
//! the `_node` variants extend the same question to node expressions
//! ("is this node certainly in the answer set?").
//!
//! If a repair deletes the source or target node, the pair is simply absent
//! from the query relation of that repair and the answer propagates as
//! false; there is no special-casing.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::constraints::ConstraintSet;
use crate::graph::{DataGraph, NodeId};
use crate::gxpath::ast::{NodeExpr, PathExpr};
use crate::gxpath::eval::Prepared;
use crate::prefs::{graph_weight, PreferenceCriterion};
use crate::repair::{consistent_subsets, preferred_repairs, RepairError, SearchConfig, SearchMode};

/// Errors raised by the query-answering engines.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CqaError {
    /// The query's source or target is not a node of the instance graph.
    #[error("query endpoint {0:?} is not a node of the graph")]
    UnknownNode(String),
    /// The staged algorithm only handles the measure-based criteria.
    #[error("the staged algorithm does not support the {0} criterion")]
    UnsupportedCriterion(String),
    /// The underlying repair search failed.
    #[error(transparent)]
    Repair(#[from] RepairError),
}

/// One consistent-query-answering question: is `(source, target)` in the
/// query relation of every preferred repair of `graph` under `criterion`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CqaInstance {
    pub graph: DataGraph,
    pub constraints: ConstraintSet,
    pub query: PathExpr,
    pub source: NodeId,
    pub target: NodeId,
    pub criterion: PreferenceCriterion,
}

impl CqaInstance {
    /// Builds an instance, checking that both endpoints are graph nodes.
    pub fn new(
        graph: DataGraph,
        constraints: ConstraintSet,
        query: PathExpr,
        source: NodeId,
        target: NodeId,
        criterion: PreferenceCriterion,
    ) -> Result<CqaInstance, CqaError> {
        let inst = CqaInstance {
            graph,
            constraints,
            query,
            source,
            target,
            criterion,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Re-checks the endpoint invariant (fields are public, so operations
    /// validate defensively).
    pub fn validate(&self) -> Result<(), CqaError> {
        for id in [&self.source, &self.target] {
            if !self.graph.contains_node(id) {
                return Err(CqaError::UnknownNode(id.clone()));
            }
        }
        Ok(())
    }
}

/// The answer together with a refuting repair when the answer is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CqaOutcome {
    /// True iff the query holds in every preferred repair.
    pub answer: bool,
    /// A preferred repair in which the query fails — present iff `answer`
    /// is false, and deterministic (the canonically greatest refuter).
    pub refutation: Option<DataGraph>,
}

/// True iff `(v, w)` is in the relation of `q` over `h`. Endpoints missing
/// from `h` make the answer false.
fn query_holds(h: &DataGraph, q: &PathExpr, v: &str, w: &str) -> bool {
    let prep = Prepared::new(h);
    match (prep.index_of(v), prep.index_of(w)) {
        (Some(i), Some(j)) => prep.eval_path(q).get(i, j),
        _ => false,
    }
}

/// True iff `v` is in the set of `phi` over `h`. A missing node makes the
/// answer false.
fn node_query_holds(h: &DataGraph, phi: &NodeExpr, v: &str) -> bool {
    let prep = Prepared::new(h);
    match prep.index_of(v) {
        Some(i) => prep.eval_node(phi).get(i),
        None => false,
    }
}

/// Answers the instance by enumerating every preferred repair and keeping
/// the first refuter found in canonical order.
pub fn cqa_enumerate_witness(
    inst: &CqaInstance,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<CqaOutcome, CqaError> {
    inst.validate()?;
    let answer = preferred_repairs(&inst.graph, &inst.constraints, &inst.criterion, mode, cfg)?;
    let refutation = answer
        .repairs
        .into_par_iter()
        .find_first(|h| !query_holds(h, &inst.query, &inst.source, &inst.target));
    Ok(CqaOutcome {
        answer: refutation.is_none(),
        refutation,
    })
}

/// Answers the instance by enumeration: true iff the query pair holds in
/// every preferred repair. The preferred set is never empty (the empty
/// subgraph is always consistent), so this is a conjunction over at least
/// one repair.
pub fn cqa_enumerate(
    inst: &CqaInstance,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<bool, CqaError> {
    Ok(cqa_enumerate_witness(inst, mode, cfg)?.answer)
}

/// Node-expression variant of [`cqa_enumerate_witness`]: is `node` in the
/// answer set of `phi` in every preferred repair?
pub fn cqa_node_witness(
    g: &DataGraph,
    r: &ConstraintSet,
    phi: &NodeExpr,
    node: &NodeId,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<CqaOutcome, CqaError> {
    if !g.contains_node(node) {
        return Err(CqaError::UnknownNode(node.clone()));
    }
    let answer = preferred_repairs(g, r, c, mode, cfg)?;
    let refutation = answer
        .repairs
        .into_par_iter()
        .find_first(|h| !node_query_holds(h, phi, node));
    Ok(CqaOutcome {
        answer: refutation.is_none(),
        refutation,
    })
}

/// Node-expression variant of [`cqa_enumerate`].
pub fn cqa_node_enumerate(
    g: &DataGraph,
    r: &ConstraintSet,
    phi: &NodeExpr,
    node: &NodeId,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<bool, CqaError> {
    Ok(cqa_node_witness(g, r, phi, node, c, mode, cfg)?.answer)
}

/// Largest `k` in `[lo, hi]` with `ok(k)`, for downward-closed `ok` with
/// `ok(lo)` true — plain binary search.
fn max_satisfying(mut lo: u64, mut hi: u64, ok: impl Fn(u64) -> bool) -> u64 {
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Answers the instance by the staged oracle scheme. Only the three
/// measure-based criteria are supported:
///
/// - cardinality: binary-search the maximum consistent-subgraph cardinality
///   `z` over `[0, |G|]`, then ask whether some consistent subgraph of
///   cardinality `z` refutes the query, and negate;
/// - weight: the same over `[0, w(G)]`;
/// - prioritized cardinality: fix the optimal per-level counts `k1..kl`
///   left to right (each by binary search with the earlier counts pinned),
///   then the final refutation question.
///
/// Every oracle question "is there a consistent subgraph such that ...?" is
/// answered by one up-front exact enumeration over the fact lattice. The
/// result always equals [`cqa_enumerate`] on the same instance.
pub fn cqa_staged(inst: &CqaInstance, cfg: &SearchConfig) -> Result<bool, CqaError> {
    inst.validate()?;
    inst.criterion
        .validate_for(&inst.graph)
        .map_err(RepairError::from)?;
    let subsets = consistent_subsets(&inst.graph, &inst.constraints, SearchMode::FactLattice, cfg)?;
    let refuted = |h: &DataGraph| !query_holds(h, &inst.query, &inst.source, &inst.target);
    match &inst.criterion {
        PreferenceCriterion::Cardinality => {
            let measures: Vec<u64> = subsets.iter().map(|h| h.cardinality() as u64).collect();
            let hi = inst.graph.cardinality() as u64;
            let z = max_satisfying(0, hi, |k| measures.iter().any(|&m| m >= k));
            Ok(!subsets
                .iter()
                .zip(&measures)
                .any(|(h, &m)| m == z && refuted(h)))
        }
        PreferenceCriterion::Weight(w) => {
            // validate_for guarantees every fact of the graph is weighted,
            // and subgraph weights never exceed the graph's.
            let measures: Vec<u64> = subsets
                .iter()
                .map(|h| graph_weight(h, w).expect("weights validated for the whole graph"))
                .collect();
            let hi = graph_weight(&inst.graph, w).map_err(RepairError::from)?;
            let z = max_satisfying(0, hi, |k| measures.iter().any(|&m| m >= k));
            Ok(!subsets
                .iter()
                .zip(&measures)
                .any(|(h, &m)| m == z && refuted(h)))
        }
        PreferenceCriterion::PrioritizedCardinality(p) => {
            let levels = p.levels();
            let profiles: Vec<Vec<u64>> = subsets
                .iter()
                .map(|h| {
                    levels
                        .iter()
                        .map(|lv| lv.iter().filter(|f| h.contains_fact(f)).count() as u64)
                        .collect()
                })
                .collect();
            let mut ks: Vec<u64> = Vec::new();
            for (i, level) in levels.iter().enumerate() {
                let ki = max_satisfying(0, level.len() as u64, |k| {
                    profiles
                        .iter()
                        .any(|prof| prof[..i] == ks[..] && prof[i] >= k)
                });
                ks.push(ki);
            }
            Ok(!subsets
                .iter()
                .zip(&profiles)
                .any(|(h, prof)| prof[..] == ks[..] && refuted(h)))
        }
        other => Err(CqaError::UnsupportedCriterion(other.name().to_string())),
    }
}

/// All pairs answered true by [`cqa_enumerate`]: the intersection of the
/// query relation over every preferred repair.
pub fn certain_pairs(
    g: &DataGraph,
    r: &ConstraintSet,
    query: &PathExpr,
    c: &PreferenceCriterion,
    mode: SearchMode,
    cfg: &SearchConfig,
) -> Result<BTreeSet<(NodeId, NodeId)>, CqaError> {
    let answer = preferred_repairs(g, r, c, mode, cfg)?;
    let mut repairs = answer.repairs.iter();
    let first = repairs.next().expect("the preferred set is never empty");
    let mut pairs = crate::gxpath::eval::eval_path(first, query);
    for h in repairs {
        let here = crate::gxpath::eval::eval_path(h, query);
        pairs.retain(|p| here.contains(p));
    }
    Ok(pairs)
}
