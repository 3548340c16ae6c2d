//! Seeded random instances for tests and benchmarks.
//!
//! Everything here is deterministic given the seed: the generators draw
//! from a [`ChaCha8Rng`] (stable across platforms and releases, unlike
//! `StdRng`), so a failing case can be replayed from its seed alone.
//!
//! Alphabets are deliberately tiny (see [`SampleSpace`]): random
//! constraints over two labels and two data values are satisfiable often
//! enough to exercise the interesting paths, where a large alphabet would
//! make almost every instance trivially inconsistent or trivially free.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::ConstraintSet;
use crate::graph::{DataGraph, DataValue, EdgeLabel, Fact};
use crate::gxpath::ast::{NodeExpr, PathExpr};
use crate::prefs::{LabelOrder, Prioritization, WeightFunction};
use crate::reductions::{CnfFormula, QbfInstance};

/// A seeded random generator; one seed, one instance stream.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The symbol alphabets the generators draw from.
#[derive(Clone, Debug)]
pub struct SampleSpace {
    pub labels: Vec<EdgeLabel>,
    pub data_values: Vec<DataValue>,
}

impl SampleSpace {
    /// Two labels, two data values: small enough that random constraints
    /// have teeth.
    pub fn small() -> SampleSpace {
        SampleSpace {
            labels: vec!["a".to_string(), "b".to_string()],
            data_values: vec!["x".to_string(), "y".to_string()],
        }
    }
}

impl Default for SampleSpace {
    fn default() -> SampleSpace {
        SampleSpace::small()
    }
}

fn pick<'a, T, R: Rng>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Picks an index with the given relative weights.
fn weighted<R: Rng>(rng: &mut R, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    let mut roll = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if roll < w {
            return i;
        }
        roll -= w;
    }
    unreachable!("weights sum covers every roll")
}

/// A random graph with exactly `nodes` nodes (named `n1`, `n2`, ...) and up
/// to `edges` edges drawn uniformly without replacement from the available
/// triples.
pub fn graph<R: Rng>(rng: &mut R, nodes: usize, edges: usize, space: &SampleSpace) -> DataGraph {
    let ids: Vec<String> = (1..=nodes).map(|i| format!("n{i}")).collect();
    let node_list: Vec<(String, String)> = ids
        .iter()
        .map(|id| (id.clone(), pick(rng, &space.data_values).clone()))
        .collect();
    let available = nodes * nodes * space.labels.len();
    let mut triples: BTreeSet<(String, String, String)> = BTreeSet::new();
    while triples.len() < edges.min(available) {
        triples.insert((
            pick(rng, &ids).clone(),
            pick(rng, &space.labels).clone(),
            pick(rng, &ids).clone(),
        ));
    }
    DataGraph::build(node_list, triples).expect("sampled graphs are well-formed")
}

/// A random graph with at most `max_facts` facts (nodes plus edges),
/// varying the node/edge split.
pub fn graph_max_facts<R: Rng>(rng: &mut R, max_facts: usize, space: &SampleSpace) -> DataGraph {
    if max_facts == 0 {
        return DataGraph::new();
    }
    let nodes = rng.gen_range(1..=max_facts);
    let budget = max_facts - nodes;
    let available = nodes * nodes * space.labels.len();
    let edges = rng.gen_range(0..=budget.min(available));
    graph(rng, nodes, edges, space)
}

/// A random subgraph of `g`: keeps each fact independently with the given
/// probability (edges additionally require surviving endpoints).
pub fn subgraph<R: Rng>(rng: &mut R, g: &DataGraph, keep_prob: f64) -> DataGraph {
    let deletions: BTreeSet<Fact> = g
        .facts()
        .into_iter()
        .filter(|_| !rng.gen_bool(keep_prob))
        .collect();
    g.delete_facts(&deletions)
        .expect("deletions are drawn from the graph's own facts")
}

/// A random path expression of at most the given depth. With `positive`
/// the complement operators are never drawn, so the result stays in the
/// positive fragment.
pub fn path_expr<R: Rng>(
    rng: &mut R,
    depth: usize,
    positive: bool,
    space: &SampleSpace,
) -> PathExpr {
    // Leaves stay likely at every depth so expression sizes vary.
    if depth == 0 || rng.gen_bool(0.3) {
        return match weighted(rng, &[1, 2, 4, 2]) {
            0 => PathExpr::Epsilon,
            1 => PathExpr::Wildcard,
            2 => PathExpr::Forward(pick(rng, &space.labels).clone()),
            _ => PathExpr::Backward(pick(rng, &space.labels).clone()),
        };
    }
    let complement_weight = if positive { 0 } else { 1 };
    match weighted(rng, &[3, 2, 1, 2, 1, 2, complement_weight]) {
        0 => PathExpr::Concat(
            Box::new(path_expr(rng, depth - 1, positive, space)),
            Box::new(path_expr(rng, depth - 1, positive, space)),
        ),
        1 => PathExpr::Union(
            Box::new(path_expr(rng, depth - 1, positive, space)),
            Box::new(path_expr(rng, depth - 1, positive, space)),
        ),
        2 => PathExpr::Intersect(
            Box::new(path_expr(rng, depth - 1, positive, space)),
            Box::new(path_expr(rng, depth - 1, positive, space)),
        ),
        3 => PathExpr::Star(Box::new(path_expr(rng, depth - 1, positive, space))),
        4 => {
            let lo = rng.gen_range(0..=2);
            let hi = lo + rng.gen_range(0..=2);
            PathExpr::Repeat(Box::new(path_expr(rng, depth - 1, positive, space)), lo, hi)
        }
        5 => PathExpr::NodeTest(Box::new(node_expr(rng, depth - 1, positive, space))),
        _ => PathExpr::Complement(Box::new(path_expr(rng, depth - 1, positive, space))),
    }
}

/// A random node expression of at most the given depth; `positive` as in
/// [`path_expr`].
pub fn node_expr<R: Rng>(
    rng: &mut R,
    depth: usize,
    positive: bool,
    space: &SampleSpace,
) -> NodeExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match weighted(rng, &[2, 1]) {
            0 => NodeExpr::DataEq(pick(rng, &space.data_values).clone()),
            _ => NodeExpr::DataNeq(pick(rng, &space.data_values).clone()),
        };
    }
    let not_weight = if positive { 0 } else { 2 };
    match weighted(rng, &[1, 2, 3, 1, 1, not_weight]) {
        0 => NodeExpr::And(
            Box::new(node_expr(rng, depth - 1, positive, space)),
            Box::new(node_expr(rng, depth - 1, positive, space)),
        ),
        1 => NodeExpr::Or(
            Box::new(node_expr(rng, depth - 1, positive, space)),
            Box::new(node_expr(rng, depth - 1, positive, space)),
        ),
        2 => NodeExpr::HasPath(Box::new(path_expr(rng, depth - 1, positive, space))),
        3 => NodeExpr::EqTest(
            Box::new(path_expr(rng, depth - 1, positive, space)),
            Box::new(path_expr(rng, depth - 1, positive, space)),
        ),
        4 => NodeExpr::NeqTest(
            Box::new(path_expr(rng, depth - 1, positive, space)),
            Box::new(path_expr(rng, depth - 1, positive, space)),
        ),
        _ => NodeExpr::Not(Box::new(node_expr(rng, depth - 1, positive, space))),
    }
}

/// A constraint set of `count` positive node constraints: the tractable
/// fragment, where repair by iterated node deletion is exact.
pub fn node_pos_constraints<R: Rng>(
    rng: &mut R,
    count: usize,
    depth: usize,
    space: &SampleSpace,
) -> ConstraintSet {
    ConstraintSet::of_nodes(
        (0..count)
            .map(|_| node_expr(rng, depth, true, space))
            .collect(),
    )
}

/// A constraint set mixing path and node constraints, all positive when
/// asked (and then usable with node-induced search).
pub fn constraint_set<R: Rng>(
    rng: &mut R,
    count: usize,
    depth: usize,
    positive: bool,
    space: &SampleSpace,
) -> ConstraintSet {
    let mut r = ConstraintSet::new();
    for _ in 0..count {
        if rng.gen_bool(0.5) {
            r.path_constraints
                .push(path_expr(rng, depth, positive, space));
        } else {
            r.node_constraints
                .push(node_expr(rng, depth, positive, space));
        }
    }
    r
}

/// A uniformly random 3CNF formula.
pub fn cnf<R: Rng>(rng: &mut R, num_vars: usize, num_clauses: usize) -> CnfFormula {
    let clause = |rng: &mut R| {
        [0; 3].map(|_| {
            let v = rng.gen_range(1..=num_vars) as i32;
            if rng.gen_bool(0.5) {
                v
            } else {
                -v
            }
        })
    };
    let clauses = (0..num_clauses).map(|_| clause(rng)).collect();
    CnfFormula::new(num_vars, clauses).expect("sampled formulas are well-formed")
}

/// A satisfiable 3CNF formula: a hidden assignment is drawn first and one
/// literal per clause is forced to agree with it.
pub fn sat_cnf<R: Rng>(rng: &mut R, num_vars: usize, num_clauses: usize) -> CnfFormula {
    let hidden: u64 = rng.gen_range(0..1u64 << num_vars);
    let clauses = (0..num_clauses)
        .map(|_| {
            let mut clause = [0i32; 3];
            for lit in clause.iter_mut() {
                let v = rng.gen_range(1..=num_vars);
                let positive = rng.gen_bool(0.5);
                *lit = if positive { v as i32 } else { -(v as i32) };
            }
            let forced = rng.gen_range(0..3);
            let v = rng.gen_range(1..=num_vars);
            let truth = hidden & (1 << (v - 1)) != 0;
            clause[forced] = if truth { v as i32 } else { -(v as i32) };
            clause
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("sampled formulas are well-formed")
}

/// An unsatisfiable 3CNF formula: a contradictory clause pair on one
/// variable plus `extra_clauses` random clauses.
pub fn unsat_cnf<R: Rng>(rng: &mut R, num_vars: usize, extra_clauses: usize) -> CnfFormula {
    let v = rng.gen_range(1..=num_vars) as i32;
    let mut clauses = vec![[v, v, v], [-v, -v, -v]];
    for _ in 0..extra_clauses {
        clauses.push([0; 3].map(|_| {
            let u = rng.gen_range(1..=num_vars) as i32;
            if rng.gen_bool(0.5) {
                u
            } else {
                -u
            }
        }));
    }
    CnfFormula::new(num_vars, clauses).expect("sampled formulas are well-formed")
}

/// A uniformly random ∀X∃Y formula.
pub fn qbf<R: Rng>(rng: &mut R, x_vars: usize, y_vars: usize, num_clauses: usize) -> QbfInstance {
    QbfInstance::new(x_vars, y_vars, cnf(rng, x_vars + y_vars, num_clauses))
        .expect("sampled formulas are well-formed")
}

/// A formula chain with monotonically decreasing satisfiability (a random
/// prefix of satisfiable formulas, then unsatisfiable ones), as the parity
/// construction requires. Every formula has `num_clauses` ≥ 2 clauses.
pub fn parity_chain<R: Rng>(
    rng: &mut R,
    len: usize,
    num_vars: usize,
    num_clauses: usize,
) -> Vec<CnfFormula> {
    let num_clauses = num_clauses.max(2);
    let sat_prefix = rng.gen_range(0..=len);
    (0..len)
        .map(|i| {
            if i < sat_prefix {
                sat_cnf(rng, num_vars, num_clauses)
            } else {
                unsat_cnf(rng, num_vars, num_clauses - 2)
            }
        })
        .collect()
}

/// A random prioritization of `g`'s facts into at most `max_levels`
/// levels; always valid for `g`.
pub fn prioritization<R: Rng>(rng: &mut R, g: &DataGraph, max_levels: usize) -> Prioritization {
    let k = rng.gen_range(1..=max_levels.max(1));
    let mut levels: Vec<BTreeSet<Fact>> = vec![BTreeSet::new(); k];
    for fact in g.facts() {
        levels[rng.gen_range(0..k)].insert(fact);
    }
    levels.retain(|l| !l.is_empty());
    if levels.is_empty() {
        levels.push(BTreeSet::new());
    }
    Prioritization::new(levels).expect("sampled levels are disjoint")
}

/// A strictly positive weight function over the sample space's symbols,
/// with defaults of 1 for anything outside it.
pub fn positive_weights<R: Rng>(
    rng: &mut R,
    space: &SampleSpace,
    max_weight: u64,
) -> WeightFunction {
    let label_weights: BTreeMap<String, u64> = space
        .labels
        .iter()
        .map(|l| (l.clone(), rng.gen_range(1..=max_weight)))
        .collect();
    let data_weights: BTreeMap<String, u64> = space
        .data_values
        .iter()
        .map(|d| (d.clone(), rng.gen_range(1..=max_weight)))
        .collect();
    WeightFunction::new(label_weights, data_weights, Some(1), Some(1))
}

/// A random strict order on the sample space's symbol names, acyclic by
/// construction (pairs only point forward along a shuffled ranking).
pub fn label_order<R: Rng>(rng: &mut R, space: &SampleSpace) -> LabelOrder {
    let mut names: Vec<&String> = space.labels.iter().chain(&space.data_values).collect();
    // Fisher–Yates; `SliceRandom::shuffle` would pull in more of the
    // prelude than this one site justifies.
    for i in (1..names.len()).rev() {
        names.swap(i, rng.gen_range(0..=i));
    }
    let mut pairs = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            if rng.gen_bool(0.3) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    LabelOrder::new(pairs).expect("forward-pointing pairs cannot form a cycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gxpath::{classify_node, classify_path, parse_node, parse_path, Fragment};
    use crate::reductions::{build_parity3sat, oracle_sat};

    #[test]
    fn generation_is_deterministic() {
        let space = SampleSpace::small();
        let (mut r1, mut r2) = (rng(7), rng(7));
        assert_eq!(graph(&mut r1, 5, 8, &space), graph(&mut r2, 5, 8, &space));
        assert_eq!(
            path_expr(&mut r1, 3, false, &space),
            path_expr(&mut r2, 3, false, &space)
        );
        assert_eq!(cnf(&mut r1, 3, 4), cnf(&mut r2, 3, 4));
    }

    #[test]
    fn sampled_graphs_respect_their_caps() {
        let space = SampleSpace::small();
        let mut r = rng(11);
        for _ in 0..200 {
            let g = graph_max_facts(&mut r, 10, &space);
            assert!(g.cardinality() <= 10);
            assert!(g.node_count() >= 1);
        }
        assert!(graph_max_facts(&mut r, 0, &space).is_empty());
    }

    #[test]
    fn subgraphs_are_subsets() {
        let space = SampleSpace::small();
        let mut r = rng(13);
        let g = graph(&mut r, 6, 10, &space);
        for _ in 0..50 {
            let h = subgraph(&mut r, &g, 0.6);
            assert!(h.is_subset(&g));
        }
    }

    #[test]
    fn positive_expressions_stay_positive_and_print_parseably() {
        let space = SampleSpace::small();
        let mut r = rng(17);
        for _ in 0..200 {
            let p = path_expr(&mut r, 4, true, &space);
            assert_eq!(classify_path(&p), Fragment::Pos);
            assert_eq!(parse_path(&p.to_string()).unwrap(), p);
            let phi = node_expr(&mut r, 4, true, &space);
            assert_eq!(classify_node(&phi), Fragment::NodePos);
            assert_eq!(parse_node(&phi.to_string()).unwrap(), phi);
        }
    }

    #[test]
    fn constraint_sets_land_in_the_requested_fragment() {
        let space = SampleSpace::small();
        let mut r = rng(19);
        for _ in 0..50 {
            let npc = node_pos_constraints(&mut r, 3, 3, &space);
            assert_eq!(npc.classify(), Fragment::NodePos);
            let pos = constraint_set(&mut r, 3, 3, true, &space);
            assert!(matches!(pos.classify(), Fragment::NodePos | Fragment::Pos));
        }
    }

    #[test]
    fn formula_generators_hit_their_satisfiability_targets() {
        let mut r = rng(23);
        for _ in 0..100 {
            assert!(oracle_sat(&sat_cnf(&mut r, 3, 4)).unwrap());
            assert!(!oracle_sat(&unsat_cnf(&mut r, 3, 2)).unwrap());
        }
        for _ in 0..20 {
            let chain = parity_chain(&mut r, 2, 2, 2);
            build_parity3sat(&chain).expect("chains satisfy the parity precondition");
        }
    }

    #[test]
    fn preference_parameters_validate_against_their_graphs() {
        let space = SampleSpace::small();
        let mut r = rng(29);
        for _ in 0..50 {
            let g = graph_max_facts(&mut r, 12, &space);
            prioritization(&mut r, &g, 3).validate_for(&g).unwrap();
            let w = positive_weights(&mut r, &space, 5);
            w.validate_for(&g).unwrap();
            assert!(w.is_strictly_positive());
            label_order(&mut r, &space);
        }
    }
}
