//! Randomized invariants across the engine: preorder laws for the six
//! preference criteria, algebraic identities of the evaluator, oracle
//! equivalences for the repair search, and agreement between the staged
//! and enumeration query-answering paths.

use std::collections::BTreeSet;

use gxr_core::sampling::{self, SampleSpace};
use gxr_core::{
    compare, consistent_subsets, cqa_enumerate, cqa_staged, edge_data_multiset, eval_node,
    eval_path, is_consistent, multiset_leq, parse_node, parse_path, preferred_repairs,
    repair_check, repair_exists, repair_node_pos, to_node_constraint, Comparison, ConstraintSet,
    CqaInstance, DataGraph, EdgeDataMultiset, Fact, LabelOrder, NodeExpr, PathExpr,
    PreferenceCriterion, Prioritization, SearchConfig, SearchMode, Symbol, WeightFunction,
};
use proptest::prelude::*;
use rand::Rng;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn space() -> SampleSpace {
    SampleSpace::small()
}

/// One criterion of each kind, with parameters sampled to fit `g`. Weights
/// are strictly positive, so every criterion treats strict subsets as
/// strictly worse.
fn all_criteria<R: Rng>(rng: &mut R, g: &DataGraph) -> Vec<PreferenceCriterion> {
    vec![
        PreferenceCriterion::Subset,
        PreferenceCriterion::Cardinality,
        PreferenceCriterion::PrioritizedSubset(sampling::prioritization(rng, g, 3)),
        PreferenceCriterion::PrioritizedCardinality(sampling::prioritization(rng, g, 3)),
        PreferenceCriterion::Weight(sampling::positive_weights(rng, &space(), 4)),
        PreferenceCriterion::Multiset(sampling::label_order(rng, &space())),
    ]
}

fn leq(c: &PreferenceCriterion, a: &DataGraph, b: &DataGraph) -> bool {
    matches!(
        compare(c, a, b).unwrap(),
        Comparison::Less | Comparison::Equivalent
    )
}

fn flip(c: Comparison) -> Comparison {
    match c {
        Comparison::Less => Comparison::Greater,
        Comparison::Greater => Comparison::Less,
        other => other,
    }
}

type Rel = BTreeSet<(String, String)>;

fn compose(a: &Rel, b: &Rel) -> Rel {
    let mut out = Rel::new();
    for (x, y) in a {
        for (y2, z) in b {
            if y == y2 {
                out.insert((x.clone(), z.clone()));
            }
        }
    }
    out
}

fn identity(g: &DataGraph) -> Rel {
    g.node_ids()
        .map(|u| (u.to_string(), u.to_string()))
        .collect()
}

#[test]
fn preference_comparisons_are_preorders() {
    let mut rng = sampling::rng(0x5EED_0001);
    for _ in 0..30 {
        let g = sampling::graph_max_facts(&mut rng, 8, &space());
        let a = sampling::subgraph(&mut rng, &g, 0.7);
        let b = sampling::subgraph(&mut rng, &g, 0.7);
        let c = sampling::subgraph(&mut rng, &g, 0.7);
        let subs = [&a, &b, &c];
        for crit in all_criteria(&mut rng, &g) {
            for h in subs {
                assert_eq!(
                    compare(&crit, h, h).unwrap(),
                    Comparison::Equivalent,
                    "{} must be reflexive",
                    crit.name()
                );
            }
            for x in subs {
                for y in subs {
                    assert_eq!(
                        compare(&crit, y, x).unwrap(),
                        flip(compare(&crit, x, y).unwrap()),
                        "{} must flip coherently",
                        crit.name()
                    );
                    for z in subs {
                        if leq(&crit, x, y) && leq(&crit, y, z) {
                            assert!(leq(&crit, x, z), "{} must be transitive", crit.name());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn strict_subsets_rank_strictly_lower() {
    let mut rng = sampling::rng(0x5EED_0002);
    let mut checked = 0;
    for _ in 0..60 {
        let g = sampling::graph_max_facts(&mut rng, 9, &space());
        let big = sampling::subgraph(&mut rng, &g, 0.85);
        let small = sampling::subgraph(&mut rng, &big, 0.6);
        if small == big {
            continue;
        }
        checked += 1;
        for crit in all_criteria(&mut rng, &g) {
            assert_eq!(
                compare(&crit, &small, &big).unwrap(),
                Comparison::Less,
                "a strict subset must rank strictly lower under {}",
                crit.name()
            );
        }
    }
    assert!(checked >= 30, "only {checked} strict pairs were sampled");
}

#[test]
fn trivial_parameters_collapse_to_their_base_criteria() {
    let mut rng = sampling::rng(0x5EED_0003);
    for _ in 0..60 {
        let g = sampling::graph_max_facts(&mut rng, 9, &space());
        let a = sampling::subgraph(&mut rng, &g, 0.7);
        let b = sampling::subgraph(&mut rng, &g, 0.7);
        let trivial = Prioritization::trivial(&g);
        let cases = [
            (
                PreferenceCriterion::PrioritizedSubset(trivial.clone()),
                PreferenceCriterion::Subset,
            ),
            (
                PreferenceCriterion::PrioritizedCardinality(trivial),
                PreferenceCriterion::Cardinality,
            ),
            (
                PreferenceCriterion::Weight(WeightFunction::uniform(1)),
                PreferenceCriterion::Cardinality,
            ),
        ];
        for (derived, base) in cases {
            assert_eq!(
                compare(&derived, &a, &b).unwrap(),
                compare(&base, &a, &b).unwrap(),
                "{} with trivial parameters must agree with {}",
                derived.name(),
                base.name()
            );
        }
    }
}

#[test]
fn discrete_label_order_reduces_multisets_to_pointwise_counts() {
    let mut rng = sampling::rng(0x5EED_0004);
    let discrete = LabelOrder::empty();
    for _ in 0..80 {
        let g = sampling::graph_max_facts(&mut rng, 10, &space());
        let a = sampling::subgraph(&mut rng, &g, 0.7);
        let b = sampling::subgraph(&mut rng, &g, 0.7);
        let (ma, mb) = (edge_data_multiset(&a), edge_data_multiset(&b));
        let symbols: BTreeSet<Symbol> =
            ma.iter().chain(mb.iter()).map(|(s, _)| s.clone()).collect();
        let pointwise = symbols.iter().all(|s| ma.count(s) <= mb.count(s));
        assert_eq!(multiset_leq(&ma, &mb, &discrete), pointwise);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    // Over the chain l0 < l1 < l2 (l3 unordered), mutual dominance must
    // force equal counts.
    #[test]
    fn multiset_comparison_is_antisymmetric(
        a in prop::collection::vec(0u64..4, 4),
        b in prop::collection::vec(0u64..4, 4),
    ) {
        let names = ["l0", "l1", "l2", "l3"];
        let ord = LabelOrder::new(vec![
            ("l0".to_string(), "l1".to_string()),
            ("l1".to_string(), "l2".to_string()),
        ])
        .unwrap();
        let mk = |counts: &[u64]| {
            EdgeDataMultiset::from_counts(
                names
                    .iter()
                    .zip(counts)
                    .map(|(n, &k)| (Symbol::Label(n.to_string()), k)),
            )
        };
        let (ma, mb) = (mk(&a), mk(&b));
        if multiset_leq(&ma, &mb, &ord) && multiset_leq(&mb, &ma, &ord) {
            prop_assert_eq!(a, b);
        }
    }
}

#[test]
fn parser_round_trips_printed_expressions() {
    let mut rng = sampling::rng(0x5EED_0006);
    for _ in 0..300 {
        let p = sampling::path_expr(&mut rng, 4, false, &space());
        assert_eq!(parse_path(&p.to_string()).unwrap(), p, "printed form: {p}");
        let phi = sampling::node_expr(&mut rng, 4, false, &space());
        assert_eq!(
            parse_node(&phi.to_string()).unwrap(),
            phi,
            "printed form: {phi}"
        );
    }
}

#[test]
fn star_matches_naive_iteration() {
    let mut rng = sampling::rng(0x5EED_0007);
    for _ in 0..80 {
        let n = rng.gen_range(1..=8);
        let g = sampling::graph(&mut rng, n, 10, &space());
        let p = sampling::path_expr(&mut rng, 3, false, &space());
        let step = eval_path(&g, &p);
        let mut closure = identity(&g);
        loop {
            let mut next = closure.clone();
            next.extend(compose(&closure, &step));
            if next == closure {
                break;
            }
            closure = next;
        }
        assert_eq!(
            eval_path(&g, &PathExpr::Star(Box::new(p.clone()))),
            closure,
            "star of {p}"
        );
    }
}

#[test]
fn repeat_matches_the_definitional_union() {
    let mut rng = sampling::rng(0x5EED_0008);
    for _ in 0..80 {
        let n = rng.gen_range(1..=6);
        let g = sampling::graph(&mut rng, n, 8, &space());
        let p = sampling::path_expr(&mut rng, 2, false, &space());
        let step = eval_path(&g, &p);
        let lo = rng.gen_range(0..=3u32);
        let hi = lo + rng.gen_range(0..=2u32);
        let mut power = identity(&g);
        let mut union = Rel::new();
        for k in 0..=hi {
            if k >= lo {
                union.extend(power.iter().cloned());
            }
            power = compose(&power, &step);
        }
        assert_eq!(
            eval_path(&g, &PathExpr::Repeat(Box::new(p.clone()), lo, hi)),
            union,
            "{p}{{{lo},{hi}}}"
        );
    }
}

#[test]
fn complement_and_negation_are_involutions() {
    let mut rng = sampling::rng(0x5EED_0009);
    for _ in 0..80 {
        let n = rng.gen_range(1..=7);
        let g = sampling::graph(&mut rng, n, 9, &space());
        let p = sampling::path_expr(&mut rng, 3, false, &space());
        let twice = PathExpr::Complement(Box::new(PathExpr::Complement(Box::new(p.clone()))));
        assert_eq!(eval_path(&g, &twice), eval_path(&g, &p), "!!({p})");
        let phi = sampling::node_expr(&mut rng, 3, false, &space());
        let twice = NodeExpr::Not(Box::new(NodeExpr::Not(Box::new(phi.clone()))));
        assert_eq!(eval_node(&g, &twice), eval_node(&g, &phi), "!!({phi})");
    }
}

#[test]
fn positive_expressions_are_monotone_under_fact_growth() {
    let mut rng = sampling::rng(0x5EED_000A);
    for _ in 0..100 {
        let g = sampling::graph_max_facts(&mut rng, 12, &space());
        let h = sampling::subgraph(&mut rng, &g, 0.7);
        let p = sampling::path_expr(&mut rng, 3, true, &space());
        assert!(
            eval_path(&h, &p).is_subset(&eval_path(&g, &p)),
            "positive {p} lost pairs when facts were added"
        );
        let phi = sampling::node_expr(&mut rng, 3, true, &space());
        assert!(
            eval_node(&h, &phi).is_subset(&eval_node(&g, &phi)),
            "positive {phi} lost nodes when facts were added"
        );
    }
}

#[test]
fn path_constraints_match_their_node_forms() {
    let mut rng = sampling::rng(0x5EED_000B);
    for _ in 0..80 {
        let n = rng.gen_range(1..=6);
        let g = sampling::graph(&mut rng, n, 8, &space());
        let alpha = sampling::path_expr(&mut rng, 3, false, &space());
        let as_path = ConstraintSet::of_paths(vec![alpha.clone()]);
        let as_node = ConstraintSet::of_nodes(vec![to_node_constraint(&alpha)]);
        assert_eq!(
            is_consistent(&g, &as_path).consistent,
            is_consistent(&g, &as_node).consistent,
            "constraint forms disagree for {alpha}"
        );
    }
}

#[test]
fn preferred_repairs_are_always_subset_repairs() {
    let mut rng = sampling::rng(0x5EED_000C);
    for _ in 0..40 {
        let g = sampling::graph_max_facts(&mut rng, 10, &space());
        let r = sampling::constraint_set(&mut rng, 2, 2, false, &space());
        let subset = preferred_repairs(
            &g,
            &r,
            &PreferenceCriterion::Subset,
            SearchMode::FactLattice,
            &cfg(),
        )
        .unwrap();
        for crit in all_criteria(&mut rng, &g) {
            let pref = preferred_repairs(&g, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap();
            assert!(
                !pref.repairs.is_empty(),
                "∅ is consistent, so repairs exist"
            );
            for h in &pref.repairs {
                assert!(
                    subset.repairs.contains(h),
                    "a {}-preferred repair is not ⊆-preferred",
                    crit.name()
                );
            }
        }
    }
}

#[test]
fn repair_existence_is_criterion_independent() {
    let mut rng = sampling::rng(0x5EED_000D);
    for _ in 0..40 {
        let g = sampling::graph_max_facts(&mut rng, 9, &space());
        let r = sampling::constraint_set(&mut rng, 2, 2, false, &space());
        let nonempty_consistent = consistent_subsets(&g, &r, SearchMode::FactLattice, &cfg())
            .unwrap()
            .iter()
            .any(|h| !h.is_empty());
        for crit in all_criteria(&mut rng, &g) {
            assert_eq!(
                repair_exists(&g, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap(),
                nonempty_consistent,
                "existence under {} must not depend on the criterion",
                crit.name()
            );
            // The complement connection: ∅ is preferred exactly when no
            // non-empty consistent subset exists.
            assert_eq!(
                repair_check(
                    &g,
                    &DataGraph::new(),
                    &r,
                    &crit,
                    SearchMode::FactLattice,
                    &cfg()
                )
                .unwrap(),
                !nonempty_consistent,
                "the empty graph check must complement existence under {}",
                crit.name()
            );
        }
    }
}

#[test]
fn the_node_positive_fixpoint_is_the_maximum_consistent_subset() {
    let mut rng = sampling::rng(0x5EED_000E);
    for _ in 0..50 {
        let g = sampling::graph_max_facts(&mut rng, 12, &space());
        let r = sampling::node_pos_constraints(&mut rng, 2, 2, &space());
        let fix = repair_node_pos(&g, &r).unwrap();
        assert!(is_consistent(&fix, &r).consistent);
        let subset = preferred_repairs(
            &g,
            &r,
            &PreferenceCriterion::Subset,
            SearchMode::FactLattice,
            &cfg(),
        )
        .unwrap();
        assert_eq!(
            subset.repairs,
            vec![fix.clone()],
            "the ⊆-repair must be unique and equal the fixpoint"
        );
        for h in consistent_subsets(&g, &r, SearchMode::FactLattice, &cfg()).unwrap() {
            assert!(h.is_subset(&fix), "every consistent subset sits inside it");
        }
    }
}

#[test]
fn induced_search_agrees_with_the_lattice_on_monotone_instances() {
    let mut rng = sampling::rng(0x5EED_000F);
    for _ in 0..10 {
        let nodes = rng.gen_range(1..=5);
        let edges = rng.gen_range(0..=12usize.saturating_sub(nodes));
        let g = sampling::graph(&mut rng, nodes, edges, &space());
        let r = sampling::constraint_set(&mut rng, 2, 2, true, &space());
        for crit in all_criteria(&mut rng, &g) {
            let lattice =
                preferred_repairs(&g, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap();
            let induced =
                preferred_repairs(&g, &r, &crit, SearchMode::NodeInduced, &cfg()).unwrap();
            assert_eq!(
                lattice.repairs,
                induced.repairs,
                "criterion {}",
                crit.name()
            );
        }
    }

    // One instance at the 20-fact boundary, constrained enough (all-pairs
    // connectivity) to keep the lattice enumeration small.
    let mut rng = sampling::rng(0x5EED_0F0F);
    let g = sampling::graph(&mut rng, 6, 14, &space());
    let r = ConstraintSet::of_paths(vec![parse_path("_*").unwrap()]);
    for crit in [
        PreferenceCriterion::Subset,
        PreferenceCriterion::Cardinality,
    ] {
        let lattice = preferred_repairs(&g, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap();
        let induced = preferred_repairs(&g, &r, &crit, SearchMode::NodeInduced, &cfg()).unwrap();
        assert_eq!(
            lattice.repairs,
            induced.repairs,
            "criterion {}",
            crit.name()
        );
    }
}

#[test]
fn staged_query_answering_matches_enumeration() {
    let mut rng = sampling::rng(0x5EED_0010);
    for _ in 0..60 {
        let g = sampling::graph_max_facts(&mut rng, 14, &space());
        let r = sampling::constraint_set(&mut rng, 2, 2, false, &space());
        let ids: Vec<String> = g.node_ids().map(|s| s.to_string()).collect();
        let source = ids[rng.gen_range(0..ids.len())].clone();
        let target = ids[rng.gen_range(0..ids.len())].clone();
        let q = sampling::path_expr(&mut rng, 2, false, &space());
        let crits = [
            PreferenceCriterion::Cardinality,
            PreferenceCriterion::Weight(sampling::positive_weights(&mut rng, &space(), 3)),
            PreferenceCriterion::PrioritizedCardinality(sampling::prioritization(&mut rng, &g, 3)),
        ];
        for crit in crits {
            let inst = CqaInstance::new(
                g.clone(),
                r.clone(),
                q.clone(),
                source.clone(),
                target.clone(),
                crit,
            )
            .unwrap();
            assert_eq!(
                cqa_staged(&inst, &cfg()).unwrap(),
                cqa_enumerate(&inst, SearchMode::FactLattice, &cfg()).unwrap(),
                "staged and enumerated answers disagree for {q}"
            );
        }
    }
}

#[test]
fn enumeration_answers_are_the_intersection_over_preferred_repairs() {
    let mut rng = sampling::rng(0x5EED_0011);
    for _ in 0..40 {
        let g = sampling::graph_max_facts(&mut rng, 12, &space());
        let r = sampling::constraint_set(&mut rng, 2, 2, false, &space());
        let ids: Vec<String> = g.node_ids().map(|s| s.to_string()).collect();
        let pair = (
            ids[rng.gen_range(0..ids.len())].clone(),
            ids[rng.gen_range(0..ids.len())].clone(),
        );
        let q = sampling::path_expr(&mut rng, 2, false, &space());
        for crit in all_criteria(&mut rng, &g) {
            let pref = preferred_repairs(&g, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap();
            let expected = pref
                .repairs
                .iter()
                .all(|h| eval_path(h, &q).contains(&pair));
            let inst = CqaInstance::new(
                g.clone(),
                r.clone(),
                q.clone(),
                pair.0.clone(),
                pair.1.clone(),
                crit,
            )
            .unwrap();
            assert_eq!(
                cqa_enumerate(&inst, SearchMode::FactLattice, &cfg()).unwrap(),
                expected
            );
        }
    }
}

#[test]
fn node_positive_query_answering_asks_the_unique_repair() {
    let mut rng = sampling::rng(0x5EED_0012);
    for _ in 0..40 {
        let g = sampling::graph_max_facts(&mut rng, 12, &space());
        let r = sampling::node_pos_constraints(&mut rng, 2, 2, &space());
        let ids: Vec<String> = g.node_ids().map(|s| s.to_string()).collect();
        let pair = (
            ids[rng.gen_range(0..ids.len())].clone(),
            ids[rng.gen_range(0..ids.len())].clone(),
        );
        let q = sampling::path_expr(&mut rng, 2, false, &space());
        let fix = repair_node_pos(&g, &r).unwrap();
        let expected = eval_path(&fix, &q).contains(&pair);
        let inst = CqaInstance::new(
            g.clone(),
            r.clone(),
            q.clone(),
            pair.0.clone(),
            pair.1.clone(),
            PreferenceCriterion::Subset,
        )
        .unwrap();
        assert_eq!(
            cqa_enumerate(&inst, SearchMode::FactLattice, &cfg()).unwrap(),
            expected,
            "asking the unique repair must answer the query"
        );
    }
}

#[test]
fn preferred_filtering_matches_the_literal_definition() {
    let mut rng = sampling::rng(0x5EED_0013);
    for _ in 0..20 {
        let g = sampling::graph_max_facts(&mut rng, 8, &space());
        let r = sampling::constraint_set(&mut rng, 2, 2, false, &space());
        let cands = consistent_subsets(&g, &r, SearchMode::FactLattice, &cfg()).unwrap();
        for crit in all_criteria(&mut rng, &g) {
            let literal: Vec<DataGraph> = cands
                .iter()
                .filter(|h| {
                    !cands
                        .iter()
                        .any(|h2| h2 != *h && compare(&crit, h, h2).unwrap() == Comparison::Less)
                })
                .cloned()
                .collect();
            let engine = preferred_repairs(&g, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap();
            assert_eq!(engine.repairs, literal, "criterion {}", crit.name());
        }
    }
}

#[test]
fn graph_operations_respect_subset_laws() {
    let mut rng = sampling::rng(0x5EED_0014);
    for _ in 0..100 {
        let g = sampling::graph_max_facts(&mut rng, 14, &space());
        assert_eq!(DataGraph::from_json_str(&g.to_json_string()).unwrap(), g);

        let del: BTreeSet<Fact> = g
            .facts()
            .into_iter()
            .filter(|_| rng.gen_bool(0.3))
            .collect();
        let d = g.delete_facts(&del).unwrap();
        assert!(d.is_subset(&g));
        assert!(d.cardinality() <= g.cardinality() - del.len());

        // A subgraph sits inside the subgraph induced by its own nodes,
        // and induction reproduces exactly the requested node set.
        let h = sampling::subgraph(&mut rng, &g, 0.6);
        let node_set: BTreeSet<String> = h.node_ids().map(|s| s.to_string()).collect();
        let ind = g.induced(&node_set).unwrap();
        assert!(h.is_subset(&ind));
        let ind_nodes: BTreeSet<String> = ind.node_ids().map(|s| s.to_string()).collect();
        assert_eq!(ind_nodes, node_set);
    }
}
