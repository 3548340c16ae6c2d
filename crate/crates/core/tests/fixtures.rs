//! Frozen end-to-end expectations for the film and network fixtures: exact
//! evaluation results, repair sets, and query answers, pinned once and
//! checked forever.

use std::collections::BTreeSet;

use gxr_core::fixtures::{
    film_category_sink_rule, film_costar_rule, film_director_prioritization, film_director_rules,
    film_graph, film_unique_director_rule, network_constraints, network_drop_one_high,
    network_drop_two_low, network_graph, network_label_order, network_optimal_repair,
    network_weights,
};
use gxr_core::{
    certain_pairs, compare, cqa_enumerate, cqa_enumerate_witness, edge_data_multiset, eval_node,
    eval_path, graph_weight, is_consistent, parse_node, parse_path, preferred_repairs,
    repair_check, repair_compute, repair_node_pos, to_node_constraint, Comparison, ConstraintSet,
    CqaInstance, DataGraph, Fact, PreferenceCriterion, SearchConfig, SearchMode, Symbol,
};

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn edge(from: &str, label: &str, to: &str) -> Fact {
    Fact::Edge(from.to_string(), label.to_string(), to.to_string())
}

fn minus(g: &DataGraph, facts: &[Fact]) -> DataGraph {
    let del: BTreeSet<Fact> = facts.iter().cloned().collect();
    g.delete_facts(&del).expect("deleted facts are present")
}

#[test]
fn film_evaluation_matches_the_worked_example() {
    let g = film_graph();

    // The identity relation.
    let eps = eval_path(&g, &parse_path("()").unwrap());
    let expected: BTreeSet<(String, String)> = g
        .node_ids()
        .map(|u| (u.to_string(), u.to_string()))
        .collect();
    assert_eq!(eps, expected);

    // Actors reach their directors through one film hop.
    let rel = eval_path(&g, &parse_path("acts_in/directed_by").unwrap());
    let expected: BTreeSet<(String, String)> = [
        ("Phoenix", "Anderson"),
        ("Phoenix", "Chazelle"),
        ("Hoffman", "Anderson"),
        ("Hoffman", "Chazelle"),
        ("Robbie", "Chazelle"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(rel, expected);

    // The category-sink rule fails exactly at the Actor node.
    let sat = eval_node(&g, &film_category_sink_rule());
    let all_but_actor: BTreeSet<String> = g
        .node_ids()
        .filter(|&u| u != "Actor")
        .map(str::to_string)
        .collect();
    assert_eq!(sat, all_but_actor);

    // The unique-director rule fails exactly at TheMaster.
    let sat = eval_node(&g, &film_unique_director_rule());
    assert!(!sat.contains("TheMaster"));
    assert_eq!(sat.len(), g.node_count() - 1);

    // Exactly one node carries the data value "Film".
    let films = eval_node(&g, &parse_node(r#"data = "Film""#).unwrap());
    assert_eq!(films, BTreeSet::from(["Film".to_string()]));
}

#[test]
fn film_consistency_reports_localize_the_violations() {
    let g = film_graph();

    let required = ConstraintSet::of_nodes(vec![gxr_core::fixtures::film_director_required_rule()]);
    assert!(is_consistent(&g, &required).consistent);

    let sink = ConstraintSet::of_nodes(vec![film_category_sink_rule()]);
    let report = is_consistent(&g, &sink);
    assert!(!report.consistent);
    assert_eq!(report.node_violations, vec![(0, "Actor".to_string())]);

    let unique = ConstraintSet::of_nodes(vec![film_unique_director_rule()]);
    let report = is_consistent(&g, &unique);
    assert_eq!(report.node_violations, vec![(0, "TheMaster".to_string())]);

    // Dropping the offending type edge gives a subgraph of the original.
    let fixed = minus(&g, &[edge("Robbie", "type", "Actor")]);
    assert!(fixed.is_subset(&g));
}

#[test]
fn film_costar_repairs_match_the_worked_example() {
    let g = film_graph();
    let costar = ConstraintSet::of_nodes(vec![film_costar_rule()]);

    // Deleting Robbie's type edge is a subset repair, and a cardinality
    // repair as well.
    let fixed = minus(&g, &[edge("Robbie", "type", "Actor")]);
    let subset = preferred_repairs(
        &g,
        &costar,
        &PreferenceCriterion::Subset,
        SearchMode::FactLattice,
        &cfg(),
    )
    .unwrap();
    assert!(subset.repairs.contains(&fixed));
    let card = preferred_repairs(
        &g,
        &costar,
        &PreferenceCriterion::Cardinality,
        SearchMode::FactLattice,
        &cfg(),
    )
    .unwrap();
    assert!(card.repairs.contains(&fixed));

    // With the category-sink rule added, the repair must delete both type
    // edges between Robbie and the Actor node — and nothing else.
    let both = ConstraintSet::of_nodes(vec![film_costar_rule(), film_category_sink_rule()]);
    let expected = minus(
        &g,
        &[
            edge("Robbie", "type", "Actor"),
            edge("Actor", "type", "Robbie"),
        ],
    );
    let repairs = preferred_repairs(
        &g,
        &both,
        &PreferenceCriterion::Subset,
        SearchMode::FactLattice,
        &cfg(),
    )
    .unwrap();
    assert_eq!(repairs.repairs, vec![expected]);
}

#[test]
fn film_director_rules_admit_three_subset_repairs() {
    let g = film_graph();
    let rules = film_director_rules();

    let drop_anderson = minus(&g, &[edge("TheMaster", "directed_by", "Anderson")]);
    let drop_chazelle = minus(&g, &[edge("TheMaster", "directed_by", "Chazelle")]);
    let drop_type = minus(&g, &[edge("TheMaster", "type", "Film")]);

    let subset = preferred_repairs(
        &g,
        &rules,
        &PreferenceCriterion::Subset,
        SearchMode::FactLattice,
        &cfg(),
    )
    .unwrap();
    assert_eq!(subset.repairs.len(), 3);
    for expected in [&drop_anderson, &drop_chazelle, &drop_type] {
        assert!(subset.repairs.contains(expected));
    }

    // The canonical pick: the graph whose indicator is greatest deletes
    // the fact that sorts last among the three candidates' deletions.
    let computed = repair_compute(
        &g,
        &rules,
        &PreferenceCriterion::Subset,
        SearchMode::FactLattice,
        &cfg(),
    )
    .unwrap();
    assert_eq!(computed, drop_type);

    // The prioritization shields everything but the Chazelle edge, so the
    // top-prioritized repair is unique.
    let crit = PreferenceCriterion::PrioritizedSubset(film_director_prioritization());
    let prio = preferred_repairs(&g, &rules, &crit, SearchMode::FactLattice, &cfg()).unwrap();
    assert_eq!(prio.repairs, vec![drop_chazelle]);
}

#[test]
fn film_director_cqa_answers() {
    let g = film_graph();
    let rules = film_director_rules();

    // Neither director edge survives every repair.
    let inst = CqaInstance::new(
        g.clone(),
        rules.clone(),
        parse_path("directed_by").unwrap(),
        "TheMaster".to_string(),
        "Anderson".to_string(),
        PreferenceCriterion::Subset,
    )
    .unwrap();
    let outcome = cqa_enumerate_witness(&inst, SearchMode::FactLattice, &cfg()).unwrap();
    assert!(!outcome.answer);
    let witness = outcome.refutation.expect("a refuting repair is reported");
    assert!(!witness.contains_edge("TheMaster", "directed_by", "Anderson"));

    // Babylon's film typing survives all repairs.
    let inst = CqaInstance::new(
        g.clone(),
        rules.clone(),
        parse_path("type").unwrap(),
        "Babylon".to_string(),
        "Film".to_string(),
        PreferenceCriterion::Subset,
    )
    .unwrap();
    assert!(cqa_enumerate(&inst, SearchMode::FactLattice, &cfg()).unwrap());

    // The certain pairs of `directed_by` keep Babylon's director and lose
    // both of TheMaster's.
    let pairs = certain_pairs(
        &g,
        &rules,
        &parse_path("directed_by").unwrap(),
        &PreferenceCriterion::Subset,
        SearchMode::FactLattice,
        &cfg(),
    )
    .unwrap();
    assert!(pairs.contains(&("Babylon".to_string(), "Chazelle".to_string())));
    assert!(!pairs.contains(&("TheMaster".to_string(), "Anderson".to_string())));
    assert!(!pairs.contains(&("TheMaster".to_string(), "Chazelle".to_string())));
}

#[test]
fn film_type_rule_fixpoint_repair() {
    let g = film_graph();
    // Everyone needs an outgoing type edge; deletions cascade from the
    // untyped leaves (directors, the Film category) through the films.
    let r = ConstraintSet::of_nodes(vec![parse_node("<type>").unwrap()]);
    let repaired = repair_node_pos(&g, &r).unwrap();
    let keep: BTreeSet<String> = ["Hoffman", "Actor", "Phoenix", "Robbie"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    assert_eq!(repaired, g.induced(&keep).unwrap());
    assert_eq!(repaired.node_count(), 4);
    assert_eq!(repaired.edge_count(), 4);
}

#[test]
fn film_path_constraint_equals_its_node_form() {
    let g = film_graph();
    let alpha = parse_path("type").unwrap();
    let as_path = ConstraintSet::of_paths(vec![alpha.clone()]);
    let as_node = ConstraintSet::of_nodes(vec![to_node_constraint(&alpha)]);
    assert_eq!(
        is_consistent(&g, &as_path).consistent,
        is_consistent(&g, &as_node).consistent
    );
}

#[test]
fn film_node_deletion_cascades() {
    let g = film_graph();
    let shrunk = g
        .delete_facts(&BTreeSet::from([Fact::Node("Film".to_string())]))
        .unwrap();
    assert_eq!(shrunk.cardinality(), 18);
    assert!(!shrunk.contains_edge("Babylon", "type", "Film"));
    assert!(!shrunk.contains_edge("TheMaster", "type", "Film"));

    let induced = g
        .induced(&BTreeSet::from([
            "Hoffman".to_string(),
            "Actor".to_string(),
        ]))
        .unwrap();
    assert_eq!(induced.node_count(), 2);
    assert_eq!(induced.edge_count(), 1);
    assert!(induced.contains_edge("Hoffman", "type", "Actor"));
}

#[test]
fn network_weights_and_multisets_match_the_worked_example() {
    let full = network_graph();
    let dropped_high = network_drop_one_high();
    let dropped_low = network_drop_two_low();
    let w = network_weights();

    let base = graph_weight(&full, &w).unwrap();
    assert_eq!(base, 102);
    assert_eq!(graph_weight(&dropped_high, &w).unwrap(), base - 3);
    assert_eq!(graph_weight(&dropped_low, &w).unwrap(), base - 2);

    // Label projections of the multisets.
    let count =
        |g: &DataGraph, label: &str| edge_data_multiset(g).count(&Symbol::Label(label.to_string()));
    assert_eq!(
        (count(&dropped_high, "low"), count(&dropped_high, "high")),
        (7, 4)
    );
    assert_eq!(
        (count(&dropped_low, "low"), count(&dropped_low, "high")),
        (5, 5)
    );

    // Under low < high, losing a high edge outweighs losing two low ones.
    let crit = PreferenceCriterion::Multiset(network_label_order());
    assert_eq!(
        compare(&crit, &dropped_high, &dropped_low).unwrap(),
        Comparison::Less
    );
}

#[test]
fn network_repair_checks_and_query_answer() {
    let full = network_graph();
    let r = network_constraints();
    let dropped_high = network_drop_one_high();
    let dropped_low = network_drop_two_low();
    let best = network_optimal_repair();

    // The full graph violates the high-low-low rule at (B, D): the path
    // B→A→C→D has no node-revisiting counterpart. Removing the high link
    // D→A does not touch that path, so the violation survives; removing
    // the low links B→C and A→C (or A→C alone) resolves it.
    let report = is_consistent(&full, &r);
    assert!(!report.consistent);
    assert_eq!(
        report.pair_violations,
        vec![(2, "B".to_string(), "D".to_string())]
    );
    let high_report = is_consistent(&dropped_high, &r);
    assert!(!high_report.consistent);
    assert_eq!(
        high_report.pair_violations,
        vec![(2, "B".to_string(), "D".to_string())]
    );
    assert!(is_consistent(&dropped_low, &r).consistent);
    assert!(is_consistent(&best, &r).consistent);

    // Under the dismantling costs the unique weight-preferred repair
    // deletes only the low link A→C (cost 1). Both hand-picked candidates
    // fail the repair check: one is inconsistent, the other pays an
    // avoidable extra unit.
    let crit = PreferenceCriterion::Weight(network_weights());
    assert!(!repair_check(
        &full,
        &dropped_high,
        &r,
        &crit,
        SearchMode::FactLattice,
        &cfg()
    )
    .unwrap());
    assert!(!repair_check(
        &full,
        &dropped_low,
        &r,
        &crit,
        SearchMode::FactLattice,
        &cfg()
    )
    .unwrap());
    assert!(repair_check(&full, &best, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap());

    let w = network_weights();
    assert_eq!(graph_weight(&best, &w).unwrap(), 101);
    let repairs = preferred_repairs(&full, &r, &crit, SearchMode::FactLattice, &cfg()).unwrap();
    assert_eq!(repairs.repairs, vec![best.clone()]);

    // The repair keeps the high link D→A, so the query answer is certain.
    let inst = CqaInstance::new(
        full,
        r,
        parse_path("high").unwrap(),
        "D".to_string(),
        "A".to_string(),
        crit,
    )
    .unwrap();
    assert!(cqa_enumerate(&inst, SearchMode::FactLattice, &cfg()).unwrap());
}
