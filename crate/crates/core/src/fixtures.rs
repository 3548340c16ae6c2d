//! The worked film and network examples used throughout the test suite.
//!
//! Two small hand-built instances with known repair behavior:
//!
//! - the **film** graph: people, movies, and category nodes connected by
//!   `type`, `acts_in`, and `directed_by` edges, with node constraints
//!   about actors, categories, and directors whose repairs are known
//!   exactly;
//! - the **network** graph: four stations connected by `low`/`high`
//!   quality links, with path constraints about connectivity and link
//!   quality, two hand-picked subgraphs exercising the weight and multiset
//!   comparisons, and the weight function and label order those
//!   comparisons use.
//!
//! Everything is rebuilt on each call; the fixtures are tiny.

use std::collections::{BTreeMap, BTreeSet};

use crate::constraints::ConstraintSet;
use crate::graph::{DataGraph, Fact};
use crate::gxpath::ast::NodeExpr;
use crate::gxpath::{parse_node, parse_path};
use crate::prefs::{LabelOrder, Prioritization, WeightFunction};

fn node(src: &str) -> NodeExpr {
    parse_node(src).expect("fixture expressions parse")
}

/// The film graph: three actors, two films, their directors, and two
/// category nodes (`Actor`, `Film`), 21 facts in all.
pub fn film_graph() -> DataGraph {
    let ids = [
        "Hoffman",
        "Actor",
        "Phoenix",
        "Robbie",
        "Babylon",
        "TheMaster",
        "Film",
        "Anderson",
        "Chazelle",
    ];
    let edges = [
        ("Hoffman", "type", "Actor"),
        ("Phoenix", "type", "Actor"),
        ("Robbie", "type", "Actor"),
        ("Actor", "type", "Robbie"),
        ("Phoenix", "acts_in", "TheMaster"),
        ("Hoffman", "acts_in", "TheMaster"),
        ("TheMaster", "directed_by", "Anderson"),
        ("Babylon", "directed_by", "Chazelle"),
        ("Robbie", "acts_in", "Babylon"),
        ("Babylon", "type", "Film"),
        ("TheMaster", "type", "Film"),
        ("TheMaster", "directed_by", "Chazelle"),
    ];
    DataGraph::build(
        ids.map(|id| (id.to_string(), id.to_string())),
        edges.map(|(f, l, t)| (f.to_string(), l.to_string(), t.to_string())),
    )
    .expect("the film fixture is well-formed")
}

/// Every actor-typed node must have co-starred with Hoffman in a film
/// directed by Anderson. Violated by Robbie in [`film_graph`].
pub fn film_costar_rule() -> NodeExpr {
    node(
        r#"<acts_in/[<directed_by/[data = "Anderson"]>]/^acts_in/[data = "Hoffman"]> || ~<type/[data = "Actor"]>"#,
    )
}

/// Category nodes (data `Actor` or `Film`) must have no outgoing edges.
/// Violated by the `Actor` node, which points at Robbie.
pub fn film_category_sink_rule() -> NodeExpr {
    node(r#"~<_> || ~(data = "Actor" || data = "Film")"#)
}

/// Every film-typed node must name a director. Satisfied by [`film_graph`].
pub fn film_director_required_rule() -> NodeExpr {
    node(r#"<directed_by> || ~<type/[data = "Film"]>"#)
}

/// No film-typed node may name two directors with different data.
/// Violated by TheMaster, which names both Anderson and Chazelle.
pub fn film_unique_director_rule() -> NodeExpr {
    node(r#"~<directed_by != directed_by> || ~<type/[data = "Film"]>"#)
}

/// The director rules together: a film names a director, and only one.
pub fn film_director_rules() -> ConstraintSet {
    ConstraintSet::of_nodes(vec![
        film_director_required_rule(),
        film_unique_director_rule(),
    ])
}

/// A two-level prioritization of the film facts that resolves the director
/// ambiguity at TheMaster: everything is first-level except the Chazelle
/// edge, so the unique top-prioritized repair deletes exactly that edge.
pub fn film_director_prioritization() -> Prioritization {
    let chazelle = Fact::Edge(
        "TheMaster".to_string(),
        "directed_by".to_string(),
        "Chazelle".to_string(),
    );
    let first: BTreeSet<Fact> = film_graph()
        .facts()
        .into_iter()
        .filter(|f| *f != chazelle)
        .collect();
    Prioritization::new(vec![first, BTreeSet::from([chazelle])])
        .expect("the fixture levels are disjoint")
}

fn network(edges: &[(&str, &str, &str)]) -> DataGraph {
    DataGraph::build(
        ["A", "B", "C", "D"].map(|id| (id.to_string(), "central".to_string())),
        edges
            .iter()
            .map(|(f, l, t)| (f.to_string(), l.to_string(), t.to_string())),
    )
    .expect("the network fixtures are well-formed")
}

/// The full network: four stations, seven `low` links, five `high` links.
/// Inconsistent with [`network_constraints`] — for example, the only
/// high-low-low path from B to D visits four distinct nodes.
pub fn network_graph() -> DataGraph {
    network(&[
        ("A", "low", "B"),
        ("D", "low", "B"),
        ("B", "low", "C"),
        ("C", "low", "B"),
        ("A", "low", "C"),
        ("C", "low", "D"),
        ("B", "low", "B"),
        ("D", "high", "A"),
        ("B", "high", "D"),
        ("A", "high", "C"),
        ("B", "high", "A"),
        ("D", "high", "C"),
    ])
}

/// The network minus the high link D→A. Three weight units cheaper than
/// the full graph, but still inconsistent: the offending B→A→C→D path
/// never uses the deleted edge. A candidate that repair checking must
/// reject.
pub fn network_drop_one_high() -> DataGraph {
    let mut deletions = BTreeSet::new();
    deletions.insert(Fact::Edge(
        "D".to_string(),
        "high".to_string(),
        "A".to_string(),
    ));
    network_graph()
        .delete_facts(&deletions)
        .expect("the deleted edge is present")
}

/// The network minus the low links B→C and A→C: consistent and two weight
/// units below the full graph, but not weight-preferred — deleting the
/// single low link A→C already restores consistency at cost one.
pub fn network_drop_two_low() -> DataGraph {
    let deletions: BTreeSet<Fact> = [("B", "low", "C"), ("A", "low", "C")]
        .iter()
        .map(|(f, l, t)| Fact::Edge(f.to_string(), l.to_string(), t.to_string()))
        .collect();
    network_graph()
        .delete_facts(&deletions)
        .expect("the deleted edges are present")
}

/// The network minus the low link A→C alone: the unique weight-preferred
/// repair, one weight unit below the full graph. Dropping that edge cuts
/// the only high-low-low witness-free connection (B to D via A and C);
/// every other constraint stays satisfied.
pub fn network_optimal_repair() -> DataGraph {
    let deletions: BTreeSet<Fact> = [Fact::Edge(
        "A".to_string(),
        "low".to_string(),
        "C".to_string(),
    )]
    .into();
    network_graph()
        .delete_facts(&deletions)
        .expect("the deleted edge is present")
}

/// The network constraints: directed connectivity between all pairs;
/// two-low-step reachability implies a one-step or high-assisted
/// alternative; any high-low-low connection must also be realized by a
/// path that revisits a node.
pub fn network_constraints() -> ConstraintSet {
    let srcs = [
        "_*",
        "high/low | low/high | high/high | high | low | !(low/low)",
        "(high & ())/low/low | high/(low & ())/low | high/low/(low & ()) | (high/low & ())/low | high/(low/low & ()) | (high/low/low & ()) | !(high/low/low)",
    ];
    ConstraintSet::of_paths(
        srcs.iter()
            .map(|s| parse_path(s).expect("fixture expressions parse"))
            .collect(),
    )
}

/// Dismantling costs: 20 per station, 1 per low link, 3 per high link.
pub fn network_weights() -> WeightFunction {
    WeightFunction::new(
        BTreeMap::from([("low".to_string(), 1), ("high".to_string(), 3)]),
        BTreeMap::from([("central".to_string(), 20)]),
        None,
        None,
    )
}

/// Low-quality links rank below high-quality ones.
pub fn network_label_order() -> LabelOrder {
    LabelOrder::new(vec![("low".to_string(), "high".to_string())])
        .expect("a single pair cannot form a cycle")
}
