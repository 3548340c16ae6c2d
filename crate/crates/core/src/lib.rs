//! Core engine for data-graph constraint repair.
//!
//! The crate provides, in dependency order:
//!
//! - [`graph`]: the data-graph model (nodes with data values, labeled edges)
//!   and fact-level subset operations;
//! - [`gxpath`]: path/node expression syntax, parsing, and bitset-based
//!   evaluation;
//! - [`constraints`]: constraint sets over those expressions;
//! - [`prefs`]: preference criteria comparing subgraphs (subset,
//!   cardinality, weight, prioritized and multiset variants);
//! - [`repair`]: consistency checking and enumeration of preferred repairs
//!   (subgraphs that satisfy the constraints and are maximal under a
//!   criterion);
//! - [`cqa`]: consistent query answering across all preferred repairs;
//! - [`reductions`]: generators that encode quantified boolean formulas,
//!   alternating satisfiability chains, and lexicographically maximal
//!   assignments as repair instances, with independent oracles;
//! - [`sampling`]: seeded random instances for tests and benchmarks;
//! - [`fixtures`]: the worked film and network examples used throughout the
//!   test suite.
//!
//! The commonly used types are re-exported at the crate root.

pub mod constraints;
pub mod cqa;
pub mod fixtures;
pub mod graph;
pub mod gxpath;
pub mod prefs;
pub mod reductions;
pub mod repair;
pub mod sampling;

pub use constraints::{ConstraintError, ConstraintSet};
pub use cqa::{
    certain_pairs, cqa_enumerate, cqa_enumerate_witness, cqa_node_enumerate, cqa_node_witness,
    cqa_staged, CqaError, CqaInstance, CqaOutcome,
};
pub use graph::{DataGraph, DataValue, EdgeLabel, Fact, GraphError, NodeId};
pub use gxpath::{
    classify_node, classify_path, eval_node, eval_path, parse_node, parse_path, to_node_constraint,
    Fragment, NodeExpr, ParseError, PathExpr,
};
pub use prefs::{
    compare, edge_data_multiset, graph_weight, multiset_leq, strictly_better_exists_witness,
    Comparison, EdgeDataMultiset, LabelOrder, PreferenceCriterion, PreferenceError, Prioritization,
    Symbol, WeightFunction,
};
pub use reductions::{
    build_lexmax, build_parity3sat, build_qbf, oracle_lexmax, oracle_parity, oracle_qbf,
    oracle_sat, qbf_assignment_graph, CnfFormula, LexmaxFlavor, Origin, QbfInstance, QbfVariant,
    ReductionError, ReductionInstance,
};
pub use repair::{
    consistent_subsets, is_consistent, preferred_repairs, repair_check, repair_compute,
    repair_exists, repair_node_pos, ConsistencyReport, RepairAnswer, RepairError, SearchConfig,
    SearchMode,
};
