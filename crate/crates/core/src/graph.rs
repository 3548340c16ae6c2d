//! The data-graph model: nodes carrying one data value each, and sets of
//! labeled edges between node pairs.
//!
//! A graph is a pair of finite maps — node id → data value, and a set of
//! `(from, label, to)` edge triples. Its *facts* are its nodes and edge
//! triples together; subsets, deletions, and induced subgraphs all operate on
//! facts. Graphs are immutable after construction in the sense that every
//! "mutation" entry point returns a new graph, so values can be shared freely
//! across threads.
//!
//! Design notes:
//! - A node's identity (its id) is distinct from its data value; several
//!   nodes may share a data value.
//! - Edge triples are stored as a sorted set keyed `(from, label, to)`, which
//!   doubles as the canonical edge order. The canonical *fact* order is all
//!   node facts sorted by id, then all edge facts sorted by triple; every
//!   deterministic output in this crate derives from it.
//! - Subsets never alter data values of surviving nodes: a subset keeps a
//!   node with exactly the data value it had.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node identifier. Ids must match `[A-Za-z_][A-Za-z0-9_]*`.
pub type NodeId = String;
/// Node data value: an arbitrary string.
pub type DataValue = String;
/// Edge label. Labels must match `[A-Za-z_][A-Za-z0-9_]*`.
pub type EdgeLabel = String;

/// An atomic unit of a data-graph: a node (with its data value implied by the
/// ambient graph) or one labeled edge triple.
///
/// The derived `Ord` is the canonical fact order: node facts first (sorted by
/// id), then edge facts (sorted by `(from, label, to)`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Fact {
    /// A node fact, identified by node id.
    Node(NodeId),
    /// An edge fact `(from, label, to)`.
    Edge(NodeId, EdgeLabel, NodeId),
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Node(id) => write!(f, "node:{id}"),
            Fact::Edge(from, label, to) => write!(f, "edge:{from}:{label}:{to}"),
        }
    }
}

impl Fact {
    /// Parses the textual fact reference format used by prioritization files:
    /// `node:<id>` or `edge:<from>:<label>:<to>`.
    pub fn parse_ref(s: &str) -> Result<Fact, GraphError> {
        if let Some(id) = s.strip_prefix("node:") {
            if !is_valid_name(id) {
                return Err(GraphError::InvalidName(id.to_string()));
            }
            return Ok(Fact::Node(id.to_string()));
        }
        if let Some(rest) = s.strip_prefix("edge:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() == 3 && parts.iter().all(|p| is_valid_name(p)) {
                return Ok(Fact::Edge(
                    parts[0].to_string(),
                    parts[1].to_string(),
                    parts[2].to_string(),
                ));
            }
            return Err(GraphError::BadFactRef(s.to_string()));
        }
        Err(GraphError::BadFactRef(s.to_string()))
    }
}

/// Errors raised by graph construction, editing, and (de)serialization.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    /// A node id was inserted twice.
    #[error("duplicate node {0:?}")]
    DuplicateNode(NodeId),
    /// An edge triple was inserted twice.
    #[error("duplicate edge ({0:?}, {1:?}, {2:?})")]
    DuplicateEdge(NodeId, EdgeLabel, NodeId),
    /// A referenced node does not exist in the graph.
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
    /// A fact slated for deletion is not present in the graph.
    #[error("unknown fact {0}")]
    UnknownFact(String),
    /// A node id or edge label does not match `[A-Za-z_][A-Za-z0-9_]*`.
    #[error("invalid identifier {0:?} (expected [A-Za-z_][A-Za-z0-9_]*)")]
    InvalidName(String),
    /// A textual fact reference could not be parsed.
    #[error("malformed fact reference {0:?}")]
    BadFactRef(String),
    /// The JSON graph file could not be parsed or failed validation.
    #[error("graph file error: {0}")]
    Format(String),
}

/// Returns true when `s` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A finite data-graph: a set of nodes with one data value each, plus a set
/// of labeled edges.
///
/// Invariants maintained by every constructor and editing method:
/// - every endpoint of every edge is a node of the graph;
/// - the data map is defined for exactly the nodes;
/// - edge label sets are represented by the presence of triples (an absent
///   triple is an absent label).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DataGraph {
    nodes: BTreeMap<NodeId, DataValue>,
    edges: BTreeSet<(NodeId, EdgeLabel, NodeId)>,
}

impl DataGraph {
    /// Creates an empty graph.
    pub fn new() -> Self {
        DataGraph::default()
    }

    /// Builds a graph from node and edge lists, validating names and
    /// rejecting duplicates and dangling endpoints.
    pub fn build<N, E>(nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = (NodeId, DataValue)>,
        E: IntoIterator<Item = (NodeId, EdgeLabel, NodeId)>,
    {
        let mut g = DataGraph::new();
        for (id, data) in nodes {
            g.insert_node(id, data)?;
        }
        for (from, label, to) in edges {
            g.insert_edge(from, label, to)?;
        }
        Ok(g)
    }

    /// Inserts a node. Fails on an invalid id or a duplicate.
    pub fn insert_node(&mut self, id: NodeId, data: DataValue) -> Result<(), GraphError> {
        if !is_valid_name(&id) {
            return Err(GraphError::InvalidName(id));
        }
        if self.nodes.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        self.nodes.insert(id, data);
        Ok(())
    }

    /// Inserts an edge triple. Fails on an invalid label, a missing endpoint,
    /// or a duplicate triple.
    pub fn insert_edge(
        &mut self,
        from: NodeId,
        label: EdgeLabel,
        to: NodeId,
    ) -> Result<(), GraphError> {
        if !is_valid_name(&label) {
            return Err(GraphError::InvalidName(label));
        }
        if !self.nodes.contains_key(&from) {
            return Err(GraphError::UnknownNode(from));
        }
        if !self.nodes.contains_key(&to) {
            return Err(GraphError::UnknownNode(to));
        }
        let triple = (from, label, to);
        if self.edges.contains(&triple) {
            return Err(GraphError::DuplicateEdge(triple.0, triple.1, triple.2));
        }
        self.edges.insert(triple);
        Ok(())
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of edge triples.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The graph's cardinality: number of nodes plus number of edge triples.
    pub fn cardinality(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    /// True when the graph has no facts at all.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Iterates node ids in canonical (sorted) order.
    pub fn node_ids(&self) -> impl Iterator<Item = &str> {
        self.nodes.keys().map(String::as_str)
    }

    /// Iterates `(id, data)` pairs in canonical order.
    pub fn nodes(&self) -> impl Iterator<Item = (&str, &str)> {
        self.nodes.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// The data value of a node, if present.
    pub fn data(&self, id: &str) -> Option<&str> {
        self.nodes.get(id).map(String::as_str)
    }

    /// True when the node id is present.
    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Iterates edge triples `(from, label, to)` in canonical order.
    pub fn edge_triples(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.edges
            .iter()
            .map(|(f, l, t)| (f.as_str(), l.as_str(), t.as_str()))
    }

    /// True when the exact triple is present.
    pub fn contains_edge(&self, from: &str, label: &str, to: &str) -> bool {
        // Range query instead of building owned Strings for the common case.
        self.edges
            .iter()
            .any(|(f, l, t)| f == from && l == label && t == to)
    }

    /// True when the given fact is present.
    pub fn contains_fact(&self, fact: &Fact) -> bool {
        match fact {
            Fact::Node(id) => self.contains_node(id),
            Fact::Edge(f, l, t) => self.edges.contains(&(f.clone(), l.clone(), t.clone())),
        }
    }

    /// All facts of the graph in canonical order: node facts sorted by id,
    /// then edge facts sorted by triple.
    pub fn facts(&self) -> Vec<Fact> {
        let mut out = Vec::with_capacity(self.cardinality());
        for id in self.nodes.keys() {
            out.push(Fact::Node(id.clone()));
        }
        for (f, l, t) in &self.edges {
            out.push(Fact::Edge(f.clone(), l.clone(), t.clone()));
        }
        out
    }

    /// True iff `self` is a subset of `other`: nodes included, edge triples
    /// included, and data values agreeing on shared nodes.
    pub fn is_subset(&self, other: &DataGraph) -> bool {
        self.nodes
            .iter()
            .all(|(id, data)| other.nodes.get(id) == Some(data))
            && self.edges.is_subset(&other.edges)
    }

    /// Returns a new graph with the listed facts removed. Removing a node
    /// fact also removes all incident edge facts. Fails with `UnknownFact`
    /// if any listed fact is not present.
    pub fn delete_facts(&self, facts: &BTreeSet<Fact>) -> Result<DataGraph, GraphError> {
        for fact in facts {
            if !self.contains_fact(fact) {
                return Err(GraphError::UnknownFact(fact.to_string()));
            }
        }
        let removed_nodes: BTreeSet<&str> = facts
            .iter()
            .filter_map(|f| match f {
                Fact::Node(id) => Some(id.as_str()),
                Fact::Edge(..) => None,
            })
            .collect();
        let mut out = DataGraph::new();
        for (id, data) in &self.nodes {
            if !removed_nodes.contains(id.as_str()) {
                out.nodes.insert(id.clone(), data.clone());
            }
        }
        for (f, l, t) in &self.edges {
            let gone = removed_nodes.contains(f.as_str())
                || removed_nodes.contains(t.as_str())
                || facts.contains(&Fact::Edge(f.clone(), l.clone(), t.clone()));
            if !gone {
                out.edges.insert((f.clone(), l.clone(), t.clone()));
            }
        }
        Ok(out)
    }

    /// The subgraph induced by a node set: exactly those nodes, and every
    /// edge of `self` with both endpoints in the set. Fails with
    /// `UnknownNode` if the set mentions a node outside the graph.
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> Result<DataGraph, GraphError> {
        for id in keep {
            if !self.nodes.contains_key(id) {
                return Err(GraphError::UnknownNode(id.clone()));
            }
        }
        let mut out = DataGraph::new();
        for id in keep {
            out.nodes.insert(id.clone(), self.nodes[id].clone());
        }
        for (f, l, t) in &self.edges {
            if keep.contains(f) && keep.contains(t) {
                out.edges.insert((f.clone(), l.clone(), t.clone()));
            }
        }
        Ok(out)
    }

    /// Serializes to the canonical JSON file format (bit-exact across runs).
    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            nodes: self
                .nodes
                .iter()
                .map(|(id, data)| NodeEntry {
                    id: id.clone(),
                    data: data.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(f, l, t)| EdgeEntry {
                    from: f.clone(),
                    label: l.clone(),
                    to: t.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    /// Parses the JSON file format, validating names, endpoint existence, and
    /// rejecting duplicate triples and duplicate node ids.
    pub fn from_json_str(s: &str) -> Result<DataGraph, GraphError> {
        let file: GraphFile =
            serde_json::from_str(s).map_err(|e| GraphError::Format(e.to_string()))?;
        let mut g = DataGraph::new();
        for n in file.nodes {
            g.insert_node(n.id, n.data)?;
        }
        for e in file.edges {
            g.insert_edge(e.from, e.label, e.to)?;
        }
        Ok(g)
    }
}

/// JSON shape of a graph file.
#[derive(Serialize, Deserialize)]
struct GraphFile {
    nodes: Vec<NodeEntry>,
    edges: Vec<EdgeEntry>,
}

#[derive(Serialize, Deserialize)]
struct NodeEntry {
    id: String,
    data: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeEntry {
    from: String,
    label: String,
    to: String,
}
