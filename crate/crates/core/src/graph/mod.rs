//! AND/OR graph representation.
//!
//! An [`ExplicitGraph`] holds pure AND and OR nodes, weighted directed edges
//! and a designated root. Child lists keep declaration order, which is the
//! tie-break basis used by every search engine in this crate.

mod implicit;
mod json;
mod solution;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Cost;

pub use implicit::{dead_end_status, explore_fully, GraphWorld, ImplicitGraph, WorldError};
pub use json::{from_json, to_json, GraphFile};
pub use solution::{solution_cost, validate_solution_graph, Polarity, SolutionGraph};

/// Dense node identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    And,
    Or,
}

impl NodeKind {
    pub fn flipped(self) -> NodeKind {
        match self {
            NodeKind::And => NodeKind::Or,
            NodeKind::Or => NodeKind::And,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminalStatus {
    Solvable,
    Unsolvable,
    Nonterminal,
}

impl TerminalStatus {
    pub fn is_terminal(self) -> bool {
        self != TerminalStatus::Nonterminal
    }

    pub fn flipped(self) -> TerminalStatus {
        match self {
            TerminalStatus::Solvable => TerminalStatus::Unsolvable,
            TerminalStatus::Unsolvable => TerminalStatus::Solvable,
            TerminalStatus::Nonterminal => TerminalStatus::Nonterminal,
        }
    }
}

/// A node together with its leaf estimates.
///
/// `h` estimates the cost of proving the node solvable, `hbar` the cost of
/// proving it unsolvable. Terminal nodes always carry `(0, ∞)` or `(∞, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeRecord {
    pub id: NodeId,
    pub kind: NodeKind,
    pub terminal: TerminalStatus,
    pub h: Cost,
    pub hbar: Cost,
}

impl NodeRecord {
    pub fn nonterminal(id: impl Into<NodeId>, kind: NodeKind, h: Cost, hbar: Cost) -> Self {
        NodeRecord { id: id.into(), kind, terminal: TerminalStatus::Nonterminal, h, hbar }
    }

    /// A nonterminal node with unit estimates.
    pub fn unit(id: impl Into<NodeId>, kind: NodeKind) -> Self {
        Self::nonterminal(id, kind, Cost::ONE, Cost::ONE)
    }

    pub fn terminal(id: impl Into<NodeId>, kind: NodeKind, status: TerminalStatus) -> Self {
        NodeRecord { id: id.into(), kind, terminal: status, h: Cost::ZERO, hbar: Cost::ZERO }.normalized()
    }

    /// Imposes the fixed estimates of terminal nodes.
    pub fn normalized(mut self) -> Self {
        match self.terminal {
            TerminalStatus::Solvable => {
                self.h = Cost::ZERO;
                self.hbar = Cost::INFINITY;
            }
            TerminalStatus::Unsolvable => {
                self.h = Cost::INFINITY;
                self.hbar = Cost::ZERO;
            }
            TerminalStatus::Nonterminal => {}
        }
        self
    }

    /// The record as seen in the dual graph.
    pub fn dual(self) -> Self {
        NodeRecord {
            id: self.id,
            kind: self.kind.flipped(),
            terminal: self.terminal.flipped(),
            h: self.hbar,
            hbar: self.h,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal.is_terminal()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub to: NodeId,
    pub cost: Cost,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("duplicate node id {0}")]
    DuplicateId(NodeId),
    #[error("edge {from} -> {to} references an unknown node")]
    DanglingEdge { from: NodeId, to: NodeId },
    #[error("root {0} is not a node of the graph")]
    MissingRoot(NodeId),
    #[error("edge {from} -> {to} has negative or NaN cost {cost}")]
    NegativeCost { from: NodeId, to: NodeId, cost: f64 },
    #[error("node {0} has a negative or NaN heuristic value")]
    InvalidHeuristic(NodeId),
    #[error("terminal node {0} has outgoing edges")]
    TerminalWithChildren(NodeId),
    #[error("node {0} is not part of the graph")]
    UnknownNode(NodeId),
    #[error("not a valid solution graph for this host graph")]
    InvalidSolutionGraph,
    #[error("node {0} has an infinite heuristic, which the file format cannot carry")]
    NonFiniteHeuristic(NodeId),
    #[error("malformed graph file: {0}")]
    Parse(String),
}

/// A problem reported by [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// Nodes of one strongly connected component (or a self-loop).
    Cycle(Vec<NodeId>),
    NegativeCost {
        from: NodeId,
        to: NodeId,
        cost: f64,
    },
    TerminalWithChildren(NodeId),
}

/// The materialized AND/OR graph.
///
/// Node ids index directly into the internal tables; ids need not be
/// contiguous, which lets a search graph reuse the ids of the world it
/// explores. Public construction goes through [`GraphBuilder`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitGraph {
    slots: Vec<Option<NodeRecord>>,
    children: Vec<Vec<Edge>>,
    // sorted, de-duplicated
    parents: Vec<Vec<NodeId>>,
    order: Vec<NodeId>,
    root: NodeId,
}

impl ExplicitGraph {
    /// A graph holding only `root`.
    pub fn singleton(root: NodeRecord) -> Self {
        let mut g = ExplicitGraph {
            slots: Vec::new(),
            children: Vec::new(),
            parents: Vec::new(),
            order: Vec::new(),
            root: root.id,
        };
        g.insert_node(root.normalized());
        g
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// One past the largest id ever stored; the length of per-node tables.
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        matches!(self.slots.get(id.index()), Some(Some(_)))
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeRecord> {
        self.slots.get(id.index()).and_then(Option::as_ref)
    }

    /// Panics if `id` is not in the graph.
    pub fn record(&self, id: NodeId) -> &NodeRecord {
        self.node(id).unwrap_or_else(|| panic!("node {id} is not in the graph"))
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.record(id).kind
    }

    pub fn terminal(&self, id: NodeId) -> TerminalStatus {
        self.record(id).terminal
    }

    pub fn children(&self, id: NodeId) -> &[Edge] {
        self.children.get(id.index()).map_or(&[], Vec::as_slice)
    }

    pub fn parents(&self, id: NodeId) -> &[NodeId] {
        self.parents.get(id.index()).map_or(&[], Vec::as_slice)
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.children(id).is_empty()
    }

    /// Node ids in insertion order.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.order.iter().copied()
    }

    pub fn records(&self) -> impl Iterator<Item = &NodeRecord> + '_ {
        self.order.iter().map(|&id| self.record(id))
    }

    /// All edges as `(from, to, cost)`, grouped by source in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Cost)> + '_ {
        self.order.iter().flat_map(|&from| self.children(from).iter().map(move |e| (from, e.to, e.cost)))
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Leaves in insertion order.
    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids().filter(|&id| self.is_leaf(id))
    }

    /// Returns false if the id was already present.
    pub(crate) fn insert_node(&mut self, record: NodeRecord) -> bool {
        let idx = record.id.index();
        if idx >= self.slots.len() {
            self.slots.resize(idx + 1, None);
            self.children.resize_with(idx + 1, Vec::new);
            self.parents.resize_with(idx + 1, Vec::new);
        }
        if self.slots[idx].is_some() {
            return false;
        }
        self.slots[idx] = Some(record);
        self.order.push(record.id);
        true
    }

    /// Both endpoints must already exist.
    pub(crate) fn insert_edge(&mut self, from: NodeId, to: NodeId, cost: Cost) {
        self.children[from.index()].push(Edge { to, cost });
        let ps = &mut self.parents[to.index()];
        if let Err(pos) = ps.binary_search(&from) {
            ps.insert(pos, from);
        }
    }

    pub(crate) fn set_terminal(&mut self, id: NodeId, status: TerminalStatus) {
        if let Some(Some(rec)) = self.slots.get_mut(id.index()) {
            rec.terminal = status;
            *rec = rec.normalized();
        }
    }

    /// True if `target` can be reached from `from` (including `from == target`).
    pub fn reaches(&self, from: NodeId, target: NodeId) -> bool {
        let mut seen = vec![false; self.capacity()];
        let mut stack = vec![from];
        while let Some(n) = stack.pop() {
            if n == target {
                return true;
            }
            if std::mem::replace(&mut seen[n.index()], true) {
                continue;
            }
            stack.extend(self.children(n).iter().map(|e| e.to));
        }
        false
    }
}

/// Collects node and edge specifications and checks them into an
/// [`ExplicitGraph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<NodeRecord>,
    edges: Vec<(NodeId, NodeId, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, record: NodeRecord) -> &mut Self {
        self.nodes.push(record);
        self
    }

    pub fn edge(&mut self, from: impl Into<NodeId>, to: impl Into<NodeId>, cost: f64) -> &mut Self {
        self.edges.push((from.into(), to.into(), cost));
        self
    }

    /// Builds a graph, rejecting negative costs, invalid heuristics and
    /// terminals with children. Cycles are not rejected here; see [`validate`].
    pub fn build(&self, root: impl Into<NodeId>) -> Result<ExplicitGraph, GraphError> {
        for rec in &self.nodes {
            if !rec.is_terminal() && !(rec.h.is_valid() && rec.hbar.is_valid()) {
                return Err(GraphError::InvalidHeuristic(rec.id));
            }
        }
        for &(from, to, cost) in &self.edges {
            if cost.is_nan() || cost < 0.0 {
                return Err(GraphError::NegativeCost { from, to, cost });
            }
        }
        let g = self.build_unchecked(root)?;
        if let Some(id) = g.ids().find(|&id| g.record(id).is_terminal() && !g.is_leaf(id)) {
            return Err(GraphError::TerminalWithChildren(id));
        }
        Ok(g)
    }

    /// Builds without cost or terminal checks, so that [`validate`] can be
    /// exercised on malformed input. Ids and endpoints are still checked.
    pub fn build_unchecked(&self, root: impl Into<NodeId>) -> Result<ExplicitGraph, GraphError> {
        let root = root.into();
        let mut g = ExplicitGraph {
            slots: Vec::new(),
            children: Vec::new(),
            parents: Vec::new(),
            order: Vec::with_capacity(self.nodes.len()),
            root,
        };
        for rec in &self.nodes {
            if !g.insert_node(rec.normalized()) {
                return Err(GraphError::DuplicateId(rec.id));
            }
        }
        if !g.contains(root) {
            return Err(GraphError::MissingRoot(root));
        }
        for &(from, to, cost) in &self.edges {
            if !g.contains(from) || !g.contains(to) {
                return Err(GraphError::DanglingEdge { from, to });
            }
            g.insert_edge(from, to, Cost::from_raw(cost));
        }
        Ok(g)
    }
}

/// Builds a graph from node and edge lists. Child order follows `edges`.
pub fn build_graph(
    nodes: &[NodeRecord],
    edges: &[(NodeId, NodeId, f64)],
    root: NodeId,
) -> Result<ExplicitGraph, GraphError> {
    let mut b = GraphBuilder::new();
    for &n in nodes {
        b.node(n);
    }
    for &(from, to, c) in edges {
        b.edge(from, to, c);
    }
    b.build(root)
}

/// Reports every cycle (one entry per strongly connected component), every
/// negative edge cost and every terminal with outgoing edges.
pub fn validate(g: &ExplicitGraph) -> Vec<Violation> {
    use petgraph::graph::DiGraph;

    let mut out = Vec::new();
    let mut pg = DiGraph::<NodeId, ()>::new();
    let mut index = vec![None; g.capacity()];
    for id in g.ids() {
        index[id.index()] = Some(pg.add_node(id));
    }
    for (from, to, cost) in g.edges() {
        pg.add_edge(index[from.index()].unwrap(), index[to.index()].unwrap(), ());
        if !cost.is_valid() {
            out.push(Violation::NegativeCost { from, to, cost: cost.value() });
        }
    }
    let mut cycles: Vec<Vec<NodeId>> = petgraph::algo::tarjan_scc(&pg)
        .into_iter()
        .filter(|scc| scc.len() > 1 || pg.contains_edge(scc[0], scc[0]))
        .map(|scc| {
            let mut ids: Vec<NodeId> = scc.into_iter().map(|ix| pg[ix]).collect();
            ids.sort();
            ids
        })
        .collect();
    cycles.sort();
    out.extend(cycles.into_iter().map(Violation::Cycle));
    for id in g.ids() {
        if g.record(id).is_terminal() && !g.is_leaf(id) {
            out.push(Violation::TerminalWithChildren(id));
        }
    }
    out
}

/// The dual graph: AND and OR swap, terminal polarities swap and each node's
/// `(h, hbar)` pair swaps. Edges, costs and root are unchanged.
pub fn dual(g: &ExplicitGraph) -> ExplicitGraph {
    ExplicitGraph {
        slots: g.slots.iter().map(|s| s.map(NodeRecord::dual)).collect(),
        children: g.children.clone(),
        parents: g.parents.clone(),
        order: g.order.clone(),
        root: g.root,
    }
}
