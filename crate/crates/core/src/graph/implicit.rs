use std::collections::VecDeque;

use thiserror::Error;

use super::{ExplicitGraph, NodeId, NodeKind, NodeRecord, TerminalStatus};
use crate::cost::Cost;

/// A world refused to produce a node.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct WorldError(pub String);

/// A graph that is only revealed through expansion.
///
/// Node identity must be stable: the same id always denotes the same state
/// and expanding it again yields the same children in the same order.
/// Search engines never expand terminal nodes.
pub trait ImplicitGraph {
    fn root(&mut self) -> Result<NodeRecord, WorldError>;

    /// Children of `id` in declaration order, with their edge costs.
    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError>;
}

impl<W: ImplicitGraph + ?Sized> ImplicitGraph for &mut W {
    fn root(&mut self) -> Result<NodeRecord, WorldError> {
        (**self).root()
    }

    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError> {
        (**self).expand(id)
    }
}

impl<W: ImplicitGraph + ?Sized> ImplicitGraph for Box<W> {
    fn root(&mut self) -> Result<NodeRecord, WorldError> {
        (**self).root()
    }

    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError> {
        (**self).expand(id)
    }
}

/// Serves an explicit graph through the expansion interface.
#[derive(Clone, Copy, Debug)]
pub struct GraphWorld<'a> {
    graph: &'a ExplicitGraph,
}

impl<'a> GraphWorld<'a> {
    pub fn new(graph: &'a ExplicitGraph) -> Self {
        GraphWorld { graph }
    }
}

impl ImplicitGraph for GraphWorld<'_> {
    fn root(&mut self) -> Result<NodeRecord, WorldError> {
        Ok(*self.graph.record(self.graph.root()))
    }

    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError> {
        if !self.graph.contains(id) {
            return Err(WorldError(format!("node {id} is not part of the world")));
        }
        Ok(self.graph.children(id).iter().map(|e| (*self.graph.record(e.to), e.cost)).collect())
    }
}

/// The terminal status a childless nonterminal node takes once expanded:
/// an OR node with no options is unsolvable, an AND node with no obligations
/// is solvable.
pub fn dead_end_status(kind: NodeKind) -> TerminalStatus {
    match kind {
        NodeKind::Or => TerminalStatus::Unsolvable,
        NodeKind::And => TerminalStatus::Solvable,
    }
}

/// Materializes everything reachable from the world's root, breadth-first.
///
/// Nonterminal nodes that expand to nothing become terminal per
/// [`dead_end_status`], so the result has terminal leaves only. Cycles in
/// the world are kept; [`super::validate`] reports them.
pub fn explore_fully<W: ImplicitGraph>(world: &mut W) -> Result<ExplicitGraph, WorldError> {
    let mut g = ExplicitGraph::singleton(world.root()?);
    let mut queue = VecDeque::from([g.root()]);
    while let Some(id) = queue.pop_front() {
        if g.record(id).is_terminal() {
            continue;
        }
        let kids = world.expand(id)?;
        if kids.is_empty() {
            g.set_terminal(id, dead_end_status(g.kind(id)));
            continue;
        }
        for (rec, cost) in kids {
            if g.insert_node(rec.normalized()) {
                queue.push_back(rec.id);
            }
            g.insert_edge(id, rec.id, cost);
        }
    }
    Ok(g)
}
