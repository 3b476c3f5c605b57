//! The on-disk graph format.
//!
//! ```json
//! { "root": 0,
//!   "nodes": [ {"id": 0, "kind": "or", "terminal": null, "h": 4.0, "hbar": 4.0} ],
//!   "edges": [ {"from": 0, "to": 1, "cost": 4.0} ] }
//! ```
//!
//! `h`/`hbar` default to 1.0 and `cost` to 0.0. Terminals carry no estimates.
//! The order of `edges` is the child order.

use serde::{Deserialize, Serialize};

use super::{ExplicitGraph, GraphBuilder, GraphError, NodeId, NodeKind, NodeRecord, TerminalStatus};
use crate::cost::Cost;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub root: u32,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerminalEntry {
    Solvable,
    Unsolvable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub id: u32,
    pub kind: NodeKind,
    #[serde(default)]
    pub terminal: Option<TerminalEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: u32,
    pub to: u32,
    #[serde(default)]
    pub cost: f64,
}

impl GraphFile {
    pub fn from_graph(g: &ExplicitGraph) -> Result<Self, GraphError> {
        let nodes = g
            .records()
            .map(|r| {
                let terminal = match r.terminal {
                    TerminalStatus::Solvable => Some(TerminalEntry::Solvable),
                    TerminalStatus::Unsolvable => Some(TerminalEntry::Unsolvable),
                    TerminalStatus::Nonterminal => None,
                };
                let (h, hbar) = if terminal.is_some() {
                    (None, None)
                } else {
                    if !(r.h.is_finite() && r.hbar.is_finite()) {
                        return Err(GraphError::NonFiniteHeuristic(r.id));
                    }
                    (Some(r.h.value()), Some(r.hbar.value()))
                };
                Ok(NodeEntry { id: r.id.0, kind: r.kind, terminal, h, hbar })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let edges =
            g.edges().map(|(from, to, cost)| EdgeEntry { from: from.0, to: to.0, cost: cost.value() }).collect();
        Ok(GraphFile { root: g.root().0, nodes, edges })
    }

    pub fn into_graph(self) -> Result<ExplicitGraph, GraphError> {
        let mut b = GraphBuilder::new();
        for n in &self.nodes {
            let record = match n.terminal {
                Some(TerminalEntry::Solvable) => NodeRecord::terminal(n.id, n.kind, TerminalStatus::Solvable),
                Some(TerminalEntry::Unsolvable) => NodeRecord::terminal(n.id, n.kind, TerminalStatus::Unsolvable),
                None => {
                    let est = |v: Option<f64>| match v {
                        None => Ok(Cost::ONE),
                        Some(x) => Cost::new(x).ok_or(GraphError::InvalidHeuristic(NodeId(n.id))),
                    };
                    NodeRecord::nonterminal(n.id, n.kind, est(n.h)?, est(n.hbar)?)
                }
            };
            b.node(record);
        }
        for e in &self.edges {
            b.edge(e.from, e.to, e.cost);
        }
        b.build(self.root)
    }
}

/// Parses and checks a graph file.
pub fn from_json(text: &str) -> Result<ExplicitGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
    file.into_graph()
}

/// Pretty-printed graph file. Fails if a nonterminal carries an infinite estimate.
pub fn to_json(g: &ExplicitGraph) -> Result<String, GraphError> {
    let file = GraphFile::from_graph(g)?;
    Ok(serde_json::to_string_pretty(&file).expect("graph files always serialize"))
}
