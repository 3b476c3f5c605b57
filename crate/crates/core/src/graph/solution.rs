use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{ExplicitGraph, GraphError, NodeId, NodeKind, TerminalStatus};
use crate::cost::{Cost, CostScheme};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Solvable,
    Unsolvable,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Solvable => Polarity::Unsolvable,
            Polarity::Unsolvable => Polarity::Solvable,
        }
    }

    /// The node kind that picks a single child under this polarity: OR nodes
    /// when proving, AND nodes when disproving (they are OR nodes of the dual).
    pub fn chooser(self) -> NodeKind {
        match self {
            Polarity::Solvable => NodeKind::Or,
            Polarity::Unsolvable => NodeKind::And,
        }
    }

    /// The terminal status every leaf of a complete certificate must carry.
    pub fn leaf_status(self) -> TerminalStatus {
        match self {
            Polarity::Solvable => TerminalStatus::Solvable,
            Polarity::Unsolvable => TerminalStatus::Unsolvable,
        }
    }
}

/// A (possibly partial) solution graph.
///
/// `choices` holds the selected child of every non-leaf member that picks a
/// single child under `polarity`; the other members carry all their children.
/// An `Unsolvable` graph is read against the dual of its host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionGraph {
    pub root: NodeId,
    pub polarity: Polarity,
    pub members: BTreeSet<NodeId>,
    pub choices: BTreeMap<NodeId, NodeId>,
}

impl SolutionGraph {
    pub fn singleton(root: NodeId, polarity: Polarity) -> Self {
        SolutionGraph { root, polarity, members: BTreeSet::from([root]), choices: BTreeMap::new() }
    }

    /// Members without children in `g`, in depth-first order from the root
    /// (children visited in declaration order).
    pub fn leaves(&self, g: &ExplicitGraph) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.walk(g, |id, _depth, is_leaf| {
            if is_leaf {
                out.push(id);
            }
        });
        out
    }

    /// Depth-first preorder over the certificate structure. Shared members
    /// are visited once, at their first depth.
    pub fn walk(&self, g: &ExplicitGraph, mut visit: impl FnMut(NodeId, usize, bool)) {
        let chooser = self.polarity.chooser();
        let mut seen = BTreeSet::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            if !seen.insert(id) || !g.contains(id) {
                continue;
            }
            let kids = g.children(id);
            visit(id, depth, kids.is_empty());
            if kids.is_empty() {
                continue;
            }
            if g.kind(id) == chooser {
                if let Some(&c) = self.choices.get(&id) {
                    stack.push((c, depth + 1));
                }
            } else {
                stack.extend(kids.iter().rev().map(|e| (e.to, depth + 1)));
            }
        }
    }

    /// Number of member nodes.
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Checks every certificate invariant of `s` against `g` (or against the
/// dual of `g` for `Unsolvable` polarity).
pub fn validate_solution_graph(g: &ExplicitGraph, s: &SolutionGraph) -> Result<bool, GraphError> {
    if let Some(&bad) = s.members.iter().chain(s.choices.keys()).chain(s.choices.values()).find(|&&id| !g.contains(id))
    {
        return Err(GraphError::UnknownNode(bad));
    }
    if !g.contains(s.root) {
        return Err(GraphError::UnknownNode(s.root));
    }
    if !s.members.contains(&s.root) {
        return Ok(false);
    }
    let chooser = s.polarity.chooser();
    for (&n, &c) in &s.choices {
        if !s.members.contains(&n) || g.kind(n) != chooser {
            return Ok(false);
        }
        if !g.children(n).iter().any(|e| e.to == c) {
            return Ok(false);
        }
    }
    for &m in &s.members {
        let kids = g.children(m);
        if kids.is_empty() {
            if g.terminal(m) != s.polarity.leaf_status() {
                return Ok(false);
            }
        } else if g.kind(m) == chooser {
            match s.choices.get(&m) {
                Some(c) if s.members.contains(c) => {}
                _ => return Ok(false),
            }
        } else if !kids.iter().all(|e| s.members.contains(&e.to)) {
            return Ok(false);
        }
    }
    // Every member must hang off the root through the certificate structure.
    let mut reached = BTreeSet::new();
    s.walk(g, |id, _, _| {
        reached.insert(id);
    });
    Ok(reached == s.members)
}

/// Cost of a complete `Solvable` certificate, evaluated bottom-up over the
/// certificate only. Shared members contribute once per path, matching the
/// tree-unfolded recursion used for optimal costs.
pub fn solution_cost(g: &ExplicitGraph, s: &SolutionGraph, psi: CostScheme) -> Result<Cost, GraphError> {
    if s.polarity != Polarity::Solvable || !validate_solution_graph(g, s)? {
        return Err(GraphError::InvalidSolutionGraph);
    }
    fn eval(
        g: &ExplicitGraph,
        s: &SolutionGraph,
        psi: CostScheme,
        id: NodeId,
        memo: &mut HashMap<NodeId, Cost>,
    ) -> Cost {
        if let Some(&c) = memo.get(&id) {
            return c;
        }
        let kids = g.children(id);
        let value = if kids.is_empty() {
            Cost::ZERO
        } else if g.kind(id) == NodeKind::Or {
            let chosen = s.choices[&id];
            let edge = kids.iter().find(|e| e.to == chosen).unwrap();
            edge.cost + eval(g, s, psi, chosen, memo)
        } else {
            let terms: Vec<Cost> = kids.iter().map(|e| e.cost + eval(g, s, psi, e.to, memo)).collect();
            psi.combine(terms)
        };
        memo.insert(id, value);
        value
    }
    Ok(eval(g, s, psi, s.root, &mut HashMap::new()))
}
