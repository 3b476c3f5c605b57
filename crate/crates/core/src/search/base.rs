//! Solution bases, certificates and the PNS* descent.
//!
//! Child choices use one key everywhere: at a node that picks a single
//! child on the proof side the key is `(c + p, child disproved)`, on the
//! disproof side `(c + d, child solved)`. Equal keys go to the tie-break.
//! Because the descent and both bases share these keys, the descent path
//! lies inside both bases.

use std::collections::{BTreeMap, BTreeSet};

use super::TieBreak;
use crate::calculus::{CalcError, Label, ValueTable};
use crate::cost::Cost;
use crate::graph::{Edge, ExplicitGraph, NodeId, NodeKind, Polarity, SolutionGraph};

fn choose_child<K: Ord + Copy>(
    g: &ExplicitGraph,
    node: NodeId,
    tie: TieBreak,
    key: impl Fn(&Edge) -> Option<K>,
) -> Option<NodeId> {
    let keyed: Vec<(NodeId, K)> = g.children(node).iter().filter_map(|e| key(e).map(|k| (e.to, k))).collect();
    let best = keyed.iter().map(|&(_, k)| k).min()?;
    let tied: Vec<NodeId> = keyed.iter().filter(|&&(_, k)| k == best).map(|&(id, _)| id).collect();
    Some(tied[tie.choose(node, tied.len())])
}

fn require(table: &ValueTable, id: NodeId) -> Result<(), CalcError> {
    if table.contains(id) {
        Ok(())
    } else {
        Err(CalcError::InconsistentTable(format!("node {id} has no entry")))
    }
}

fn proof_key(table: &ValueTable, e: &Edge) -> (Cost, bool) {
    (table.edge_cost(e.cost) + table.proof(e.to), table.label(e.to) == Label::Disproved)
}

fn disproof_key(table: &ValueTable, e: &Edge) -> (Cost, bool) {
    let d = table.disproof(e.to).unwrap_or(Cost::ZERO);
    (table.edge_cost(e.cost) + d, table.label(e.to) == Label::Solved)
}

/// Grows a solution graph from the root: `pick` selects the child of chooser
/// nodes, other inner nodes contribute all their children.
fn grow(
    g: &ExplicitGraph,
    table: &ValueTable,
    polarity: Polarity,
    mut pick: impl FnMut(NodeId) -> Option<NodeId>,
) -> Result<SolutionGraph, CalcError> {
    let chooser = polarity.chooser();
    let mut members = BTreeSet::new();
    let mut choices = BTreeMap::new();
    let mut stack = vec![g.root()];
    while let Some(n) = stack.pop() {
        require(table, n)?;
        if !members.insert(n) || g.is_leaf(n) {
            continue;
        }
        if g.kind(n) == chooser {
            let c = pick(n).ok_or_else(|| CalcError::InconsistentTable(format!("no admissible child at {n}")))?;
            choices.insert(n, c);
            stack.push(c);
        } else {
            stack.extend(g.children(n).iter().rev().map(|e| e.to));
        }
    }
    Ok(SolutionGraph { root: g.root(), polarity, members, choices })
}

/// The base AO* works on: the minimizing child at OR nodes, every child at
/// AND nodes, down to the current leaves.
pub fn select_solution_base(g: &ExplicitGraph, table: &ValueTable, tie: TieBreak) -> Result<SolutionGraph, CalcError> {
    grow(g, table, Polarity::Solvable, |n| choose_child(g, n, tie, |e| Some(proof_key(table, e))))
}

/// The solution base of the dual graph over the `d` values: the minimizing
/// child at AND nodes, every child at OR nodes. Needs a dual table.
pub fn select_dual_base(g: &ExplicitGraph, table: &ValueTable, tie: TieBreak) -> Result<SolutionGraph, CalcError> {
    if table.pd(g.root()).is_none() && table.contains(g.root()) {
        return Err(CalcError::InconsistentTable("disproof side needs a dual table".into()));
    }
    grow(g, table, Polarity::Unsolvable, |n| choose_child(g, n, tie, |e| Some(disproof_key(table, e))))
}

/// A complete certificate for `polarity`, if the root carries the matching
/// label. Chooser nodes only consider children with that label and prefer
/// the cheapest one on the matching side (`d` is read as zero in single
/// tables).
pub fn extract_certificate(
    g: &ExplicitGraph,
    table: &ValueTable,
    polarity: Polarity,
    tie: TieBreak,
) -> Option<SolutionGraph> {
    let wanted = match polarity {
        Polarity::Solvable => Label::Solved,
        Polarity::Unsolvable => Label::Disproved,
    };
    if !table.contains(g.root()) || table.label(g.root()) != wanted {
        return None;
    }
    grow(g, table, polarity, |n| {
        choose_child(g, n, tie, |e| {
            (table.label(e.to) == wanted).then(|| match polarity {
                Polarity::Solvable => proof_key(table, e),
                Polarity::Unsolvable => disproof_key(table, e),
            })
        })
    })
    .ok()
}

/// Walks from the root to a leaf following the minimum `c + p` child at OR
/// nodes and the minimum `c + d` child at AND nodes. From an unlabeled root
/// this always ends at a nonterminal leaf.
pub fn descent(g: &ExplicitGraph, table: &ValueTable, tie: TieBreak) -> Result<NodeId, CalcError> {
    let mut n = g.root();
    loop {
        require(table, n)?;
        if table.pd(n).is_none() {
            return Err(CalcError::InconsistentTable("descent needs a dual table".into()));
        }
        if g.is_leaf(n) {
            return Ok(n);
        }
        n = match g.kind(n) {
            NodeKind::Or => choose_child(g, n, tie, |e| Some(proof_key(table, e))),
            NodeKind::And => choose_child(g, n, tie, |e| Some(disproof_key(table, e))),
        }
        .expect("inner nodes have children");
    }
}

/// Leaves shared by the proof-side base and the disproof-side base, in the
/// proof base's depth-first order.
pub fn common_leaves(g: &ExplicitGraph, table: &ValueTable, tie: TieBreak) -> Result<Vec<NodeId>, CalcError> {
    let proof = select_solution_base(g, table, tie)?;
    let disproof: BTreeSet<NodeId> = select_dual_base(g, table, tie)?.leaves(g).into_iter().collect();
    Ok(proof.leaves(g).into_iter().filter(|l| disproof.contains(l)).collect())
}
