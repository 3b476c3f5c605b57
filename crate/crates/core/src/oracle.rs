//! Brute-force ground truth on fully materialized graphs.
//!
//! Nothing here shares traversal code with [`crate::calculus`]: values are
//! computed by memoized depth-first recursion with explicit cycle detection,
//! so agreement between the two is a real check.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cost::{Cost, CostScheme};
use crate::graph::{dual, ExplicitGraph, NodeId, NodeKind, Polarity, TerminalStatus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("leaf {0} is not terminal")]
    NonterminalLeaf(NodeId),
    #[error("graph contains a cycle through node {0}")]
    CyclicGraph(NodeId),
    #[error("{count} leaves exceed the subset-enumeration limit of {limit}")]
    TooManyLeaves { count: usize, limit: usize },
    #[error("edge {from} -> {to} joins two nodes of the same kind")]
    NotAlternating { from: NodeId, to: NodeId },
    #[error("leaf {0} has no value")]
    MissingLeafValue(NodeId),
}

/// Exact optimal costs of every node.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    /// Optimal proof cost; `∞` for unsolvable nodes.
    pub hstar: BTreeMap<NodeId, Cost>,
    /// Optimal disproof cost, i.e. the optimal proof cost in the dual graph.
    pub hbar_star: BTreeMap<NodeId, Cost>,
    pub solvable: BTreeMap<NodeId, bool>,
}

#[derive(Clone, Copy, PartialEq)]
enum Mark<T> {
    Fresh,
    Open,
    Done(T),
}

type Fold<'a, T> = &'a dyn Fn(NodeId, &[(Cost, T)]) -> T;

/// Memoized post-order evaluation of every node with cycle detection.
/// `leaf` maps a leaf to its value (or an error), `inner` folds a node's
/// kind and `(edge cost, child value)` pairs.
fn evaluate_all<T: Copy>(
    g: &ExplicitGraph,
    leaf: &dyn Fn(NodeId) -> Result<T, OracleError>,
    inner: Fold<'_, T>,
) -> Result<BTreeMap<NodeId, T>, OracleError> {
    fn visit<T: Copy>(
        g: &ExplicitGraph,
        id: NodeId,
        marks: &mut Vec<Mark<T>>,
        leaf: &dyn Fn(NodeId) -> Result<T, OracleError>,
        inner: Fold<'_, T>,
    ) -> Result<T, OracleError> {
        match marks[id.index()] {
            Mark::Done(v) => return Ok(v),
            Mark::Open => return Err(OracleError::CyclicGraph(id)),
            Mark::Fresh => {}
        }
        marks[id.index()] = Mark::Open;
        let kids = g.children(id);
        let value = if kids.is_empty() {
            leaf(id)?
        } else {
            let mut terms = Vec::with_capacity(kids.len());
            for e in kids {
                terms.push((e.cost, visit(g, e.to, marks, leaf, inner)?));
            }
            inner(id, &terms)
        };
        marks[id.index()] = Mark::Done(value);
        Ok(value)
    }

    let mut marks = vec![Mark::Fresh; g.capacity()];
    let mut out = BTreeMap::new();
    for id in g.ids() {
        out.insert(id, visit(g, id, &mut marks, leaf, inner)?);
    }
    Ok(out)
}

fn terminal_leaf(g: &ExplicitGraph, id: NodeId) -> Result<TerminalStatus, OracleError> {
    match g.terminal(id) {
        TerminalStatus::Nonterminal => Err(OracleError::NonterminalLeaf(id)),
        status => Ok(status),
    }
}

fn optimal_costs(g: &ExplicitGraph, psi: CostScheme) -> Result<BTreeMap<NodeId, Cost>, OracleError> {
    evaluate_all(
        g,
        &|id| {
            Ok(match terminal_leaf(g, id)? {
                TerminalStatus::Solvable => Cost::ZERO,
                _ => Cost::INFINITY,
            })
        },
        &|id, terms| {
            let with_edges = terms.iter().map(|&(c, v)| c + v);
            match g.kind(id) {
                NodeKind::Or => with_edges.min().unwrap_or(Cost::INFINITY),
                NodeKind::And => match psi {
                    CostScheme::Sum => with_edges.fold(Cost::ZERO, |a, b| a + b),
                    CostScheme::Max => with_edges.fold(Cost::ZERO, Cost::max),
                },
            }
        },
    )
}

/// Optimal proof and disproof costs of every node. Shared descendants are
/// paid for once per path, as in the tree unfolding of the graph.
pub fn exact_costs(g: &ExplicitGraph, psi: CostScheme) -> Result<OracleReport, OracleError> {
    let hstar = optimal_costs(g, psi)?;
    let hbar_star = optimal_costs(&dual(g), psi)?;
    let solvable = solvability(g)?;
    Ok(OracleReport { hstar, hbar_star, solvable })
}

/// Boolean solvability: OR nodes need one solvable child, AND nodes all.
pub fn solvability(g: &ExplicitGraph) -> Result<BTreeMap<NodeId, bool>, OracleError> {
    evaluate_all(g, &|id| Ok(terminal_leaf(g, id)? == TerminalStatus::Solvable), &|id, terms| match g.kind(id) {
        NodeKind::Or => terms.iter().any(|&(_, v)| v),
        NodeKind::And => terms.iter().all(|&(_, v)| v),
    })
}

/// Largest leaf count [`minimal_certificate`] will enumerate.
pub const CERTIFICATE_LEAF_LIMIT: usize = 20;

/// Size of the smallest set of leaves that, once known to carry the status
/// matching `polarity` (every other leaf unknown), determines the root's
/// status to be `polarity`.
///
/// Leaves are taken as what could be examined, so the statuses stored in
/// `g` are not consulted. Subsets are enumerated by increasing size.
pub fn minimal_certificate(g: &ExplicitGraph, polarity: Polarity) -> Result<usize, OracleError> {
    // Leaves reachable from the root, in a fixed order.
    let mut leaves: Vec<NodeId> = Vec::new();
    let mut seen = vec![false; g.capacity()];
    let mut stack = vec![g.root()];
    while let Some(n) = stack.pop() {
        if std::mem::replace(&mut seen[n.index()], true) {
            continue;
        }
        if g.is_leaf(n) {
            leaves.push(n);
        }
        stack.extend(g.children(n).iter().map(|e| e.to));
    }
    leaves.sort();
    let count = leaves.len();
    if count > CERTIFICATE_LEAF_LIMIT {
        return Err(OracleError::TooManyLeaves { count, limit: CERTIFICATE_LEAF_LIMIT });
    }
    let mut slot = vec![usize::MAX; g.capacity()];
    for (i, l) in leaves.iter().enumerate() {
        slot[l.index()] = i;
    }
    let want = polarity == Polarity::Solvable;

    // Three-valued: Some(status) when forced, None when unknown.
    let forces_root = |mask: u32| -> Result<bool, OracleError> {
        let values = evaluate_all(
            g,
            &|id| {
                let i = slot[id.index()];
                Ok((i != usize::MAX && mask & (1 << i) != 0).then_some(want))
            },
            &|id, terms| {
                let vals = terms.iter().map(|&(_, v)| v);
                let (decisive, other) = match g.kind(id) {
                    NodeKind::Or => (true, false),
                    NodeKind::And => (false, true),
                };
                let mut all_other = true;
                for v in vals {
                    if v == Some(decisive) {
                        return Some(decisive);
                    }
                    all_other &= v == Some(other);
                }
                all_other.then_some(other)
            },
        )?;
        Ok(values[&g.root()] == Some(want))
    };

    for k in 0..=count {
        if k == 0 {
            if forces_root(0)? {
                return Ok(0);
            }
            continue;
        }
        // Gosper's hack: every `count`-bit mask with exactly `k` bits set.
        let mut mask: u32 = (1 << k) - 1;
        while mask < (1u32 << count) {
            if forces_root(mask)? {
                return Ok(k);
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    unreachable!("setting every leaf always forces the root")
}

/// Negamax value of the root of a strictly alternating game graph.
///
/// `leaf_values` holds each leaf's value from the point of view of the side
/// to move at that leaf; an inner node's value is the maximum of its
/// children's negated values.
pub fn negamax(g: &ExplicitGraph, leaf_values: &BTreeMap<NodeId, f64>) -> Result<f64, OracleError> {
    for (from, to, _) in g.edges() {
        if g.kind(from) == g.kind(to) {
            return Err(OracleError::NotAlternating { from, to });
        }
    }
    let values =
        evaluate_all(g, &|id| leaf_values.get(&id).copied().ok_or(OracleError::MissingLeafValue(id)), &|_, terms| {
            terms.iter().map(|&(_, v)| -v).fold(f64::NEG_INFINITY, f64::max)
        })?;
    Ok(values[&g.root()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fig1, fixture, FixtureName};
    use crate::graph::{GraphBuilder, NodeRecord};

    fn c(v: f64) -> Cost {
        Cost::new(v).unwrap()
    }

    fn fig1_with(d: TerminalStatus, e: TerminalStatus, f: TerminalStatus) -> ExplicitGraph {
        let g = fixture(FixtureName::Fig1);
        let mut b = GraphBuilder::new();
        for r in g.records() {
            let status = match r.id {
                x if x == fig1::D => Some(d),
                x if x == fig1::E => Some(e),
                x if x == fig1::F => Some(f),
                _ => None,
            };
            b.node(status.map_or(*r, |s| NodeRecord::terminal(r.id, r.kind, s)));
        }
        for (from, to, cost) in g.edges() {
            b.edge(from, to, cost.value());
        }
        b.build(g.root()).unwrap()
    }

    use TerminalStatus::{Solvable as S, Unsolvable as U};

    #[test]
    fn figure_one_costs() {
        let g = fig1_with(S, S, U);
        let r = exact_costs(&g, CostScheme::Sum).unwrap();
        assert_eq!(r.hstar[&fig1::A], Cost::ZERO);
        assert!(r.solvable[&fig1::A]);
        assert_eq!(r.hbar_star[&fig1::F], Cost::ZERO);
        assert_eq!(r.hbar_star[&fig1::A], Cost::INFINITY);
    }

    #[test]
    fn all_unsolvable() {
        let g = fig1_with(U, U, U);
        let r = exact_costs(&g, CostScheme::Sum).unwrap();
        assert_eq!(r.hstar[&fig1::A], Cost::INFINITY);
        assert!(!r.solvable[&fig1::A]);
    }

    #[test]
    fn additive_chain() {
        let mut b = GraphBuilder::new();
        b.node(NodeRecord::unit(0, NodeKind::Or))
            .node(NodeRecord::unit(1, NodeKind::Or))
            .node(NodeRecord::terminal(2, NodeKind::Or, S))
            .edge(0, 1, 4.0)
            .edge(1, 2, 4.0);
        let r = exact_costs(&b.build(0).unwrap(), CostScheme::Sum).unwrap();
        assert_eq!(r.hstar[&NodeId(0)], c(8.0));
    }

    #[test]
    fn nonterminal_leaf_and_cycle_errors() {
        let g = fixture(FixtureName::Fig1);
        assert!(matches!(exact_costs(&g, CostScheme::Sum), Err(OracleError::NonterminalLeaf(_))));
        let mut b = GraphBuilder::new();
        b.node(NodeRecord::unit(0, NodeKind::Or))
            .node(NodeRecord::unit(1, NodeKind::And))
            .edge(0, 1, 0.0)
            .edge(1, 0, 0.0);
        assert!(matches!(solvability(&b.build(0).unwrap()), Err(OracleError::CyclicGraph(_))));
    }

    #[test]
    fn figure_one_solvability() {
        let only_e = fig1_with(U, S, U);
        let s = solvability(&only_e).unwrap();
        assert!(s[&fig1::A]);
        assert!(!s[&fig1::B]);
        let d_only = fig1_with(S, U, U);
        assert!(!solvability(&d_only).unwrap()[&fig1::A]);
    }

    #[test]
    fn figure_one_certificates() {
        let g = fixture(FixtureName::Fig1Terminalized);
        assert_eq!(minimal_certificate(&g, Polarity::Solvable), Ok(1));
        assert_eq!(minimal_certificate(&g, Polarity::Unsolvable), Ok(2));
        // statuses are not consulted
        let g = fixture(FixtureName::Fig1);
        assert_eq!(minimal_certificate(&g, Polarity::Solvable), Ok(1));
        assert_eq!(minimal_certificate(&g, Polarity::Unsolvable), Ok(2));
    }

    #[test]
    fn single_node_certificate() {
        let mut b = GraphBuilder::new();
        b.node(NodeRecord::terminal(0, NodeKind::Or, S));
        assert_eq!(minimal_certificate(&b.build(0).unwrap(), Polarity::Solvable), Ok(1));
    }

    #[test]
    fn too_many_leaves() {
        let mut b = GraphBuilder::new();
        b.node(NodeRecord::unit(0, NodeKind::Or));
        for i in 1..=21 {
            b.node(NodeRecord::terminal(i, NodeKind::And, S)).edge(0, i, 0.0);
        }
        assert_eq!(
            minimal_certificate(&b.build(0).unwrap(), Polarity::Solvable),
            Err(OracleError::TooManyLeaves { count: 21, limit: 20 })
        );
    }

    #[test]
    fn one_ply_negamax() {
        let mut b = GraphBuilder::new();
        b.node(NodeRecord::unit(0, NodeKind::Or))
            .node(NodeRecord::unit(1, NodeKind::And))
            .node(NodeRecord::unit(2, NodeKind::And))
            .edge(0, 1, 0.0)
            .edge(0, 2, 0.0);
        let g = b.build(0).unwrap();
        let vals = BTreeMap::from([(NodeId(1), -3.0), (NodeId(2), 5.0)]);
        assert_eq!(negamax(&g, &vals), Ok(3.0));
        assert_eq!(negamax(&g, &BTreeMap::from([(NodeId(1), 1.0)])), Err(OracleError::MissingLeafValue(NodeId(2))));
    }

    #[test]
    fn negamax_requires_alternation() {
        let g = fixture(FixtureName::Fig1);
        assert!(matches!(negamax(&g, &BTreeMap::new()), Err(OracleError::NotAlternating { .. })));
    }

    #[test]
    fn equal_leaves_flip_with_depth_parity() {
        for depth in 1..=4 {
            let g = crate::generators::valued_tree(depth, 2, 0.0, 0).unwrap();
            let vals = g.leaves().map(|l| (l, 2.5)).collect();
            let expected = if depth % 2 == 0 { 2.5 } else { -2.5 };
            assert_eq!(negamax(&g, &vals), Ok(expected));
        }
    }
}
