//! Proof number search on integer proof/disproof numbers.
//!
//! This engine keeps its own saturating `u64` numbers and its own update
//! loop rather than reusing the dual table machinery, so its agreement with
//! PNS* on unit instances is an independent check.

use std::collections::VecDeque;

use super::base::extract_certificate;
use super::{
    expand_into, NoObserver, Observer, RootValue, SearchError, SearchOutcome, SearchParams, SearchStats, SearchStatus,
    TraceStep,
};
use crate::calculus::{Label, PdValue, ValueTable};
use crate::cost::Cost;
use crate::graph::{ExplicitGraph, ImplicitGraph, NodeId, NodeKind, Polarity, TerminalStatus};

const INF: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Numbers {
    pn: u64,
    dn: u64,
}

fn as_cost(n: u64) -> Cost {
    if n == INF {
        Cost::INFINITY
    } else {
        Cost::new(n as f64).unwrap()
    }
}

impl Numbers {
    fn pd(self) -> PdValue {
        PdValue::new(as_cost(self.pn), as_cost(self.dn))
    }

    fn label(self) -> Label {
        if self.pn == 0 {
            Label::Solved
        } else if self.dn == 0 {
            Label::Disproved
        } else {
            Label::Unknown
        }
    }
}

struct Pns {
    g: ExplicitGraph,
    nums: Vec<Numbers>,
}

impl Pns {
    fn get(&self, id: NodeId) -> Numbers {
        self.nums[id.index()]
    }

    fn compute(&self, id: NodeId) -> Numbers {
        let kids = self.g.children(id);
        if kids.is_empty() {
            return match self.g.terminal(id) {
                TerminalStatus::Solvable => Numbers { pn: 0, dn: INF },
                TerminalStatus::Unsolvable => Numbers { pn: INF, dn: 0 },
                TerminalStatus::Nonterminal => Numbers { pn: 1, dn: 1 },
            };
        }
        let min = |f: fn(Numbers) -> u64| kids.iter().map(|e| f(self.get(e.to))).min().unwrap();
        let sum = |f: fn(Numbers) -> u64| kids.iter().fold(0u64, |acc, e| acc.saturating_add(f(self.get(e.to))));
        match self.g.kind(id) {
            NodeKind::Or => Numbers { pn: min(|n| n.pn), dn: sum(|n| n.dn) },
            NodeKind::And => Numbers { pn: sum(|n| n.pn), dn: min(|n| n.dn) },
        }
    }

    /// Most-proving node: the minimum `pn` child at OR nodes, the minimum
    /// `dn` child at AND nodes.
    fn most_proving(&self, params: &SearchParams) -> NodeId {
        let mut n = self.g.root();
        while !self.g.is_leaf(n) {
            let kids = self.g.children(n);
            let key = |id: NodeId| match self.g.kind(n) {
                NodeKind::Or => self.get(id).pn,
                NodeKind::And => self.get(id).dn,
            };
            let best = kids.iter().map(|e| key(e.to)).min().unwrap();
            let tied: Vec<NodeId> = kids.iter().map(|e| e.to).filter(|&id| key(id) == best).collect();
            n = tied[params.tie.choose(n, tied.len())];
        }
        n
    }

    /// Recomputes `leaf` and, transitively, every parent whose numbers
    /// change. Returns the number of recomputations.
    fn update(&mut self, leaf: NodeId) -> u64 {
        if self.nums.len() < self.g.capacity() {
            self.nums.resize(self.g.capacity(), Numbers { pn: 1, dn: 1 });
        }
        for e in self.g.children(leaf).to_vec() {
            if self.g.is_leaf(e.to) {
                self.nums[e.to.index()] = self.compute(e.to);
            }
        }
        let mut work = VecDeque::from([leaf]);
        let mut count = 0;
        while let Some(n) = work.pop_front() {
            count += 1;
            let new = self.compute(n);
            if new != self.get(n) || n == leaf {
                self.nums[n.index()] = new;
                work.extend(self.g.parents(n).iter().copied());
            }
        }
        count
    }

    fn table(&self) -> ValueTable {
        ValueTable::unit_from_entries(
            self.g.capacity(),
            self.g.ids().map(|id| (id, self.get(id).pd(), self.get(id).label())),
        )
    }
}

/// Proof number search. Estimates and edge costs of the world are ignored:
/// new leaves start at `(1, 1)`, terminals at `(0, ∞)` or `(∞, 0)`.
pub fn pns<W: ImplicitGraph>(world: W, params: &SearchParams) -> Result<SearchOutcome, SearchError> {
    pns_observed(world, params, &mut NoObserver)
}

/// [`pns`] with hooks. The observer sees the numbers as a unit dual table.
pub fn pns_observed<W: ImplicitGraph, O: Observer + ?Sized>(
    mut world: W,
    params: &SearchParams,
    observer: &mut O,
) -> Result<SearchOutcome, SearchError> {
    let g = ExplicitGraph::singleton(world.root()?.normalized());
    let root = g.root();
    let mut s = Pns { nums: vec![Numbers { pn: 1, dn: 1 }; g.capacity()], g };
    s.nums[root.index()] = s.compute(root);
    let mut stats = SearchStats { nodes_generated: 1, ..Default::default() };
    let mut trace = Vec::new();

    let status = loop {
        let r = s.get(root);
        if r.pn == 0 {
            break SearchStatus::ProvedSolvable;
        }
        if r.dn == 0 {
            break SearchStatus::ProvedUnsolvable;
        }
        if params.budget.exhausted(&stats, s.g.len()) {
            break SearchStatus::ResourceExhausted;
        }
        let leaf = s.most_proving(params);
        if s.g.terminal(leaf).is_terminal() {
            return Err(SearchError::Stalled);
        }
        stats.iterations += 1;
        if observer.active() {
            observer.selected(&s.g, &s.table(), leaf);
        }
        let children = world.expand(leaf)?;
        stats.nodes_generated += expand_into(&mut s.g, leaf, children)?;
        stats.expansions += 1;
        stats.ancestor_updates += s.update(leaf);
        trace.push(TraceStep { iteration: stats.iterations, leaf, root: RootValue::Pd(s.get(root).pd()) });
        if observer.active() {
            observer.updated(&s.g, &s.table());
        }
    };

    let solution = match status {
        SearchStatus::ProvedSolvable => extract_certificate(&s.g, &s.table(), Polarity::Solvable, params.tie),
        SearchStatus::ProvedUnsolvable => extract_certificate(&s.g, &s.table(), Polarity::Unsolvable, params.tie),
        SearchStatus::ResourceExhausted => None,
    };
    Ok(SearchOutcome { status, root_value: RootValue::Pd(s.get(root).pd()), solution, stats, final_graph: s.g, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::phi_delta_unit;
    use crate::generators::{fixture, FixtureName};
    use crate::graph::{validate_solution_graph, GraphBuilder, GraphWorld, NodeRecord};
    use crate::search::Budget;

    #[test]
    fn first_child_wins_after_one_expansion() {
        let mut b = GraphBuilder::new();
        b.node(NodeRecord::unit(0, NodeKind::Or))
            .node(NodeRecord::terminal(1, NodeKind::And, TerminalStatus::Solvable))
            .node(NodeRecord::unit(2, NodeKind::And))
            .edge(0, 1, 0.0)
            .edge(0, 2, 0.0);
        let g = b.build(0).unwrap();
        let out = pns(GraphWorld::new(&g), &SearchParams::default()).unwrap();
        assert_eq!(out.status, SearchStatus::ProvedSolvable);
        assert_eq!(out.stats.expansions, 1);
    }

    #[test]
    fn terminalized_figure_one() {
        let g = fixture(FixtureName::Fig1Terminalized);
        let out = pns(GraphWorld::new(&g), &SearchParams::default()).unwrap();
        assert_eq!(out.status, SearchStatus::ProvedSolvable);
        let proof = out.solution.unwrap();
        assert!(validate_solution_graph(&out.final_graph, &proof).unwrap());
    }

    #[test]
    fn figure_six_disproof_numbers_are_infinite() {
        let g = fixture(FixtureName::Fig6);
        let out = pns(GraphWorld::new(&g), &SearchParams::default()).unwrap();
        assert_eq!(out.status, SearchStatus::ProvedSolvable);
        let RootValue::Pd(pd) = out.root_value else { panic!() };
        assert_eq!(pd.p, Cost::ZERO);
        assert_eq!(pd.d, Cost::INFINITY);
        let t = phi_delta_unit(&out.final_graph).unwrap();
        assert_eq!(t.pd(out.final_graph.root()), Some(pd));
    }

    #[test]
    fn budget_zero() {
        let g = fixture(FixtureName::Fig1);
        let params = SearchParams { budget: Budget::expansions(0), ..Default::default() };
        assert_eq!(pns(GraphWorld::new(&g), &params).unwrap().status, SearchStatus::ResourceExhausted);
    }
}
