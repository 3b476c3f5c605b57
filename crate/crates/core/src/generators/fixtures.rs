//! Small hand-built instances with known behavior.
//!
//! * `fig1` — a six-node DAG in which leaf E is shared by an AND parent and
//!   an OR parent; all leaves nonterminal with unit estimates, zero costs.
//! * `fig1_terminalized` — the same shape with E solvable, D and F unsolvable.
//! * `fig3` — two root options, every edge costing 4. The left option is an
//!   AND node over a leaf D with `h = 0` that turns out unsolvable and a leaf
//!   E with `h = 1`; which of the two AO* looks at first decides whether E is
//!   ever expanded.
//! * `fig4` — `fig3` plus disproof estimates that rank D ahead of E.
//! * `fig6` — an all-terminal alternating tree over A…L holding exactly two
//!   proofs, of 6 and 4 nodes.

use std::fmt;
use std::str::FromStr;

use super::GeneratorError;
use crate::cost::Cost;
use crate::graph::{ExplicitGraph, GraphBuilder, NodeId, NodeKind, NodeRecord, TerminalStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureName {
    Fig1,
    Fig1Terminalized,
    Fig3,
    Fig4,
    Fig6,
}

impl FixtureName {
    pub const ALL: [FixtureName; 5] =
        [FixtureName::Fig1, FixtureName::Fig1Terminalized, FixtureName::Fig3, FixtureName::Fig4, FixtureName::Fig6];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Fig1 => "fig1",
            FixtureName::Fig1Terminalized => "fig1_terminalized",
            FixtureName::Fig3 => "fig3",
            FixtureName::Fig4 => "fig4",
            FixtureName::Fig6 => "fig6",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureName {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FixtureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| GeneratorError::UnknownFixture(s.to_string()))
    }
}

pub mod fig1 {
    use crate::graph::NodeId;

    pub const A: NodeId = NodeId(0);
    pub const B: NodeId = NodeId(1);
    pub const C: NodeId = NodeId(2);
    pub const D: NodeId = NodeId(3);
    pub const E: NodeId = NodeId(4);
    pub const F: NodeId = NodeId(5);
}

/// Ids shared by `fig3` and `fig4`. `D1`, `E1`, `G1`, `H1` are the terminal
/// children revealed when the corresponding leaf is expanded.
pub mod fig3 {
    use crate::graph::NodeId;

    pub const A: NodeId = NodeId(0);
    pub const B: NodeId = NodeId(1);
    pub const C: NodeId = NodeId(2);
    pub const D: NodeId = NodeId(3);
    pub const E: NodeId = NodeId(4);
    pub const G: NodeId = NodeId(5);
    pub const H: NodeId = NodeId(6);
    pub const D1: NodeId = NodeId(7);
    pub const E1: NodeId = NodeId(8);
    pub const G1: NodeId = NodeId(9);
    pub const H1: NodeId = NodeId(10);
}

pub use fig3 as fig4;

pub mod fig6 {
    use crate::graph::NodeId;

    pub const A: NodeId = NodeId(0);
    pub const B: NodeId = NodeId(1);
    pub const C: NodeId = NodeId(2);
    pub const D: NodeId = NodeId(3);
    pub const E: NodeId = NodeId(4);
    pub const F: NodeId = NodeId(5);
    pub const G: NodeId = NodeId(6);
    pub const H: NodeId = NodeId(7);
    pub const I: NodeId = NodeId(8);
    pub const J: NodeId = NodeId(9);
    pub const K: NodeId = NodeId(10);
    pub const L: NodeId = NodeId(11);
}

pub fn fixture(name: FixtureName) -> ExplicitGraph {
    match name {
        FixtureName::Fig1 => figure_one(None),
        FixtureName::Fig1Terminalized => {
            figure_one(Some([TerminalStatus::Unsolvable, TerminalStatus::Solvable, TerminalStatus::Unsolvable]))
        }
        FixtureName::Fig3 => figure_three(false),
        FixtureName::Fig4 => figure_three(true),
        FixtureName::Fig6 => figure_six(),
    }
}

pub fn fixture_by_name(name: &str) -> Result<ExplicitGraph, GeneratorError> {
    Ok(fixture(name.parse()?))
}

fn figure_one(leaves: Option<[TerminalStatus; 3]>) -> ExplicitGraph {
    use fig1::*;
    let mut b = GraphBuilder::new();
    b.node(NodeRecord::unit(A, NodeKind::Or))
        .node(NodeRecord::unit(B, NodeKind::And))
        .node(NodeRecord::unit(C, NodeKind::Or));
    for (i, id) in [D, E, F].into_iter().enumerate() {
        b.node(match leaves {
            Some(status) => NodeRecord::terminal(id, NodeKind::Or, status[i]),
            None => NodeRecord::unit(id, NodeKind::Or),
        });
    }
    b.edge(A, B, 0.0).edge(A, C, 0.0).edge(B, D, 0.0).edge(B, E, 0.0).edge(C, E, 0.0).edge(C, F, 0.0);
    b.build(A).expect("fixture is well formed")
}

fn figure_three(with_disproof_estimates: bool) -> ExplicitGraph {
    use fig3::*;
    let est = |h: f64, hbar: f64| {
        let hbar = if with_disproof_estimates { hbar } else { 1.0 };
        (Cost::new(h).unwrap(), Cost::new(hbar).unwrap())
    };
    let node = |id: NodeId, kind: NodeKind, (h, hbar): (Cost, Cost)| NodeRecord::nonterminal(id, kind, h, hbar);
    let mut b = GraphBuilder::new();
    b.node(node(A, NodeKind::Or, est(8.0, 4.0)))
        .node(node(B, NodeKind::And, est(8.0, 8.0)))
        .node(node(C, NodeKind::And, est(14.0, 4.0)))
        .node(node(D, NodeKind::Or, est(0.0, 2.0)))
        .node(node(E, NodeKind::Or, est(1.0, 5.0)))
        .node(node(G, NodeKind::Or, est(4.0, 4.0)))
        .node(node(H, NodeKind::Or, est(4.0, 4.0)))
        .node(NodeRecord::terminal(D1, NodeKind::And, TerminalStatus::Unsolvable))
        .node(NodeRecord::terminal(E1, NodeKind::And, TerminalStatus::Solvable))
        .node(NodeRecord::terminal(G1, NodeKind::And, TerminalStatus::Solvable))
        .node(NodeRecord::terminal(H1, NodeKind::And, TerminalStatus::Solvable));
    for (from, to) in [(A, B), (A, C), (B, D), (B, E), (C, G), (C, H), (D, D1), (E, E1), (G, G1), (H, H1)] {
        b.edge(from, to, 4.0);
    }
    b.build(A).expect("fixture is well formed")
}

fn figure_six() -> ExplicitGraph {
    use fig6::*;
    use TerminalStatus::{Solvable as S, Unsolvable as U};
    let mut b = GraphBuilder::new();
    b.node(NodeRecord::unit(A, NodeKind::Or))
        .node(NodeRecord::unit(B, NodeKind::And))
        .node(NodeRecord::unit(C, NodeKind::And))
        .node(NodeRecord::unit(D, NodeKind::Or))
        .node(NodeRecord::unit(E, NodeKind::Or))
        .node(NodeRecord::terminal(F, NodeKind::Or, S))
        .node(NodeRecord::terminal(G, NodeKind::Or, S));
    for (id, status) in [(H, U), (I, S), (J, U), (K, U), (L, S)] {
        b.node(NodeRecord::terminal(id, NodeKind::And, status));
    }
    for (from, to) in [(A, B), (A, C), (B, D), (B, E), (C, F), (C, G), (D, H), (D, I), (E, J), (E, K), (E, L)] {
        b.edge(from, to, 0.0);
    }
    b.build(A).expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate;

    #[test]
    fn names_round_trip() {
        for name in FixtureName::ALL {
            assert_eq!(name.as_str().parse::<FixtureName>().unwrap(), name);
            assert!(validate(&fixture(name)).is_empty(), "{name}");
        }
        assert!(matches!("fig2".parse::<FixtureName>(), Err(GeneratorError::UnknownFixture(_))));
    }

    #[test]
    fn figure_three_constraints() {
        let g = fixture(FixtureName::Fig3);
        assert!(g.edges().all(|(_, _, c)| c == Cost::new(4.0).unwrap()));
        // D looks cheaper than E but is the one that fails.
        assert!(g.record(fig3::D).h < g.record(fig3::E).h);
        assert_eq!(g.children(fig3::D)[0].to, fig3::D1);
        assert_eq!(g.terminal(fig3::D1), TerminalStatus::Unsolvable);
        assert_eq!(g.terminal(fig3::E1), TerminalStatus::Solvable);
    }

    #[test]
    fn figure_four_disproof_estimates_within_range() {
        let g = fixture(FixtureName::Fig4);
        let d = g.record(fig4::D).hbar.value();
        let e = g.record(fig4::E).hbar.value();
        assert!((0.0..=4.0).contains(&d));
        assert!(d < e);
        // the proof side is untouched
        let g3 = fixture(FixtureName::Fig3);
        assert!(g.records().zip(g3.records()).all(|(a, b)| a.h == b.h));
    }

    #[test]
    fn figure_six_alternates() {
        let g = fixture(FixtureName::Fig6);
        assert_eq!(g.len(), 12);
        for (from, to, _) in g.edges() {
            assert_ne!(g.kind(from), g.kind(to));
        }
        assert!(g.leaves().all(|l| g.terminal(l).is_terminal()));
    }
}
