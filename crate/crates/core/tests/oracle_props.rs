use std::collections::BTreeMap;

use andor_core::generators::{
    alternating_tree, fixture, random_andor_dag, valued_tree, DagParams, FixtureName, TreeParams,
};
use andor_core::graph::{dual, GraphBuilder, NodeId, NodeKind, NodeRecord, Polarity, TerminalStatus};
use andor_core::oracle::{exact_costs, minimal_certificate, negamax, solvability};
use andor_core::{Cost, CostScheme, ExplicitGraph};
use proptest::prelude::*;

fn rebuild(g: &ExplicitGraph, reverse_edges: bool) -> GraphBuilder {
    let mut b = GraphBuilder::new();
    for r in g.records() {
        b.node(*r);
    }
    let mut edges: Vec<_> = g.edges().collect();
    if reverse_edges {
        edges.reverse();
    }
    for (from, to, c) in edges {
        b.edge(from, to, c.value());
    }
    b
}

/// Hangs a solvable terminal under every leaf at edge cost 1, so that the
/// optimal proof cost counts the leaves a proof must examine.
fn with_unit_price_leaves(g: &ExplicitGraph) -> ExplicitGraph {
    let mut b = rebuild(g, false);
    for (next, leaf) in (g.capacity() as u32..).zip(g.leaves()) {
        b.node(NodeRecord::terminal(next, g.kind(leaf).flipped(), TerminalStatus::Solvable));
        b.edge(leaf, next, 1.0);
    }
    b.build(g.root()).unwrap()
}

/// Plain minimax from the OR player's side: OR maximizes, AND minimizes.
fn minimax(g: &ExplicitGraph, n: NodeId, w: &BTreeMap<NodeId, f64>) -> f64 {
    let kids = g.children(n);
    if kids.is_empty() {
        return w[&n];
    }
    let vals = kids.iter().map(|e| minimax(g, e.to, w));
    match g.kind(n) {
        NodeKind::Or => vals.fold(f64::NEG_INFINITY, f64::max),
        NodeKind::And => vals.fold(f64::INFINITY, f64::min),
    }
}

/// Fixed-perspective leaf values turned into side-to-move values.
fn to_move(g: &ExplicitGraph, w: &BTreeMap<NodeId, f64>) -> BTreeMap<NodeId, f64> {
    w.iter().map(|(&id, &v)| (id, if g.kind(id) == NodeKind::Or { v } else { -v })).collect()
}

fn leaf_values(g: &ExplicitGraph) -> BTreeMap<NodeId, f64> {
    g.leaves().map(|l| (l, g.record(l).h.value() - 5.0)).collect()
}

fn all_terminal_dag(seed: u64) -> ExplicitGraph {
    random_andor_dag(&DagParams { n_nodes: 10 + (seed % 30) as usize, seed, ..Default::default() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn optimal_cost_counts_certificate_leaves_on_trees(
        depth in 1usize..=4,
        branching in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let g = alternating_tree(&TreeParams { depth, branching, terminal_prob: 0.0, seed, ..Default::default() }).unwrap();
        prop_assume!(g.leaves().count() <= 20);
        let priced = with_unit_price_leaves(&g);
        let h = exact_costs(&priced, CostScheme::Sum).unwrap().hstar[&g.root()];
        prop_assert_eq!(h.value() as usize, minimal_certificate(&g, Polarity::Solvable).unwrap());
    }

    #[test]
    fn disproof_cost_is_proof_cost_of_the_dual(seed in any::<u64>(), max in any::<bool>()) {
        let psi = if max { CostScheme::Max } else { CostScheme::Sum };
        let g = all_terminal_dag(seed);
        let a = exact_costs(&g, psi).unwrap();
        let b = exact_costs(&dual(&g), psi).unwrap();
        prop_assert_eq!(a.hbar_star, b.hstar);
    }

    #[test]
    fn solvable_iff_finite_cost(seed in any::<u64>(), max in any::<bool>()) {
        let psi = if max { CostScheme::Max } else { CostScheme::Sum };
        let g = all_terminal_dag(seed);
        let r = exact_costs(&g, psi).unwrap();
        for id in g.ids() {
            prop_assert_eq!(r.solvable[&id], r.hstar[&id].is_finite());
            prop_assert_eq!(r.solvable[&id], r.hbar_star[&id].is_infinite());
        }
    }

    #[test]
    fn certificate_size_ignores_edge_order(depth in 1usize..=4, branching in 1usize..=3, seed in any::<u64>()) {
        let g = alternating_tree(&TreeParams { depth, branching, seed, ..Default::default() }).unwrap();
        prop_assume!(g.leaves().count() <= 16);
        let r = rebuild(&g, true).build(g.root()).unwrap();
        for pol in [Polarity::Solvable, Polarity::Unsolvable] {
            prop_assert_eq!(minimal_certificate(&g, pol).unwrap(), minimal_certificate(&r, pol).unwrap());
        }
    }

    #[test]
    fn negamax_is_minimax(depth in 1usize..=5, branching in 1usize..=3, seed in any::<u64>()) {
        let g = valued_tree(depth, branching, 10.0, seed).unwrap();
        let w = leaf_values(&g);
        let nm = negamax(&g, &to_move(&g, &w)).unwrap();
        prop_assert_eq!(nm, minimax(&g, g.root(), &w));
        // the same game seen by the other player: roles swapped, values negated
        let d = dual(&g);
        let neg: BTreeMap<_, _> = w.iter().map(|(&k, &v)| (k, -v)).collect();
        prop_assert_eq!(negamax(&d, &to_move(&d, &neg)).unwrap(), nm);
        prop_assert_eq!(minimax(&d, d.root(), &neg), -nm);
    }
}

#[test]
fn figure_one_examples() {
    let g = fixture(FixtureName::Fig1Terminalized);
    let r = exact_costs(&g, CostScheme::Sum).unwrap();
    assert_eq!(r.hstar[&g.root()], Cost::ZERO);
    let s = solvability(&g).unwrap();
    assert!(s[&NodeId(0)]);
    assert!(!s[&NodeId(1)]);
    assert_eq!(minimal_certificate(&g, Polarity::Solvable).unwrap(), 1);
    assert_eq!(minimal_certificate(&g, Polarity::Unsolvable).unwrap(), 2);
}

#[test]
fn equal_leaves_alternate_in_sign_with_depth() {
    for depth in 1..=5 {
        let g = valued_tree(depth, 2, 10.0, 3).unwrap();
        let v: BTreeMap<_, _> = g.leaves().map(|l| (l, 2.5)).collect();
        let expected = if depth % 2 == 0 { 2.5 } else { -2.5 };
        assert_eq!(negamax(&g, &v).unwrap(), expected);
    }
}

#[test]
fn oracle_rejects_open_leaves() {
    let g = fixture(FixtureName::Fig1);
    assert!(exact_costs(&g, CostScheme::Sum).is_err());
    assert!(solvability(&g).is_err());
}
