use std::path::PathBuf;

use andor_core::generators::{
    alternating_tree, fixture, random_andor_dag, tictactoe, DagParams, FixtureName, HeuristicMode, Objective,
    TreeParams,
};
use andor_core::graph::{from_json, to_json, validate};
use andor_core::oracle::exact_costs;
use andor_core::{CostScheme, ImplicitGraph, NodeKind};
use proptest::prelude::*;

fn fixture_file(name: FixtureName) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

#[test]
fn shipped_fixture_files_match_the_constructors() {
    for name in FixtureName::ALL {
        let text = std::fs::read_to_string(fixture_file(name)).unwrap();
        let g = from_json(&text).unwrap();
        assert_eq!(g, fixture(name), "{name}");
        assert!(validate(&g).is_empty());
    }
}

#[test]
fn estimates_are_admissible_on_a_hundred_dags() {
    for seed in 0..100u64 {
        for psi in [CostScheme::Sum, CostScheme::Max] {
            let g = random_andor_dag(&DagParams {
                heuristic_mode: HeuristicMode::OracleAdmissible { noise: 0.25 },
                psi,
                seed,
                ..Default::default()
            })
            .unwrap();
            let exact = exact_costs(&g, psi).unwrap();
            for r in g.records().filter(|r| !r.is_terminal()) {
                assert!(r.h <= exact.hstar[&r.id], "seed {seed} node {}", r.id);
                assert!(r.hbar <= exact.hbar_star[&r.id], "seed {seed} node {}", r.id);
            }
        }
    }
}

#[test]
fn tictactoe_expansion_is_pure() {
    let mut a = tictactoe(Objective::FirstPlayerWins);
    let mut b = tictactoe(Objective::FirstPlayerWins);
    let root = a.root().unwrap();
    assert_eq!(root.kind, NodeKind::Or);
    let first = a.expand(root.id).unwrap();
    assert_eq!(first.len(), 9);
    b.root().unwrap();
    // b discovers the boards in a different order first
    for (r, _) in b.expand(root.id).unwrap().into_iter().rev() {
        b.expand(r.id).unwrap();
    }
    assert_eq!(a.expand(root.id).unwrap(), first);
    for (r, _) in &first {
        assert_eq!(a.expand(r.id).unwrap(), a.expand(r.id).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dags_are_valid_and_round_trip(
        seed in any::<u64>(),
        extra in 0usize..80,
        layers in 2usize..8,
        or_fraction in 0.0..=1.0f64,
        max_children in 1usize..5,
        tf in 0.0..=1.0f64,
    ) {
        let p = DagParams { n_nodes: layers + extra, layers, or_fraction, max_children, terminal_fraction: tf, seed, ..Default::default() };
        let g = random_andor_dag(&p).unwrap();
        prop_assert!(validate(&g).is_empty());
        let text = to_json(&g).unwrap();
        prop_assert_eq!(from_json(&text).unwrap(), g.clone());
        prop_assert_eq!(to_json(&random_andor_dag(&p).unwrap()).unwrap(), text);
        if tf == 1.0 {
            prop_assert!(g.leaves().all(|l| g.terminal(l).is_terminal()));
        }
    }

    #[test]
    fn trees_alternate(depth in 1usize..6, branching in 1usize..4, seed in any::<u64>()) {
        let g = alternating_tree(&TreeParams { depth, branching, seed, ..Default::default() }).unwrap();
        prop_assert!(validate(&g).is_empty());
        for (from, to, _) in g.edges() {
            prop_assert_ne!(g.kind(from), g.kind(to));
        }
        prop_assert_eq!(from_json(&to_json(&g).unwrap()).unwrap(), g);
    }
}
