mod common;

use andor_core::calculus::{phi_delta_unit, revise_f, revise_pd, Label};
use andor_core::generators::{alternating_tree, random_andor_dag, DagParams, HeuristicMode, TreeParams};
use andor_core::graph::{dual, validate, GraphWorld, Polarity};
use andor_core::oracle::{exact_costs, minimal_certificate};
use andor_core::search::{ao_star_observed, pns_observed, pns_star_observed, Budget, LeafPick};
use andor_core::{Cost, CostScheme, SearchParams};
use common::{tie_for, FullRecompute};
use proptest::prelude::*;

fn dag(seed: u64, terminal_fraction: f64, mode: HeuristicMode, psi: CostScheme) -> andor_core::ExplicitGraph {
    random_andor_dag(&DagParams {
        n_nodes: 12 + (seed % 30) as usize,
        layers: 3 + (seed % 4) as usize,
        or_fraction: 0.3 + 0.1 * (seed % 5) as f64,
        terminal_fraction,
        heuristic_mode: mode,
        psi,
        seed,
        ..Default::default()
    })
    .unwrap()
}

fn psi_of(bit: bool) -> CostScheme {
    if bit {
        CostScheme::Max
    } else {
        CostScheme::Sum
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dual_is_an_involution(seed in any::<u64>(), tf in 0.0..=1.0f64) {
        let g = dag(seed, tf, HeuristicMode::Unit, CostScheme::Sum);
        let d = dual(&g);
        prop_assert_eq!(dual(&d), g.clone());
        prop_assert_eq!(d.root(), g.root());
        prop_assert_eq!(d.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        prop_assert!(validate(&d).is_empty());
    }

    #[test]
    fn dual_swaps_proof_and_disproof(seed in any::<u64>(), tf in 0.0..=1.0f64, max in any::<bool>()) {
        let psi = psi_of(max);
        let g = dag(seed, tf, HeuristicMode::Unit, psi);
        let t = revise_pd(&g, psi).unwrap();
        let td = revise_pd(&dual(&g), psi).unwrap();
        for id in g.ids() {
            let (a, b) = (t.pd(id).unwrap(), td.pd(id).unwrap());
            prop_assert_eq!((a.p, a.d), (b.d, b.p), "node {}", id);
        }
    }

    #[test]
    fn incremental_tables_match_full_passes(seed in any::<u64>(), tf in 0.3..=1.0f64, max in any::<bool>()) {
        let psi = psi_of(max);
        let g = dag(seed, tf, HeuristicMode::Unit, psi);
        let params = SearchParams {
            psi,
            tie: tie_for(seed),
            pick: LeafPick::AnyRandom(seed),
            budget: Budget::expansions(200),
            ..Default::default()
        };
        let mut obs = FullRecompute::default();
        ao_star_observed(GraphWorld::new(&g), &params, &mut obs).unwrap();
        pns_star_observed(GraphWorld::new(&g), &params, &mut obs).unwrap();
        pns_observed(GraphWorld::new(&g), &params, &mut obs).unwrap();
        prop_assert_eq!(obs.mismatches, 0);
    }

    #[test]
    fn estimates_below_optimum_stay_below(seed in any::<u64>(), noise in 0.0..=1.0f64) {
        let g = dag(seed, 1.0, HeuristicMode::OracleAdmissible { noise }, CostScheme::Sum);
        let exact = exact_costs(&g, CostScheme::Sum).unwrap();
        for id in g.ids() {
            prop_assert!(g.record(id).h <= exact.hstar[&id]);
        }
        // every partial graph met by AO* keeps f below h*
        struct Below<'a> { hstar: &'a std::collections::BTreeMap<andor_core::NodeId, Cost>, bad: usize }
        impl andor_core::search::Observer for Below<'_> {
            fn updated(&mut self, g: &andor_core::ExplicitGraph, t: &andor_core::ValueTable) {
                self.bad += g.ids().filter(|&id| t.f(id).unwrap() > self.hstar[&id]).count();
            }
        }
        let mut obs = Below { hstar: &exact.hstar, bad: 0 };
        ao_star_observed(GraphWorld::new(&g), &SearchParams::default(), &mut obs).unwrap();
        prop_assert_eq!(obs.bad, 0);
        let f = revise_f(&g, CostScheme::Sum).unwrap();
        prop_assert_eq!(f.f(g.root()), Some(exact.hstar[&g.root()]));
    }

    #[test]
    fn labels_agree_with_unit_numbers(seed in any::<u64>(), tf in 0.0..=1.0f64, max in any::<bool>()) {
        let psi = psi_of(max);
        let g = dag(seed, tf, HeuristicMode::Unit, psi);
        let unit = phi_delta_unit(&g).unwrap();
        for t in [revise_pd(&g, psi).unwrap(), revise_f(&g, psi).unwrap(), unit.clone()] {
            for id in g.ids() {
                let pd = unit.pd(id).unwrap();
                match t.label(id) {
                    Label::Solved => prop_assert_eq!(pd.p, Cost::ZERO),
                    Label::Disproved => prop_assert_eq!(pd.d, Cost::ZERO),
                    Label::Unknown => prop_assert!(!pd.p.is_zero() && !pd.d.is_zero()),
                }
            }
        }
    }

    #[test]
    fn proof_and_disproof_never_both_zero(seed in any::<u64>(), tf in 0.0..=1.0f64, max in any::<bool>()) {
        let psi = psi_of(max);
        let g = dag(seed, tf, HeuristicMode::Unit, psi);
        let t = revise_pd(&g, psi).unwrap();
        for id in g.ids() {
            let pd = t.pd(id).unwrap();
            prop_assert!(!(pd.p.is_zero() && pd.d.is_zero()));
        }
    }

    #[test]
    fn unit_numbers_are_certificate_sizes_on_trees(
        depth in 1usize..=4,
        branching in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let g = alternating_tree(&TreeParams { depth, branching, terminal_prob: 0.0, seed, ..Default::default() }).unwrap();
        prop_assume!(g.leaves().count() <= 20);
        let pd = phi_delta_unit(&g).unwrap().pd(g.root()).unwrap();
        prop_assert_eq!(pd.p.value() as usize, minimal_certificate(&g, Polarity::Solvable).unwrap());
        prop_assert_eq!(pd.d.value() as usize, minimal_certificate(&g, Polarity::Unsolvable).unwrap());
    }

    #[test]
    fn unit_numbers_bound_certificate_sizes_on_dags(seed in any::<u64>()) {
        let g = random_andor_dag(&DagParams {
            n_nodes: 10 + (seed % 12) as usize,
            layers: 3,
            terminal_fraction: 0.0,
            seed,
            ..Default::default()
        })
        .unwrap();
        prop_assume!(g.leaves().count() <= 16);
        let pd = phi_delta_unit(&g).unwrap().pd(g.root()).unwrap();
        prop_assert!(pd.p.value() as usize >= minimal_certificate(&g, Polarity::Solvable).unwrap());
        prop_assert!(pd.d.value() as usize >= minimal_certificate(&g, Polarity::Unsolvable).unwrap());
    }
}

#[test]
fn incremental_equivalence_on_a_thousand_instances() {
    let mut obs = FullRecompute::default();
    for seed in 0..1000u64 {
        let psi = psi_of(seed % 4 == 3);
        let g = dag(seed, if seed % 2 == 0 { 1.0 } else { 0.6 }, HeuristicMode::Unit, psi);
        let params = SearchParams { psi, tie: tie_for(seed), pick: LeafPick::AnyRandom(seed), ..Default::default() };
        ao_star_observed(GraphWorld::new(&g), &params, &mut obs).unwrap();
        pns_star_observed(GraphWorld::new(&g), &params, &mut obs).unwrap();
    }
    assert!(obs.steps > 1000);
    assert_eq!(obs.mismatches, 0);
}

#[test]
fn shared_node_counted_once_per_path() {
    // E hangs under both B and C of the first figure; with unit leaves the
    // disproof side pays for it twice.
    let g = andor_core::generators::fixture(andor_core::generators::FixtureName::Fig1);
    let pd = phi_delta_unit(&g).unwrap().pd(g.root()).unwrap();
    assert_eq!(pd.d.value(), 3.0);
    assert_eq!(minimal_certificate(&g, Polarity::Unsolvable).unwrap(), 2);
}
