#![allow(dead_code)]

use std::collections::BTreeSet;

use andor_core::calculus::{phi_delta_unit, revise, revise_f, ValueTable};
use andor_core::generators::{alternating_tree, random_andor_dag, DagParams, HeuristicMode, TreeParams};
use andor_core::graph::NodeId;
use andor_core::search::{common_leaves, select_solution_base, Observer, TieBreak};
use andor_core::ExplicitGraph;

/// Seeded alternating trees of depth 1..=6 and branching 1..=3, with some
/// nonterminal leaves so that dead ends occur too.
pub fn tree_suite(n: u64) -> impl Iterator<Item = (u64, ExplicitGraph)> {
    (0..n).map(|seed| {
        let p = TreeParams {
            depth: 1 + (seed % 6) as usize,
            branching: 1 + ((seed / 6) % 3) as usize,
            terminal_prob: if seed % 5 == 0 { 0.8 } else { 1.0 },
            win_prob: 0.3 + 0.1 * (seed % 5) as f64,
            seed,
        };
        (seed, alternating_tree(&p).unwrap())
    })
}

pub fn admissible_dag(seed: u64) -> ExplicitGraph {
    random_andor_dag(&DagParams {
        n_nodes: 25 + (seed % 16) as usize,
        layers: 4 + (seed % 3) as usize,
        heuristic_mode: HeuristicMode::OracleAdmissible { noise: 0.5 },
        seed,
        ..Default::default()
    })
    .unwrap()
}

pub fn tie_for(seed: u64) -> TieBreak {
    match seed % 3 {
        0 => TieBreak::FirstChild,
        1 => TieBreak::LastChild,
        _ => TieBreak::RandomSeeded(seed),
    }
}

/// Recomputes the table from scratch after every update and counts nodes
/// where the incremental table disagrees.
#[derive(Default)]
pub struct FullRecompute {
    pub steps: usize,
    pub mismatches: usize,
}

impl FullRecompute {
    pub fn check(&mut self, g: &ExplicitGraph, table: &ValueTable) {
        let full = if table.is_unit() {
            phi_delta_unit(g).unwrap()
        } else {
            revise(g, table.evaluation(), table.psi(), false).unwrap()
        };
        self.steps += 1;
        self.mismatches += table.mismatches(&full, g).len();
    }
}

impl Observer for FullRecompute {
    fn updated(&mut self, g: &ExplicitGraph, table: &ValueTable) {
        self.check(g, table);
    }
}

/// Checks, before every PNS* expansion, that the chosen leaf lies in the
/// AO* base over the same estimates, and on trees that it is the only leaf
/// shared by the proof-side and disproof-side bases.
pub struct DescentChecks {
    pub tie: TieBreak,
    pub is_tree: bool,
    pub steps: usize,
    pub outside_base: usize,
    pub not_unique_common: usize,
    pub full: FullRecompute,
}

impl DescentChecks {
    pub fn new(tie: TieBreak, is_tree: bool) -> Self {
        DescentChecks { tie, is_tree, steps: 0, outside_base: 0, not_unique_common: 0, full: FullRecompute::default() }
    }
}

impl Observer for DescentChecks {
    fn selected(&mut self, g: &ExplicitGraph, table: &ValueTable, leaf: NodeId) {
        self.steps += 1;
        let f = revise_f(g, table.psi()).unwrap();
        let base = select_solution_base(g, &f, self.tie).unwrap();
        if !base.leaves(g).contains(&leaf) {
            self.outside_base += 1;
        }
        let common = common_leaves(g, table, self.tie).unwrap();
        if common != [leaf] {
            self.not_unique_common += 1;
        }
    }

    fn updated(&mut self, g: &ExplicitGraph, table: &ValueTable) {
        self.full.check(g, table);
    }
}

/// Structural equality of two graphs: records, ordered child lists, root.
pub fn same_graph(a: &ExplicitGraph, b: &ExplicitGraph) -> bool {
    a.root() == b.root()
        && a.ids().collect::<BTreeSet<_>>() == b.ids().collect::<BTreeSet<_>>()
        && a.ids().all(|id| a.record(id) == b.record(id) && a.children(id) == b.children(id))
}
