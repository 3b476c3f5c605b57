//! Best-first search over implicit AND/OR graphs.
//!
//! All engines share one loop ([`gbfs_run`]): pick a solution base, stop if
//! it is final, otherwise choose a nonterminal leaf, expand it, and bring the
//! value table up to date along the leaf's ancestors. They differ in the
//! table they keep and in how the leaf is chosen:
//!
//! | engine                 | table      | leaf choice                          | stops when                     |
//! |------------------------|------------|--------------------------------------|--------------------------------|
//! | [`ao_star`]            | `f`        | a [`LeafPick`] over the min-`f` base | that base has only terminals   |
//! | [`pns_star`]           | `(p, d)`   | descent: min `c+p` at OR, `c+d` at AND | the root is labeled          |
//! | [`pns`]                | integers   | descent on proof/disproof numbers    | `pn` or `dn` of the root is 0 |
//! | [`best_first_minimax`] | `(p, d)`, max | as PNS*, with `hbar = C - h`      | the root is labeled            |
//!
//! The explicit graph grown by a search reuses the world's node ids, so
//! traces, final graphs and certificates can be compared across engines.

mod base;
mod compare;
mod gbfs;
mod pns;
mod policy;
mod worlds;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::{CalcError, PdValue, ValueTable};
use crate::cost::{Cost, CostScheme};
use crate::graph::{ExplicitGraph, NodeId, SolutionGraph, WorldError};

pub use base::{common_leaves, descent, extract_certificate, select_dual_base, select_solution_base};
pub use compare::{compare, summarize, write_csv, Algorithm, CompareRow, SummaryRow, CSV_HEADER};
pub use gbfs::{
    ao_star, ao_star_observed, best_first_minimax, best_first_minimax_observed, gbfs_run, pns_star, pns_star_observed,
    BasePolicy, LeafPolicy,
};
pub use pns::{pns, pns_observed};
pub use policy::{LeafPick, TieBreak};
pub use worlds::{MinimaxWorld, UnitWorld};

/// Resource limits for one search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_expansions: Option<u64>,
    pub max_nodes: Option<usize>,
}

impl Budget {
    pub const DEFAULT_EXPANSIONS: u64 = 1_000_000;

    pub fn unlimited() -> Self {
        Budget { max_expansions: None, max_nodes: None }
    }

    pub fn expansions(n: u64) -> Self {
        Budget { max_expansions: Some(n), max_nodes: None }
    }

    fn exhausted(&self, stats: &SearchStats, nodes: usize) -> bool {
        self.max_expansions.is_some_and(|m| stats.expansions >= m) || self.max_nodes.is_some_and(|m| nodes >= m)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::expansions(Self::DEFAULT_EXPANSIONS)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SearchParams {
    pub psi: CostScheme,
    pub tie: TieBreak,
    /// Leaf choice for AO*; ignored by the descent-based engines.
    pub pick: LeafPick,
    pub budget: Budget,
    /// Propagate changes only along marked edges (AND parents and the
    /// minimizing edge of OR parents) instead of to every parent.
    pub strict_marking: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    ProvedSolvable,
    ProvedUnsolvable,
    ResourceExhausted,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::ProvedSolvable => "proved_solvable",
            SearchStatus::ProvedUnsolvable => "proved_unsolvable",
            SearchStatus::ResourceExhausted => "resource_exhausted",
        }
    }
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootValue {
    F(Cost),
    Pd(PdValue),
}

impl fmt::Display for RootValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValue::F(c) => write!(f, "{c}"),
            RootValue::Pd(pd) => write!(f, "{pd}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expansions: u64,
    /// Distinct nodes added to the explicit graph, the root included.
    pub nodes_generated: u64,
    pub iterations: u64,
    /// Node re-evaluations performed by ancestor updates.
    pub ancestor_updates: u64,
}

/// One loop iteration: the leaf expanded and the root value afterwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub iteration: u64,
    pub leaf: NodeId,
    pub root: RootValue,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iter {} leaf {} root {}", self.iteration, self.leaf, self.root)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub root_value: RootValue,
    /// A proof for `ProvedSolvable`, a disproof for `ProvedUnsolvable`.
    pub solution: Option<SolutionGraph>,
    pub stats: SearchStats,
    pub final_graph: ExplicitGraph,
    pub trace: Vec<TraceStep>,
}

impl SearchOutcome {
    /// The expanded leaves in order.
    pub fn expansion_order(&self) -> Vec<NodeId> {
        self.trace.iter().map(|t| t.leaf).collect()
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("expanding {node} yields {child}, which closes a cycle")]
    CycleDetected { node: NodeId, child: NodeId },
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error("no expandable leaf although the search is unfinished")]
    Stalled,
    #[error("invalid world: {0}")]
    InvalidWorld(#[from] WorldError),
}

/// Hooks into a running search, mainly for tests that check invariants at
/// every step.
pub trait Observer {
    /// Whether the engine should spend effort producing the views passed to
    /// the hooks. Engines that keep their own representation skip the
    /// conversion when this is false.
    fn active(&self) -> bool {
        true
    }

    /// A leaf was chosen; `table` is current for `g`.
    fn selected(&mut self, _g: &ExplicitGraph, _table: &ValueTable, _leaf: NodeId) {}

    /// The table was brought up to date after an expansion.
    fn updated(&mut self, _g: &ExplicitGraph, _table: &ValueTable) {}
}

/// Observes nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoObserver;

impl Observer for NoObserver {
    fn active(&self) -> bool {
        false
    }
}

/// Adds a leaf's children to the explicit graph. A childless expansion turns
/// the leaf terminal. Returns the number of new nodes.
fn expand_into(
    g: &mut ExplicitGraph,
    leaf: NodeId,
    children: Vec<(crate::graph::NodeRecord, Cost)>,
) -> Result<u64, SearchError> {
    if children.is_empty() {
        g.set_terminal(leaf, crate::graph::dead_end_status(g.kind(leaf)));
        return Ok(0);
    }
    let mut fresh = 0;
    for (rec, cost) in children {
        if g.insert_node(rec.normalized()) {
            fresh += 1;
        } else if g.reaches(rec.id, leaf) {
            return Err(SearchError::CycleDetected { node: leaf, child: rec.id });
        }
        g.insert_edge(leaf, rec.id, cost);
    }
    Ok(fresh)
}
