use super::base::{descent, extract_certificate, select_solution_base};
use super::policy::LeafPicker;
use super::worlds::MinimaxWorld;
use super::{
    expand_into, LeafPick, NoObserver, Observer, RootValue, SearchError, SearchOutcome, SearchParams, SearchStats,
    SearchStatus, TraceStep,
};
use crate::calculus::{incremental_update_with, revise, Evaluation, Label, Propagation, ValueTable};
use crate::cost::{Cost, CostScheme};
use crate::graph::{ExplicitGraph, ImplicitGraph, NodeId, Polarity, SolutionGraph, TerminalStatus};

/// When the search is over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasePolicy {
    /// Finished once the minimum-cost base has only terminal leaves (a proof
    /// of optimal estimated cost) or the root is disproved.
    MinCost,
    /// Finished once the root is labeled solved or disproved.
    RootLabel,
}

/// Which leaf to expand next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafPolicy {
    /// A nonterminal leaf of the minimum-cost base.
    Pick(LeafPick),
    /// The leaf reached by [`descent`]; needs a dual table.
    Descent,
}

fn root_value(table: &ValueTable, root: NodeId) -> RootValue {
    match table.pd(root) {
        Some(pd) => RootValue::Pd(pd),
        None => RootValue::F(table.proof(root)),
    }
}

/// The generic best-first loop.
///
/// Starting from the world's root, each iteration checks `f1`'s stopping
/// rule, selects a nonterminal leaf with `f2`, expands it (children already
/// in the graph are linked, not duplicated) and updates the ancestors'
/// values. Exceeding the budget ends the search with `ResourceExhausted`.
pub fn gbfs_run<W: ImplicitGraph, O: Observer + ?Sized>(
    mut world: W,
    f1: BasePolicy,
    f2: LeafPolicy,
    evaluation: Evaluation,
    params: &SearchParams,
    observer: &mut O,
) -> Result<SearchOutcome, SearchError> {
    let mut g = ExplicitGraph::singleton(world.root()?.normalized());
    let root = g.root();
    let mut table = revise(&g, evaluation, params.psi, false)?;
    let propagation = if params.strict_marking { Propagation::MarkedEdges } else { Propagation::ChangedParents };
    let mut picker = LeafPicker::new(match f2 {
        LeafPolicy::Pick(p) => p,
        LeafPolicy::Descent => LeafPick::AnyFirst,
    });
    let mut stats = SearchStats { nodes_generated: 1, ..Default::default() };
    let mut trace = Vec::new();

    loop {
        let mut base: Option<SolutionGraph> = None;
        let finished = match (f1, table.label(root)) {
            (_, Label::Disproved) => Some((
                SearchStatus::ProvedUnsolvable,
                extract_certificate(&g, &table, Polarity::Unsolvable, params.tie),
            )),
            (BasePolicy::RootLabel, Label::Solved) => {
                Some((SearchStatus::ProvedSolvable, extract_certificate(&g, &table, Polarity::Solvable, params.tie)))
            }
            (BasePolicy::RootLabel, Label::Unknown) => None,
            (BasePolicy::MinCost, _) => {
                let b = select_solution_base(&g, &table, params.tie)?;
                if b.leaves(&g).iter().all(|&l| g.terminal(l) == TerminalStatus::Solvable) {
                    Some((SearchStatus::ProvedSolvable, Some(b)))
                } else {
                    base = Some(b);
                    None
                }
            }
        };
        let status = match finished {
            Some((status, solution)) => {
                return Ok(SearchOutcome {
                    status,
                    root_value: root_value(&table, root),
                    solution,
                    stats,
                    final_graph: g,
                    trace,
                })
            }
            None if params.budget.exhausted(&stats, g.len()) => SearchStatus::ResourceExhausted,
            None => {
                let leaf = match f2 {
                    LeafPolicy::Descent => descent(&g, &table, params.tie)?,
                    LeafPolicy::Pick(_) => {
                        let b = match base {
                            Some(b) => b,
                            None => select_solution_base(&g, &table, params.tie)?,
                        };
                        picker.pick(&g, &b).ok_or(SearchError::Stalled)?
                    }
                };
                if g.terminal(leaf).is_terminal() || !g.is_leaf(leaf) {
                    return Err(SearchError::Stalled);
                }
                stats.iterations += 1;
                if observer.active() {
                    observer.selected(&g, &table, leaf);
                }
                let children = world.expand(leaf)?;
                stats.nodes_generated += expand_into(&mut g, leaf, children)?;
                stats.expansions += 1;
                let report = incremental_update_with(&g, &mut table, leaf, propagation)?;
                stats.ancestor_updates += report.revisited.len() as u64;
                trace.push(TraceStep { iteration: stats.iterations, leaf, root: root_value(&table, root) });
                if observer.active() {
                    observer.updated(&g, &table);
                }
                continue;
            }
        };
        return Ok(SearchOutcome {
            status,
            root_value: root_value(&table, root),
            solution: None,
            stats,
            final_graph: g,
            trace,
        });
    }
}

/// AO*: single estimates `f`, expanding a leaf of the minimum-cost base
/// chosen by `params.pick`. With admissible estimates and the sum scheme the
/// returned proof has optimal cost.
pub fn ao_star<W: ImplicitGraph>(world: W, params: &SearchParams) -> Result<SearchOutcome, SearchError> {
    ao_star_observed(world, params, &mut NoObserver)
}

pub fn ao_star_observed<W: ImplicitGraph, O: Observer + ?Sized>(
    world: W,
    params: &SearchParams,
    observer: &mut O,
) -> Result<SearchOutcome, SearchError> {
    gbfs_run(world, BasePolicy::MinCost, LeafPolicy::Pick(params.pick), Evaluation::Single, params, observer)
}

/// PNS*: dual estimates `(p, d)`, expanding the leaf found by [`descent`].
pub fn pns_star<W: ImplicitGraph>(world: W, params: &SearchParams) -> Result<SearchOutcome, SearchError> {
    pns_star_observed(world, params, &mut NoObserver)
}

pub fn pns_star_observed<W: ImplicitGraph, O: Observer + ?Sized>(
    world: W,
    params: &SearchParams,
    observer: &mut O,
) -> Result<SearchOutcome, SearchError> {
    gbfs_run(world, BasePolicy::RootLabel, LeafPolicy::Descent, Evaluation::Dual, params, observer)
}

/// Best-first minimax: PNS* under the max scheme on a world whose
/// estimates are static evaluations in `[0, scale]`, with `hbar = scale - h`.
/// `params.psi` is ignored.
pub fn best_first_minimax<W: ImplicitGraph>(
    world: W,
    scale: Cost,
    params: &SearchParams,
) -> Result<SearchOutcome, SearchError> {
    best_first_minimax_observed(world, scale, params, &mut NoObserver)
}

pub fn best_first_minimax_observed<W: ImplicitGraph, O: Observer + ?Sized>(
    world: W,
    scale: Cost,
    params: &SearchParams,
    observer: &mut O,
) -> Result<SearchOutcome, SearchError> {
    let params = SearchParams { psi: CostScheme::Max, ..*params };
    pns_star_observed(MinimaxWorld::new(world, scale), &params, observer)
}
