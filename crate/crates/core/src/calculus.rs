//! Bottom-up value computation over an explicit graph.
//!
//! Two families of tables are supported:
//!
//! * single-heuristic tables hold one estimate `f(n)`: non-terminal leaves
//!   take `h(n)`, OR nodes minimize `c + f(child)` and AND nodes combine the
//!   same terms with the cost scheme;
//! * dual tables hold a `(p, d)` pair: `p` follows the single recursion while
//!   `d` is the same recursion on the dual graph (AND minimizes, OR combines,
//!   leaves take `hbar(n)`).
//!
//! A *unit* table ignores the graph's estimates and edge costs: every
//! non-terminal leaf is worth 1 and every edge 0. With the sum scheme this is
//! the proof/disproof number recursion.
//!
//! Labels are boolean AND/OR reachability of terminals and are independent of
//! the numeric values.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::cost::{Cost, CostScheme};
use crate::graph::{ExplicitGraph, NodeId, NodeKind, TerminalStatus};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Label {
    #[default]
    Unknown,
    Solved,
    Disproved,
}

/// Estimated cost of proving (`p`) and of disproving (`d`) a node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PdValue {
    pub p: Cost,
    pub d: Cost,
}

impl PdValue {
    pub fn new(p: Cost, d: Cost) -> Self {
        PdValue { p, d }
    }
}

impl std::fmt::Display for PdValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.p, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evaluation {
    Single,
    Dual,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalcError {
    #[error("graph contains a cycle")]
    CyclicGraph,
    #[error("value table does not match the graph: {0}")]
    InconsistentTable(String),
}

/// Which parents an incremental update revisits when a node changes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Propagation {
    /// Every parent of a node whose value or label changed.
    #[default]
    ChangedParents,
    /// Only parents that reach the node through a marked edge: all edges of
    /// an AND parent, the current minimizing edge of an OR parent. Applies to
    /// single-heuristic tables; dual tables fall back to `ChangedParents`.
    MarkedEdges,
}

#[derive(Clone, Debug, PartialEq)]
enum Values {
    Single(Vec<Cost>),
    Dual(Vec<PdValue>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum NodeValue {
    F(Cost),
    Pd(PdValue),
}

/// Per-node values and labels for one explicit graph.
#[derive(Clone, Debug)]
pub struct ValueTable {
    psi: CostScheme,
    unit: bool,
    values: Values,
    labels: Vec<Label>,
    known: Vec<bool>,
    // first minimizing child of each OR node (single tables only)
    marks: Vec<Option<NodeId>>,
}

/// What an incremental update touched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateReport {
    /// Nodes re-evaluated, in processing order.
    pub revisited: Vec<NodeId>,
    /// Nodes whose value or label changed.
    pub changed: Vec<NodeId>,
}

impl ValueTable {
    fn empty(evaluation: Evaluation, psi: CostScheme, unit: bool, capacity: usize) -> Self {
        ValueTable {
            psi,
            unit,
            values: match evaluation {
                Evaluation::Single => Values::Single(vec![Cost::ZERO; capacity]),
                Evaluation::Dual => Values::Dual(vec![PdValue::default(); capacity]),
            },
            labels: vec![Label::Unknown; capacity],
            known: vec![false; capacity],
            marks: vec![None; capacity],
        }
    }

    /// Builds a unit dual table from externally computed entries.
    pub(crate) fn unit_from_entries(
        capacity: usize,
        entries: impl IntoIterator<Item = (NodeId, PdValue, Label)>,
    ) -> Self {
        let mut t = Self::empty(Evaluation::Dual, CostScheme::Sum, true, capacity);
        for (id, pd, label) in entries {
            t.set(id, NodeValue::Pd(pd), label, None);
        }
        t
    }

    pub fn psi(&self) -> CostScheme {
        self.psi
    }

    pub fn is_unit(&self) -> bool {
        self.unit
    }

    pub fn evaluation(&self) -> Evaluation {
        match self.values {
            Values::Single(_) => Evaluation::Single,
            Values::Dual(_) => Evaluation::Dual,
        }
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.known.get(id.index()).copied().unwrap_or(false)
    }

    /// `f(n)` for single tables, `p(n)` for dual ones.
    pub fn proof(&self, id: NodeId) -> Cost {
        match &self.values {
            Values::Single(v) => v[id.index()],
            Values::Dual(v) => v[id.index()].p,
        }
    }

    /// `d(n)`; `None` for single tables.
    pub fn disproof(&self, id: NodeId) -> Option<Cost> {
        match &self.values {
            Values::Single(_) => None,
            Values::Dual(v) => Some(v[id.index()].d),
        }
    }

    pub fn f(&self, id: NodeId) -> Option<Cost> {
        match &self.values {
            Values::Single(v) => Some(v[id.index()]),
            Values::Dual(_) => None,
        }
    }

    pub fn pd(&self, id: NodeId) -> Option<PdValue> {
        match &self.values {
            Values::Single(_) => None,
            Values::Dual(v) => Some(v[id.index()]),
        }
    }

    pub fn label(&self, id: NodeId) -> Label {
        self.labels[id.index()]
    }

    /// The edge cost as this table sees it (zero for unit tables).
    pub fn edge_cost(&self, cost: Cost) -> Cost {
        if self.unit {
            Cost::ZERO
        } else {
            cost
        }
    }

    /// The OR-node edge marked at the last revision of `id`.
    pub fn marked_child(&self, id: NodeId) -> Option<NodeId> {
        self.marks.get(id.index()).copied().flatten()
    }

    /// Nodes of `g` on which the two tables disagree in value or label.
    pub fn mismatches(&self, other: &ValueTable, g: &ExplicitGraph) -> Vec<NodeId> {
        g.ids()
            .filter(|&id| {
                self.contains(id) != other.contains(id)
                    || self.label(id) != other.label(id)
                    || self.node_value(id) != other.node_value(id)
            })
            .collect()
    }

    fn node_value(&self, id: NodeId) -> NodeValue {
        match &self.values {
            Values::Single(v) => NodeValue::F(v[id.index()]),
            Values::Dual(v) => NodeValue::Pd(v[id.index()]),
        }
    }

    fn set(&mut self, id: NodeId, value: NodeValue, label: Label, mark: Option<NodeId>) {
        let i = id.index();
        match (&mut self.values, value) {
            (Values::Single(v), NodeValue::F(f)) => v[i] = f,
            (Values::Dual(v), NodeValue::Pd(pd)) => v[i] = pd,
            _ => unreachable!("value kind always matches the table"),
        }
        self.labels[i] = label;
        self.known[i] = true;
        self.marks[i] = mark;
    }

    fn grow(&mut self, capacity: usize) {
        if capacity <= self.known.len() {
            return;
        }
        match &mut self.values {
            Values::Single(v) => v.resize(capacity, Cost::ZERO),
            Values::Dual(v) => v.resize(capacity, PdValue::default()),
        }
        self.labels.resize(capacity, Label::Unknown);
        self.known.resize(capacity, false);
        self.marks.resize(capacity, None);
    }

    /// Evaluates one node from its children's current entries.
    fn evaluate(&self, g: &ExplicitGraph, id: NodeId) -> (NodeValue, Label, Option<NodeId>) {
        let rec = g.record(id);
        let kids = g.children(id);
        let dual = matches!(self.values, Values::Dual(_));
        if kids.is_empty() {
            let (h, hbar, label) = match rec.terminal {
                TerminalStatus::Solvable => (Cost::ZERO, Cost::INFINITY, Label::Solved),
                TerminalStatus::Unsolvable => (Cost::INFINITY, Cost::ZERO, Label::Disproved),
                TerminalStatus::Nonterminal if self.unit => (Cost::ONE, Cost::ONE, Label::Unknown),
                TerminalStatus::Nonterminal => (rec.h, rec.hbar, Label::Unknown),
            };
            let value = if dual { NodeValue::Pd(PdValue::new(h, hbar)) } else { NodeValue::F(h) };
            return (value, label, None);
        }

        let label = combine_labels(rec.kind, kids.iter().map(|e| self.label(e.to)));
        let proof_terms = kids.iter().map(|e| self.edge_cost(e.cost) + self.proof(e.to));
        let mut mark = None;
        let p = match rec.kind {
            NodeKind::Or => {
                let mut best = Cost::INFINITY;
                for (e, term) in kids.iter().zip(proof_terms) {
                    if mark.is_none() || term < best {
                        best = term;
                        mark = Some(e.to);
                    }
                }
                best
            }
            NodeKind::And => self.psi.combine(proof_terms),
        };
        if !dual {
            return (NodeValue::F(p), label, mark);
        }
        let disproof_terms = kids.iter().map(|e| self.edge_cost(e.cost) + self.disproof(e.to).unwrap());
        let d = match rec.kind {
            NodeKind::Or => self.psi.combine(disproof_terms),
            NodeKind::And => disproof_terms.min().unwrap(),
        };
        (NodeValue::Pd(PdValue::new(p, d)), label, mark)
    }
}

fn combine_labels(kind: NodeKind, labels: impl Iterator<Item = Label>) -> Label {
    let (mut any_solved, mut all_solved) = (false, true);
    let (mut any_disproved, mut all_disproved) = (false, true);
    for l in labels {
        any_solved |= l == Label::Solved;
        all_solved &= l == Label::Solved;
        any_disproved |= l == Label::Disproved;
        all_disproved &= l == Label::Disproved;
    }
    match kind {
        NodeKind::Or if any_solved => Label::Solved,
        NodeKind::Or if all_disproved => Label::Disproved,
        NodeKind::And if all_solved => Label::Solved,
        NodeKind::And if any_disproved => Label::Disproved,
        _ => Label::Unknown,
    }
}

/// Nodes ordered children-first. Fails on cycles.
pub fn reverse_topological_order(g: &ExplicitGraph) -> Result<Vec<NodeId>, CalcError> {
    let mut pending = vec![0usize; g.capacity()];
    let mut ready = VecDeque::new();
    for id in g.ids() {
        let mut kids: Vec<NodeId> = g.children(id).iter().map(|e| e.to).collect();
        kids.sort();
        kids.dedup();
        pending[id.index()] = kids.len();
        if kids.is_empty() {
            ready.push_back(id);
        }
    }
    let mut order = Vec::with_capacity(g.len());
    while let Some(id) = ready.pop_front() {
        order.push(id);
        for &p in g.parents(id) {
            pending[p.index()] -= 1;
            if pending[p.index()] == 0 {
                ready.push_back(p);
            }
        }
    }
    if order.len() == g.len() {
        Ok(order)
    } else {
        Err(CalcError::CyclicGraph)
    }
}

/// Full evaluation pass for any table family.
pub fn revise(g: &ExplicitGraph, evaluation: Evaluation, psi: CostScheme, unit: bool) -> Result<ValueTable, CalcError> {
    let mut t = ValueTable::empty(evaluation, psi, unit, g.capacity());
    for id in reverse_topological_order(g)? {
        let (value, label, mark) = t.evaluate(g, id);
        t.set(id, value, label, mark);
    }
    Ok(t)
}

/// Single-heuristic estimates `f(n)` for every node.
pub fn revise_f(g: &ExplicitGraph, psi: CostScheme) -> Result<ValueTable, CalcError> {
    revise(g, Evaluation::Single, psi, false)
}

/// Dual estimates `(p(n), d(n))` for every node.
pub fn revise_pd(g: &ExplicitGraph, psi: CostScheme) -> Result<ValueTable, CalcError> {
    revise(g, Evaluation::Dual, psi, false)
}

/// Proof and disproof numbers: unit leaves, zero edge costs, sum scheme.
pub fn phi_delta_unit(g: &ExplicitGraph) -> Result<ValueTable, CalcError> {
    revise(g, Evaluation::Dual, CostScheme::Sum, true)
}

/// Brings `table` up to date after the children of `changed` were added to
/// `g` (or after `changed` itself became terminal).
pub fn incremental_update(
    g: &ExplicitGraph,
    table: &mut ValueTable,
    changed: NodeId,
) -> Result<UpdateReport, CalcError> {
    incremental_update_with(g, table, changed, Propagation::ChangedParents)
}

/// [`incremental_update`] with an explicit propagation rule.
///
/// Only ancestors of `changed` are considered. A node is re-evaluated when it
/// is `changed` itself or one of its children changed (and, for
/// [`Propagation::MarkedEdges`], reaches it through a marked edge), and it is
/// processed only after every ancestor-set descendant has been settled.
pub fn incremental_update_with(
    g: &ExplicitGraph,
    table: &mut ValueTable,
    changed: NodeId,
    propagation: Propagation,
) -> Result<UpdateReport, CalcError> {
    if !g.contains(changed) || !table.contains(changed) {
        return Err(CalcError::InconsistentTable(format!("node {changed} has no entry")));
    }
    table.grow(g.capacity());
    for e in g.children(changed) {
        if !table.contains(e.to) {
            if !g.is_leaf(e.to) {
                return Err(CalcError::InconsistentTable(format!("new node {} is not a leaf", e.to)));
            }
            let (value, label, mark) = table.evaluate(g, e.to);
            table.set(e.to, value, label, mark);
        }
    }

    // Ancestor closure of `changed` and, per ancestor, the number of its
    // children inside the closure that still have to be settled.
    let mut pending: HashMap<NodeId, usize> = HashMap::new();
    let mut stack = vec![changed];
    pending.insert(changed, 0);
    while let Some(n) = stack.pop() {
        for &p in g.parents(n) {
            if !table.contains(p) {
                return Err(CalcError::InconsistentTable(format!("ancestor {p} has no entry")));
            }
            if let std::collections::hash_map::Entry::Vacant(v) = pending.entry(p) {
                v.insert(0);
                stack.push(p);
            }
        }
    }
    let members: Vec<NodeId> = pending.keys().copied().collect();
    for &n in &members {
        for &p in g.parents(n) {
            *pending.get_mut(&p).unwrap() += 1;
        }
    }
    if pending[&changed] != 0 {
        return Err(CalcError::CyclicGraph);
    }

    let strict = propagation == Propagation::MarkedEdges && table.evaluation() == Evaluation::Single;
    let mut dirty: HashMap<NodeId, bool> = HashMap::from([(changed, true)]);
    let mut ready = vec![changed];
    let mut settled = 0usize;
    let mut report = UpdateReport::default();
    while let Some(n) = ready.pop() {
        settled += 1;
        if dirty.get(&n).copied().unwrap_or(false) {
            report.revisited.push(n);
            let before = (table.node_value(n), table.label(n));
            let (value, label, mark) = table.evaluate(g, n);
            table.set(n, value, label, mark);
            if before != (value, label) {
                report.changed.push(n);
                for &p in g.parents(n) {
                    let through_mark = !strict || g.kind(p) == NodeKind::And || table.marked_child(p) == Some(n);
                    if through_mark {
                        dirty.insert(p, true);
                    }
                }
            }
        }
        for &p in g.parents(n) {
            let left = pending.get_mut(&p).unwrap();
            *left -= 1;
            if *left == 0 {
                ready.push(p);
            }
        }
    }
    if settled != members.len() {
        return Err(CalcError::CyclicGraph);
    }
    Ok(report)
}
