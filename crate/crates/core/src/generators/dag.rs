use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_fraction, draw_on_grid, GeneratorError, GRID};
use crate::cost::{Cost, CostScheme};
use crate::graph::{ExplicitGraph, GraphBuilder, NodeKind, NodeRecord, TerminalStatus};
use crate::oracle;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeuristicMode {
    /// `h = hbar = 1` everywhere.
    Unit,
    /// `h` drawn from the grid points of `[noise * h*, h*]`, `hbar` likewise
    /// against `hbar*`. Needs an all-terminal graph.
    OracleAdmissible { noise: f64 },
    /// `h = h*`, `hbar = hbar*`. Needs an all-terminal graph.
    Exact,
}

/// Parameters of [`random_andor_dag`].
///
/// Nodes are spread over `layers` layers (the root alone in the first).
/// Every non-root node hangs off one node of the previous layer, then each
/// node draws up to `max_children` further children from later layers.
/// Childless nodes become terminal with probability `terminal_fraction` and
/// are solvable with probability `solvable_fraction`.
///
/// Since the file format cannot carry `∞`, estimates against an infinite
/// optimum are replaced by a finite cap: one more than the largest finite
/// optimum in the graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DagParams {
    pub n_nodes: usize,
    pub layers: usize,
    pub or_fraction: f64,
    pub max_children: usize,
    pub edge_cost_range: (f64, f64),
    pub terminal_fraction: f64,
    pub solvable_fraction: f64,
    pub heuristic_mode: HeuristicMode,
    /// The scheme under which `h*` is computed for the oracle-based modes.
    pub psi: CostScheme,
    pub seed: u64,
}

impl Default for DagParams {
    fn default() -> Self {
        DagParams {
            n_nodes: 30,
            layers: 5,
            or_fraction: 0.5,
            max_children: 3,
            edge_cost_range: (1.0, 4.0),
            terminal_fraction: 1.0,
            solvable_fraction: 0.6,
            heuristic_mode: HeuristicMode::Unit,
            psi: CostScheme::Sum,
            seed: 0,
        }
    }
}

impl DagParams {
    fn check(&self) -> Result<(), GeneratorError> {
        let invalid = |m: String| Err(GeneratorError::InvalidParams(m));
        if self.n_nodes == 0 || self.layers == 0 {
            return invalid("n_nodes and layers must be positive".into());
        }
        if self.layers > self.n_nodes || (self.layers == 1 && self.n_nodes > 1) {
            return invalid(format!("{} nodes cannot fill {} layers", self.n_nodes, self.layers));
        }
        if self.max_children == 0 {
            return invalid("max_children must be positive".into());
        }
        check_fraction("or_fraction", self.or_fraction)?;
        check_fraction("terminal_fraction", self.terminal_fraction)?;
        check_fraction("solvable_fraction", self.solvable_fraction)?;
        let (lo, hi) = self.edge_cost_range;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return invalid(format!("bad edge cost range ({lo}, {hi})"));
        }
        if (lo / GRID).ceil() > (hi / GRID).floor() {
            return invalid(format!("edge cost range ({lo}, {hi}) contains no multiple of {GRID}"));
        }
        match self.heuristic_mode {
            HeuristicMode::Unit => {}
            HeuristicMode::OracleAdmissible { noise } => {
                check_fraction("noise", noise)?;
                if self.terminal_fraction < 1.0 {
                    return invalid("oracle-based heuristics need terminal_fraction = 1".into());
                }
            }
            HeuristicMode::Exact => {
                if self.terminal_fraction < 1.0 {
                    return invalid("oracle-based heuristics need terminal_fraction = 1".into());
                }
            }
        }
        Ok(())
    }
}

/// A seeded random acyclic AND/OR graph. Node ids follow layer order and
/// every node is reachable from the root (id 0).
pub fn random_andor_dag(p: &DagParams) -> Result<ExplicitGraph, GeneratorError> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.n_nodes;

    let mut sizes = vec![1usize; p.layers];
    for _ in 0..n - p.layers {
        sizes[rng.gen_range(1..p.layers)] += 1;
    }
    let mut layer_of = Vec::with_capacity(n);
    let mut start = vec![0usize; p.layers + 1];
    for (l, &s) in sizes.iter().enumerate() {
        layer_of.extend(std::iter::repeat_n(l, s));
        start[l + 1] = start[l] + s;
    }

    let kinds: Vec<NodeKind> =
        (0..n).map(|_| if rng.gen_bool(p.or_fraction) { NodeKind::Or } else { NodeKind::And }).collect();

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, &l) in layer_of.iter().enumerate().skip(1) {
        let room = |range: std::ops::Range<usize>, children: &[Vec<usize>]| -> Vec<usize> {
            range.filter(|&u| children[u].len() < p.max_children).collect()
        };
        let mut candidates = room(start[l - 1]..start[l], &children);
        if candidates.is_empty() {
            candidates = room(0..start[l], &children);
        }
        if candidates.is_empty() {
            candidates = (start[l - 1]..start[l]).collect();
        }
        let parent = *candidates.choose(&mut rng).unwrap();
        children[parent].push(v);
    }
    for u in 0..start[p.layers - 1] {
        let later = start[layer_of[u] + 1]..n;
        let target = rng.gen_range(0..=p.max_children);
        for _ in 0..4 * p.max_children {
            if children[u].len() >= target {
                break;
            }
            let w = rng.gen_range(later.clone());
            if !children[u].contains(&w) {
                children[u].push(w);
            }
        }
        children[u].shuffle(&mut rng);
    }

    let mut b = GraphBuilder::new();
    for (u, kids) in children.iter().enumerate() {
        if kids.is_empty() && rng.gen_bool(p.terminal_fraction) {
            let status =
                if rng.gen_bool(p.solvable_fraction) { TerminalStatus::Solvable } else { TerminalStatus::Unsolvable };
            b.node(NodeRecord::terminal(u as u32, kinds[u], status));
        } else {
            b.node(NodeRecord::unit(u as u32, kinds[u]));
        }
    }
    let (lo, hi) = p.edge_cost_range;
    for (u, kids) in children.iter().enumerate() {
        for &v in kids {
            b.edge(u as u32, v as u32, draw_on_grid(&mut rng, lo, hi).unwrap());
        }
    }
    let g = b.build(0).map_err(|e| GeneratorError::InvalidParams(e.to_string()))?;

    let report = match p.heuristic_mode {
        HeuristicMode::Unit => return Ok(g),
        _ => oracle::exact_costs(&g, p.psi).map_err(|e| GeneratorError::InvalidParams(e.to_string()))?,
    };
    let finite_max = report
        .hstar
        .values()
        .chain(report.hbar_star.values())
        .filter(|c| c.is_finite())
        .max()
        .copied()
        .unwrap_or(Cost::ZERO);
    let cap = finite_max.value() + 1.0;

    let mut b = GraphBuilder::new();
    for rec in g.records() {
        if rec.is_terminal() {
            b.node(*rec);
            continue;
        }
        let (hs, hbs) = (report.hstar[&rec.id], report.hbar_star[&rec.id]);
        let (h, hbar) = match p.heuristic_mode {
            HeuristicMode::Exact => (capped(hs, cap), capped(hbs, cap)),
            HeuristicMode::OracleAdmissible { noise } => {
                let mut draw = |star: Cost| match star.is_finite() {
                    true => draw_on_grid(&mut rng, noise * star.value(), star.value()).unwrap(),
                    false => draw_on_grid(&mut rng, GRID, cap).unwrap(),
                };
                let h = draw(hs);
                (h, draw(hbs))
            }
            HeuristicMode::Unit => unreachable!(),
        };
        b.node(NodeRecord::nonterminal(rec.id, rec.kind, Cost::new(h).unwrap(), Cost::new(hbar).unwrap()));
    }
    for (from, to, c) in g.edges() {
        b.edge(from, to, c.value());
    }
    b.build(0).map_err(|e| GeneratorError::InvalidParams(e.to_string()))
}

fn capped(c: Cost, cap: f64) -> f64 {
    if c.is_finite() {
        c.value()
    } else {
        cap
    }
}
