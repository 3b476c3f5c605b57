use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_fraction, draw_on_grid, GeneratorError};
use crate::cost::Cost;
use crate::graph::{ExplicitGraph, GraphBuilder, NodeKind, NodeRecord, TerminalStatus};

/// Parameters of [`alternating_tree`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TreeParams {
    pub depth: usize,
    pub branching: usize,
    /// Probability that a leaf is terminal; the others stay nonterminal.
    pub terminal_prob: f64,
    /// Probability that a terminal leaf is a win for the first player.
    pub win_prob: f64,
    pub seed: u64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams { depth: 4, branching: 2, terminal_prob: 1.0, win_prob: 0.5, seed: 0 }
    }
}

fn check_shape(depth: usize, branching: usize) -> Result<(), GeneratorError> {
    if depth == 0 || branching == 0 {
        return Err(GeneratorError::InvalidParams("depth and branching must be at least 1".into()));
    }
    let nodes = (0..=depth as u32)
        .try_fold(0u64, |acc, d| (branching as u64).checked_pow(d).and_then(|layer| acc.checked_add(layer)));
    match nodes {
        Some(n) if n <= u32::MAX as u64 => Ok(()),
        _ => Err(GeneratorError::InvalidParams(format!(
            "a tree of depth {depth} and branching {branching} is too large"
        ))),
    }
}

/// Builds a uniform tree breadth-first, handing each new node to `leaf` when
/// it sits at full depth. Layers alternate OR (root) and AND.
fn uniform_tree(depth: usize, branching: usize, mut leaf: impl FnMut(u32, NodeKind) -> NodeRecord) -> ExplicitGraph {
    let mut b = GraphBuilder::new();
    b.node(NodeRecord::unit(0, NodeKind::Or));
    let mut layer = vec![0u32];
    let mut next_id = 1u32;
    for d in 1..=depth {
        let kind = if d % 2 == 0 { NodeKind::Or } else { NodeKind::And };
        let mut next = Vec::with_capacity(layer.len() * branching);
        for &parent in &layer {
            for _ in 0..branching {
                let id = next_id;
                next_id += 1;
                b.node(if d == depth { leaf(id, kind) } else { NodeRecord::unit(id, kind) });
                b.edge(parent, id, 0.0);
                next.push(id);
            }
        }
        layer = next;
    }
    b.build(0).expect("generated trees are well formed")
}

/// A uniform game tree with alternating OR/AND layers, zero edge costs and
/// unit estimates. Randomness only decides the leaves.
pub fn alternating_tree(p: &TreeParams) -> Result<ExplicitGraph, GeneratorError> {
    check_shape(p.depth, p.branching)?;
    check_fraction("terminal_prob", p.terminal_prob)?;
    check_fraction("win_prob", p.win_prob)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    Ok(uniform_tree(p.depth, p.branching, |id, kind| {
        if rng.gen_bool(p.terminal_prob) {
            let status = if rng.gen_bool(p.win_prob) { TerminalStatus::Solvable } else { TerminalStatus::Unsolvable };
            NodeRecord::terminal(id, kind, status)
        } else {
            NodeRecord::unit(id, kind)
        }
    }))
}

/// A uniform alternating tree whose leaves carry static evaluations: `h`
/// on the grid of `[0, scale]` and `hbar = scale - h`. All leaves are
/// nonterminal, so the values are the whole story.
pub fn valued_tree(depth: usize, branching: usize, scale: f64, seed: u64) -> Result<ExplicitGraph, GeneratorError> {
    check_shape(depth, branching)?;
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(GeneratorError::InvalidParams(format!("scale must be finite and non-negative, got {scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(uniform_tree(depth, branching, |id, kind| {
        let h = draw_on_grid(&mut rng, 0.0, scale).unwrap();
        NodeRecord::nonterminal(id, kind, Cost::new(h).unwrap(), Cost::new(scale - h).unwrap())
    }))
}
