use std::fmt;
use std::str::FromStr;

use crate::graph::{ExplicitGraph, NodeId, SolutionGraph, TerminalStatus};

/// How ties between equally valued children are broken.
///
/// Candidates are always considered in declaration order. `RandomSeeded`
/// is a pure function of the seed, the node and the number of tied
/// candidates (a SplitMix64 finalizer over those three), so every engine
/// and every helper breaks the same tie the same way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    #[default]
    FirstChild,
    LastChild,
    RandomSeeded(u64),
}

impl TieBreak {
    /// Index into `k >= 1` tied candidates.
    pub fn choose(self, node: NodeId, k: usize) -> usize {
        debug_assert!(k > 0);
        match self {
            TieBreak::FirstChild => 0,
            TieBreak::LastChild => k - 1,
            TieBreak::RandomSeeded(seed) => {
                let h = splitmix64(seed ^ splitmix64(node.0 as u64 ^ ((k as u64) << 32)));
                (h % k as u64) as usize
            }
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TieBreak::FirstChild => f.write_str("first"),
            TieBreak::LastChild => f.write_str("last"),
            TieBreak::RandomSeeded(s) => write!(f, "random:{s}"),
        }
    }
}

impl FromStr for TieBreak {
    type Err = String;

    /// `first`, `last`, `random` (seed 0) or `random:SEED`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(TieBreak::FirstChild),
            "last" => Ok(TieBreak::LastChild),
            "random" => Ok(TieBreak::RandomSeeded(0)),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed.parse().map(TieBreak::RandomSeeded).map_err(|e| format!("bad seed `{seed}`: {e}")),
                None => Err(format!("unknown tie-break `{s}` (expected first, last or random[:SEED])")),
            },
        }
    }
}

/// Which nonterminal leaf of the solution base AO* expands.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LeafPick {
    /// The first in depth-first preorder (children in declaration order).
    #[default]
    AnyFirst,
    /// A uniformly random one, drawn from an xorshift64* stream.
    AnyRandom(u64),
    /// The one first reached at the greatest depth.
    Deepest,
    /// The one with the largest `h`; ties go to the first.
    HighestH,
}

impl fmt::Display for LeafPick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LeafPick::AnyFirst => f.write_str("first"),
            LeafPick::AnyRandom(s) => write!(f, "random:{s}"),
            LeafPick::Deepest => f.write_str("deepest"),
            LeafPick::HighestH => f.write_str("highest-h"),
        }
    }
}

impl FromStr for LeafPick {
    type Err = String;

    /// `first`, `random[:SEED]`, `deepest` or `highest-h`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(LeafPick::AnyFirst),
            "random" => Ok(LeafPick::AnyRandom(0)),
            "deepest" => Ok(LeafPick::Deepest),
            "highest-h" => Ok(LeafPick::HighestH),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed.parse().map(LeafPick::AnyRandom).map_err(|e| format!("bad seed `{seed}`: {e}")),
                None => Err(format!("unknown leaf pick `{s}` (expected first, random[:SEED], deepest or highest-h)")),
            },
        }
    }
}

/// Stateful side of a [`LeafPick`].
#[derive(Clone, Debug)]
pub(crate) struct LeafPicker {
    pick: LeafPick,
    state: u64,
}

impl LeafPicker {
    pub(crate) fn new(pick: LeafPick) -> Self {
        let state = match pick {
            // xorshift state must be non-zero
            LeafPick::AnyRandom(seed) => splitmix64(seed) | 1,
            _ => 1,
        };
        LeafPicker { pick, state }
    }

    fn next(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Picks among the base's nonterminal leaves; `None` if there are none.
    pub(crate) fn pick(&mut self, g: &ExplicitGraph, base: &SolutionGraph) -> Option<NodeId> {
        let mut leaves: Vec<(NodeId, usize)> = Vec::new();
        base.walk(g, |id, depth, is_leaf| {
            if is_leaf && g.terminal(id) == TerminalStatus::Nonterminal {
                leaves.push((id, depth));
            }
        });
        if leaves.is_empty() {
            return None;
        }
        let chosen = match self.pick {
            LeafPick::AnyFirst => leaves[0],
            LeafPick::AnyRandom(_) => {
                let i = (self.next() % leaves.len() as u64) as usize;
                leaves[i]
            }
            LeafPick::Deepest => first_max_by_key(&leaves, |&(_, d)| d),
            LeafPick::HighestH => first_max_by_key(&leaves, |&(id, _)| g.record(id).h),
        };
        Some(chosen.0)
    }
}

fn first_max_by_key<T: Copy, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> T {
    let mut best = items[0];
    for it in &items[1..] {
        if key(it) > key(&best) {
            best = *it;
        }
    }
    best
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_tie_breaks() {
        assert_eq!(TieBreak::FirstChild.choose(NodeId(3), 4), 0);
        assert_eq!(TieBreak::LastChild.choose(NodeId(3), 4), 3);
    }

    #[test]
    fn seeded_tie_break_is_pure_and_in_range() {
        let t = TieBreak::RandomSeeded(42);
        for node in 0..100 {
            for k in 1..6 {
                let a = t.choose(NodeId(node), k);
                assert!(a < k);
                assert_eq!(a, t.choose(NodeId(node), k));
            }
        }
        // not constant across nodes
        let picks: std::collections::BTreeSet<_> = (0..100).map(|n| t.choose(NodeId(n), 3)).collect();
        assert_eq!(picks.len(), 3);
    }

    #[test]
    fn parsing() {
        assert_eq!("random:9".parse::<TieBreak>(), Ok(TieBreak::RandomSeeded(9)));
        assert_eq!("last".parse::<TieBreak>(), Ok(TieBreak::LastChild));
        assert!("middle".parse::<TieBreak>().is_err());
        assert_eq!("highest-h".parse::<LeafPick>(), Ok(LeafPick::HighestH));
        assert_eq!("random:3".parse::<LeafPick>(), Ok(LeafPick::AnyRandom(3)));
        assert!("random:x".parse::<LeafPick>().is_err());
    }

    #[test]
    fn xorshift_stream_is_seeded() {
        let mut a = LeafPicker::new(LeafPick::AnyRandom(5));
        let mut b = LeafPicker::new(LeafPick::AnyRandom(5));
        let mut c = LeafPicker::new(LeafPick::AnyRandom(6));
        let xs: Vec<u64> = (0..8).map(|_| a.next()).collect();
        assert_eq!(xs, (0..8).map(|_| b.next()).collect::<Vec<_>>());
        assert_ne!(xs, (0..8).map(|_| c.next()).collect::<Vec<_>>());
    }
}
