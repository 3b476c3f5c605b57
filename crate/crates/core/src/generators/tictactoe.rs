use std::collections::HashMap;

use crate::cost::Cost;
use crate::graph::{ImplicitGraph, NodeId, NodeKind, NodeRecord, TerminalStatus, WorldError};

const LINES: [[usize; 3]; 8] = [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [2, 4, 6]];

const EMPTY: u8 = 0;
const X: u8 = 1;
const O: u8 = 2;

type Board = [u8; 9];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Objective {
    /// Solvable iff X, who moves first, can force three in a row.
    #[default]
    FirstPlayerWins,
}

/// Tic-tac-toe as an implicit AND/OR graph.
///
/// Positions with X to move are OR nodes, positions with O to move are AND
/// nodes. Boards are interned on first sight, so transpositions share one
/// id; no symmetry reduction is applied. Edge costs are zero and every
/// nonterminal position carries unit estimates.
#[derive(Clone, Debug)]
pub struct TicTacToe {
    objective: Objective,
    boards: Vec<Board>,
    index: HashMap<Board, NodeId>,
}

pub fn tictactoe(objective: Objective) -> TicTacToe {
    TicTacToe::new(objective)
}

impl TicTacToe {
    pub fn new(objective: Objective) -> Self {
        let mut t = TicTacToe { objective, boards: Vec::new(), index: HashMap::new() };
        t.intern([EMPTY; 9]);
        t
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Positions interned so far.
    pub fn len(&self) -> usize {
        self.boards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boards.is_empty()
    }

    /// The position behind `id` as nine characters of `.`, `X` and `O`,
    /// row by row.
    pub fn board(&self, id: NodeId) -> Option<String> {
        self.boards.get(id.index()).map(|b| {
            let mut s = String::with_capacity(9);
            for &c in b {
                s.push(match c {
                    X => 'X',
                    O => 'O',
                    _ => '.',
                });
            }
            s
        })
    }

    /// Looks up (interning if needed) the position given in the format of
    /// [`TicTacToe::board`].
    pub fn position(&mut self, cells: &str) -> Result<NodeId, WorldError> {
        let bytes = cells.as_bytes();
        if bytes.len() != 9 {
            return Err(WorldError(format!("a board has 9 cells, got `{cells}`")));
        }
        let mut b = [EMPTY; 9];
        for (i, &c) in bytes.iter().enumerate() {
            b[i] = match c {
                b'X' | b'x' => X,
                b'O' | b'o' => O,
                b'.' | b'-' | b' ' => EMPTY,
                _ => return Err(WorldError(format!("bad cell `{}` in `{cells}`", c as char))),
            };
        }
        let xs = b.iter().filter(|&&c| c == X).count();
        let os = b.iter().filter(|&&c| c == O).count();
        if xs != os && xs != os + 1 {
            return Err(WorldError(format!("`{cells}` is not reachable with X moving first")));
        }
        Ok(self.intern(b))
    }

    fn intern(&mut self, b: Board) -> NodeId {
        if let Some(&id) = self.index.get(&b) {
            return id;
        }
        let id = NodeId(self.boards.len() as u32);
        self.boards.push(b);
        self.index.insert(b, id);
        id
    }

    fn record(&self, id: NodeId) -> NodeRecord {
        let b = &self.boards[id.index()];
        let kind = if x_to_move(b) { NodeKind::Or } else { NodeKind::And };
        let Objective::FirstPlayerWins = self.objective;
        match winner(b) {
            Some(X) => NodeRecord::terminal(id, kind, TerminalStatus::Solvable),
            Some(_) => NodeRecord::terminal(id, kind, TerminalStatus::Unsolvable),
            None if b.iter().all(|&c| c != EMPTY) => NodeRecord::terminal(id, kind, TerminalStatus::Unsolvable),
            None => NodeRecord::unit(id, kind),
        }
    }
}

fn x_to_move(b: &Board) -> bool {
    let xs = b.iter().filter(|&&c| c == X).count();
    let os = b.iter().filter(|&&c| c == O).count();
    xs == os
}

fn winner(b: &Board) -> Option<u8> {
    LINES.iter().find(|l| b[l[0]] != EMPTY && b[l[0]] == b[l[1]] && b[l[1]] == b[l[2]]).map(|l| b[l[0]])
}

impl ImplicitGraph for TicTacToe {
    fn root(&mut self) -> Result<NodeRecord, WorldError> {
        Ok(self.record(NodeId(0)))
    }

    fn expand(&mut self, id: NodeId) -> Result<Vec<(NodeRecord, Cost)>, WorldError> {
        let b = *self.boards.get(id.index()).ok_or_else(|| WorldError(format!("unknown position {id}")))?;
        if self.record(id).is_terminal() {
            return Ok(Vec::new());
        }
        let mark = if x_to_move(&b) { X } else { O };
        let mut out = Vec::new();
        for cell in 0..9 {
            if b[cell] == EMPTY {
                let mut next = b;
                next[cell] = mark;
                let child = self.intern(next);
                out.push((self.record(child), Cost::ZERO));
            }
        }
        Ok(out)
    }
}
