//! Reproducible instance sources.
//!
//! Every random generator draws from a ChaCha8 stream seeded with the
//! caller's seed, so the same parameters always produce the same graph on
//! every platform. Edge costs and estimates are drawn from a grid of
//! quarters, which keeps sums and maxima exact in `f64`.

mod dag;
mod fixtures;
mod tictactoe;
mod tree;

use thiserror::Error;

pub use dag::{random_andor_dag, DagParams, HeuristicMode};
pub use fixtures::{fig1, fig3, fig4, fig6, fixture, fixture_by_name, FixtureName};
pub use tictactoe::{tictactoe, Objective, TicTacToe};
pub use tree::{alternating_tree, valued_tree, TreeParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("unknown fixture `{0}` (expected fig1, fig1_terminalized, fig3, fig4 or fig6)")]
    UnknownFixture(String),
}

/// Spacing of the value grid.
pub const GRID: f64 = 0.25;

/// Uniform draw from the grid points in `[lo, hi]`; `None` if there are none.
fn draw_on_grid<R: rand::Rng>(rng: &mut R, lo: f64, hi: f64) -> Option<f64> {
    let a = (lo / GRID).ceil() as i64;
    let b = (hi / GRID).floor() as i64;
    (a <= b).then(|| rng.gen_range(a..=b) as f64 * GRID)
}

fn check_fraction(name: &str, v: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(GeneratorError::InvalidParams(format!("{name} must lie in [0, 1], got {v}")))
    }
}
