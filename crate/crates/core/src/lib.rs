//! Best-first search on acyclic AND/OR graphs.
//!
//! The crate is organized bottom-up:
//!
//! * [`graph`] — explicit and implicit AND/OR graphs, the dual transform,
//!   solution graphs and the JSON file format;
//! * [`calculus`] — single (`f`) and dual (`p`, `d`) value tables, label
//!   propagation and incremental ancestor updates;
//! * [`search`] — the generic best-first skeleton and its instantiations:
//!   AO*, PNS*, proof number search and best-first minimax;
//! * [`oracle`] — brute-force ground truth on fully materialized graphs;
//! * [`generators`] — seeded random instances, worked fixtures and
//!   tic-tac-toe.

pub mod calculus;
pub mod cost;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod search;

pub use calculus::{Label, PdValue, ValueTable};
pub use cost::{Cost, CostScheme};
pub use graph::{ExplicitGraph, ImplicitGraph, NodeId, NodeKind, NodeRecord, SolutionGraph, TerminalStatus};
pub use search::{SearchOutcome, SearchParams, SearchStatus};
