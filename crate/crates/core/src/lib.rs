//! Exact solvers for shift bribery over a social network.
//!
//! A briber pays voters to move a preferred candidate up their rankings;
//! every paid shift also propagates one hop along weighted influence arcs.
//! The crate provides a brute-force oracle, specialised solvers for several
//! network classes, reduction builders, and the instance file format used
//! by the `sbon` command-line tool.

pub mod bench;
pub mod classify;
pub mod dp;
pub mod election;
pub mod error;
pub mod format;
pub mod fpt;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod outcome;
pub mod poly;
pub mod reductions;
pub mod solve;

pub use classify::{detect_class, GraphClass};
pub use election::{
    CostFamily, CostFunction, InfluenceArc, InfluenceNetwork, Instance, PreferenceProfile, Rule, ShiftVector, Weight,
    Winner,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use outcome::{Algorithm, SolveOutcome, SolveStats};
pub use solve::{solve, solve_auto, SolveOptions};
