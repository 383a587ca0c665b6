//! Pure Nash equilibria of graphical games.
//!
//! A graphical game is reduced to a Markov random field whose unnormalized
//! density is `eps^U(x)`, where `U(x)` counts the players not best-responding
//! in profile `x`. Exact questions (existence, counting, enumeration, a
//! succinct per-clique description) are then answered by semiring-generic
//! junction-tree calibration on a clique tree of the field's graph. For
//! instances whose clique trees are too wide, the [`heuristics`] module runs
//! Metropolis sampling and simulated annealing over the same density.
//!
//! Players are 0-based indices throughout this crate.

pub mod equilibria;
mod error;
pub mod exec;
pub mod fixtures;
pub mod game;
pub mod generate;
pub mod heuristics;
pub mod junction;
pub mod mrf;
pub mod semiring;
pub mod structure;
pub mod table;

pub use equilibria::{
    count_equilibria, decide_existence, enumerate_equilibria, solve, succinct_description, DecompositionSource,
    PipelineStrategy, SolveResult, SuccinctDescription,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use game::{brute_force_equilibria, GraphicalGame, NeighborhoodAssignment, Profile};
pub use semiring::{Boolean, Counting, EpsPower, MaxProduct, Semiring};
