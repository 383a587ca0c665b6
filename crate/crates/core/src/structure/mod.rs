//! Structural objects of the reduction: the game hypergraph and its primal
//! graph, hypergraph acyclicity, triangulation, clique trees, and the lifting
//! of tree and hypertree decompositions of the game to clique trees of the
//! primal graph.

mod graph;
mod gyo;
mod hypergraph;
mod hypertree;
mod lift;
mod tree;
mod triangulate;

pub use graph::Graph;
pub use gyo::{grahams_algorithm, AcyclicityResult};
pub use hypergraph::{game_hypergraph, primal_graph, Hypergraph};
pub use hypertree::{validate_hypertree_decomposition, HtdCondition, HtdViolation, HypertreeDecomposition};
pub use lift::{lift_hypertree_decomposition, lift_tree_decomposition};
pub use tree::{CliqueTree, TreeDecomposition};
pub use triangulate::{
    clique_tree_from_chordal, is_perfect_elimination_order, triangulate, triangulate_with_cap, Triangulation,
    TriangulationStrategy, DEFAULT_EXACT_CAP,
};
