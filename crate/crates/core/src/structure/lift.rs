//! Clique trees of the primal graph from decompositions of the game.

use crate::game::GraphicalGame;
use crate::structure::{
    game_hypergraph, primal_graph, validate_hypertree_decomposition, CliqueTree, Graph, HypertreeDecomposition,
    TreeDecomposition,
};
use crate::{Error, Result};

/// Replaces every bag `c` of a tree decomposition of the game graph by
/// `sigma(c)`, the union of `N(p)` over `p` in `c`, keeping the tree.
///
/// The result is a clique tree of the primal graph of width at most
/// `(k + 1) * max_p |N(p)|` where `k` is the width of `td`.
pub fn lift_tree_decomposition(td: &TreeDecomposition, game: &GraphicalGame) -> Result<CliqueTree> {
    let game_graph = Graph::from_edges(game.num_players(), &game.edges())?;
    td.validate_for(&game_graph)?;
    let bags = td
        .bags()
        .iter()
        .map(|bag| {
            let mut lifted: Vec<usize> = bag.iter().flat_map(|&p| game.neighborhood(p).iter().copied()).collect();
            lifted.sort_unstable();
            lifted.dedup();
            lifted
        })
        .collect();
    let tree = CliqueTree::new(bags, td.edges().to_vec())?;
    tree.covers_graph(&primal_graph(&game_hypergraph(game)))?;
    let bound = (td.width() + 1) * game.max_neighborhood();
    assert!(tree.width() <= bound, "lifted width {} exceeds {bound}", tree.width());
    Ok(tree)
}

/// Undirected copy of a valid hypertree decomposition of `H(G)` with node
/// sets `chi(v)`. Width is at most `k * max_p |N(p)|` for hypertree width `k`.
pub fn lift_hypertree_decomposition(htd: &HypertreeDecomposition, game: &GraphicalGame) -> Result<CliqueTree> {
    let h = game_hypergraph(game);
    validate_hypertree_decomposition(htd, &h).map_err(|v| Error::InvalidHypertree(v.to_string()))?;
    let tree = CliqueTree::new(htd.chi().to_vec(), htd.tree_edges())?;
    tree.covers_graph(&primal_graph(&h))?;
    let bound = htd.width() * game.max_neighborhood();
    assert!(tree.width() <= bound, "lifted width {} exceeds {bound}", tree.width());
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::structure::grahams_algorithm;

    #[test]
    fn path3_bags_lift_to_everything() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]).unwrap();
        let t = lift_tree_decomposition(&td, &fixtures::path3()).unwrap();
        assert_eq!(t.nodes(), &[vec![0, 1, 2], vec![0, 1, 2]]);
        assert!(t.width() <= 6);
    }

    #[test]
    fn solo_lift() {
        let td = TreeDecomposition::new(vec![vec![0]], vec![]).unwrap();
        let t = lift_tree_decomposition(&td, &fixtures::solo()).unwrap();
        assert_eq!(t.nodes(), &[vec![0]]);
        assert_eq!(t.width(), 1);
    }

    #[test]
    fn star_bags_lift_to_all_players() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![0, 2], vec![0, 3]], vec![(0, 1), (0, 2)]).unwrap();
        let t = lift_tree_decomposition(&td, &fixtures::star(3)).unwrap();
        assert!(t.nodes().iter().all(|n| n == &vec![0, 1, 2, 3]));
        assert_eq!(t.width(), 4);
    }

    #[test]
    fn invalid_tree_decomposition_rejected() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]).unwrap();
        assert!(lift_tree_decomposition(&td, &fixtures::path3()).is_err());
    }

    #[test]
    fn join_tree_as_hypertree() {
        let game = fixtures::path3();
        let jt = grahams_algorithm(&game_hypergraph(&game)).join_tree.unwrap();
        let htd = HypertreeDecomposition::from_join_tree(&jt, 1).unwrap();
        assert_eq!(htd.width(), 1);
        let t = lift_hypertree_decomposition(&htd, &game).unwrap();
        assert_eq!(t.nodes(), &[vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
        assert!(t.width() <= game.max_neighborhood());

        let solo = fixtures::solo();
        let jt = grahams_algorithm(&game_hypergraph(&solo)).join_tree.unwrap();
        let t = lift_hypertree_decomposition(&HypertreeDecomposition::from_join_tree(&jt, 0).unwrap(), &solo).unwrap();
        assert_eq!(t.nodes(), &[vec![0]]);
    }
}
