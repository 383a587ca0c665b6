use crate::game::GraphicalGame;
use crate::structure::Graph;
use crate::{Error, Result};

/// Hypergraph over vertices `0..n` with set-distinct, nonempty hyperedges.
///
/// Hyperedges are kept sorted ascending and ordered by smallest member, then
/// size, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    num_vertices: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(num_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut edges: Vec<Vec<usize>> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e.dedup();
                e
            })
            .collect();
        if edges.iter().any(Vec::is_empty) {
            return Err(Error::InvalidHypergraph("empty hyperedge".into()));
        }
        if let Some(&v) = edges.iter().flatten().find(|&&v| v >= num_vertices) {
            return Err(Error::InvalidHypergraph(format!("vertex {v} out of range")));
        }
        edges.sort_by(|a, b| (a[0], a.len(), a).cmp(&(b[0], b.len(), b)));
        edges.dedup();
        let mut covered = vec![false; num_vertices];
        for &v in edges.iter().flatten() {
            covered[v] = true;
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidHypergraph(format!("vertex {v} is in no hyperedge")));
        }
        Ok(Hypergraph { num_vertices, edges })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn position(&self, edge: &[usize]) -> Option<usize> {
        self.edges.iter().position(|e| e == edge)
    }
}

/// `H(G)`: one hyperedge `N(p)` per player, duplicates merged.
pub fn game_hypergraph(game: &GraphicalGame) -> Hypergraph {
    let edges = (0..game.num_players()).map(|p| game.neighborhood(p).to_vec()).collect();
    Hypergraph::new(game.num_players(), edges).expect("neighborhoods form a valid hypergraph")
}

/// Two vertices are adjacent iff some hyperedge contains both.
pub fn primal_graph(h: &Hypergraph) -> Graph {
    let mut g = Graph::new(h.num_vertices());
    for e in h.edges() {
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn hypergraphs_of_fixtures() {
        assert_eq!(game_hypergraph(&fixtures::path3()).edges(), &[vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
        assert_eq!(game_hypergraph(&fixtures::coord2()).edges(), &[vec![0, 1]]);
        assert_eq!(game_hypergraph(&fixtures::solo()).edges(), &[vec![0]]);
    }

    #[test]
    fn primal_graphs() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(primal_graph(&h), Graph::complete(3));
        let h = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(primal_graph(&h).edges(), vec![(0, 1), (1, 2)]);
        let g = primal_graph(&game_hypergraph(&fixtures::path3()));
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn invalid_hypergraphs() {
        assert!(Hypergraph::new(2, vec![vec![0]]).is_err());
        assert!(Hypergraph::new(1, vec![vec![]]).is_err());
        assert!(Hypergraph::new(1, vec![vec![3]]).is_err());
        let h = Hypergraph::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(h.edges().len(), 1);
    }
}
