use std::collections::BTreeSet;

use crate::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adjacency: vec![BTreeSet::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidPlayer(u.max(v)));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Inserts `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-loops are not allowed");
        let fresh = self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        fresh
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, set) in self.adjacency.iter().enumerate() {
            out.extend(set.range(u + 1..).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.has_edge(a, b)))
    }

    pub fn is_supergraph_of(&self, other: &Graph) -> bool {
        self.num_vertices() == other.num_vertices() && other.edges().into_iter().all(|(u, v)| self.has_edge(u, v))
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_symmetric_and_sorted() {
        let g = Graph::from_edges(4, &[(2, 1), (0, 3)]).unwrap();
        assert_eq!(g.edges(), vec![(0, 3), (1, 2)]);
        assert!(g.has_edge(1, 2) && g.has_edge(2, 1));
        assert_eq!(g.num_edges(), 2);
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
    }

    #[test]
    fn complete_graph_is_a_clique() {
        let k4 = Graph::complete(4);
        assert!(k4.is_clique(&[0, 1, 2, 3]));
        assert_eq!(k4.num_edges(), 6);
    }
}
