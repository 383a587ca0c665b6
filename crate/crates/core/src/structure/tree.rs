use crate::structure::Graph;
use crate::table::sorted_intersection;
use crate::{Error, Result};

/// Tree of vertex sets satisfying the clique intersection property: for any
/// two nodes, their intersection is contained in every node on the path
/// between them. Width is the largest node cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueTree {
    nodes: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl CliqueTree {
    pub fn new(nodes: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nodes: Vec<Vec<usize>> = nodes
            .into_iter()
            .map(|mut n| {
                n.sort_unstable();
                n.dedup();
                n
            })
            .collect();
        check_tree_shape(nodes.len(), &edges)?;
        check_running_intersection(&nodes, &edges)?;
        Ok(CliqueTree { nodes, edges })
    }

    pub fn nodes(&self) -> &[Vec<usize>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Checks that every vertex and every edge of `g` lies inside some node,
    /// which together with the intersection property makes this a tree
    /// decomposition of `g`.
    pub fn covers_graph(&self, g: &Graph) -> Result<()> {
        let mut home: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &v in node {
                if v >= g.num_vertices() {
                    return Err(Error::MalformedTree(format!("vertex {v} is not in the graph")));
                }
                home[v].push(i);
            }
        }
        if let Some(v) = home.iter().position(Vec::is_empty) {
            return Err(Error::UncoveredVertex(v));
        }
        for (u, v) in g.edges() {
            let (a, b) = if home[u].len() <= home[v].len() { (u, v) } else { (v, u) };
            if !home[a].iter().any(|&i| self.nodes[i].binary_search(&b).is_ok()) {
                return Err(Error::UncoveredEdge(u, v));
            }
        }
        Ok(())
    }

    /// Smallest-index node containing every vertex of `set` (ascending).
    pub fn covering_node(&self, set: &[usize]) -> Option<usize> {
        self.nodes.iter().position(|n| crate::table::is_sorted_subset(set, n))
    }
}

/// Bags on a tree with edge coverage and connected occurrence sets.
/// Width is the largest bag size minus one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Checks the tree shape only; see [`TreeDecomposition::validate_for`].
    pub fn new(bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect::<Vec<_>>();
        check_tree_shape(bags.len(), &edges)?;
        Ok(TreeDecomposition { bags, edges })
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        check_running_intersection(&self.bags, &self.edges)?;
        self.as_clique_tree_unchecked().covers_graph(g)
    }

    /// Every valid tree decomposition is a clique tree of some triangulation.
    pub fn into_clique_tree(self) -> Result<CliqueTree> {
        CliqueTree::new(self.bags, self.edges)
    }

    fn as_clique_tree_unchecked(&self) -> CliqueTree {
        CliqueTree { nodes: self.bags.clone(), edges: self.edges.clone() }
    }
}

impl From<CliqueTree> for TreeDecomposition {
    fn from(t: CliqueTree) -> Self {
        TreeDecomposition { bags: t.nodes, edges: t.edges }
    }
}

pub(crate) fn check_tree_shape(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    if n == 0 {
        return Err(Error::MalformedTree("tree has no nodes".into()));
    }
    if edges.len() + 1 != n {
        return Err(Error::MalformedTree(format!("{n} nodes need {} edges, found {}", n - 1, edges.len())));
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::MalformedTree(format!("edge ({a}, {b}) names a missing node")));
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(Error::MalformedTree(format!("edge ({a}, {b}) closes a cycle")));
        }
        parent[ra] = rb;
    }
    Ok(())
}

/// For every vertex, the nodes containing it must induce a subtree. In a
/// forest an induced subgraph on k nodes is connected iff it has k-1 edges.
pub(crate) fn check_running_intersection(nodes: &[Vec<usize>], edges: &[(usize, usize)]) -> Result<()> {
    let top = nodes.iter().flatten().copied().max().map_or(0, |m| m + 1);
    let mut occurrences = vec![0usize; top];
    let mut shared_edges = vec![0usize; top];
    for &v in nodes.iter().flatten() {
        occurrences[v] += 1;
    }
    for &(a, b) in edges {
        for v in sorted_intersection(&nodes[a], &nodes[b]) {
            shared_edges[v] += 1;
        }
    }
    match (0..top).find(|&v| occurrences[v] > 0 && shared_edges[v] + 1 != occurrences[v]) {
        Some(vertex) => Err(Error::RunningIntersection { vertex }),
        None => Ok(()),
    }
}
