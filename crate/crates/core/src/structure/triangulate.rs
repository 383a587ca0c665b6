use std::collections::BTreeSet;

use crate::structure::{CliqueTree, Graph};
use crate::{Error, Result};

/// Largest graph the exhaustive elimination-order search accepts by default.
pub const DEFAULT_EXACT_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TriangulationStrategy {
    #[default]
    MinFill,
    MinDegree,
    /// Exhaustive search for an order minimizing the largest created clique.
    ExactSmall,
}

impl TriangulationStrategy {
    pub fn name(self) -> &'static str {
        match self {
            TriangulationStrategy::MinFill => "min-fill",
            TriangulationStrategy::MinDegree => "min-degree",
            TriangulationStrategy::ExactSmall => "exact-small",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    /// Chordal supergraph of the input.
    pub graph: Graph,
    /// Perfect elimination order of `graph`.
    pub order: Vec<usize>,
}

impl Triangulation {
    pub fn fill_edges(&self, original: &Graph) -> Vec<(usize, usize)> {
        self.graph.edges().into_iter().filter(|&(u, v)| !original.has_edge(u, v)).collect()
    }

    /// Size of the largest clique created by the elimination.
    pub fn max_clique(&self) -> usize {
        let pos = positions(&self.order);
        self.order
            .iter()
            .map(|&v| 1 + self.graph.neighbors(v).iter().filter(|&&u| pos[u] > pos[v]).count())
            .max()
            .unwrap_or(0)
    }
}

pub fn triangulate(g: &Graph, strategy: TriangulationStrategy) -> Result<Triangulation> {
    triangulate_with_cap(g, strategy, DEFAULT_EXACT_CAP)
}

pub fn triangulate_with_cap(g: &Graph, strategy: TriangulationStrategy, exact_cap: usize) -> Result<Triangulation> {
    let order = match strategy {
        TriangulationStrategy::MinFill => greedy_order(g, fill_in),
        TriangulationStrategy::MinDegree => greedy_order(g, |adj, v| adj[v].len()),
        TriangulationStrategy::ExactSmall => {
            if g.num_vertices() > exact_cap {
                return Err(Error::ExactTooLarge { cap: exact_cap, found: g.num_vertices() });
            }
            exact_order(g)
        }
    };
    Ok(Triangulation { graph: eliminate(g, &order), order })
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy elimination by smallest score, ties broken by smallest vertex id.
/// Scores are refreshed for the two-hop neighborhood of each eliminated
/// vertex, the only vertices whose fill-in or degree can change.
fn greedy_order(g: &Graph, score: impl Fn(&[BTreeSet<usize>], usize) -> usize) -> Vec<usize> {
    let n = g.num_vertices();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut current: Vec<usize> = (0..n).map(|v| score(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (current[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        order.push(v);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        let mut touched: BTreeSet<usize> = nbrs.iter().copied().collect();
        for &a in &nbrs {
            touched.extend(adj[a].iter().copied());
        }
        for w in touched {
            let fresh = score(&adj, w);
            if fresh != current[w] && queue.remove(&(current[w], w)) {
                current[w] = fresh;
                queue.insert((fresh, w));
            }
        }
    }
    order
}

/// Subset dynamic program over elimination prefixes. `best[S]` is the
/// smallest achievable maximum "higher neighborhood" size when the vertices
/// of `S` are eliminated first; the vertex eliminated last within `S` sees
/// exactly the outside vertices reachable from it through `S`.
fn exact_order(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    if n == 0 {
        return Vec::new();
    }
    let full = (1usize << n) - 1;
    let mut best = vec![usize::MAX; 1 << n];
    let mut last = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for set in 1..=full {
        for v in (0..n).filter(|&v| set & (1 << v) != 0) {
            let rest = set & !(1 << v);
            let cost = best[rest].max(reach_outside(g, rest, v));
            if cost < best[set] {
                best[set] = cost;
                last[set] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = last[set];
        order.push(v);
        set &= !(1 << v);
    }
    order.reverse();
    order
}

fn reach_outside(g: &Graph, inside: usize, start: usize) -> usize {
    let mut seen = 1usize << start;
    let mut stack = vec![start];
    let mut outside = 0usize;
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if seen & (1 << w) != 0 {
                continue;
            }
            seen |= 1 << w;
            if inside & (1 << w) != 0 {
                stack.push(w);
            } else {
                outside += 1;
            }
        }
    }
    outside
}

fn positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Elimination game: connect the later neighbors of each vertex in turn.
fn eliminate(g: &Graph, order: &[usize]) -> Graph {
    let pos = positions(order);
    let mut filled = g.clone();
    for &v in order {
        let later: Vec<usize> = filled.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                filled.add_edge(a, b);
            }
        }
    }
    filled
}

pub fn is_perfect_elimination_order(g: &Graph, order: &[usize]) -> bool {
    let n = g.num_vertices();
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    let pos = positions(order);
    order.iter().all(|&v| {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        g.is_clique(&later)
    })
}

/// Clique tree whose nodes are the maximal cliques of the chordal graph `g`,
/// read off a perfect elimination order. Components are joined through
/// empty separators.
pub fn clique_tree_from_chordal(g: &Graph, order: &[usize]) -> Result<CliqueTree> {
    if !is_perfect_elimination_order(g, order) {
        return Err(Error::NotChordal);
    }
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::EmptyGame);
    }
    let pos = positions(order);
    let higher: Vec<Vec<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect()).collect();
    let parent: Vec<Option<usize>> = higher.iter().map(|h| h.iter().copied().min_by_key(|&u| pos[u])).collect();

    // C_v = {v} ∪ higher(v) is maximal unless some child u has higher(u) = C_v.
    let mut absorbed_by: Vec<Option<usize>> = vec![None; n];
    for &u in order {
        if let Some(p) = parent[u] {
            if absorbed_by[p].is_none() && higher[u].len() == higher[p].len() + 1 {
                absorbed_by[p] = Some(u);
            }
        }
    }
    let mut owner = vec![usize::MAX; n];
    let mut nodes: Vec<Vec<usize>> = Vec::new();
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for &v in order {
        match absorbed_by[v] {
            Some(u) => owner[v] = owner[u],
            None => {
                let mut clique = higher[v].clone();
                clique.push(v);
                clique.sort_unstable();
                owner[v] = nodes.len();
                nodes.push(clique);
            }
        }
    }
    // Owner classes are paths in the elimination forest; contracting them
    // leaves one outgoing edge per class.
    for &v in order {
        match parent[v] {
            Some(p) if owner[p] != owner[v] => edges.push((owner[v], owner[p])),
            Some(_) => {}
            None => roots.push(owner[v]),
        }
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    CliqueTree::new(nodes, edges)
}
