//! Graham / GYO reduction.
//!
//! Repeatedly delete vertices that occur in exactly one live hyperedge and
//! hyperedges whose remaining vertices lie inside another live hyperedge.
//! The hypergraph is acyclic iff this leaves a single hyperedge. Attaching
//! every absorbed hyperedge to its absorber yields a join tree.
//!
//! Sets only shrink during the reduction, so an edge can become absorbable
//! only after one of its own vertices is deleted. Both deletions are driven
//! by worklists, keeping the reduction near-linear on sparse hypergraphs.

use std::collections::BTreeSet;

use crate::structure::{CliqueTree, Hypergraph};
use crate::table::is_sorted_subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityResult {
    pub acyclic: bool,
    /// Join tree whose node `i` is hyperedge `i` of the input; present iff acyclic.
    pub join_tree: Option<CliqueTree>,
}

pub fn grahams_algorithm(h: &Hypergraph) -> AcyclicityResult {
    let edges = h.edges();
    let m = edges.len();
    let mut current: Vec<Vec<usize>> = edges.to_vec();
    let mut alive = vec![true; m];
    let mut alive_set: BTreeSet<usize> = (0..m).collect();
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); h.num_vertices()];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            incidence[v].push(i);
        }
    }
    let mut count: Vec<usize> = incidence.iter().map(Vec::len).collect();
    let mut vertex_queue: Vec<usize> = (0..h.num_vertices()).filter(|&v| count[v] == 1).collect();
    // Candidates are examined smallest original hyperedge first, then by index.
    let mut edge_queue: BTreeSet<(usize, usize)> = (0..m).map(|i| (edges[i].len(), i)).collect();
    let mut tree_edges: Vec<(usize, usize)> = Vec::with_capacity(m.saturating_sub(1));

    loop {
        while let Some(v) = vertex_queue.pop() {
            if count[v] != 1 {
                continue;
            }
            let owner = *incidence[v]
                .iter()
                .find(|&&i| alive[i] && current[i].binary_search(&v).is_ok())
                .expect("a counted vertex has a live owner");
            let pos = current[owner].binary_search(&v).unwrap();
            current[owner].remove(pos);
            count[v] = 0;
            edge_queue.insert((edges[owner].len(), owner));
        }
        if alive_set.len() <= 1 {
            break;
        }
        let Some((_, i)) = edge_queue.pop_first() else { break };
        if !alive[i] {
            continue;
        }
        let witness = if current[i].is_empty() {
            alive_set.iter().copied().find(|&j| j != i)
        } else {
            let pivot = *current[i].iter().min_by_key(|&&v| (incidence[v].len(), v)).unwrap();
            incidence[pivot].iter().copied().find(|&j| j != i && alive[j] && is_sorted_subset(&current[i], &current[j]))
        };
        let Some(j) = witness else { continue };
        alive[i] = false;
        alive_set.remove(&i);
        tree_edges.push((i, j));
        for &v in &current[i] {
            count[v] -= 1;
            if count[v] == 1 {
                vertex_queue.push(v);
            }
        }
    }

    if alive_set.len() == 1 {
        let tree = CliqueTree::new(edges.to_vec(), tree_edges).expect("GYO absorption yields a join tree");
        AcyclicityResult { acyclic: true, join_tree: Some(tree) }
    } else {
        AcyclicityResult { acyclic: false, join_tree: None }
    }
}
