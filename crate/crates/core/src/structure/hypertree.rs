use std::fmt;

use crate::structure::{CliqueTree, Hypergraph};
use crate::table::{is_sorted_subset, sorted_intersection};
use crate::{Error, Result};

/// Rooted tree with two labels per node: a vertex set `chi` and a set of
/// hyperedges `lambda`. Width is the largest `|lambda(v)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertreeDecomposition {
    parent: Vec<Option<usize>>,
    chi: Vec<Vec<usize>>,
    lambda: Vec<Vec<Vec<usize>>>,
}

impl HypertreeDecomposition {
    /// Checks that `parent` describes a single rooted tree; the decomposition
    /// conditions themselves are checked by [`validate_hypertree_decomposition`].
    pub fn new(parent: Vec<Option<usize>>, chi: Vec<Vec<usize>>, lambda: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let n = parent.len();
        if chi.len() != n || lambda.len() != n {
            return Err(Error::InvalidHypertree("parent, chi and lambda lengths differ".into()));
        }
        let edges: Vec<(usize, usize)> = parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (v, p))).collect();
        if parent.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(Error::InvalidHypertree("exactly one root is required".into()));
        }
        super::tree::check_tree_shape(n, &edges).map_err(|e| Error::InvalidHypertree(e.to_string()))?;
        let sort = |mut s: Vec<usize>| {
            s.sort_unstable();
            s.dedup();
            s
        };
        let chi = chi.into_iter().map(sort).collect();
        let lambda = lambda
            .into_iter()
            .map(|l| {
                let mut l: Vec<Vec<usize>> = l.into_iter().map(sort).collect();
                l.sort();
                l.dedup();
                l
            })
            .collect();
        Ok(HypertreeDecomposition { parent, chi, lambda })
    }

    /// The width-1 decomposition induced by a join tree rooted at `root`:
    /// `chi(v) = node(v)` and `lambda(v) = {node(v)}`.
    pub fn from_join_tree(tree: &CliqueTree, root: usize) -> Result<Self> {
        let adj = tree.adjacency();
        let mut parent = vec![None; tree.len()];
        let mut seen = vec![false; tree.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        let chi = tree.nodes().to_vec();
        let lambda = chi.iter().map(|c| vec![c.clone()]).collect();
        HypertreeDecomposition::new(parent, chi, lambda)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn chi(&self) -> &[Vec<usize>] {
        &self.chi
    }

    pub fn lambda(&self) -> &[Vec<Vec<usize>>] {
        &self.lambda
    }

    pub fn width(&self) -> usize {
        self.lambda.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn root(&self) -> usize {
        self.parent.iter().position(Option::is_none).expect("validated at construction")
    }

    pub(crate) fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v))).collect()
    }

    /// Nodes listed so that every parent precedes its children.
    fn top_down(&self) -> Vec<usize> {
        let mut children = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        let mut order = vec![self.root()];
        let mut i = 0;
        while i < order.len() {
            order.extend(children[order[i]].iter().copied());
            i += 1;
        }
        order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HtdCondition {
    /// Some `lambda(v)` names a set that is not a hyperedge.
    ForeignHyperedge,
    /// 1: every hyperedge lies inside some `chi(v)`.
    EdgeCoverage,
    /// 2: the nodes whose `chi` contains a vertex form a connected subtree.
    Connectedness,
    /// 3: `chi(v)` is covered by the union of `lambda(v)`.
    ChiCovered,
    /// 4: `chi(T_v)` meets the union of `lambda(v)` only inside `chi(v)`.
    Descendant,
}

impl HtdCondition {
    /// Index 1..=4 of the decomposition condition, if it is one of them.
    pub fn index(self) -> Option<u8> {
        match self {
            HtdCondition::ForeignHyperedge => None,
            HtdCondition::EdgeCoverage => Some(1),
            HtdCondition::Connectedness => Some(2),
            HtdCondition::ChiCovered => Some(3),
            HtdCondition::Descendant => Some(4),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HtdCondition::ForeignHyperedge => "foreign-hyperedge",
            HtdCondition::EdgeCoverage => "edge-coverage",
            HtdCondition::Connectedness => "connectedness",
            HtdCondition::ChiCovered => "chi-covered",
            HtdCondition::Descendant => "descendant",
        }
    }
}

/// The first failed condition, with the node and vertex set that witness it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HtdViolation {
    pub condition: HtdCondition,
    pub node: Option<usize>,
    pub vertices: Vec<usize>,
}

impl HtdViolation {
    /// Human-readable description with node and vertex ids shifted by `base`.
    pub fn describe(&self, base: usize) -> String {
        let set = self.vertices.iter().map(|x| (x + base).to_string()).collect::<Vec<_>>().join(", ");
        let v = self.node.map_or(0, |v| v + base);
        match self.condition {
            HtdCondition::ForeignHyperedge => format!("lambda({v}) contains {{{set}}}, not a hyperedge"),
            HtdCondition::EdgeCoverage => format!("hyperedge {{{set}}} is in no chi"),
            HtdCondition::Connectedness => format!("nodes containing vertex {set} are disconnected"),
            HtdCondition::ChiCovered => format!("chi({v}) = {{{set}}} exceeds its lambda"),
            HtdCondition::Descendant => format!("subtree of node {v} uses {{{set}}} outside chi({v})"),
        }
    }
}

impl fmt::Display for HtdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition.index() {
            Some(i) => write!(f, "condition {i} violated: {}", self.describe(0)),
            None => write!(f, "{}", self.describe(0)),
        }
    }
}

fn violation(
    condition: HtdCondition,
    node: Option<usize>,
    vertices: &[usize],
) -> std::result::Result<(), HtdViolation> {
    Err(HtdViolation { condition, node, vertices: vertices.to_vec() })
}

/// Checks the four hypertree decomposition conditions in order and reports
/// the first one that fails.
pub fn validate_hypertree_decomposition(
    htd: &HypertreeDecomposition,
    h: &Hypergraph,
) -> std::result::Result<(), HtdViolation> {
    for (v, labels) in htd.lambda.iter().enumerate() {
        if let Some(e) = labels.iter().find(|e| h.position(e).is_none()) {
            return violation(HtdCondition::ForeignHyperedge, Some(v), e);
        }
    }
    for e in h.edges() {
        if !htd.chi.iter().any(|c| is_sorted_subset(e, c)) {
            return violation(HtdCondition::EdgeCoverage, None, e);
        }
    }
    if let Err(Error::RunningIntersection { vertex }) =
        super::tree::check_running_intersection(&htd.chi, &htd.tree_edges())
    {
        return violation(HtdCondition::Connectedness, None, &[vertex]);
    }
    let unions: Vec<Vec<usize>> = htd.lambda.iter().map(|l| union(l)).collect();
    for (v, c) in htd.chi.iter().enumerate() {
        if !is_sorted_subset(c, &unions[v]) {
            return violation(HtdCondition::ChiCovered, Some(v), c);
        }
    }
    let mut subtree: Vec<Vec<usize>> = htd.chi.clone();
    for &v in htd.top_down().iter().rev() {
        if let Some(p) = htd.parent[v] {
            let merged = union(&[subtree[p].clone(), subtree[v].clone()]);
            subtree[p] = merged;
        }
    }
    for v in 0..htd.len() {
        let meet = sorted_intersection(&subtree[v], &unions[v]);
        if !is_sorted_subset(&meet, &htd.chi[v]) {
            return violation(HtdCondition::Descendant, Some(v), &meet);
        }
    }
    Ok(())
}

fn union(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut out: Vec<usize> = sets.iter().flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_node_is_valid() {
        let htd = HypertreeDecomposition::new(vec![None], vec![vec![0, 1]], vec![vec![vec![0, 1]]]).unwrap();
        assert_eq!(validate_hypertree_decomposition(&htd, &hg(2, &[&[0, 1]])), Ok(()));
        assert_eq!(htd.width(), 1);
    }

    #[test]
    fn disconnected_occurrences_violate_condition_2() {
        // Path a - b - c with vertex 0 in chi(a) and chi(c) but not chi(b).
        let htd = HypertreeDecomposition::new(
            vec![None, Some(0), Some(1)],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![vec![vec![0, 1]], vec![vec![1, 2]], vec![vec![0, 2]]],
        )
        .unwrap();
        let err = validate_hypertree_decomposition(&htd, &hg(3, &[&[0, 1], &[1, 2], &[0, 2]])).unwrap_err();
        assert_eq!(err.condition.index(), Some(2));
    }

    #[test]
    fn chi_beyond_lambda_violates_condition_3() {
        let htd = HypertreeDecomposition::new(vec![None], vec![vec![0, 1, 2]], vec![vec![vec![0, 1]]]).unwrap();
        let err = validate_hypertree_decomposition(&htd, &hg(3, &[&[0, 1], &[0, 1, 2]])).unwrap_err();
        assert_eq!(err.condition.index(), Some(3));
    }

    #[test]
    fn missing_hyperedge_violates_condition_1() {
        let htd = HypertreeDecomposition::new(vec![None], vec![vec![0, 1]], vec![vec![vec![0, 1]]]).unwrap();
        let err = validate_hypertree_decomposition(&htd, &hg(3, &[&[0, 1], &[1, 2]])).unwrap_err();
        assert_eq!(err.condition.index(), Some(1));
    }

    #[test]
    fn coverage_and_connectedness_failures() {
        // Root {0,1} with lambda {{0,1,2}}; child has chi {1,2}. Vertex 2 is in
        // the root's lambda and below it, but not in chi(root).
        let h = hg(3, &[&[0, 1, 2], &[1, 2]]);
        let htd = HypertreeDecomposition::new(
            vec![None, Some(0), Some(1)],
            vec![vec![0, 1], vec![1, 2], vec![0, 1, 2]],
            vec![vec![vec![0, 1, 2]], vec![vec![1, 2]], vec![vec![0, 1, 2]]],
        )
        .unwrap();
        let err = validate_hypertree_decomposition(&htd, &h).unwrap_err();
        // Vertex 0 is in chi of nodes 0 and 2 but not the middle node 1.
        assert_eq!(err.condition.index(), Some(2));

        let htd = HypertreeDecomposition::new(
            vec![None, Some(0)],
            vec![vec![0, 1], vec![1, 2]],
            vec![vec![vec![0, 1, 2]], vec![vec![1, 2]]],
        )
        .unwrap();
        let err = validate_hypertree_decomposition(&htd, &h).unwrap_err();
        assert_eq!(err.condition, HtdCondition::EdgeCoverage);
    }

    #[test]
    fn pure_descendant_violation() {
        // chi(root) = {0,1}, lambda(root) = {{0,1,2}}, child chi = {0,1,2}.
        // Connectedness holds, chi(root) is covered, but vertex 2 appears below.
        let h = hg(3, &[&[0, 1, 2]]);
        let htd = HypertreeDecomposition::new(
            vec![None, Some(0)],
            vec![vec![0, 1], vec![0, 1, 2]],
            vec![vec![vec![0, 1, 2]], vec![vec![0, 1, 2]]],
        )
        .unwrap();
        let err = validate_hypertree_decomposition(&htd, &h).unwrap_err();
        assert_eq!(err.condition.index(), Some(4));
    }

    #[test]
    fn foreign_labels_rejected() {
        let htd = HypertreeDecomposition::new(vec![None], vec![vec![0]], vec![vec![vec![0, 1]]]).unwrap();
        let err = validate_hypertree_decomposition(&htd, &hg(1, &[&[0]])).unwrap_err();
        assert_eq!(err.condition, HtdCondition::ForeignHyperedge);
    }

    #[test]
    fn malformed_trees() {
        assert!(HypertreeDecomposition::new(vec![None, None], vec![vec![0], vec![0]], vec![vec![], vec![]]).is_err());
        assert!(
            HypertreeDecomposition::new(vec![Some(1), Some(0)], vec![vec![0], vec![0]], vec![vec![], vec![]]).is_err()
        );
    }
}
