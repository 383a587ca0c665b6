//! Semiring-generic junction-tree calibration.
//!
//! Potentials of the significant cliques are loaded onto the nodes of a
//! clique tree, then calibrated by one collect pass towards the root and one
//! distribute pass back to the leaves. No division is ever performed, so the
//! same engine serves the Boolean, Counting and max-product semirings.
//! Within each pass, all nodes at the same depth are processed together under
//! the chosen [`Execution`] policy.

use std::borrow::Cow;

use crate::exec::{self, Execution};
use crate::game::Profile;
use crate::mrf::{MarkovRandomField, PotentialTable};
use crate::semiring::{EpsPower, MaxProduct, Semiring};
use crate::structure::CliqueTree;
use crate::table::{is_sorted_subset, sorted_intersection, Domain};
use crate::{Error, Result};

/// Clique tree carrying one potential per node: the product of the
/// significant-clique potentials assigned to it, or all ones.
#[derive(Clone, Debug)]
pub struct LoadedCliqueTree<S: Semiring> {
    semiring: S,
    tree: CliqueTree,
    strategy_counts: Vec<usize>,
    tables: Vec<PotentialTable<S::Value>>,
    assignment: Vec<usize>,
    rooted: Rooted,
    occurrences: Vec<Vec<usize>>,
}

impl<S: Semiring> LoadedCliqueTree<S> {
    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn tree(&self) -> &CliqueTree {
        &self.tree
    }

    pub fn tables(&self) -> &[PotentialTable<S::Value>] {
        &self.tables
    }

    /// Node holding significant clique `c`.
    pub fn node_of_clique(&self, c: usize) -> usize {
        self.assignment[c]
    }

    pub fn num_variables(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn root(&self) -> usize {
        self.rooted.root
    }
}

/// Orientation of the tree away from its root, grouped by depth.
#[derive(Clone, Debug)]
struct Rooted {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    levels: Vec<Vec<usize>>,
    /// Separator between each node and its parent (empty for the root).
    separators: Vec<Domain>,
}

impl Rooted {
    fn new(tree: &CliqueTree, strategy_counts: &[usize]) -> Result<Self> {
        let nodes = tree.nodes();
        let root = (0..tree.len())
            .min_by_key(|&i| (nodes[i].first().copied().unwrap_or(usize::MAX), i))
            .expect("trees are nonempty");
        let adj = tree.adjacency();
        let mut parent = vec![None; tree.len()];
        let mut children = vec![Vec::new(); tree.len()];
        let mut levels = vec![vec![root]];
        let mut seen = vec![false; tree.len()];
        seen[root] = true;
        loop {
            let mut next = Vec::new();
            for &v in levels.last().unwrap() {
                for &w in &adj[v] {
                    if !std::mem::replace(&mut seen[w], true) {
                        parent[w] = Some(v);
                        children[v].push(w);
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        let separators = (0..tree.len())
            .map(|v| {
                let members = parent[v].map_or_else(Vec::new, |p| sorted_intersection(&nodes[v], &nodes[p]));
                Domain::over(&members, strategy_counts)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Rooted { root, parent, children, levels, separators })
    }
}

/// Assigns each significant clique to the smallest-index node containing it
/// and multiplies the assigned potentials into per-node tables.
pub fn load_potentials<S: Semiring>(tree: &CliqueTree, mrf: &MarkovRandomField<S>) -> Result<LoadedCliqueTree<S>> {
    load_potentials_with(tree, mrf, Execution::default())
}

pub fn load_potentials_with<S: Semiring>(
    tree: &CliqueTree,
    mrf: &MarkovRandomField<S>,
    exec: Execution,
) -> Result<LoadedCliqueTree<S>> {
    let n = mrf.strategy_counts().len();
    let mut occurrences = vec![Vec::new(); n];
    for (i, node) in tree.nodes().iter().enumerate() {
        for &v in node {
            if v >= n {
                return Err(Error::MalformedTree(format!("node {i} names unknown player {v}")));
            }
            occurrences[v].push(i);
        }
    }
    // A node equal to the clique wins; otherwise the smallest-index container.
    let mut assignment = Vec::with_capacity(mrf.cliques().len());
    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); tree.len()];
    for (c, clique) in mrf.cliques().iter().enumerate() {
        let containers =
            || occurrences[clique[0]].iter().copied().filter(|&i| is_sorted_subset(clique, &tree.nodes()[i]));
        let node = containers()
            .find(|&i| tree.nodes()[i].len() == clique.len())
            .or_else(|| containers().next())
            .ok_or_else(|| Error::UncoveredClique(clique.clone()))?;
        assignment.push(node);
        assigned[node].push(c);
    }
    let domains =
        tree.nodes().iter().map(|node| Domain::over(node, mrf.strategy_counts())).collect::<Result<Vec<_>>>()?;
    let s = mrf.semiring();
    let jobs: Vec<(Domain, &[usize])> = domains.into_iter().zip(assigned.iter().map(Vec::as_slice)).collect();
    let tables = exec::map_slice(exec, &jobs, |(domain, cliques)| {
        let mut table = PotentialTable::filled(domain.clone(), s.one());
        for &c in *cliques {
            table.multiply_in(&mrf.potentials()[c], s);
        }
        table
    });
    let rooted = Rooted::new(tree, mrf.strategy_counts())?;
    Ok(LoadedCliqueTree {
        semiring: s.clone(),
        tree: tree.clone(),
        strategy_counts: mrf.strategy_counts().to_vec(),
        tables,
        assignment,
        rooted,
        occurrences,
    })
}

/// Beliefs and messages after a collect/distribute sweep.
#[derive(Clone, Debug)]
pub struct CalibratedTree<S: Semiring> {
    semiring: S,
    tree: CliqueTree,
    strategy_counts: Vec<usize>,
    occurrences: Vec<Vec<usize>>,
    root: usize,
    beliefs: Vec<PotentialTable<S::Value>>,
    upward: Vec<Option<PotentialTable<S::Value>>>,
    downward: Vec<Option<PotentialTable<S::Value>>>,
}

impl<S: Semiring> CalibratedTree<S> {
    pub fn tree(&self) -> &CliqueTree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn beliefs(&self) -> &[PotentialTable<S::Value>] {
        &self.beliefs
    }

    /// Message sent from `node` to its parent, if `node` is not the root.
    pub fn upward_message(&self, node: usize) -> Option<&PotentialTable<S::Value>> {
        self.upward[node].as_ref()
    }

    /// Message sent from the parent of `node` to `node`.
    pub fn downward_message(&self, node: usize) -> Option<&PotentialTable<S::Value>> {
        self.downward[node].as_ref()
    }

    /// Number of messages exchanged, `2 * (nodes - 1)`.
    pub fn message_count(&self) -> usize {
        self.upward.iter().flatten().count() + self.downward.iter().flatten().count()
    }

    /// Sum of the root belief over all its assignments.
    pub fn total(&self) -> S::Value {
        self.semiring.sum(self.beliefs[self.root].entries())
    }

    fn covering_node(&self, clique: &[usize]) -> Result<usize> {
        let Some(&first) = clique.first() else { return Ok(self.root) };
        if first >= self.occurrences.len() || !clique.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::UncoveredClique(clique.to_vec()));
        }
        self.occurrences[first]
            .iter()
            .copied()
            .find(|&i| is_sorted_subset(clique, &self.tree.nodes()[i]))
            .ok_or_else(|| Error::UncoveredClique(clique.to_vec()))
    }

    /// Belief of the first covering node, summed onto `clique` (ascending).
    pub fn marginal_table(&self, clique: &[usize]) -> Result<PotentialTable<S::Value>> {
        let node = self.covering_node(clique)?;
        let domain = Domain::over(clique, &self.strategy_counts)?;
        Ok(self.beliefs[node].marginalize(&domain, &self.semiring))
    }

    /// Marginal of `clique` at the assignment `values` (one per member).
    pub fn clique_marginal(&self, clique: &[usize], values: &[usize]) -> Result<S::Value> {
        if values.len() != clique.len() {
            return Err(Error::AssignmentMismatch);
        }
        for (&p, &v) in clique.iter().zip(values) {
            if p < self.strategy_counts.len() && v >= self.strategy_counts[p] {
                return Err(Error::InvalidStrategy { player: p, strategy: v });
            }
        }
        Ok(self.marginal_table(clique)?.get(values).clone())
    }

    /// Single-variable marginals for every player.
    pub fn variable_marginals(&self) -> Vec<Vec<S::Value>> {
        (0..self.strategy_counts.len())
            .map(|v| {
                let node = self.occurrences[v][0];
                let domain = Domain::over(&[v], &self.strategy_counts).expect("single variable");
                self.beliefs[node].marginalize(&domain, &self.semiring).entries().to_vec()
            })
            .collect()
    }
}

pub fn calibrate<S: Semiring>(loaded: &LoadedCliqueTree<S>) -> CalibratedTree<S> {
    calibrate_with(loaded, None, Execution::default())
}

/// Calibrates with node tables optionally restricted to `evidence`
/// (one optional fixed strategy per player).
pub fn calibrate_with<S: Semiring>(
    loaded: &LoadedCliqueTree<S>,
    evidence: Option<&[Option<usize>]>,
    exec: Execution,
) -> CalibratedTree<S> {
    let s = &loaded.semiring;
    let r = &loaded.rooted;
    let n = loaded.tree.len();
    let tables: Cow<'_, [PotentialTable<S::Value>]> = match evidence {
        Some(ev) if ev.iter().any(Option::is_some) => Cow::Owned(exec::map_slice(exec, &loaded.tables, |t| {
            let mut t = t.clone();
            t.restrict(ev, s);
            t
        })),
        _ => Cow::Borrowed(&loaded.tables),
    };

    let upward = collect(loaded, &tables, exec).upward;

    // Distribute: the message to child k excludes k's own upward message,
    // built from prefix and suffix products since there is no division.
    let mut downward: Vec<Option<PotentialTable<S::Value>>> = vec![None; n];
    let mut beliefs: Vec<Option<PotentialTable<S::Value>>> = vec![None; n];
    for level in &r.levels {
        let done = exec::map_slice(exec, level, |&v| {
            let mut base = tables[v].clone();
            if let Some(msg) = &downward[v] {
                base.multiply_in(msg, s);
            }
            let kids = &r.children[v];
            let mut suffix: Vec<PotentialTable<S::Value>> = Vec::with_capacity(kids.len() + 1);
            suffix.push(PotentialTable::filled(base.domain().clone(), s.one()));
            for &c in kids.iter().rev() {
                let mut t = suffix.last().unwrap().clone();
                t.multiply_in(upward[c].as_ref().unwrap(), s);
                suffix.push(t);
            }
            suffix.reverse();
            let mut prefix = base;
            let mut messages = Vec::with_capacity(kids.len());
            for (i, &c) in kids.iter().enumerate() {
                let mut excluded = prefix.clone();
                excluded.multiply_in(&suffix[i + 1], s);
                messages.push((c, excluded.marginalize(&r.separators[c], s)));
                prefix.multiply_in(upward[c].as_ref().unwrap(), s);
            }
            (prefix, messages)
        });
        for (&v, (belief, messages)) in level.iter().zip(done) {
            beliefs[v] = Some(belief);
            for (c, m) in messages {
                downward[c] = Some(m);
            }
        }
    }
    CalibratedTree {
        semiring: s.clone(),
        tree: loaded.tree.clone(),
        strategy_counts: loaded.strategy_counts.clone(),
        occurrences: loaded.occurrences.clone(),
        root: r.root,
        beliefs: beliefs.into_iter().map(|b| b.expect("every node is reached")).collect(),
        upward,
        downward,
    }
}

struct Collected<V> {
    upward: Vec<Option<PotentialTable<V>>>,
    root_inward: PotentialTable<V>,
}

/// Inward pass: each node's table times every message from its children,
/// marginalized onto the separator with its parent.
fn collect<S: Semiring>(
    loaded: &LoadedCliqueTree<S>,
    tables: &[PotentialTable<S::Value>],
    exec: Execution,
) -> Collected<S::Value> {
    let s = &loaded.semiring;
    let r = &loaded.rooted;
    let mut upward: Vec<Option<PotentialTable<S::Value>>> = vec![None; loaded.tree.len()];
    let mut root_inward = None;
    for level in r.levels.iter().rev() {
        let done = exec::map_slice(exec, level, |&v| {
            let mut acc = tables[v].clone();
            for &c in &r.children[v] {
                acc.multiply_in(upward[c].as_ref().expect("children are processed first"), s);
            }
            match r.parent[v] {
                Some(_) => (Some(acc.marginalize(&r.separators[v], s)), None),
                None => (None, Some(acc)),
            }
        });
        for (&v, (up, inward)) in level.iter().zip(done) {
            upward[v] = up;
            if inward.is_some() {
                root_inward = inward;
            }
        }
    }
    Collected { upward, root_inward: root_inward.expect("the root is on level 0") }
}

/// Semiring sum of the product of all potentials, from the inward pass
/// alone (`N - 1` messages). Cheaper than [`calibrate`] when only the total
/// is needed.
pub fn collect_total<S: Semiring>(loaded: &LoadedCliqueTree<S>, exec: Execution) -> S::Value {
    loaded.semiring.sum(collect(loaded, &loaded.tables, exec).root_inward.entries())
}

/// Profiles accepted by a calibrated tree, in lexicographic order.
///
/// Players are fixed in id order. Before each choice the tree is calibrated
/// under the current evidence and a value is kept only if its
/// single-variable marginal passes `accept`. When marginals are exact this
/// never leads into a dead end, so each solution costs at most one
/// calibration per branching player. Players with a single accepted value
/// are fixed without recalibrating, since every remaining solution agrees
/// on them.
pub struct LexicographicSolutions<'a, S: Semiring, A> {
    loaded: Cow<'a, LoadedCliqueTree<S>>,
    accept: A,
    exec: Execution,
    stack: Vec<Frame>,
    started: bool,
    calibrations: usize,
}

struct Frame {
    evidence: Vec<Option<usize>>,
    var: usize,
    candidates: Vec<usize>,
    next: usize,
}

enum Expansion {
    Solution(Profile),
    Branch(Frame),
    Dead,
}

impl<'a, S: Semiring, A: Fn(&S::Value) -> bool> LexicographicSolutions<'a, S, A> {
    pub fn new(loaded: &'a LoadedCliqueTree<S>, accept: A, exec: Execution) -> Self {
        Self::from_cow(Cow::Borrowed(loaded), accept, exec)
    }

    pub fn owned(loaded: LoadedCliqueTree<S>, accept: A, exec: Execution) -> Self {
        Self::from_cow(Cow::Owned(loaded), accept, exec)
    }

    fn from_cow(loaded: Cow<'a, LoadedCliqueTree<S>>, accept: A, exec: Execution) -> Self {
        LexicographicSolutions { loaded, accept, exec, stack: Vec::new(), started: false, calibrations: 0 }
    }

    /// Calibrations performed so far.
    pub fn calibrations(&self) -> usize {
        self.calibrations
    }

    fn expand(&mut self, mut evidence: Vec<Option<usize>>) -> Expansion {
        let cal = calibrate_with(&self.loaded, Some(&evidence), self.exec);
        self.calibrations += 1;
        let marginals = cal.variable_marginals();
        let mut branch: Option<(usize, Vec<usize>)> = None;
        for (v, marginal) in marginals.iter().enumerate() {
            if evidence[v].is_some() {
                continue;
            }
            let accepted: Vec<usize> = (0..marginal.len()).filter(|&s| (self.accept)(&marginal[s])).collect();
            match accepted.len() {
                0 => return Expansion::Dead,
                1 => evidence[v] = Some(accepted[0]),
                _ => {
                    if branch.is_none() {
                        branch = Some((v, accepted));
                    }
                }
            }
        }
        match branch {
            None => Expansion::Solution(Profile(evidence.into_iter().map(Option::unwrap).collect())),
            Some((var, candidates)) => Expansion::Branch(Frame { evidence, var, candidates, next: 0 }),
        }
    }
}

impl<S: Semiring, A: Fn(&S::Value) -> bool> Iterator for LexicographicSolutions<'_, S, A> {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if !self.started {
            self.started = true;
            match self.expand(vec![None; self.loaded.num_variables()]) {
                Expansion::Solution(p) => return Some(p),
                Expansion::Branch(f) => self.stack.push(f),
                Expansion::Dead => return None,
            }
        }
        loop {
            let top = self.stack.last_mut()?;
            if top.next == top.candidates.len() {
                self.stack.pop();
                continue;
            }
            let mut evidence = top.evidence.clone();
            evidence[top.var] = Some(top.candidates[top.next]);
            top.next += 1;
            match self.expand(evidence) {
                Expansion::Solution(p) => return Some(p),
                Expansion::Branch(f) => self.stack.push(f),
                Expansion::Dead => debug_assert!(false, "accepted marginals always extend"),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapSolution {
    /// `max_x p_eps(x)` as a power of the symbolic epsilon.
    pub optimum: EpsPower,
    /// The optimum rendered at the requested epsilon.
    pub value: f64,
    /// Lexicographically smallest maximizer.
    pub argmax: Profile,
}

/// Maximum a posteriori configuration of a max-product loaded tree.
pub fn map_solve(loaded: &LoadedCliqueTree<MaxProduct>, epsilon: f64) -> Result<MapSolution> {
    map_solve_with(loaded, epsilon, Execution::default())
}

pub fn map_solve_with(loaded: &LoadedCliqueTree<MaxProduct>, epsilon: f64, exec: Execution) -> Result<MapSolution> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let optimum = calibrate_with(loaded, None, exec).total();
    let argmax = LexicographicSolutions::new(loaded, |v: &EpsPower| *v == optimum, exec)
        .next()
        .expect("a maximizer always exists");
    Ok(MapSolution { optimum, value: optimum.at(epsilon), argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::mrf::build_mrf;
    use crate::semiring::{Boolean, Counting};
    use crate::structure::{game_hypergraph, grahams_algorithm};
    use num_bigint::BigUint;

    fn big(v: &[u32]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn join_tree(game: &crate::GraphicalGame) -> CliqueTree {
        grahams_algorithm(&game_hypergraph(game)).join_tree.unwrap()
    }

    #[test]
    fn single_node_load_and_calibrate() {
        let game = fixtures::coord2();
        let mrf = build_mrf(&game, 0.0, Counting).unwrap();
        let tree = CliqueTree::new(vec![vec![0, 1]], vec![]).unwrap();
        let loaded = load_potentials(&tree, &mrf).unwrap();
        assert_eq!(loaded.tables()[0].entries(), big(&[1, 0, 0, 1]).as_slice());
        let cal = calibrate(&loaded);
        assert_eq!(cal.beliefs()[0].entries(), big(&[1, 0, 0, 1]).as_slice());
        assert_eq!(cal.message_count(), 0);
        assert_eq!(cal.clique_marginal(&[0, 1], &[0, 0]).unwrap(), BigUint::from(1u32));
        assert_eq!(cal.clique_marginal(&[0], &[0]).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn path3_join_tree_loading() {
        let game = fixtures::path3();
        let mrf = build_mrf(&game, 0.0, Counting).unwrap();
        let tree = join_tree(&game);
        let loaded = load_potentials(&tree, &mrf).unwrap();
        for c in 0..3 {
            assert_eq!(loaded.node_of_clique(c), c);
            assert_eq!(loaded.tables()[c], mrf.potentials()[c]);
        }
        let cal = calibrate(&loaded);
        assert_eq!(cal.message_count(), 4);
        let middle = &cal.beliefs()[1];
        let nonzero: Vec<usize> = (0..8).filter(|&i| middle.entries()[i] != BigUint::from(0u32)).collect();
        assert_eq!(nonzero, vec![0, 7]);
        assert!(nonzero.iter().all(|&i| middle.entries()[i] == BigUint::from(1u32)));
    }

    #[test]
    fn uncovered_clique_is_rejected() {
        let game = fixtures::path3();
        let mrf = build_mrf(&game, 0.0, Counting).unwrap();
        let tree = CliqueTree::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]).unwrap();
        assert_eq!(load_potentials(&tree, &mrf).unwrap_err(), Error::UncoveredClique(vec![0, 1, 2]));
    }

    #[test]
    fn pennies_boolean_beliefs_vanish() {
        let game = fixtures::pennies();
        let mrf = build_mrf(&game, 0.0, Boolean).unwrap();
        let cal = calibrate(&load_potentials(&join_tree(&game), &mrf).unwrap());
        assert!(cal.beliefs().iter().all(|b| b.entries().iter().all(|v| !v)));
        let mrf = build_mrf(&game, 0.0, Counting).unwrap();
        let cal = calibrate(&load_potentials(&join_tree(&game), &mrf).unwrap());
        assert_eq!(cal.clique_marginal(&[0, 1], &[0, 1]).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn map_examples() {
        let check = |game: crate::GraphicalGame, value: f64, argmax: &[usize]| {
            let mrf = build_mrf(&game, 0.5, MaxProduct).unwrap();
            let loaded = load_potentials(&join_tree(&game), &mrf).unwrap();
            let sol = map_solve(&loaded, 0.5).unwrap();
            assert_eq!(sol.value, value);
            assert_eq!(sol.argmax.0, argmax);
        };
        check(fixtures::coord2(), 1.0, &[0, 0]);
        check(fixtures::pennies(), 0.5, &[0, 0]);
        check(fixtures::solo(), 1.0, &[0]);
    }

    #[test]
    fn lexicographic_solutions_of_coordination() {
        let game = fixtures::path_coordination(6);
        let mrf = build_mrf(&game, 0.0, Counting).unwrap();
        let loaded = load_potentials(&join_tree(&game), &mrf).unwrap();
        let mut it =
            LexicographicSolutions::new(&loaded, |v: &BigUint| *v != BigUint::from(0u32), Execution::Sequential);
        let found: Vec<Profile> = it.by_ref().collect();
        assert_eq!(found, crate::brute_force_equilibria(&game).unwrap());
        // Never more than one calibration per branching player per solution.
        assert!(it.calibrations() <= 1 + found.len() * 6);
    }

    #[test]
    fn calibration_is_policy_independent() {
        let game = fixtures::star(4);
        let mrf = build_mrf(&game, 0.0, Counting).unwrap();
        let loaded = load_potentials(&join_tree(&game), &mrf).unwrap();
        let a = calibrate_with(&loaded, None, Execution::Sequential);
        let b = calibrate_with(&loaded, None, Execution::Parallel);
        assert_eq!(a.beliefs(), b.beliefs());
        assert_eq!(collect_total(&loaded, Execution::Sequential), a.total());
        assert_eq!(collect_total(&loaded, Execution::Parallel), a.total());
    }
}
