//! Independent reference computations shared by the integration tests.
//!
//! Everything here works from payoffs and profiles alone, without the
//! library's best-response tables, hypergraph or message passing.

#![allow(dead_code)]

use pne_core::generate::{generate, Family, GenParams};
use pne_core::structure::{HypertreeDecomposition, TreeDecomposition};
use pne_core::GraphicalGame;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every profile, last player varying fastest.
pub fn all_profiles(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &k in counts {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..k).map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn unsatisfied(game: &GraphicalGame, x: &[usize]) -> usize {
    (0..game.num_players())
        .filter(|&p| {
            let own = game.payoff(p, x).unwrap();
            let mut y = x.to_vec();
            (0..game.num_strategies(p)).any(|s| {
                y[p] = s;
                game.payoff(p, &y).unwrap() > own
            })
        })
        .count()
}

pub fn equilibria(game: &GraphicalGame) -> Vec<Vec<usize>> {
    all_profiles(game.strategy_counts()).into_iter().filter(|x| unsatisfied(game, x) == 0).collect()
}

/// Number of equilibria extending each assignment of `clique`, in
/// mixed-radix order over the clique's members.
pub fn marginal_counts(game: &GraphicalGame, eqs: &[Vec<usize>], clique: &[usize]) -> Vec<u64> {
    let counts: Vec<usize> = clique.iter().map(|&p| game.num_strategies(p)).collect();
    let mut table = vec![0u64; counts.iter().product()];
    for x in eqs {
        let idx = clique.iter().zip(&counts).fold(0, |acc, (&p, &k)| acc * k + x[p]);
        table[idx] += 1;
    }
    table
}

/// Random game with at most 7 players, at most 3 strategies each, degree
/// at most 3 and payoffs in `0..=9`, cycling through the generator families.
pub fn small_random_game(seed: u64) -> GraphicalGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let family = [Family::Tree, Family::Cycle, Family::Grid, Family::RandomBoundedDegree][(seed % 4) as usize];
    let min_players = if family == Family::Cycle { 3 } else { 1 };
    let params = GenParams {
        family,
        players: rng.gen_range(min_players..=7),
        min_strategies: 1,
        max_strategies: 3,
        max_payoff: 9,
        max_degree: 3,
        seed,
    };
    generate(&params).unwrap()
}

/// Tree decomposition of the game graph from a random elimination order.
pub fn random_tree_decomposition(game: &GraphicalGame, seed: u64) -> TreeDecomposition {
    let n = game.num_players();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|p| game.neighbors(p).iter().copied().collect()).collect();
    let mut bags = vec![Vec::new(); n];
    for &v in &order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bags[v] = bag;
    }
    // Bag of v hangs off the bag of its earliest-eliminated later neighbor;
    // roots of separate components are chained together.
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for &v in &order {
        match adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).min_by_key(|&u| pos[u]) {
            Some(u) => edges.push((v, u)),
            None => roots.push(v),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition::new(bags, edges).unwrap()
}

/// Single-node decomposition covering everything with every hyperedge.
pub fn trivial_hypertree(hyperedges: &[Vec<usize>], n: usize) -> HypertreeDecomposition {
    HypertreeDecomposition::new(vec![None], vec![(0..n).collect()], vec![hyperedges.to_vec()]).unwrap()
}

/// Clique intersection property checked pairwise along explicit paths.
pub fn intersection_property_by_paths(nodes: &[Vec<usize>], edges: &[(usize, usize)]) -> bool {
    let n = nodes.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for s in 0..n {
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        for t in s + 1..n {
            let shared: Vec<usize> = nodes[s].iter().copied().filter(|v| nodes[t].contains(v)).collect();
            let mut cur = t;
            while cur != s {
                if !shared.iter().all(|v| nodes[cur].contains(v)) {
                    return false;
                }
                cur = parent[cur];
            }
        }
    }
    true
}
