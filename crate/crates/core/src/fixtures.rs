//! Small reference games used by tests, benches and documentation.
//!
//! Players are 0-based here; `path3()` is the path `0 - 1 - 2`.

use crate::game::GraphicalGame;

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Payoff = number of graph neighbors playing the same strategy as `p`.
fn matching_neighbors(p: usize, members: &[usize], values: &[usize]) -> u64 {
    let own = values[members.binary_search(&p).unwrap()];
    members.iter().zip(values).filter(|(&q, &v)| q != p && v == own).count() as u64
}

/// Two players on one edge, both paid 1 for matching.
pub fn coord2() -> GraphicalGame {
    GraphicalGame::from_fn(&[2, 2], &[(0, 1)], |_, _, v| u64::from(v[0] == v[1])).unwrap()
}

/// Matching pennies: player 0 wants to match, player 1 to mismatch.
pub fn pennies() -> GraphicalGame {
    GraphicalGame::from_fn(&[2, 2], &[(0, 1)], |p, _, v| u64::from((v[0] == v[1]) == (p == 0))).unwrap()
}

/// One isolated player with strategies `a` (payoff 2) and `b` (payoff 1).
pub fn solo() -> GraphicalGame {
    GraphicalGame::new(vec![labels(&["a", "b"])], &[], vec![vec![2, 1]]).unwrap()
}

pub fn path3() -> GraphicalGame {
    path_coordination(3)
}

/// Coordination on a path `0 - 1 - ... - n-1` with two strategies.
pub fn path_coordination(n: usize) -> GraphicalGame {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    GraphicalGame::from_fn(&vec![2; n], &edges, matching_neighbors).unwrap()
}

/// Coordination on a cycle of length `n >= 3`.
pub fn cycle_coordination(n: usize) -> GraphicalGame {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).map(|(a, b)| (a.min(b), a.max(b))).collect();
    GraphicalGame::from_fn(&vec![2; n], &edges, matching_neighbors).unwrap()
}

/// Star with center 0 and leaves `1..=leaves`, coordination payoffs.
pub fn star(leaves: usize) -> GraphicalGame {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
    GraphicalGame::from_fn(&vec![2; leaves + 1], &edges, matching_neighbors).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path3_payoffs_count_matching_neighbors() {
        let g = path3();
        assert_eq!(g.payoff(1, &[0, 0, 0]).unwrap(), 2);
        assert_eq!(g.payoff(1, &[1, 0, 0]).unwrap(), 1);
        assert_eq!(g.payoff(0, &[0, 1, 1]).unwrap(), 0);
    }

    #[test]
    fn cycle_has_n_edges() {
        assert_eq!(cycle_coordination(5).edges().len(), 5);
    }
}
