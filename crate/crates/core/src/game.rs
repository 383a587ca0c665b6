//! Graphical games, best responses and the exhaustive equilibrium oracle.

use std::fmt;
use std::ops::Deref;

use crate::exec::{self, Execution};
use crate::table::Domain;
use crate::{Error, Result};

/// Default upper bound on the number of profiles [`brute_force_equilibria`]
/// is willing to enumerate.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 10_000_000;

/// One strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile(pub Vec<usize>);

impl Deref for Profile {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Profile {
    fn from(v: Vec<usize>) -> Self {
        Profile(v)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Strategy choices for an ascending subset of players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodAssignment {
    players: Vec<usize>,
    values: Vec<usize>,
}

impl NeighborhoodAssignment {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        pairs.dedup_by_key(|p| p.0);
        let (players, values) = pairs.into_iter().unzip();
        NeighborhoodAssignment { players, values }
    }

    pub fn empty() -> Self {
        NeighborhoodAssignment { players: Vec::new(), values: Vec::new() }
    }

    pub fn players(&self) -> &[usize] {
        &self.players
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, player: usize) -> Option<usize> {
        self.players.binary_search(&player).ok().map(|i| self.values[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicalGame {
    labels: Vec<Vec<String>>,
    strategy_counts: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
    domains: Vec<Domain>,
    payoffs: Vec<Vec<u64>>,
}

impl GraphicalGame {
    /// Builds a game from strategy labels, an undirected edge list and one
    /// dense payoff table per player, laid out over `N(p)` in ascending
    /// player order with the last player varying fastest.
    pub fn new(labels: Vec<Vec<String>>, edges: &[(usize, usize)], payoffs: Vec<Vec<u64>>) -> Result<Self> {
        let mut game = GraphicalGame::skeleton(labels, edges)?;
        if payoffs.len() != game.num_players() {
            return Err(Error::InvalidPlayer(payoffs.len().min(game.num_players())));
        }
        for (p, table) in payoffs.iter().enumerate() {
            let expected = game.domains[p].size();
            if table.len() != expected {
                return Err(Error::PayoffArity { player: p, expected, found: table.len() });
            }
        }
        game.payoffs = payoffs;
        Ok(game)
    }

    /// Builds a game with numeric labels `"0".."k-1"`. Each payoff entry is
    /// `utility(p, members, values)` where `members` is `N(p)` ascending and
    /// `values` the strategies assigned to them.
    pub fn from_fn(
        strategy_counts: &[usize],
        edges: &[(usize, usize)],
        mut utility: impl FnMut(usize, &[usize], &[usize]) -> u64,
    ) -> Result<Self> {
        let labels = strategy_counts.iter().map(|&k| (0..k).map(|s| s.to_string()).collect()).collect();
        let mut game = GraphicalGame::skeleton(labels, edges)?;
        for p in 0..game.num_players() {
            let domain = &game.domains[p];
            let mut values = vec![0; domain.members().len()];
            game.payoffs[p] = (0..domain.size())
                .map(|i| {
                    domain.decode_into(i, &mut values);
                    utility(p, domain.members(), &values)
                })
                .collect();
        }
        Ok(game)
    }

    // Validated structure with empty payoff tables.
    fn skeleton(labels: Vec<Vec<String>>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGame);
        }
        if let Some(player) = labels.iter().position(Vec::is_empty) {
            return Err(Error::EmptyStrategySet { player });
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::InvalidPlayer(u));
            }
            if v >= n {
                return Err(Error::InvalidPlayer(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if neighbors[u].contains(&v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let strategy_counts: Vec<usize> = labels.iter().map(Vec::len).collect();
        let domains = (0..n)
            .map(|p| Domain::over(&closed_neighborhood(&neighbors[p], p), &strategy_counts))
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphicalGame { labels, strategy_counts, neighbors, domains, payoffs: vec![Vec::new(); n] })
    }

    pub fn num_players(&self) -> usize {
        self.labels.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn num_strategies(&self, p: usize) -> usize {
        self.strategy_counts[p]
    }

    pub fn labels(&self, p: usize) -> &[String] {
        &self.labels[p]
    }

    /// Graph neighbors of `p`, excluding `p`.
    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.neighbors[p]
    }

    /// `N(p)`: `p` together with its neighbors, ascending.
    pub fn neighborhood(&self, p: usize) -> &[usize] {
        self.domains[p].members()
    }

    pub fn neighborhood_domain(&self, p: usize) -> &Domain {
        &self.domains[p]
    }

    pub fn payoff_table(&self, p: usize) -> &[u64] {
        &self.payoffs[p]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.neighbors.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn max_neighborhood(&self) -> usize {
        self.domains.iter().map(|d| d.members().len()).max().unwrap_or(0)
    }

    /// Size of the full profile space, saturating at `u128::MAX`.
    pub fn profile_count(&self) -> u128 {
        self.strategy_counts.iter().try_fold(1u128, |acc, &k| acc.checked_mul(k as u128)).unwrap_or(u128::MAX)
    }

    pub fn check_profile(&self, s: &[usize]) -> Result<()> {
        if s.len() != self.num_players() {
            return Err(Error::ProfileArity { expected: self.num_players(), found: s.len() });
        }
        for (player, &strategy) in s.iter().enumerate() {
            if strategy >= self.strategy_counts[player] {
                return Err(Error::InvalidStrategy { player, strategy });
            }
        }
        Ok(())
    }

    fn check_player(&self, p: usize) -> Result<()> {
        if p < self.num_players() {
            Ok(())
        } else {
            Err(Error::InvalidPlayer(p))
        }
    }

    /// `u_p` evaluated at the restriction of `s` to `N(p)`.
    pub fn payoff(&self, p: usize, s: &[usize]) -> Result<u64> {
        self.check_player(p)?;
        self.check_profile(s)?;
        Ok(self.payoffs[p][self.domains[p].index_in_profile(s)])
    }

    /// All strategies of `p` maximizing its payoff against the neighbor
    /// strategies in `others`, which must cover exactly `N(p) \ {p}`.
    pub fn best_response_set(&self, p: usize, others: &NeighborhoodAssignment) -> Result<Vec<usize>> {
        self.check_player(p)?;
        if others.players() != self.neighbors[p].as_slice() {
            return Err(Error::AssignmentMismatch);
        }
        for (&q, &v) in others.players().iter().zip(others.values()) {
            if v >= self.strategy_counts[q] {
                return Err(Error::InvalidStrategy { player: q, strategy: v });
            }
        }
        let domain = &self.domains[p];
        let own = domain.position(p).expect("p belongs to N(p)");
        let mut values: Vec<usize> = Vec::with_capacity(domain.members().len());
        let mut it = others.values().iter();
        for (i, _) in domain.members().iter().enumerate() {
            values.push(if i == own { 0 } else { *it.next().unwrap() });
        }
        let base = domain.index(&values);
        Ok(self.maximizers(p, base))
    }

    fn maximizers(&self, p: usize, base: usize) -> Vec<usize> {
        let domain = &self.domains[p];
        let stride = domain.stride(domain.position(p).unwrap());
        let table = &self.payoffs[p];
        let best = (0..self.strategy_counts[p]).map(|s| table[base + s * stride]).max().unwrap();
        (0..self.strategy_counts[p]).filter(|&s| table[base + s * stride] == best).collect()
    }

    /// Whether `p` best-responds in the full profile `s` (unchecked).
    pub(crate) fn is_satisfied(&self, p: usize, s: &[usize]) -> bool {
        let domain = &self.domains[p];
        let idx = domain.index_in_profile(s);
        let stride = domain.stride(domain.position(p).unwrap());
        let base = idx - s[p] * stride;
        let table = &self.payoffs[p];
        let mine = table[idx];
        (0..self.strategy_counts[p]).all(|t| table[base + t * stride] <= mine)
    }

    /// Indicator over the `N(p)` domain: entry `i` is true iff `p`'s own
    /// strategy in assignment `i` is a best response to the rest of it.
    pub fn best_response_table(&self, p: usize) -> Vec<bool> {
        let domain = &self.domains[p];
        let pos = domain.position(p).unwrap();
        let stride = domain.stride(pos);
        let table = &self.payoffs[p];
        let k = self.strategy_counts[p];
        let mut out = vec![false; domain.size()];
        for base in (0..domain.size()).filter(|&i| domain.digit(i, pos) == 0) {
            let best = (0..k).map(|s| table[base + s * stride]).max().unwrap();
            for s in 0..k {
                out[base + s * stride] = table[base + s * stride] == best;
            }
        }
        out
    }

    pub fn is_pure_nash(&self, s: &[usize]) -> Result<bool> {
        self.check_profile(s)?;
        Ok((0..self.num_players()).all(|p| self.is_satisfied(p, s)))
    }

    /// Number of players whose strategy in `s` is not a best response.
    pub fn unsatisfied_count(&self, s: &[usize]) -> Result<usize> {
        self.check_profile(s)?;
        Ok((0..self.num_players()).filter(|&p| !self.is_satisfied(p, s)).count())
    }

    /// A copy of this game with `delta` added to every entry of `p`'s table.
    pub fn with_payoff_shift(&self, p: usize, delta: u64) -> GraphicalGame {
        let mut game = self.clone();
        for u in &mut game.payoffs[p] {
            *u += delta;
        }
        game
    }
}

fn closed_neighborhood(neighbors: &[usize], p: usize) -> Vec<usize> {
    let mut members = neighbors.to_vec();
    members.push(p);
    members.sort_unstable();
    members
}

/// Every pure Nash equilibrium, in lexicographic order, by exhaustive
/// enumeration of the profile space (capped at [`DEFAULT_BRUTE_FORCE_CAP`]).
pub fn brute_force_equilibria(game: &GraphicalGame) -> Result<Vec<Profile>> {
    brute_force_equilibria_with(game, DEFAULT_BRUTE_FORCE_CAP, Execution::default())
}

pub fn brute_force_equilibria_with(game: &GraphicalGame, cap: u128, exec: Execution) -> Result<Vec<Profile>> {
    let size = game.profile_count();
    if size > cap {
        return Err(Error::CapExceeded { size, cap });
    }
    let all = Domain::over(&(0..game.num_players()).collect::<Vec<_>>(), game.strategy_counts())?;
    Ok(exec::filter_map_range(exec, size as u64, |i| {
        let s = all.decode(i as usize);
        (0..game.num_players()).all(|p| game.is_satisfied(p, &s)).then_some(Profile(s))
    }))
}
