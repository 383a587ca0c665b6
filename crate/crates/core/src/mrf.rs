//! The game-to-MRF frontend.
//!
//! The field lives on the primal graph of `H(G)`; each player's variable
//! ranges over its strategies. Player `p` contributes the indicator
//! `f_p(x(N(p)))`, which is one when `p` best-responds and `eps` otherwise.
//! Players sharing a neighborhood share one significant clique whose
//! potential is the product of their indicators, so the unnormalized
//! density is `eps^U(x)`.

use std::collections::HashMap;

use crate::exec::{self, Execution};
use crate::game::{GraphicalGame, NeighborhoodAssignment};
use crate::semiring::Semiring;
use crate::structure::{game_hypergraph, primal_graph, Graph};
use crate::table::Domain;
use crate::{Error, Result};

/// Dense semiring-valued table over a [`Domain`].
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTable<V> {
    domain: Domain,
    entries: Vec<V>,
}

impl<V: Clone> PotentialTable<V> {
    pub fn filled(domain: Domain, value: V) -> Self {
        let entries = vec![value; domain.size()];
        PotentialTable { domain, entries }
    }

    pub fn from_entries(domain: Domain, entries: Vec<V>) -> Result<Self> {
        if entries.len() != domain.size() {
            return Err(Error::TableTooLarge(domain.members().to_vec()));
        }
        Ok(PotentialTable { domain, entries })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn members(&self) -> &[usize] {
        self.domain.members()
    }

    pub fn entries(&self) -> &[V] {
        &self.entries
    }

    pub fn get(&self, values: &[usize]) -> &V {
        &self.entries[self.domain.index(values)]
    }

    /// Entry at the restriction of a full profile.
    pub fn get_profile(&self, profile: &[usize]) -> &V {
        &self.entries[self.domain.index_in_profile(profile)]
    }

    /// `self *= other`, where `other`'s members are a subset of ours.
    pub fn multiply_in<S: Semiring<Value = V>>(&mut self, other: &PotentialTable<V>, s: &S) {
        if other.domain.members().is_empty() {
            for e in &mut self.entries {
                s.mul_assign(e, &other.entries[0]);
            }
            return;
        }
        let map = self.domain.projection(&other.domain);
        for (e, &j) in self.entries.iter_mut().zip(&map) {
            s.mul_assign(e, &other.entries[j]);
        }
    }

    /// Sums (in the semiring) out every member not in `onto`.
    pub fn marginalize<S: Semiring<Value = V>>(&self, onto: &Domain, s: &S) -> PotentialTable<V> {
        let mut out = PotentialTable::filled(onto.clone(), s.zero());
        if onto.members().is_empty() {
            out.entries[0] = s.sum(&self.entries);
            return out;
        }
        let map = self.domain.projection(onto);
        for (e, &j) in self.entries.iter().zip(&map) {
            s.add_assign(&mut out.entries[j], e);
        }
        out
    }

    /// Zeroes every entry disagreeing with the fixed values in `evidence`,
    /// indexed by player.
    pub fn restrict<S: Semiring<Value = V>>(&mut self, evidence: &[Option<usize>], s: &S) {
        let fixed: Vec<(usize, usize)> =
            self.domain.members().iter().enumerate().filter_map(|(pos, &m)| evidence[m].map(|v| (pos, v))).collect();
        if fixed.is_empty() {
            return;
        }
        for (i, e) in self.entries.iter_mut().enumerate() {
            if fixed.iter().any(|&(pos, v)| self.domain.digit(i, pos) != v) {
                *e = s.zero();
            }
        }
    }
}

/// `MRF(G, eps)` with potentials in semiring `S`.
#[derive(Clone, Debug)]
pub struct MarkovRandomField<S: Semiring> {
    semiring: S,
    epsilon: f64,
    graph: Graph,
    strategy_counts: Vec<usize>,
    cliques: Vec<Vec<usize>>,
    clique_of_player: Vec<usize>,
    potentials: Vec<PotentialTable<S::Value>>,
}

impl<S: Semiring> MarkovRandomField<S> {
    pub fn semiring(&self) -> &S {
        &self.semiring
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Primal graph of the game hypergraph.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    /// Significant cliques, one per distinct neighborhood.
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    /// Index into [`Self::cliques`] of `c_p = N(p)`.
    pub fn clique_of(&self, p: usize) -> usize {
        self.clique_of_player[p]
    }

    pub fn potentials(&self) -> &[PotentialTable<S::Value>] {
        &self.potentials
    }

    /// `p_eps(x)`: product of all clique potentials at `x`, with `Z = 1`.
    pub fn unnormalized_density(&self, x: &[usize]) -> S::Value {
        let mut acc = self.semiring.one();
        for psi in &self.potentials {
            self.semiring.mul_assign(&mut acc, psi.get_profile(x));
        }
        acc
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

/// `f_p` at an assignment `x` of exactly `N(p)`: 1 if `p` best-responds in
/// `x`, `epsilon` otherwise.
pub fn indicator_f(game: &GraphicalGame, p: usize, x: &NeighborhoodAssignment, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if p >= game.num_players() {
        return Err(Error::InvalidPlayer(p));
    }
    if x.players() != game.neighborhood(p) {
        return Err(Error::AssignmentMismatch);
    }
    let own = x.get(p).expect("p is in N(p)");
    let others = NeighborhoodAssignment::new(
        x.players().iter().copied().zip(x.values().iter().copied()).filter(|&(q, _)| q != p),
    );
    let best = game.best_response_set(p, &others)?;
    if own >= game.num_strategies(p) {
        return Err(Error::InvalidStrategy { player: p, strategy: own });
    }
    Ok(if best.contains(&own) { 1.0 } else { epsilon })
}

pub fn build_mrf<S: Semiring>(game: &GraphicalGame, epsilon: f64, semiring: S) -> Result<MarkovRandomField<S>> {
    build_mrf_with(game, epsilon, semiring, Execution::default())
}

/// Builds the field, constructing the clique potentials under `exec`.
pub fn build_mrf_with<S: Semiring>(
    game: &GraphicalGame,
    epsilon: f64,
    semiring: S,
    exec: Execution,
) -> Result<MarkovRandomField<S>> {
    check_epsilon(epsilon)?;
    let penalty =
        semiring.penalty(epsilon).ok_or(Error::EpsilonSemiringMismatch { semiring: semiring.name(), epsilon })?;
    let h = game_hypergraph(game);
    let cliques = h.edges().to_vec();
    let index: HashMap<&[usize], usize> = cliques.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let clique_of_player: Vec<usize> = (0..game.num_players()).map(|p| index[game.neighborhood(p)]).collect();
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); cliques.len()];
    for (p, &c) in clique_of_player.iter().enumerate() {
        owners[c].push(p);
    }
    let potentials = exec::map_slice(exec, &owners, |players| {
        // All owners share N(p) = c, hence the same domain and index layout.
        let domain = game.neighborhood_domain(players[0]).clone();
        let mut table = PotentialTable::filled(domain, semiring.one());
        for &p in players {
            for (e, ok) in table.entries.iter_mut().zip(game.best_response_table(p)) {
                if !ok {
                    semiring.mul_assign(e, &penalty);
                }
            }
        }
        table
    });
    Ok(MarkovRandomField {
        semiring,
        epsilon,
        graph: primal_graph(&h),
        strategy_counts: game.strategy_counts().to_vec(),
        cliques,
        clique_of_player,
        potentials,
    })
}
