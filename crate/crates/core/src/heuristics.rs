//! Metropolis sampling and simulated annealing over `p_eps(x) ~ eps^U(x)`.
//!
//! A move picks a uniform player among those with at least two strategies
//! and a uniform different strategy for it, and is accepted with probability
//! `min(1, eps^(U(x') - U(x)))`. Only the mover and the players whose
//! neighborhood contains it can change satisfaction, so `U` is updated from
//! those alone.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so runs are
//! reproducible given the seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::{self, Execution};
use crate::game::{GraphicalGame, Profile};
use crate::table::Domain;
use crate::{Error, Result};

/// Profiles per game accepted by [`transition_matrix`].
pub const TRANSITION_MATRIX_CAP: u128 = 64;

/// Number of players not best-responding in `s`.
pub fn unsatisfied_count(game: &GraphicalGame, s: &[usize]) -> Result<usize> {
    game.unsatisfied_count(s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainConfig {
    /// Weight of each unsatisfied player, in `(0, 1)`.
    pub epsilon: f64,
    pub steps: u64,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig { epsilon: 0.2, steps: 10_000, seed: 0 }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    /// First profile reaching the smallest `U` seen.
    pub best_profile: Profile,
    pub best_unsatisfied: usize,
    /// `level_visits[u]` counts steps that ended in a profile with `U = u`.
    pub level_visits: Vec<u64>,
    pub proposed: u64,
    pub accepted: u64,
    /// Step at which a profile with `U = 0` was first seen (0 = start).
    pub pne_hit_step: Option<u64>,
    pub final_profile: Profile,
    pub steps: u64,
}

impl ChainReport {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    pub fn found_equilibrium(&self) -> bool {
        self.best_unsatisfied == 0
    }
}

struct Chain<'g> {
    game: &'g GraphicalGame,
    /// `dependents[p]` lists every `q` with `p` in `N(q)`, including `p`.
    dependents: Vec<Vec<usize>>,
    movable: Vec<usize>,
    state: Vec<usize>,
    satisfied: Vec<bool>,
    unsatisfied: usize,
    rng: ChaCha8Rng,
    report: ChainReport,
    scratch: Vec<(usize, bool)>,
}

impl<'g> Chain<'g> {
    fn new(game: &'g GraphicalGame, seed: u64) -> Self {
        let n = game.num_players();
        let mut dependents = vec![Vec::new(); n];
        for q in 0..n {
            for &p in game.neighborhood(q) {
                dependents[p].push(q);
            }
        }
        let movable: Vec<usize> = (0..n).filter(|&p| game.num_strategies(p) > 1).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state: Vec<usize> = (0..n).map(|p| rng.gen_range(0..game.num_strategies(p))).collect();
        let satisfied: Vec<bool> = (0..n).map(|p| game.is_satisfied(p, &state)).collect();
        let unsatisfied = satisfied.iter().filter(|&&b| !b).count();
        let report = ChainReport {
            best_profile: Profile(state.clone()),
            best_unsatisfied: unsatisfied,
            level_visits: vec![0; n + 1],
            proposed: 0,
            accepted: 0,
            pne_hit_step: (unsatisfied == 0).then_some(0),
            final_profile: Profile(state.clone()),
            steps: 0,
        };
        Chain { game, dependents, movable, state, satisfied, unsatisfied, rng, report, scratch: Vec::new() }
    }

    fn step(&mut self, epsilon: f64) {
        self.report.steps += 1;
        if !self.movable.is_empty() {
            let p = self.movable[self.rng.gen_range(0..self.movable.len())];
            let current = self.state[p];
            let mut next = self.rng.gen_range(0..self.game.num_strategies(p) - 1);
            if next >= current {
                next += 1;
            }
            self.report.proposed += 1;

            self.state[p] = next;
            self.scratch.clear();
            let mut delta: i64 = 0;
            for &q in &self.dependents[p] {
                let now = self.game.is_satisfied(q, &self.state);
                if now != self.satisfied[q] {
                    delta += if now { -1 } else { 1 };
                    self.scratch.push((q, now));
                }
            }
            let accept = delta <= 0 || self.rng.gen::<f64>() < epsilon.powi(delta as i32);
            if accept {
                self.report.accepted += 1;
                for &(q, now) in &self.scratch {
                    self.satisfied[q] = now;
                }
                self.unsatisfied = (self.unsatisfied as i64 + delta) as usize;
                debug_assert_eq!(Ok(self.unsatisfied), self.game.unsatisfied_count(&self.state));
                if self.unsatisfied < self.report.best_unsatisfied {
                    self.report.best_unsatisfied = self.unsatisfied;
                    self.report.best_profile = Profile(self.state.clone());
                }
                if self.unsatisfied == 0 && self.report.pne_hit_step.is_none() {
                    self.report.pne_hit_step = Some(self.report.steps);
                }
            } else {
                self.state[p] = current;
            }
        }
        self.report.level_visits[self.unsatisfied] += 1;
    }

    fn finish(mut self) -> ChainReport {
        self.report.final_profile = Profile(self.state);
        self.report
    }
}

/// Runs a Metropolis chain from a seeded uniform start.
pub fn metropolis_sample(game: &GraphicalGame, cfg: &ChainConfig) -> Result<ChainReport> {
    check_epsilon(cfg.epsilon)?;
    let mut chain = Chain::new(game, cfg.seed);
    for _ in 0..cfg.steps {
        chain.step(cfg.epsilon);
    }
    Ok(chain.finish())
}

/// `eps_k = 0.5 * 0.8^k` for `k = 0..10`, 2000 steps each.
pub fn default_schedule() -> Vec<(f64, u64)> {
    (0..10).map(|k| (0.5 * 0.8f64.powi(k), 2000)).collect()
}

/// Metropolis stages at decreasing `eps`, carrying the state across stages
/// and stopping as soon as an equilibrium is reached.
pub fn simulated_anneal(game: &GraphicalGame, schedule: &[(f64, u64)], seed: u64) -> Result<ChainReport> {
    if schedule.is_empty() {
        return Err(Error::InvalidChain("empty annealing schedule".into()));
    }
    for &(eps, _) in schedule {
        check_epsilon(eps)?;
    }
    if schedule.windows(2).any(|w| w[1].0 >= w[0].0) {
        return Err(Error::InvalidChain("schedule epsilons must strictly decrease".into()));
    }
    let mut chain = Chain::new(game, seed);
    'stages: for &(eps, steps) in schedule {
        for _ in 0..steps {
            if chain.unsatisfied == 0 {
                break 'stages;
            }
            chain.step(eps);
        }
    }
    Ok(chain.finish())
}

/// Independent chains, one per seed.
pub fn run_chains(game: &GraphicalGame, cfg: &ChainConfig, seeds: &[u64], exec: Execution) -> Result<Vec<ChainReport>> {
    check_epsilon(cfg.epsilon)?;
    exec::map_slice(exec, seeds, |&seed| metropolis_sample(game, &ChainConfig { seed, ..*cfg })).into_iter().collect()
}

/// Independent annealing runs, one per seed.
pub fn run_annealers(
    game: &GraphicalGame,
    schedule: &[(f64, u64)],
    seeds: &[u64],
    exec: Execution,
) -> Result<Vec<ChainReport>> {
    exec::map_slice(exec, seeds, |&seed| simulated_anneal(game, schedule, seed)).into_iter().collect()
}

/// Report with the smallest best `U`, earliest on ties.
pub fn best_report(reports: &[ChainReport]) -> Option<&ChainReport> {
    reports.iter().min_by_key(|r| r.best_unsatisfied)
}

fn exact_epsilon(epsilon: f64) -> Result<BigRational> {
    check_epsilon(epsilon)?;
    BigRational::from_float(epsilon).ok_or(Error::EpsilonOutOfRange(epsilon))
}

fn all_profiles(game: &GraphicalGame) -> Result<(Domain, Vec<Vec<usize>>)> {
    let size = game.profile_count();
    if size > TRANSITION_MATRIX_CAP {
        return Err(Error::CapExceeded { size, cap: TRANSITION_MATRIX_CAP });
    }
    let all = Domain::over(&(0..game.num_players()).collect::<Vec<_>>(), game.strategy_counts())?;
    let profiles = (0..all.size()).map(|i| all.decode(i)).collect();
    Ok((all, profiles))
}

fn rational_pow(base: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * base)
}

/// Exact transition matrix of the chain, rows and columns indexed by
/// profiles in mixed-radix order. Games are capped at 64 profiles.
pub fn transition_matrix(game: &GraphicalGame, epsilon: f64) -> Result<Vec<Vec<BigRational>>> {
    let eps = exact_epsilon(epsilon)?;
    let (all, profiles) = all_profiles(game)?;
    let movable: Vec<usize> = (0..game.num_players()).filter(|&p| game.num_strategies(p) > 1).collect();
    let u: Vec<usize> = profiles.iter().map(|x| game.unsatisfied_count(x)).collect::<Result<_>>()?;
    let size = profiles.len();
    let mut matrix = vec![vec![BigRational::zero(); size]; size];
    for (i, x) in profiles.iter().enumerate() {
        let mut stay = BigRational::one();
        for &p in &movable {
            let propose = BigRational::new(BigInt::one(), BigInt::from(movable.len() * (game.num_strategies(p) - 1)));
            for s in 0..game.num_strategies(p) {
                if s == x[p] {
                    continue;
                }
                let mut y = x.clone();
                y[p] = s;
                let j = all.index(&y);
                let accept = if u[j] > u[i] { rational_pow(&eps, u[j] - u[i]) } else { BigRational::one() };
                let prob = &propose * accept;
                stay -= &prob;
                matrix[i][j] = prob;
            }
        }
        matrix[i][i] = stay;
    }
    Ok(matrix)
}

/// Exact `pi(x) ~ eps^U(x)`, normalized, in mixed-radix profile order.
pub fn stationary_distribution(game: &GraphicalGame, epsilon: f64) -> Result<Vec<BigRational>> {
    let eps = exact_epsilon(epsilon)?;
    let (_, profiles) = all_profiles(game)?;
    let weights: Vec<BigRational> =
        profiles.iter().map(|x| Ok(rational_pow(&eps, game.unsatisfied_count(x)?))).collect::<Result<_>>()?;
    let z: BigRational = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / &z).collect())
}

/// True iff `pi(x) P(x, y) = pi(y) P(y, x)` for all profile pairs and every
/// row of `P` sums to one.
pub fn check_detailed_balance(game: &GraphicalGame, epsilon: f64) -> Result<bool> {
    let p = transition_matrix(game, epsilon)?;
    let pi = stationary_distribution(game, epsilon)?;
    let rows_ok =
        p.iter().all(|row| row.iter().sum::<BigRational>().is_one() && row.iter().all(|v| *v >= BigRational::zero()));
    let balanced = (0..p.len()).all(|i| (0..p.len()).all(|j| &pi[i] * &p[i][j] == &pi[j] * &p[j][i]));
    Ok(rows_ok && balanced)
}
