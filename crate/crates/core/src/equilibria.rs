//! Exact pure-Nash-equilibrium pipeline: game to `MRF(G, 0)`, clique tree,
//! calibration, then existence, count, per-clique marginals and a
//! lexicographic enumeration of all equilibria.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::exec::Execution;
use crate::game::{GraphicalGame, Profile};
use crate::junction::{
    calibrate_with, collect_total, load_potentials_with, map_solve_with, LexicographicSolutions, MapSolution,
};
use crate::mrf::{build_mrf_with, PotentialTable};
use crate::semiring::{Boolean, Counting, MaxProduct};
use crate::structure::{
    clique_tree_from_chordal, game_hypergraph, grahams_algorithm, lift_hypertree_decomposition,
    lift_tree_decomposition, primal_graph, triangulate, CliqueTree, HypertreeDecomposition, TreeDecomposition,
    TriangulationStrategy,
};
use crate::Result;

/// Where the clique tree comes from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum DecompositionSource {
    /// Join tree of `H(G)` when it is acyclic, else triangulate the primal graph.
    #[default]
    GrahamJoinTree,
    /// Lift a tree decomposition of the game graph.
    LiftTreeDecomposition(TreeDecomposition),
    /// Lift a hypertree decomposition of `H(G)`.
    LiftHypertreeDecomposition(HypertreeDecomposition),
    TriangulatePrimal,
}

impl DecompositionSource {
    pub fn name(&self) -> &'static str {
        match self {
            DecompositionSource::GrahamJoinTree => "graham-join-tree",
            DecompositionSource::LiftTreeDecomposition(_) => "lift-tree-decomposition",
            DecompositionSource::LiftHypertreeDecomposition(_) => "lift-hypertree-decomposition",
            DecompositionSource::TriangulatePrimal => "triangulate-primal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineStrategy {
    pub source: DecompositionSource,
    /// Used by `TriangulatePrimal` and by the Graham fallback.
    pub triangulation: TriangulationStrategy,
    /// Maximum number of equilibria listed by [`solve`]; `None` lists all.
    pub enumeration_limit: Option<usize>,
    pub execution: Execution,
}

impl Default for PipelineStrategy {
    fn default() -> Self {
        PipelineStrategy {
            source: DecompositionSource::GrahamJoinTree,
            triangulation: TriangulationStrategy::MinFill,
            enumeration_limit: Some(1000),
            execution: Execution::default(),
        }
    }
}

impl PipelineStrategy {
    pub fn with_source(source: DecompositionSource) -> Self {
        PipelineStrategy { source, ..Self::default() }
    }

    pub fn unbounded(mut self) -> Self {
        self.enumeration_limit = None;
        self
    }
}

/// A clique tree of the primal graph and how it was obtained.
#[derive(Clone, Debug)]
pub struct PreparedTree {
    pub tree: CliqueTree,
    /// Name of the source that actually produced `tree`.
    pub source: &'static str,
    pub notices: Vec<String>,
}

pub fn prepare_clique_tree(game: &GraphicalGame, strategy: &PipelineStrategy) -> Result<PreparedTree> {
    let triangulated = |notices: Vec<String>| -> Result<PreparedTree> {
        let g = primal_graph(&game_hypergraph(game));
        let t = triangulate(&g, strategy.triangulation)?;
        let tree = clique_tree_from_chordal(&t.graph, &t.order)?;
        Ok(PreparedTree { tree, source: DecompositionSource::TriangulatePrimal.name(), notices })
    };
    match &strategy.source {
        DecompositionSource::GrahamJoinTree => {
            let h = game_hypergraph(game);
            match grahams_algorithm(&h).join_tree {
                Some(tree) => match tree.covers_graph(&primal_graph(&h)) {
                    Ok(()) => Ok(PreparedTree { tree, source: strategy.source.name(), notices: Vec::new() }),
                    Err(e) => triangulated(vec![format!(
                        "join tree does not cover the primal graph ({e}); triangulating instead"
                    )]),
                },
                None => triangulated(vec!["hypergraph is cyclic; triangulating the primal graph instead".to_string()]),
            }
        }
        DecompositionSource::LiftTreeDecomposition(td) => Ok(PreparedTree {
            tree: lift_tree_decomposition(td, game)?,
            source: strategy.source.name(),
            notices: Vec::new(),
        }),
        DecompositionSource::LiftHypertreeDecomposition(htd) => Ok(PreparedTree {
            tree: lift_hypertree_decomposition(htd, game)?,
            source: strategy.source.name(),
            notices: Vec::new(),
        }),
        DecompositionSource::TriangulatePrimal => triangulated(Vec::new()),
    }
}

/// Counting marginals of every significant clique of `MRF(G, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccinctDescription {
    /// Significant cliques, ascending members, in hypergraph order.
    pub cliques: Vec<Vec<usize>>,
    pub tables: Vec<PotentialTable<BigUint>>,
    pub count: BigUint,
    pub existence: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub source: &'static str,
    pub width: usize,
    pub nodes: usize,
    pub messages: usize,
    /// Calibrations spent by the enumeration.
    pub enumeration_calibrations: usize,
    pub notices: Vec<String>,
    pub timings: Vec<(&'static str, Duration)>,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub existence: bool,
    pub count: BigUint,
    pub description: SuccinctDescription,
    /// Equilibria in lexicographic order, at most the enumeration limit.
    pub equilibria: Vec<Profile>,
    /// True when `equilibria` holds every equilibrium.
    pub enumeration_complete: bool,
    pub stats: SolveStats,
}

pub fn solve(game: &GraphicalGame, strategy: &PipelineStrategy) -> Result<SolveResult> {
    let exec = strategy.execution;
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, Duration)>| {
        timings.push((name, clock.elapsed()));
        clock = Instant::now();
    };

    let prepared = prepare_clique_tree(game, strategy)?;
    lap("structure", &mut timings);
    let mrf = build_mrf_with(game, 0.0, Counting, exec)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, exec)?;
    lap("frontend", &mut timings);
    let cal = calibrate_with(&loaded, None, exec);
    let count = cal.total();
    let tables = mrf.cliques().iter().map(|c| cal.marginal_table(c)).collect::<Result<Vec<_>>>()?;
    lap("calibration", &mut timings);

    let existence = !count.is_zero();
    let mut equilibria = Vec::new();
    let mut enumeration_calibrations = 0;
    if existence && strategy.enumeration_limit != Some(0) {
        let mut it = LexicographicSolutions::new(&loaded, nonzero, exec);
        equilibria.extend(it.by_ref().take(strategy.enumeration_limit.unwrap_or(usize::MAX)));
        enumeration_calibrations = it.calibrations();
    }
    lap("enumeration", &mut timings);
    let enumeration_complete = BigUint::from(equilibria.len()) == count;

    Ok(SolveResult {
        existence,
        count: count.clone(),
        description: SuccinctDescription { cliques: mrf.cliques().to_vec(), tables, count, existence },
        equilibria,
        enumeration_complete,
        stats: SolveStats {
            source: prepared.source,
            width: prepared.tree.width(),
            nodes: prepared.tree.len(),
            messages: cal.message_count(),
            enumeration_calibrations,
            notices: prepared.notices,
            timings,
        },
    })
}

fn nonzero(v: &BigUint) -> bool {
    !v.is_zero()
}

/// Existence via Boolean calibration.
pub fn decide_existence(game: &GraphicalGame, strategy: &PipelineStrategy) -> Result<bool> {
    let prepared = prepare_clique_tree(game, strategy)?;
    let mrf = build_mrf_with(game, 0.0, Boolean, strategy.execution)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, strategy.execution)?;
    Ok(collect_total(&loaded, strategy.execution))
}

/// Exact count from the inward pass only. Long chains of players make the
/// count itself large, and a full calibration would multiply two such
/// numbers at every node; this path touches each one once.
pub fn count_equilibria(game: &GraphicalGame, strategy: &PipelineStrategy) -> Result<(BigUint, SolveStats)> {
    let exec = strategy.execution;
    let start = Instant::now();
    let prepared = prepare_clique_tree(game, strategy)?;
    let structure = start.elapsed();
    let start = Instant::now();
    let mrf = build_mrf_with(game, 0.0, Counting, exec)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, exec)?;
    let frontend = start.elapsed();
    let start = Instant::now();
    let count = collect_total(&loaded, exec);
    let stats = SolveStats {
        source: prepared.source,
        width: prepared.tree.width(),
        nodes: prepared.tree.len(),
        messages: prepared.tree.len() - 1,
        enumeration_calibrations: 0,
        notices: prepared.notices,
        timings: vec![("structure", structure), ("frontend", frontend), ("calibration", start.elapsed())],
    };
    Ok((count, stats))
}

type NonzeroFilter = fn(&BigUint) -> bool;

/// Lazily yields equilibria in lexicographic order, at most `limit` of them.
pub struct EquilibriumStream {
    inner: Option<LexicographicSolutions<'static, Counting, NonzeroFilter>>,
    remaining: Option<usize>,
}

impl Iterator for EquilibriumStream {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.remaining == Some(0) {
            return None;
        }
        let p = self.inner.as_mut()?.next()?;
        if let Some(r) = &mut self.remaining {
            *r -= 1;
        }
        Some(p)
    }
}

pub fn enumerate_equilibria(
    game: &GraphicalGame,
    strategy: &PipelineStrategy,
    limit: Option<usize>,
) -> Result<EquilibriumStream> {
    let prepared = prepare_clique_tree(game, strategy)?;
    let mrf = build_mrf_with(game, 0.0, Counting, strategy.execution)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, strategy.execution)?;
    let accept: NonzeroFilter = nonzero;
    Ok(EquilibriumStream {
        inner: Some(LexicographicSolutions::owned(loaded, accept, strategy.execution)),
        remaining: limit,
    })
}

pub fn succinct_description(game: &GraphicalGame, strategy: &PipelineStrategy) -> Result<SuccinctDescription> {
    let strategy = PipelineStrategy { enumeration_limit: Some(0), ..strategy.clone() };
    Ok(solve(game, &strategy)?.description)
}

/// MAP configuration of `MRF(G, epsilon)` on the strategy's clique tree.
pub fn map_configuration(game: &GraphicalGame, strategy: &PipelineStrategy, epsilon: f64) -> Result<MapSolution> {
    let prepared = prepare_clique_tree(game, strategy)?;
    let mrf = build_mrf_with(game, epsilon, MaxProduct, strategy.execution)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, strategy.execution)?;
    map_solve_with(&loaded, epsilon, strategy.execution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::brute_force_equilibria;
    use crate::generate::{generate, Family, GenParams};

    fn profiles(v: &[&[usize]]) -> Vec<Profile> {
        v.iter().map(|p| Profile(p.to_vec())).collect()
    }

    fn all_sources(game: &GraphicalGame) -> Vec<PipelineStrategy> {
        let mut out = vec![
            PipelineStrategy::default().unbounded(),
            PipelineStrategy::with_source(DecompositionSource::TriangulatePrimal).unbounded(),
        ];
        for t in [TriangulationStrategy::MinDegree, TriangulationStrategy::ExactSmall] {
            let mut s = PipelineStrategy::with_source(DecompositionSource::TriangulatePrimal).unbounded();
            s.triangulation = t;
            out.push(s);
        }
        let n = game.num_players();
        let td = TreeDecomposition::new(vec![(0..n).collect()], vec![]).unwrap();
        out.push(PipelineStrategy::with_source(DecompositionSource::LiftTreeDecomposition(td)).unbounded());
        out
    }

    #[test]
    fn fixture_examples() {
        let coord =
            solve(&fixtures::coord2(), &PipelineStrategy::with_source(DecompositionSource::TriangulatePrimal)).unwrap();
        assert!(coord.existence);
        assert_eq!(coord.count, BigUint::from(2u32));
        assert_eq!(coord.equilibria, profiles(&[&[0, 0], &[1, 1]]));

        let pennies =
            solve(&fixtures::pennies(), &PipelineStrategy::with_source(DecompositionSource::TriangulatePrimal))
                .unwrap();
        assert!(!pennies.existence);
        assert!(pennies.description.tables.iter().all(|t| t.entries().iter().all(Zero::is_zero)));

        let path = solve(&fixtures::path3(), &PipelineStrategy::default()).unwrap();
        assert_eq!(path.count, BigUint::from(2u32));
        assert_eq!(path.stats.source, "graham-join-tree");
        assert_eq!(path.stats.messages, 4);
        let d = &path.description;
        assert_eq!(d.cliques, vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
        let nz = |t: &PotentialTable<BigUint>| {
            (0..t.entries().len()).filter(|&i| !t.entries()[i].is_zero()).collect::<Vec<_>>()
        };
        assert_eq!(nz(&d.tables[0]), vec![0, 3]);
        assert_eq!(nz(&d.tables[1]), vec![0, 7]);
        assert_eq!(nz(&d.tables[2]), vec![0, 3]);
    }

    #[test]
    fn decide_examples() {
        let s = PipelineStrategy::default();
        assert!(decide_existence(&fixtures::coord2(), &s).unwrap());
        assert!(!decide_existence(&fixtures::pennies(), &s).unwrap());
        assert!(decide_existence(&fixtures::solo(), &s).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let s = PipelineStrategy::default();
        let all: Vec<Profile> = enumerate_equilibria(&fixtures::coord2(), &s, None).unwrap().collect();
        assert_eq!(all, profiles(&[&[0, 0], &[1, 1]]));
        let first: Vec<Profile> = enumerate_equilibria(&fixtures::path3(), &s, Some(1)).unwrap().collect();
        assert_eq!(first, profiles(&[&[0, 0, 0]]));
        assert_eq!(enumerate_equilibria(&fixtures::pennies(), &s, None).unwrap().count(), 0);
    }

    #[test]
    fn cyclic_hypergraph_falls_back_with_notice() {
        let game = fixtures::cycle_coordination(5);
        let r = solve(&game, &PipelineStrategy::default()).unwrap();
        assert_eq!(r.stats.source, "triangulate-primal");
        assert_eq!(r.stats.notices.len(), 1);
        assert_eq!(r.count, BigUint::from(brute_force_equilibria(&game).unwrap().len()));
    }

    #[test]
    fn limits_are_respected() {
        let game = fixtures::path_coordination(4);
        let mut s = PipelineStrategy { enumeration_limit: Some(1), ..PipelineStrategy::default() };
        let r = solve(&game, &s).unwrap();
        assert_eq!(r.equilibria.len(), 1);
        assert!(!r.enumeration_complete);
        s.enumeration_limit = Some(0);
        assert!(solve(&game, &s).unwrap().equilibria.is_empty());
    }

    #[test]
    fn random_games_match_brute_force_under_every_source() {
        for seed in 0..40 {
            let family = [Family::Tree, Family::Cycle, Family::Grid, Family::RandomBoundedDegree][seed as usize % 4];
            let params =
                GenParams { family, players: 2 + seed as usize % 5, max_strategies: 3, seed, ..GenParams::default() };
            let game = generate(&params).unwrap();
            let expected = brute_force_equilibria(&game).unwrap();
            for s in all_sources(&game) {
                let r = solve(&game, &s).unwrap();
                assert_eq!(r.count, BigUint::from(expected.len()), "seed {seed} source {}", s.source.name());
                assert_eq!(r.equilibria, expected);
                assert!(r.enumeration_complete);
                for t in &r.description.tables {
                    assert_eq!(t.entries().iter().sum::<BigUint>(), r.count);
                }
                assert_eq!(decide_existence(&game, &s).unwrap(), !expected.is_empty());
                let (count, stats) = count_equilibria(&game, &s).unwrap();
                assert_eq!(count, r.count);
                assert_eq!(stats.messages, r.stats.nodes - 1);
            }
        }
    }
}
