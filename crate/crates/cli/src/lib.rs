//! The `pne` command-line tool.
//!
//! Exit codes: 0 on success, 1 when `decide` finds no equilibrium or
//! `validate` rejects a decomposition, 2 on usage or input errors.

pub mod decomposition_doc;
pub mod game_doc;
pub mod output;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pne_core::equilibria::{prepare_clique_tree, PreparedTree};
use pne_core::generate::{generate, Family, GenParams};
use pne_core::heuristics::{best_report, run_annealers, run_chains, ChainConfig, ChainReport};
use pne_core::junction::{collect_total, load_potentials_with, map_solve_with};
use pne_core::mrf::{build_mrf_with, MarkovRandomField};
use pne_core::structure::{
    game_hypergraph, grahams_algorithm, lift_hypertree_decomposition, lift_tree_decomposition,
    validate_hypertree_decomposition, Graph, TriangulationStrategy,
};
use pne_core::{
    count_equilibria, solve, Boolean, Counting, DecompositionSource, Execution, GraphicalGame, MaxProduct,
    PipelineStrategy, Semiring,
};
use sha2::{Digest, Sha256};

use crate::decomposition_doc::{parse_decomposition, Decomposition};
use crate::game_doc::{emit_game, parse_game, VERSION};
use crate::output::{Document, ResultLine, Violation, RESULT_FORMAT};

pub use game_doc::parse_game as parse_game_document;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {inner}")]
    InFile { path: String, inner: Box<CliError> },
    #[error(transparent)]
    Core(#[from] pne_core::Error),
}

#[derive(Debug, Parser)]
#[command(name = "pne", version, about = "Pure Nash equilibria of graphical games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a pure Nash equilibrium exists (exit 1 if none)
    Decide(PipelineArgs),
    /// Count pure Nash equilibria exactly
    Count(PipelineArgs),
    /// List pure Nash equilibria in lexicographic order
    Enumerate(EnumerateArgs),
    /// Per-clique equilibrium counts (the succinct description)
    Marginals(PipelineArgs),
    /// Most probable profile of the epsilon-weighted field
    Map(MapArgs),
    /// Metropolis sampling of the epsilon-weighted field
    Sample(SampleArgs),
    /// Simulated annealing on the number of unsatisfied players
    Anneal(AnnealArgs),
    /// Write a random game document
    Gen(GenArgs),
    /// Check a game document and optionally a decomposition of it
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    GrahamJoinTree,
    LiftTreeDecomposition,
    LiftHypertreeDecomposition,
    TriangulatePrimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangulationArg {
    MinFill,
    MinDegree,
    ExactSmall,
}

impl From<TriangulationArg> for TriangulationStrategy {
    fn from(t: TriangulationArg) -> Self {
        match t {
            TriangulationArg::MinFill => TriangulationStrategy::MinFill,
            TriangulationArg::MinDegree => TriangulationStrategy::MinDegree,
            TriangulationArg::ExactSmall => TriangulationStrategy::ExactSmall,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Tree,
    Cycle,
    Grid,
    RandomBoundedDegree,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Game document, or `-` for standard input
    game: String,
    /// Run single-threaded
    #[arg(long)]
    sequential: bool,
    /// Append wall-clock timings to the result
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Clique tree source [default: graham-join-tree, or the kind of --decomposition]
    #[arg(long, value_enum)]
    strategy: Option<SourceArg>,
    /// Elimination heuristic used when triangulating
    #[arg(long, value_enum, default_value = "min-fill")]
    triangulation: TriangulationArg,
    /// Tree or hypertree decomposition document to lift
    #[arg(long)]
    decomposition: Option<PathBuf>,
    /// Also print the field's potential tables
    #[arg(long)]
    dump_potentials: bool,
}

#[derive(Debug, Clone, Copy)]
enum Limit {
    Count(usize),
    Unbounded,
}

fn parse_limit(s: &str) -> Result<Limit, String> {
    if s == "unbounded" {
        return Ok(Limit::Unbounded);
    }
    s.parse().map(Limit::Count).map_err(|_| format!("expected a nonnegative integer or `unbounded`, found `{s}`"))
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Maximum number of equilibria to list, or `unbounded`
    #[arg(long, default_value = "1000", value_parser = parse_limit)]
    limit: Limit,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Weight of each unsatisfied player, in [0, 1)
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Weight of each unsatisfied player, in (0, 1)
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent chains with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    chains: u64,
}

#[derive(Debug, Args)]
struct AnnealArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Epsilon of the first stage
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Factor applied to epsilon between stages, in (0, 1)
    #[arg(long, default_value_t = 0.8)]
    decay: f64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    stages: u64,
    /// Steps per stage
    #[arg(long, default_value_t = 2000)]
    steps: u64,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    chains: u64,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 8)]
    players: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    min_strategies: usize,
    #[arg(long, default_value_t = 2)]
    max_strategies: usize,
    /// Payoffs are drawn uniformly from 0..=max-payoff
    #[arg(long, default_value_t = 9)]
    max_payoff: u64,
    /// Degree bound for the tree and random-bounded-degree families
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Game document, or `-` for standard input
    game: String,
    /// Tree or hypertree decomposition document to check against the game
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Output is written once, after the command ends.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok((text, code)) => match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: writing output: {e}");
                2
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

struct Input {
    bytes: Vec<u8>,
    game: GraphicalGame,
}

fn read_source(path: &str, stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let mut bytes = Vec::new();
    let result = if path == "-" {
        stdin.read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map(|_| ())
    };
    result.map_err(|source| CliError::Io { path: path.to_string(), source })?;
    Ok(bytes)
}

fn in_file(path: &str, e: CliError) -> CliError {
    CliError::InFile { path: path.to_string(), inner: Box::new(e) }
}

fn load_game(path: &str, stdin: &mut dyn Read) -> Result<Input, CliError> {
    let bytes = read_source(path, stdin)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| in_file(path, CliError::Invalid(format!("not UTF-8: {e}"))))?;
    let game = parse_game(text).map_err(|e| in_file(path, e))?;
    Ok(Input { bytes, game })
}

fn load_decomposition(path: &PathBuf, game: &GraphicalGame) -> Result<Decomposition, CliError> {
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: name.clone(), source })?;
    let text = std::str::from_utf8(&bytes).map_err(|e| in_file(&name, CliError::Invalid(format!("not UTF-8: {e}"))))?;
    parse_decomposition(text, game.num_players()).map_err(|e| in_file(&name, e))
}

fn header(command: &'static str, input: &Input) -> ResultLine {
    ResultLine::Header {
        format: RESULT_FORMAT,
        version: VERSION,
        tool: format!("pne {}", env!("CARGO_PKG_VERSION")),
        command,
        input_sha256: format!("{:x}", Sha256::digest(&input.bytes)),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn pipeline_strategy(args: &PipelineArgs, game: &GraphicalGame) -> Result<PipelineStrategy, CliError> {
    let decomposition = args.decomposition.as_ref().map(|p| load_decomposition(p, game)).transpose()?;
    let source = match (args.strategy, decomposition) {
        (None | Some(SourceArg::GrahamJoinTree), None) => DecompositionSource::GrahamJoinTree,
        (Some(SourceArg::TriangulatePrimal), None) => DecompositionSource::TriangulatePrimal,
        (None | Some(SourceArg::LiftTreeDecomposition), Some(Decomposition::Tree(td))) => {
            DecompositionSource::LiftTreeDecomposition(td)
        }
        (None | Some(SourceArg::LiftHypertreeDecomposition), Some(Decomposition::Hypertree(htd))) => {
            DecompositionSource::LiftHypertreeDecomposition(htd)
        }
        (Some(s @ (SourceArg::LiftTreeDecomposition | SourceArg::LiftHypertreeDecomposition)), None) => {
            return Err(CliError::Usage(format!("--strategy {} requires --decomposition", source_name(s))));
        }
        (Some(s @ (SourceArg::GrahamJoinTree | SourceArg::TriangulatePrimal)), Some(_)) => {
            return Err(CliError::Usage(format!("--decomposition conflicts with --strategy {}", source_name(s))));
        }
        (Some(s), Some(d)) => {
            return Err(CliError::Usage(format!(
                "--strategy {} does not accept a {} decomposition",
                source_name(s),
                d.kind()
            )));
        }
    };
    Ok(PipelineStrategy {
        source,
        triangulation: args.triangulation.into(),
        enumeration_limit: None,
        execution: execution(args.input.sequential),
    })
}

fn source_name(s: SourceArg) -> &'static str {
    match s {
        SourceArg::GrahamJoinTree => "graham-join-tree",
        SourceArg::LiftTreeDecomposition => "lift-tree-decomposition",
        SourceArg::LiftHypertreeDecomposition => "lift-hypertree-decomposition",
        SourceArg::TriangulatePrimal => "triangulate-primal",
    }
}

fn labels(game: &GraphicalGame, profile: &[usize]) -> Vec<String> {
    profile.iter().enumerate().map(|(p, &s)| game.labels(p)[s].clone()).collect()
}

fn one_based(members: &[usize]) -> Vec<usize> {
    members.iter().map(|&p| p + 1).collect()
}

fn push_potentials<S: Semiring>(doc: &mut Document, mrf: &MarkovRandomField<S>, render: impl Fn(&S::Value) -> String) {
    for (clique, table) in mrf.cliques().iter().zip(mrf.potentials()) {
        doc.push(&ResultLine::Potential {
            semiring: mrf.semiring().name(),
            members: one_based(clique),
            table: table.entries().iter().map(&render).collect(),
        });
    }
}

fn push_stats(
    doc: &mut Document,
    prepared_source: &'static str,
    tree_width: usize,
    nodes: usize,
    messages: usize,
    notices: Vec<String>,
) {
    doc.push(&ResultLine::Stats { source: prepared_source, width: tree_width, nodes, messages, notices });
}

fn push_timings(doc: &mut Document, enabled: bool, stages: &[(&str, std::time::Duration)]) {
    if enabled {
        doc.push(&ResultLine::Timings {
            stages: stages.iter().map(|(name, d)| (name.to_string(), d.as_secs_f64() * 1e3)).collect(),
        });
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    match command {
        Command::Decide(args) => decide(args, stdin),
        Command::Count(args) => count(args, stdin),
        Command::Marginals(args) => exact("marginals", args, Some(0), stdin),
        Command::Enumerate(args) => {
            let limit = match args.limit {
                Limit::Count(n) => Some(n),
                Limit::Unbounded => None,
            };
            exact("enumerate", args.pipeline, limit, stdin)
        }
        Command::Map(args) => map(args, stdin),
        Command::Sample(args) => sample(args, stdin),
        Command::Anneal(args) => anneal(args, stdin),
        Command::Gen(args) => gen(args),
        Command::Validate(args) => validate(args, stdin),
    }
}

fn prepared_with_timing(
    game: &GraphicalGame,
    strategy: &PipelineStrategy,
) -> Result<(PreparedTree, std::time::Duration), CliError> {
    let start = Instant::now();
    let prepared = prepare_clique_tree(game, strategy)?;
    Ok((prepared, start.elapsed()))
}

fn decide(args: PipelineArgs, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    let input = load_game(&args.input.game, stdin)?;
    let strategy = pipeline_strategy(&args, &input.game)?;
    let exec = strategy.execution;
    let (prepared, structure_time) = prepared_with_timing(&input.game, &strategy)?;
    let start = Instant::now();
    let mrf = build_mrf_with(&input.game, 0.0, Boolean, exec)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, exec)?;
    let frontend_time = start.elapsed();
    let start = Instant::now();
    let existence = collect_total(&loaded, exec);
    let calibration_time = start.elapsed();

    let mut doc = Document::default();
    doc.push(&header("decide", &input));
    if args.dump_potentials {
        push_potentials(&mut doc, &mrf, |v| u8::from(*v).to_string());
    }
    doc.push(&ResultLine::Summary { existence, count: None, listed: None, complete: None });
    let nodes = prepared.tree.len();
    push_stats(&mut doc, prepared.source, prepared.tree.width(), nodes, nodes - 1, prepared.notices);
    push_timings(
        &mut doc,
        args.input.timings,
        &[("structure", structure_time), ("frontend", frontend_time), ("calibration", calibration_time)],
    );
    Ok((doc.into_string(), if existence { 0 } else { 1 }))
}

fn count(args: PipelineArgs, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    let input = load_game(&args.input.game, stdin)?;
    let strategy = pipeline_strategy(&args, &input.game)?;
    let (count, stats) = count_equilibria(&input.game, &strategy)?;
    let mut doc = Document::default();
    doc.push(&header("count", &input));
    if args.dump_potentials {
        let mrf = build_mrf_with(&input.game, 0.0, Counting, strategy.execution)?;
        push_potentials(&mut doc, &mrf, |v| v.to_string());
    }
    doc.push(&ResultLine::Summary {
        existence: count.bits() > 0,
        count: Some(count.to_string()),
        listed: None,
        complete: None,
    });
    push_stats(&mut doc, stats.source, stats.width, stats.nodes, stats.messages, stats.notices);
    push_timings(&mut doc, args.input.timings, &stats.timings);
    Ok((doc.into_string(), 0))
}

fn exact(
    command: &'static str,
    args: PipelineArgs,
    limit: Option<usize>,
    stdin: &mut dyn Read,
) -> Result<(String, i32), CliError> {
    let input = load_game(&args.input.game, stdin)?;
    let mut strategy = pipeline_strategy(&args, &input.game)?;
    strategy.enumeration_limit = limit;
    let r = solve(&input.game, &strategy)?;

    let mut doc = Document::default();
    doc.push(&header(command, &input));
    if args.dump_potentials {
        let mrf = build_mrf_with(&input.game, 0.0, Counting, strategy.execution)?;
        push_potentials(&mut doc, &mrf, |v| v.to_string());
    }
    let listing = command == "enumerate";
    doc.push(&ResultLine::Summary {
        existence: r.existence,
        count: Some(r.count.to_string()),
        listed: listing.then_some(r.equilibria.len()),
        complete: listing.then_some(r.enumeration_complete),
    });
    if command == "marginals" {
        for (clique, table) in r.description.cliques.iter().zip(&r.description.tables) {
            doc.push(&ResultLine::Clique {
                members: one_based(clique),
                table: table.entries().iter().map(|v| v.to_string()).collect(),
            });
        }
    }
    for eq in &r.equilibria {
        doc.push(&ResultLine::Equilibrium { profile: labels(&input.game, eq) });
    }
    push_stats(&mut doc, r.stats.source, r.stats.width, r.stats.nodes, r.stats.messages, r.stats.notices.clone());
    push_timings(&mut doc, args.input.timings, &r.stats.timings);
    Ok((doc.into_string(), 0))
}

fn map(args: MapArgs, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    let input = load_game(&args.pipeline.input.game, stdin)?;
    let strategy = pipeline_strategy(&args.pipeline, &input.game)?;
    let exec = strategy.execution;
    let (prepared, structure_time) = prepared_with_timing(&input.game, &strategy)?;
    let start = Instant::now();
    let mrf = build_mrf_with(&input.game, args.epsilon, MaxProduct, exec)?;
    let loaded = load_potentials_with(&prepared.tree, &mrf, exec)?;
    let sol = map_solve_with(&loaded, args.epsilon, exec)?;
    let solve_time = start.elapsed();

    let mut doc = Document::default();
    doc.push(&header("map", &input));
    if args.pipeline.dump_potentials {
        push_potentials(&mut doc, &mrf, |v| match v.exponent() {
            Some(k) => format!("eps^{k}"),
            None => "0".to_string(),
        });
    }
    doc.push(&ResultLine::Map {
        epsilon: args.epsilon,
        exponent: sol.optimum.exponent(),
        value: sol.value,
        equilibrium: sol.optimum.exponent() == Some(0),
        profile: labels(&input.game, &sol.argmax),
    });
    let messages = 2 * (prepared.tree.len() - 1);
    push_stats(&mut doc, prepared.source, prepared.tree.width(), prepared.tree.len(), messages, prepared.notices);
    push_timings(&mut doc, args.pipeline.input.timings, &[("structure", structure_time), ("map", solve_time)]);
    Ok((doc.into_string(), 0))
}

fn chain_line(game: &GraphicalGame, seed: u64, r: &ChainReport) -> ResultLine {
    ResultLine::Chain {
        seed,
        steps: r.steps,
        best_unsatisfied: r.best_unsatisfied,
        found_equilibrium: r.found_equilibrium(),
        pne_hit_step: r.pne_hit_step,
        proposed: r.proposed,
        accepted: r.accepted,
        acceptance_rate: r.acceptance_rate(),
        level_visits: r.level_visits.clone(),
        best_profile: labels(game, &r.best_profile),
        final_profile: labels(game, &r.final_profile),
    }
}

fn push_chains(doc: &mut Document, game: &GraphicalGame, seeds: &[u64], reports: &[ChainReport]) {
    for (&seed, r) in seeds.iter().zip(reports) {
        doc.push(&chain_line(game, seed, r));
    }
    let best = best_report(reports).expect("at least one chain");
    let i = reports.iter().position(|r| std::ptr::eq(r, best)).unwrap();
    doc.push(&ResultLine::Best {
        seed: seeds[i],
        best_unsatisfied: best.best_unsatisfied,
        found_equilibrium: best.found_equilibrium(),
        profile: labels(game, &best.best_profile),
    });
}

fn seeds(first: u64, count: u64) -> Vec<u64> {
    (0..count).map(|i| first.wrapping_add(i)).collect()
}

fn sample(args: SampleArgs, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    let input = load_game(&args.input.game, stdin)?;
    let seeds = seeds(args.seed, args.chains);
    let cfg = ChainConfig { epsilon: args.epsilon, steps: args.steps, seed: args.seed };
    let start = Instant::now();
    let reports = run_chains(&input.game, &cfg, &seeds, execution(args.input.sequential))?;
    let elapsed = start.elapsed();
    let mut doc = Document::default();
    doc.push(&header("sample", &input));
    push_chains(&mut doc, &input.game, &seeds, &reports);
    push_timings(&mut doc, args.input.timings, &[("sampling", elapsed)]);
    Ok((doc.into_string(), 0))
}

fn anneal(args: AnnealArgs, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    let input = load_game(&args.input.game, stdin)?;
    if !(args.decay > 0.0 && args.decay < 1.0) {
        return Err(CliError::Usage(format!("--decay must lie in (0, 1), found {}", args.decay)));
    }
    let schedule: Vec<(f64, u64)> =
        (0..args.stages).map(|k| (args.epsilon * args.decay.powi(k as i32), args.steps)).collect();
    let seeds = seeds(args.seed, args.chains);
    let start = Instant::now();
    let reports = run_annealers(&input.game, &schedule, &seeds, execution(args.input.sequential))?;
    let elapsed = start.elapsed();
    let mut doc = Document::default();
    doc.push(&header("anneal", &input));
    push_chains(&mut doc, &input.game, &seeds, &reports);
    push_timings(&mut doc, args.input.timings, &[("annealing", elapsed)]);
    Ok((doc.into_string(), 0))
}

fn gen(args: GenArgs) -> Result<(String, i32), CliError> {
    let family = match args.family {
        FamilyArg::Tree => Family::Tree,
        FamilyArg::Cycle => Family::Cycle,
        FamilyArg::Grid => Family::Grid,
        FamilyArg::RandomBoundedDegree => Family::RandomBoundedDegree,
    };
    let game = generate(&GenParams {
        family,
        players: args.players,
        min_strategies: args.min_strategies,
        max_strategies: args.max_strategies,
        max_payoff: args.max_payoff,
        max_degree: args.max_degree,
        seed: args.seed,
    })?;
    Ok((emit_game(&game), 0))
}

fn validate(args: ValidateArgs, stdin: &mut dyn Read) -> Result<(String, i32), CliError> {
    let input = load_game(&args.game, stdin)?;
    let game = &input.game;
    let mut doc = Document::default();
    doc.push(&header("validate", &input));
    let Some(path) = &args.decomposition else {
        doc.push(&ResultLine::Validation {
            subject: "game",
            valid: true,
            players: Some(game.num_players()),
            hypergraph_acyclic: Some(grahams_algorithm(&game_hypergraph(game)).acyclic),
            width: None,
            lifted_width: None,
            width_bound: None,
            violation: None,
        });
        return Ok((doc.into_string(), 0));
    };
    let decomposition = load_decomposition(path, game)?;
    let (subject, width, outcome) = match &decomposition {
        Decomposition::Tree(td) => {
            let graph = Graph::from_edges(game.num_players(), &game.edges())?;
            let outcome = match td.validate_for(&graph) {
                Ok(()) => {
                    let tree = lift_tree_decomposition(td, game)?;
                    Ok((tree.width(), (td.width() + 1) * game.max_neighborhood()))
                }
                Err(e) => Err(tree_violation(&e)),
            };
            ("tree", td.width(), outcome)
        }
        Decomposition::Hypertree(htd) => {
            let outcome = match validate_hypertree_decomposition(htd, &game_hypergraph(game)) {
                Ok(()) => {
                    let tree = lift_hypertree_decomposition(htd, game)?;
                    Ok((tree.width(), htd.width() * game.max_neighborhood()))
                }
                Err(v) => Err(Violation {
                    condition: v.condition.name().to_string(),
                    detail: match v.condition.index() {
                        Some(i) => format!("condition {i} violated: {}", v.describe(1)),
                        None => v.describe(1),
                    },
                }),
            };
            ("hypertree", htd.width(), outcome)
        }
    };
    let valid = outcome.is_ok();
    let (lifted_width, width_bound, violation) = match outcome {
        Ok((w, b)) => (Some(w), Some(b), None),
        Err(v) => (None, None, Some(v)),
    };
    doc.push(&ResultLine::Validation {
        subject,
        valid,
        players: None,
        hypergraph_acyclic: None,
        width: Some(width),
        lifted_width,
        width_bound,
        violation,
    });
    Ok((doc.into_string(), if valid { 0 } else { 1 }))
}

fn tree_violation(e: &pne_core::Error) -> Violation {
    let (condition, detail) = match e {
        pne_core::Error::UncoveredVertex(v) => ("vertex-coverage", format!("vertex {} is in no bag", v + 1)),
        pne_core::Error::UncoveredEdge(u, v) => ("edge-coverage", format!("edge ({}, {}) is in no bag", u + 1, v + 1)),
        pne_core::Error::RunningIntersection { vertex } => {
            ("running-intersection", format!("bags containing vertex {} are disconnected", vertex + 1))
        }
        other => ("malformed", other.to_string()),
    };
    Violation { condition: condition.to_string(), detail }
}
