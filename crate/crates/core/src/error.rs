use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("game has no players")]
    EmptyGame,
    #[error("player {0} does not exist")]
    InvalidPlayer(usize),
    #[error("player {player} has an empty strategy set")]
    EmptyStrategySet { player: usize },
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) is listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("payoff table of player {player} has {found} entries, expected {expected}")]
    PayoffArity { player: usize, expected: usize, found: usize },
    #[error("profile has {found} entries, game has {expected} players")]
    ProfileArity { expected: usize, found: usize },
    #[error("strategy {strategy} is out of range for player {player}")]
    InvalidStrategy { player: usize, strategy: usize },
    #[error("assignment does not cover exactly the expected players")]
    AssignmentMismatch,
    #[error("profile space of {size} profiles exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("table over {0:?} is too large to materialize")]
    TableTooLarge(Vec<usize>),
    #[error("hypergraph is invalid: {0}")]
    InvalidHypergraph(String),
    #[error("tree is malformed: {0}")]
    MalformedTree(String),
    #[error("running intersection property fails for vertex {vertex}")]
    RunningIntersection { vertex: usize },
    #[error("vertex {0} is not covered by any node")]
    UncoveredVertex(usize),
    #[error("edge ({0}, {1}) is not covered by any node")]
    UncoveredEdge(usize, usize),
    #[error("graph is not chordal under the given elimination order")]
    NotChordal,
    #[error("exact triangulation supports at most {cap} vertices, graph has {found}")]
    ExactTooLarge { cap: usize, found: usize },
    #[error("hypertree decomposition is invalid: {0}")]
    InvalidHypertree(String),
    #[error("epsilon {0} is out of range")]
    EpsilonOutOfRange(f64),
    #[error("semiring {semiring} cannot represent epsilon {epsilon}")]
    EpsilonSemiringMismatch { semiring: &'static str, epsilon: f64 },
    #[error("significant clique {0:?} is not contained in any clique-tree node")]
    UncoveredClique(Vec<usize>),
    #[error("chain configuration is invalid: {0}")]
    InvalidChain(String),
    #[error("generator parameters are invalid: {0}")]
    InvalidGeneratorParams(String),
}
