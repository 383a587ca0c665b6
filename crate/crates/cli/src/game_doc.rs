//! Game documents: one JSON object per line.
//!
//! ```text
//! {"type":"header","format":"pne-game","version":1}
//! {"type":"player","id":1,"strategies":["0","1"]}
//! {"type":"player","id":2,"strategies":["0","1"]}
//! {"type":"edge","between":[1,2]}
//! {"type":"payoff","player":1,"table":[1,0,0,1]}
//! {"type":"payoff","player":2,"entries":[{"assignment":["0","0"],"value":1},{"assignment":["1","1"],"value":1}]}
//! ```
//!
//! Players are numbered `1..=n`. A dense `table` lists payoffs over the
//! closed neighborhood in ascending player order, last player varying
//! fastest. The sparse `entries` form names strategies by label; missing
//! assignments take `default` (0 if absent). Blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};

use pne_core::GraphicalGame;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const GAME_FORMAT: &str = "pne-game";
pub const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum GameLine {
    Header {
        format: String,
        version: u32,
    },
    Player {
        id: usize,
        strategies: Vec<String>,
    },
    Edge {
        between: [usize; 2],
    },
    Payoff {
        player: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        entries: Option<Vec<SparseEntry>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<u64>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SparseEntry {
    assignment: Vec<String>,
    value: u64,
}

struct PayoffLine {
    line: usize,
    table: Option<Vec<u64>>,
    entries: Option<Vec<SparseEntry>>,
    default: u64,
}

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax { line, message: message.into() }
}

/// Parses and validates a game document.
pub fn parse_game(text: &str) -> Result<GraphicalGame, CliError> {
    let mut header_seen = false;
    let mut players: BTreeMap<usize, (usize, Vec<String>)> = BTreeMap::new();
    let mut edges: Vec<(usize, [usize; 2])> = Vec::new();
    let mut payoffs: BTreeMap<usize, PayoffLine> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed: GameLine = serde_json::from_str(raw).map_err(|e| syntax(line, e.to_string()))?;
        if !header_seen {
            match parsed {
                GameLine::Header { format, version } => {
                    if format != GAME_FORMAT {
                        return Err(syntax(line, format!("expected format \"{GAME_FORMAT}\", found \"{format}\"")));
                    }
                    if version != VERSION {
                        return Err(syntax(line, format!("unsupported version {version}")));
                    }
                    header_seen = true;
                    continue;
                }
                _ => return Err(syntax(line, "the first line must be a header")),
            }
        }
        match parsed {
            GameLine::Header { .. } => return Err(syntax(line, "duplicate header")),
            GameLine::Player { id, strategies } => {
                if id == 0 {
                    return Err(syntax(line, "player ids start at 1"));
                }
                if strategies.is_empty() {
                    return Err(syntax(line, format!("player {id} has no strategies")));
                }
                let mut seen = BTreeSet::new();
                if let Some(dup) = strategies.iter().find(|s| !seen.insert(s.as_str())) {
                    return Err(syntax(line, format!("player {id} repeats strategy label \"{dup}\"")));
                }
                if let Some((first, _)) = players.insert(id, (line, strategies)) {
                    return Err(syntax(line, format!("duplicate player {id} (first declared on line {first})")));
                }
            }
            GameLine::Edge { between } => {
                if between[0] == between[1] {
                    return Err(syntax(line, format!("self-loop edge ({0}, {0})", between[0])));
                }
                edges.push((line, between));
            }
            GameLine::Payoff { player, table, entries, default } => {
                if table.is_some() == entries.is_some() {
                    return Err(syntax(line, "a payoff line needs exactly one of \"table\" and \"entries\""));
                }
                if table.is_some() && default.is_some() {
                    return Err(syntax(line, "\"default\" only applies to \"entries\""));
                }
                let entry = PayoffLine { line, table, entries, default: default.unwrap_or(0) };
                if let Some(prev) = payoffs.insert(player, entry) {
                    return Err(syntax(
                        line,
                        format!("duplicate payoff for player {player} (first on line {})", prev.line),
                    ));
                }
            }
        }
    }
    if !header_seen {
        return Err(CliError::Invalid("empty game document".into()));
    }
    let n = players.len();
    if n == 0 {
        return Err(CliError::Invalid("game has no players".into()));
    }
    if let Some((&id, &(line, _))) = players.iter().find(|(&id, _)| id > n) {
        return Err(syntax(line, format!("player ids must be 1..={n}, found {id}")));
    }

    let mut pairs = Vec::with_capacity(edges.len());
    let mut seen = BTreeSet::new();
    for &(line, [a, b]) in &edges {
        for v in [a, b] {
            if !players.contains_key(&v) {
                return Err(syntax(line, format!("edge names unknown player {v}")));
            }
        }
        let (u, v) = (a.min(b) - 1, a.max(b) - 1);
        if !seen.insert((u, v)) {
            return Err(syntax(line, format!("duplicate edge ({a}, {b})")));
        }
        pairs.push((u, v));
    }

    let labels: Vec<Vec<String>> = players.into_values().map(|(_, l)| l).collect();
    let counts: Vec<usize> = labels.iter().map(Vec::len).collect();
    let mut closed: Vec<Vec<usize>> = (0..n).map(|p| vec![p]).collect();
    for &(u, v) in &pairs {
        closed[u].push(v);
        closed[v].push(u);
    }
    for nb in &mut closed {
        nb.sort_unstable();
    }

    let mut tables = Vec::with_capacity(n);
    for (p, members) in closed.iter().enumerate() {
        let Some(entry) = payoffs.remove(&(p + 1)) else {
            return Err(CliError::Invalid(format!("player {} has no payoff line", p + 1)));
        };
        let radices: Vec<usize> = members.iter().map(|&q| counts[q]).collect();
        let size = radices
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or_else(|| syntax(entry.line, format!("payoff table for player {} is too large", p + 1)))?;
        let table = match (entry.table, entry.entries) {
            (Some(t), _) => {
                if t.len() != size {
                    return Err(syntax(
                        entry.line,
                        format!("payoff table for player {} has {} entries, expected {size}", p + 1, t.len()),
                    ));
                }
                t
            }
            (None, Some(sparse)) => {
                let mut t = vec![entry.default; size];
                for e in sparse {
                    if e.assignment.len() != members.len() {
                        return Err(syntax(
                            entry.line,
                            format!(
                                "assignment {:?} for player {} names {} strategies, expected {}",
                                e.assignment,
                                p + 1,
                                e.assignment.len(),
                                members.len()
                            ),
                        ));
                    }
                    let mut index = 0;
                    for (&q, label) in members.iter().zip(&e.assignment) {
                        let s = labels[q].iter().position(|l| l == label).ok_or_else(|| {
                            syntax(entry.line, format!("unknown strategy label \"{label}\" for player {}", q + 1))
                        })?;
                        index = index * counts[q] + s;
                    }
                    t[index] = e.value;
                }
                t
            }
            (None, None) => unreachable!("checked while reading"),
        };
        tables.push(table);
    }
    if let Some((&player, entry)) = payoffs.iter().next() {
        return Err(syntax(entry.line, format!("payoff for unknown player {player}")));
    }
    Ok(GraphicalGame::new(labels, &pairs, tables)?)
}

/// Canonical document for `game`: header, players, edges, dense tables.
pub fn emit_game(game: &GraphicalGame) -> String {
    let mut lines = vec![GameLine::Header { format: GAME_FORMAT.into(), version: VERSION }];
    for p in 0..game.num_players() {
        lines.push(GameLine::Player { id: p + 1, strategies: game.labels(p).to_vec() });
    }
    for (u, v) in game.edges() {
        lines.push(GameLine::Edge { between: [u + 1, v + 1] });
    }
    for p in 0..game.num_players() {
        lines.push(GameLine::Payoff {
            player: p + 1,
            table: Some(game.payoff_table(p).to_vec()),
            entries: None,
            default: None,
        });
    }
    let mut out = String::new();
    for l in &lines {
        out.push_str(&serde_json::to_string(l).expect("game lines serialize"));
        out.push('\n');
    }
    out
}
