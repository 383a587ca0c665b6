//! Decomposition documents, one JSON object per line, players numbered from 1.
//!
//! A tree decomposition of the game graph:
//!
//! ```text
//! {"type":"header","format":"pne-decomposition","version":1,"kind":"tree"}
//! {"type":"bag","id":1,"vertices":[1,2]}
//! {"type":"bag","id":2,"vertices":[2,3]}
//! {"type":"tree-edge","between":[1,2]}
//! ```
//!
//! A hypertree decomposition of the game hypergraph, with exactly one node
//! whose `parent` is `null`:
//!
//! ```text
//! {"type":"header","format":"pne-decomposition","version":1,"kind":"hypertree"}
//! {"type":"node","id":1,"parent":null,"chi":[1,2,3],"lambda":[[1,2,3]]}
//! ```

use pne_core::structure::{HypertreeDecomposition, TreeDecomposition};
use serde::Deserialize;

use crate::game_doc::VERSION;
use crate::CliError;

pub const DECOMPOSITION_FORMAT: &str = "pne-decomposition";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Tree(TreeDecomposition),
    Hypertree(HypertreeDecomposition),
}

impl Decomposition {
    pub fn kind(&self) -> &'static str {
        match self {
            Decomposition::Tree(_) => "tree",
            Decomposition::Hypertree(_) => "hypertree",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    Tree,
    Hypertree,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum DecompositionLine {
    Header { format: String, version: u32, kind: Kind },
    Bag { id: usize, vertices: Vec<usize> },
    TreeEdge { between: [usize; 2] },
    Node { id: usize, parent: Option<usize>, chi: Vec<usize>, lambda: Vec<Vec<usize>> },
}

/// `(id, parent, chi, lambda)` as read, before renumbering.
type NodeLine = (usize, Option<usize>, Vec<usize>, Vec<Vec<usize>>);

fn syntax(line: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax { line, message: message.into() }
}

fn zero_based(line: usize, vertices: &[usize], players: usize) -> Result<Vec<usize>, CliError> {
    vertices
        .iter()
        .map(|&v| {
            if v == 0 || v > players {
                Err(syntax(line, format!("vertex {v} is not a player of the game")))
            } else {
                Ok(v - 1)
            }
        })
        .collect()
}

/// Node ids must be exactly `1..=count`.
fn check_ids(ids: &[(usize, usize)]) -> Result<(), CliError> {
    let n = ids.len();
    let mut seen = vec![false; n];
    for &(line, id) in ids {
        if id == 0 || id > n {
            return Err(syntax(line, format!("node ids must be 1..={n}, found {id}")));
        }
        if std::mem::replace(&mut seen[id - 1], true) {
            return Err(syntax(line, format!("duplicate node {id}")));
        }
    }
    Ok(())
}

/// Parses a decomposition for a game with `players` players. Only shape is
/// checked here; the decomposition conditions are checked against the game.
pub fn parse_decomposition(text: &str, players: usize) -> Result<Decomposition, CliError> {
    let mut kind = None;
    let mut ids = Vec::new();
    let mut bags: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut tree_edges: Vec<(usize, [usize; 2])> = Vec::new();
    let mut nodes: Vec<NodeLine> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed: DecompositionLine = serde_json::from_str(raw).map_err(|e| syntax(line, e.to_string()))?;
        let Some(k) = kind else {
            match parsed {
                DecompositionLine::Header { format, version, kind: k } => {
                    if format != DECOMPOSITION_FORMAT {
                        return Err(syntax(
                            line,
                            format!("expected format \"{DECOMPOSITION_FORMAT}\", found \"{format}\""),
                        ));
                    }
                    if version != VERSION {
                        return Err(syntax(line, format!("unsupported version {version}")));
                    }
                    kind = Some(k);
                    continue;
                }
                _ => return Err(syntax(line, "the first line must be a header")),
            }
        };
        match (k, parsed) {
            (_, DecompositionLine::Header { .. }) => return Err(syntax(line, "duplicate header")),
            (Kind::Tree, DecompositionLine::Bag { id, vertices }) => {
                ids.push((line, id));
                bags.push((id, zero_based(line, &vertices, players)?));
            }
            (Kind::Tree, DecompositionLine::TreeEdge { between }) => tree_edges.push((line, between)),
            (Kind::Hypertree, DecompositionLine::Node { id, parent, chi, lambda }) => {
                ids.push((line, id));
                let chi = zero_based(line, &chi, players)?;
                let lambda = lambda.iter().map(|e| zero_based(line, e, players)).collect::<Result<_, _>>()?;
                nodes.push((id, parent, chi, lambda));
            }
            (Kind::Tree, _) => return Err(syntax(line, "tree decompositions contain only bag and tree-edge lines")),
            (Kind::Hypertree, _) => return Err(syntax(line, "hypertree decompositions contain only node lines")),
        }
    }
    let Some(kind) = kind else {
        return Err(CliError::Invalid("empty decomposition document".into()));
    };
    if ids.is_empty() {
        return Err(CliError::Invalid("decomposition has no nodes".into()));
    }
    check_ids(&ids)?;
    let n = ids.len();
    match kind {
        Kind::Tree => {
            bags.sort_by_key(|(id, _)| *id);
            let mut edges = Vec::with_capacity(tree_edges.len());
            for (line, [a, b]) in tree_edges {
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(syntax(line, format!("tree edge ({a}, {b}) names a missing bag")));
                }
                edges.push((a - 1, b - 1));
            }
            let td = TreeDecomposition::new(bags.into_iter().map(|(_, b)| b).collect(), edges)
                .map_err(|e| CliError::Invalid(format!("not a tree: {e}")))?;
            Ok(Decomposition::Tree(td))
        }
        Kind::Hypertree => {
            nodes.sort_by_key(|(id, ..)| *id);
            let mut parent = Vec::with_capacity(n);
            let mut chi = Vec::with_capacity(n);
            let mut lambda = Vec::with_capacity(n);
            for (id, p, c, l) in nodes {
                let p = match p {
                    Some(p) if p == 0 || p > n => {
                        return Err(CliError::Invalid(format!("node {id} has missing parent {p}")));
                    }
                    Some(p) => Some(p - 1),
                    None => None,
                };
                parent.push(p);
                chi.push(c);
                lambda.push(l);
            }
            let htd = HypertreeDecomposition::new(parent, chi, lambda)
                .map_err(|e| CliError::Invalid(format!("not a rooted tree: {e}")))?;
            Ok(Decomposition::Hypertree(htd))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_document() {
        let text = r#"{"type":"header","format":"pne-decomposition","version":1,"kind":"tree"}
{"type":"bag","id":2,"vertices":[2,3]}
{"type":"bag","id":1,"vertices":[1,2]}
{"type":"tree-edge","between":[1,2]}
"#;
        let Decomposition::Tree(td) = parse_decomposition(text, 3).unwrap() else { panic!("expected a tree") };
        assert_eq!(td.bags(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(td.edges(), &[(0, 1)]);
    }

    #[test]
    fn hypertree_document() {
        let text = r#"{"type":"header","format":"pne-decomposition","version":1,"kind":"hypertree"}
{"type":"node","id":1,"parent":null,"chi":[1,2,3],"lambda":[[1,2,3]]}
{"type":"node","id":2,"parent":1,"chi":[1,2],"lambda":[[1,2]]}
"#;
        let Decomposition::Hypertree(htd) = parse_decomposition(text, 3).unwrap() else {
            panic!("expected a hypertree")
        };
        assert_eq!(htd.root(), 0);
        assert_eq!(htd.lambda()[1], vec![vec![0, 1]]);
    }

    #[test]
    fn malformed_documents() {
        let header = r#"{"type":"header","format":"pne-decomposition","version":1,"kind":"tree"}"#;
        let err =
            parse_decomposition(&format!("{header}\n{{\"type\":\"bag\",\"id\":1,\"vertices\":[4]}}\n"), 3).unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 2, .. }), "{err}");
        let err = parse_decomposition(
            &format!("{header}\n{{\"type\":\"node\",\"id\":1,\"parent\":null,\"chi\":[1],\"lambda\":[]}}\n"),
            3,
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 2, .. }), "{err}");
        let cyclic = format!(
            "{header}\n{{\"type\":\"bag\",\"id\":1,\"vertices\":[1]}}\n{{\"type\":\"bag\",\"id\":2,\"vertices\":[2]}}\n{{\"type\":\"tree-edge\",\"between\":[1,2]}}\n{{\"type\":\"tree-edge\",\"between\":[2,1]}}\n"
        );
        assert!(matches!(parse_decomposition(&cyclic, 3), Err(CliError::Invalid(_))));
    }
}
