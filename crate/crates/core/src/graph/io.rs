use std::collections::HashMap;

use super::{DirectedGraph, Sign, SignedGraph};
use crate::error::{Error, Result};

/// A parsed edge list with its label table and cleanup tallies.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    /// External token of each dense node id.
    pub labels: Vec<String>,
    pub duplicates: usize,
    pub self_arcs: usize,
}

#[derive(Clone, Debug)]
pub struct LoadedSignedGraph {
    pub graph: SignedGraph,
    pub labels: Vec<String>,
    pub duplicates: usize,
    pub self_edges: usize,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, usize>,
    labels: Vec<String>,
}

impl Interner {
    fn id(&mut self, token: &str) -> usize {
        if let Some(&id) = self.ids.get(token) {
            return id;
        }
        let id = self.labels.len();
        self.ids.insert(token.to_string(), id);
        self.labels.push(token.to_string());
        id
    }
}

/// Yields (1-based line number, tokens) for every non-blank, non-comment line.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

/// Parses `src dst` lines. Tokens are opaque labels mapped to ids in
/// first-seen order; duplicate arcs collapse and self-arcs are dropped.
pub fn load_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut names = Interner::default();
    let mut arcs = Vec::new();
    for (line, tokens) in records(text) {
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 tokens (source, target), found {}", tokens.len()),
            });
        }
        let u = names.id(tokens[0]);
        let v = names.id(tokens[1]);
        arcs.push((u, v));
    }
    let mut graph = DirectedGraph::new(names.labels.len());
    let (mut duplicates, mut self_arcs) = (0, 0);
    for (u, v) in arcs {
        if u == v {
            self_arcs += 1;
        } else if !graph.add_arc(u, v) {
            duplicates += 1;
        }
    }
    Ok(LoadedGraph { graph, labels: names.labels, duplicates, self_arcs })
}

fn parse_sign(token: &str) -> Option<Sign> {
    match token {
        "+1" | "1" | "+" => Some(Sign::Positive),
        "-1" | "-" => Some(Sign::Negative),
        _ => None,
    }
}

/// Parses `a b sign` lines with sign in {+1, -1}. A repeated pair with the
/// same sign is a duplicate; with the opposite sign it is an error.
pub fn load_signed_edge_list(text: &str) -> Result<LoadedSignedGraph> {
    let mut names = Interner::default();
    let mut edges = Vec::new();
    for (line, tokens) in records(text) {
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 tokens (a, b, sign), found {}", tokens.len()),
            });
        }
        let sign = parse_sign(tokens[2]).ok_or_else(|| Error::Parse {
            line,
            message: format!("sign must be +1 or -1, found {:?}", tokens[2]),
        })?;
        let u = names.id(tokens[0]);
        let v = names.id(tokens[1]);
        edges.push((line, u, v, sign));
    }
    let mut graph = SignedGraph::new(names.labels.len());
    let (mut duplicates, mut self_edges) = (0, 0);
    for (line, u, v, sign) in edges {
        if u == v {
            self_edges += 1;
            continue;
        }
        match graph.sign(u, v) {
            Some(existing) if existing == sign => duplicates += 1,
            Some(_) => {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "pair ({}, {}) already present with the opposite sign",
                        names.labels[u], names.labels[v]
                    ),
                })
            }
            None => {
                graph.add_edge(u, v, sign);
            }
        }
    }
    Ok(LoadedSignedGraph { graph, labels: names.labels, duplicates, self_edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutual_pair_from_string_tokens() {
        let loaded = load_edge_list("a b\nb a").unwrap();
        assert_eq!(loaded.graph.node_count(), 2);
        assert_eq!(loaded.graph.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(loaded.labels, vec!["a", "b"]);
    }

    #[test]
    fn duplicate_arcs_collapse() {
        let loaded = load_edge_list("a b\na b").unwrap();
        assert_eq!(loaded.graph.arc_count(), 1);
        assert_eq!(loaded.duplicates, 1);
    }

    #[test]
    fn self_arcs_dropped_and_counted() {
        let loaded = load_edge_list("a a").unwrap();
        assert_eq!(loaded.graph.arc_count(), 0);
        assert_eq!(loaded.self_arcs, 1);
    }

    #[test]
    fn comments_tabs_and_blank_lines() {
        let loaded = load_edge_list("# header\n1\t2\n\n2 3 # trailing\n").unwrap();
        assert_eq!(loaded.graph.arc_count(), 2);
        assert_eq!(loaded.labels, vec!["1", "2", "3"]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load_edge_list("a b\nc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn signed_list_parses_and_rejects_conflicts() {
        let loaded = load_signed_edge_list("x y +1\ny z -1\ny x +1").unwrap();
        assert_eq!(loaded.graph.edge_count(), 2);
        assert_eq!(loaded.duplicates, 1);
        assert_eq!(loaded.graph.sign(1, 2), Some(Sign::Negative));
        assert!(load_signed_edge_list("x y +1\ny x -1").is_err());
        assert!(load_signed_edge_list("x y 0").is_err());
    }
}
