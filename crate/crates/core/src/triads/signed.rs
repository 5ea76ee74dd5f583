//! The 13 connected signed triad patterns seen from a focal node.
//!
//! | id | focal position | incident | opposite |
//! |----|----------------|----------|----------|
//! | 1-4 | path end | + / + / - / - | + / - / + / - |
//! | 5-7 | path middle | ++ / +- / -- | none |
//! | 8-13 | triangle | ++, ++, +-, +-, --, -- | +, -, +, -, +, - |

use std::sync::LazyLock;

use serde::Serialize;

use crate::graph::{Sign, SignedGraph};

pub const SIGNED_PATTERN_COUNT: usize = 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignedPosition {
    PathEnd,
    PathMiddle,
    Triangle,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignedPattern {
    pub id: usize,
    pub position: SignedPosition,
    /// Signs of the focal node's edges, positive first.
    pub incident: Vec<i8>,
    /// Sign of the edge not touching the focal node, if present.
    pub opposite: Option<i8>,
    /// Sign product is +1; only defined for triangles.
    pub balanced: Option<bool>,
}

fn build() -> Vec<SignedPattern> {
    let mut out = Vec::new();
    let mut push = |position, incident: Vec<i8>, opposite: Option<i8>| {
        let balanced = (position == SignedPosition::Triangle)
            .then(|| incident.iter().product::<i8>() * opposite.unwrap() > 0);
        out.push(SignedPattern { id: out.len() + 1, position, incident, opposite, balanced });
    };
    for (inc, opp) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        push(SignedPosition::PathEnd, vec![inc], Some(opp));
    }
    for inc in [vec![1, 1], vec![1, -1], vec![-1, -1]] {
        push(SignedPosition::PathMiddle, inc, None);
    }
    for inc in [vec![1, 1], vec![1, -1], vec![-1, -1]] {
        for opp in [1, -1] {
            push(SignedPosition::Triangle, inc.clone(), Some(opp));
        }
    }
    out
}

static SIGNED_TABLE: LazyLock<Vec<SignedPattern>> = LazyLock::new(build);

pub fn signed_pattern_table() -> &'static [SignedPattern] {
    &SIGNED_TABLE
}

fn negatives(signs: &[Sign]) -> usize {
    signs.iter().filter(|&&s| s == Sign::Negative).count()
}

/// Pattern id (1..=13) for a focal node with edges `ab`, `ac` to the other two
/// members and opposite edge `bc`; None when the triad is disconnected.
pub fn signed_pattern_id(ab: Option<Sign>, ac: Option<Sign>, bc: Option<Sign>) -> Option<usize> {
    let incident: Vec<Sign> = [ab, ac].into_iter().flatten().collect();
    match (incident.len(), bc) {
        (2, Some(o)) => Some(8 + 2 * negatives(&incident) + (o == Sign::Negative) as usize),
        (2, None) => Some(5 + negatives(&incident)),
        (1, Some(o)) => Some(1 + 2 * negatives(&incident) + (o == Sign::Negative) as usize),
        _ => None,
    }
}

/// Per-node counts of the 13 signed patterns (index id - 1).
pub fn signed_node_specific_counts(g: &SignedGraph) -> Vec<[u32; SIGNED_PATTERN_COUNT]> {
    let n = g.node_count();
    let mut per_node = vec![[0u32; SIGNED_PATTERN_COUNT]; n];
    let mut record = |i: usize, j: usize, c: usize| {
        let (ij, ic, jc) = (g.sign(i, j), g.sign(i, c), g.sign(j, c));
        for (node, a, b, opp) in [(i, ij, ic, jc), (j, ij, jc, ic), (c, ic, jc, ij)] {
            if let Some(id) = signed_pattern_id(a, b, opp) {
                per_node[node][id - 1] += 1;
            }
        }
    };
    // same once-per-triad rule as the directed census
    let mut in_i = vec![false; n];
    for i in 0..n {
        for &(c, _) in g.neighbors(i) {
            in_i[c] = true;
        }
        for &(j, _) in g.neighbors(i).iter().filter(|&&(j, _)| j > i) {
            for &(c, _) in g.neighbors(i).iter().filter(|&&(c, _)| c > j) {
                record(i, j, c);
            }
            for &(c, _) in g.neighbors(j) {
                if !in_i[c] && c > i {
                    record(i, j, c);
                }
            }
        }
        for &(c, _) in g.neighbors(i) {
            in_i[c] = false;
        }
    }
    per_node
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Negative as N, Positive as P};

    #[test]
    fn thirteen_patterns_three_balanced() {
        let t = signed_pattern_table();
        assert_eq!(t.len(), SIGNED_PATTERN_COUNT);
        let tri: Vec<_> = t.iter().filter(|p| p.position == SignedPosition::Triangle).collect();
        assert_eq!(tri.len(), 6);
        assert_eq!(tri.iter().filter(|p| p.balanced == Some(true)).count(), 3);
        assert_eq!(t.iter().filter(|p| p.position != SignedPosition::Triangle).count(), 7);
    }

    #[test]
    fn ids_agree_with_table() {
        for p in signed_pattern_table() {
            let sign = |v: i8| if v > 0 { P } else { N };
            let inc: Vec<Sign> = p.incident.iter().map(|&v| sign(v)).collect();
            let (ab, ac) = (Some(inc[0]), inc.get(1).copied());
            assert_eq!(signed_pattern_id(ab, ac, p.opposite.map(sign)), Some(p.id));
        }
        assert_eq!(signed_pattern_id(Some(P), None, None), None);
    }

    #[test]
    fn positive_triangle_and_mixed_path() {
        let tri = SignedGraph::from_edges(3, [(0, 1, P), (1, 2, P), (0, 2, P)]);
        for node in signed_node_specific_counts(&tri) {
            assert_eq!(node[7], 1);
            assert_eq!(node.iter().sum::<u32>(), 1);
        }
        let path = SignedGraph::from_edges(3, [(0, 1, P), (1, 2, N)]);
        let counts = signed_node_specific_counts(&path);
        assert_eq!(counts[1][5], 1);
        assert_eq!(counts[0][1], 1); // end with + incident, - opposite
        assert_eq!(counts[2][2], 1); // end with - incident, + opposite
    }
}
