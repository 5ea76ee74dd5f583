use super::{classify, table, ORBIT_COUNT, PATTERN_COUNT};
use crate::graph::DirectedGraph;

/// Code of the triad with nodes (a, b, c) in slots (a, b, c).
#[inline]
pub fn triad_code(g: &DirectedGraph, a: usize, b: usize, c: usize) -> u8 {
    (g.has_arc(a, b) as u8)
        | (g.has_arc(b, a) as u8) << 1
        | (g.has_arc(a, c) as u8) << 2
        | (g.has_arc(c, a) as u8) << 3
        | (g.has_arc(b, c) as u8) << 4
        | (g.has_arc(c, b) as u8) << 5
}

/// Visits every connected triad exactly once as (i, j, c), where (i, j) with
/// i < j is the lexicographically smallest occupied dyad of the triad.
/// `on_dyad` additionally receives each occupied dyad with the number of
/// nodes adjacent to neither endpoint.
fn for_each_connected_triad<F, D>(g: &DirectedGraph, mut on_triad: F, mut on_dyad: D)
where
    F: FnMut(usize, usize, usize),
    D: FnMut(usize, usize, usize),
{
    let n = g.node_count();
    let nb: Vec<Vec<usize>> = (0..n).map(|u| g.neighbors(u)).collect();
    let mut in_i = vec![false; n];
    for i in 0..n {
        for &c in &nb[i] {
            in_i[c] = true;
        }
        for &j in nb[i].iter().filter(|&&j| j > i) {
            for &c in nb[i].iter().filter(|&&c| c > j) {
                on_triad(i, j, c);
            }
            let mut common = 0;
            for &c in &nb[j] {
                if in_i[c] {
                    common += 1;
                } else if c > i {
                    on_triad(i, j, c);
                }
            }
            // |N(i) u N(j)| without i and j themselves
            let touched = nb[i].len() - 1 + nb[j].len() - 1 - common;
            on_dyad(i, j, n - 2 - touched);
        }
        for &c in &nb[i] {
            in_i[c] = false;
        }
    }
}

fn choose3(n: usize) -> u64 {
    let n = n as u64;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Pattern counts indexed by id - 1. With `connected_only` the three
/// disconnected entries are left at zero.
pub fn census(g: &DirectedGraph, connected_only: bool) -> [u64; PATTERN_COUNT] {
    let mut counts = [0u64; PATTERN_COUNT];
    let mut lone_dyads = [0u64; 2];
    for_each_connected_triad(
        g,
        |i, j, c| counts[classify(triad_code(g, i, j, c)) - 1] += 1,
        |i, j, isolated| {
            if !connected_only {
                let mutual = g.has_arc(i, j) && g.has_arc(j, i);
                lone_dyads[mutual as usize] += isolated as u64;
            }
        },
    );
    if !connected_only {
        counts[1] = lone_dyads[0];
        counts[2] = lone_dyads[1];
        let rest: u64 = counts[1..].iter().sum();
        counts[0] = choose3(g.node_count()) - rest;
    }
    counts
}

/// Per-node counts of the 30 orbits (index orbit id - 1). Each connected
/// triad contributes once to each of its three members, in the orbit the
/// member occupies in the triad's full induced pattern.
pub fn node_specific_counts(g: &DirectedGraph) -> Vec<[u32; ORBIT_COUNT]> {
    node_specific_counts_and_census(g).0
}

/// Node-specific counts together with the connected-only census.
pub fn node_specific_counts_and_census(
    g: &DirectedGraph,
) -> (Vec<[u32; ORBIT_COUNT]>, [u64; PATTERN_COUNT]) {
    let t = table();
    let mut per_node = vec![[0u32; ORBIT_COUNT]; g.node_count()];
    let mut counts = [0u64; PATTERN_COUNT];
    for_each_connected_triad(
        g,
        |i, j, c| {
            let code = triad_code(g, i, j, c) as usize;
            counts[t.pattern_of[code] - 1] += 1;
            let at = t.orbit_at[code];
            per_node[i][at[0] - 1] += 1;
            per_node[j][at[1] - 1] += 1;
            per_node[c][at[2] - 1] += 1;
        },
        |_, _, _| {},
    );
    (per_node, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triads::FFL;

    #[test]
    fn empty_graph() {
        let c = census(&DirectedGraph::new(10), false);
        assert_eq!(c[0], 120);
        assert!(c[1..].iter().all(|&x| x == 0));
    }

    #[test]
    fn single_ffl_orbits() {
        let g = DirectedGraph::from_arcs(5, [(0, 1), (0, 2), (1, 2)]);
        let counts = node_specific_counts(&g);
        let ffl_orbits = &table().pattern(FFL).orbits;
        let mut seen = Vec::new();
        for node in &counts[..3] {
            let hits: Vec<usize> = (0..ORBIT_COUNT).filter(|&o| node[o] > 0).collect();
            assert_eq!(hits.len(), 1);
            assert_eq!(node[hits[0]], 1);
            assert!(ffl_orbits.contains(&(hits[0] + 1)));
            seen.push(hits[0]);
        }
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 3);
        assert!(counts[3..].iter().all(|n| n.iter().all(|&x| x == 0)));
        let c = census(&g, false);
        assert_eq!(c[FFL - 1], 1);
        assert_eq!(c[1], 6);
        assert_eq!(c[0], 3);
        assert_eq!(c.iter().sum::<u64>(), 10);
    }

    #[test]
    fn cycle_orbit() {
        let g = DirectedGraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let orbit = table().pattern(crate::triads::LOOP).orbits[0] - 1;
        for node in node_specific_counts(&g) {
            assert_eq!(node[orbit], 1);
            assert_eq!(node.iter().sum::<u32>(), 1);
        }
    }
}
