//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng as _;
use triadnet::graph::{DirectedGraph, Sign, SignedGraph};
use triadnet::rng::{self, Rng};
use triadnet::triads::{classify, table, ORBIT_COUNT, PATTERN_COUNT, SIGNED_PATTERN_COUNT};
use triadnet::triads::{signed_pattern_table, SignedPosition};

pub fn random_directed(n: usize, p: f64, r: &mut Rng) -> DirectedGraph {
    let mut g = DirectedGraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && r.random_bool(p) {
                g.add_arc(u, v);
            }
        }
    }
    g
}

pub fn random_signed(n: usize, p: f64, r: &mut Rng) -> SignedGraph {
    let mut g = SignedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                g.add_edge(u, v, if r.random_bool(0.5) { Sign::Positive } else { Sign::Negative });
            }
        }
    }
    g
}

pub fn seeded(seed: u64) -> Rng {
    rng::from_seed(seed)
}

/// 6-bit code with nodes (a, b, c) in slots (a, b, c), read arc by arc.
fn code(g: &DirectedGraph, a: usize, b: usize, c: usize) -> u8 {
    let slots = [(a, b), (b, a), (a, c), (c, a), (b, c), (c, b)];
    slots.iter().enumerate().map(|(k, &(x, y))| (g.has_arc(x, y) as u8) << k).sum()
}

/// Census over all C(n, 3) triads.
pub fn brute_census(g: &DirectedGraph) -> [u64; PATTERN_COUNT] {
    let n = g.node_count();
    let mut out = [0; PATTERN_COUNT];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out[classify(code(g, a, b, c)) - 1] += 1;
            }
        }
    }
    out
}

/// Orbit counts over all triads; the orbit of a member is found by matching
/// the smaller of its two focal codes against the orbit table.
pub fn brute_orbits(g: &DirectedGraph) -> Vec<[u32; ORBIT_COUNT]> {
    let t = table();
    let n = g.node_count();
    let mut out = vec![[0u32; ORBIT_COUNT]; n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !t.pattern(classify(code(g, a, b, c))).connected {
                    continue;
                }
                for (f, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
                    let focal = code(g, f, x, y).min(code(g, f, y, x));
                    let orbit = t.orbits.iter().find(|o| o.focal_code == focal).expect("orbit");
                    out[f][orbit.id - 1] += 1;
                }
            }
        }
    }
    out
}

/// Signed counts over all triads, matched against the pattern table by
/// position and sign multisets.
pub fn brute_signed(g: &SignedGraph) -> Vec<[u32; SIGNED_PATTERN_COUNT]> {
    let table = signed_pattern_table();
    let n = g.node_count();
    let mut out = vec![[0u32; SIGNED_PATTERN_COUNT]; n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for (f, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
                    let mut inc: Vec<i8> = [g.sign(f, x), g.sign(f, y)].iter().flatten().map(|s| s.value()).collect();
                    inc.sort_by(|p, q| q.cmp(p));
                    let opp = g.sign(x, y).map(|s| s.value());
                    let position = match (inc.len(), opp) {
                        (2, Some(_)) => SignedPosition::Triangle,
                        (2, None) => SignedPosition::PathMiddle,
                        (1, Some(_)) => SignedPosition::PathEnd,
                        _ => continue,
                    };
                    let opp = if position == SignedPosition::PathMiddle { None } else { opp };
                    let pat = table
                        .iter()
                        .find(|p| p.position == position && p.incident == inc && p.opposite == opp)
                        .expect("signed pattern");
                    out[f][pat.id - 1] += 1;
                }
            }
        }
    }
    out
}

/// Complete-link merge heights and merged member sets, by exhaustive search
/// over all cluster pairs at every step.
pub fn naive_complete_link(points: &[Vec<f64>]) -> Vec<(f64, Vec<usize>)> {
    let d = |i: usize, j: usize| -> f64 { points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum() };
    let mut clusters: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for p in 0..clusters.len() {
            for q in p + 1..clusters.len() {
                let mut m: f64 = 0.0;
                for &i in &clusters[p] {
                    for &j in &clusters[q] {
                        m = m.max(d(i, j));
                    }
                }
                if m < best.0 {
                    best = (m, p, q);
                }
            }
        }
        let (h, p, q) = best;
        let merged_q = clusters.remove(q);
        clusters[p].extend(merged_q);
        clusters[p].sort_unstable();
        out.push((h, clusters[p].clone()));
    }
    out
}
