use rand::seq::SliceRandom;
use serde::Serialize;

use super::spectral::{spectral_gap, Normalization};
use crate::error::{Error, Result};
use crate::graph::{betweenness, pagerank, DirectedGraph};
use crate::motifs::{z_profile, ZProfile};
use crate::nospam::{map_profiles, nospam_directed};
use crate::rng;
use crate::stats::VarianceMode;

/// Order in which nodes are removed; higher scores go first.
#[derive(Clone, Debug)]
pub enum Ranking {
    /// Precomputed scores; None ranks last.
    Scores(Vec<Option<f64>>),
    /// Mapped node-specific score of a connected pattern, from a NoSPaM run
    /// on the current graph.
    Pattern { pattern: usize, instances: usize, steps_per_edge: f64, seed: u64 },
    /// In- plus out-degree.
    Degree,
    PageRank,
    Betweenness,
    Random { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recompute {
    Once,
    EachStep,
}

#[derive(Clone, Debug, Serialize)]
pub struct RemovalStep {
    pub step: usize,
    /// Node removed at this step (None for the intact graph).
    pub node: Option<usize>,
    /// Arcs of the original graph lost so far.
    pub edges_removed: usize,
    /// Nodes left after dropping those the normalization cannot handle.
    pub core_nodes: usize,
    pub delta: f64,
}

fn scores(g: &DirectedGraph, ranking: &Ranking) -> Result<Vec<Option<f64>>> {
    let n = g.node_count();
    Ok(match ranking {
        Ranking::Scores(s) => {
            if s.len() != n {
                return Err(Error::UndefinedInput(format!("{} scores for {n} nodes", s.len())));
            }
            s.clone()
        }
        Ranking::Pattern { pattern, instances, steps_per_edge, seed } => {
            if !(4..=16).contains(pattern) {
                return Err(Error::UndefinedInput(format!("pattern {pattern} is not a connected pattern")));
            }
            let p = nospam_directed(g, *instances, *steps_per_edge, VarianceMode::Population, *seed)?;
            let m = map_profiles(&p)?;
            (0..n).map(|u| m.get(u, *pattern)).collect()
        }
        Ranking::Degree => (0..n).map(|u| Some((g.in_degree(u) + g.out_degree(u)) as f64)).collect(),
        Ranking::PageRank => pagerank(g, 0.85, 1e-12)?.into_iter().map(Some).collect(),
        Ranking::Betweenness => betweenness(g).into_iter().map(Some).collect(),
        Ranking::Random { seed } => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng::from_seed(*seed));
            let mut s = vec![None; n];
            for (rank, &u) in perm.iter().enumerate() {
                s[u] = Some((n - rank) as f64);
            }
            s
        }
    })
}

/// Nodes ordered by decreasing score, ties by id, undefined scores last.
fn order(scores: &[Option<f64>], skip: &[bool]) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..scores.len()).filter(|&u| !skip[u]).collect();
    ids.sort_by(|&a, &b| match (scores[a], scores[b]) {
        (Some(x), Some(y)) => y.total_cmp(&x).then(a.cmp(&b)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.cmp(&b),
    });
    ids
}

/// Spectral gap of the largest subgraph on which the normalization is
/// defined: nodes without arcs in the normalized direction are dropped
/// repeatedly. Returns None when fewer than two nodes survive.
fn core_gap(g: &DirectedGraph, removed: &[bool], normalization: Normalization) -> Result<Option<(usize, f64)>> {
    let mut keep: Vec<bool> = removed.iter().map(|r| !r).collect();
    loop {
        let (sub, ids) = g.induced_subgraph(&keep);
        if sub.node_count() < 2 {
            return Ok(None);
        }
        match spectral_gap(&sub, normalization) {
            Ok(s) => return Ok(Some((sub.node_count(), s.delta))),
            Err(Error::Normalization { nodes, .. }) => {
                for u in nodes {
                    keep[ids[u]] = false;
                }
            }
            Err(e) => return Err(e),
        }
    }
}

/// Removes up to `k_max` nodes in ranking order and records the spectral gap
/// after each removal. The series stops early once no normalizable core is
/// left.
pub fn removal_experiment(
    g: &DirectedGraph,
    ranking: &Ranking,
    k_max: usize,
    recompute: Recompute,
    normalization: Normalization,
) -> Result<Vec<RemovalStep>> {
    let n = g.node_count();
    let mut removed = vec![false; n];
    let mut current = g.clone();
    let mut out = Vec::new();
    let Some((core, delta)) = core_gap(g, &removed, normalization)? else {
        return Ok(out);
    };
    out.push(RemovalStep { step: 0, node: None, edges_removed: 0, core_nodes: core, delta });
    let mut queue = order(&scores(g, ranking)?, &removed);
    queue.reverse();
    let mut edges_removed = 0;
    for step in 1..=k_max.min(n) {
        if recompute == Recompute::EachStep && step > 1 {
            queue = order(&scores(&current, ranking)?, &removed);
            queue.reverse();
        }
        let Some(u) = queue.pop() else { break };
        removed[u] = true;
        edges_removed += current.isolate(u);
        match core_gap(g, &removed, normalization)? {
            Some((core, delta)) => out.push(RemovalStep { step, node: Some(u), edges_removed, core_nodes: core, delta }),
            None => break,
        }
    }
    Ok(out)
}

/// Whole-graph Z profiles after removing the top-ranked nodes in batches of
/// `batch`, `batches` times (ranking computed once on the intact graph).
/// Entry 0 is the intact graph; removed nodes stay as isolated nodes.
#[allow(clippy::too_many_arguments)]
pub fn z_profile_under_removal(
    g: &DirectedGraph,
    ranking: &Ranking,
    batch: usize,
    batches: usize,
    instances: usize,
    steps_per_edge: f64,
    mode: VarianceMode,
    seed: u64,
) -> Result<Vec<(usize, ZProfile)>> {
    let queue = order(&scores(g, ranking)?, &vec![false; g.node_count()]);
    let mut current = g.clone();
    let mut out = vec![(0, z_profile(&current, instances, steps_per_edge, mode, seed)?)];
    for b in 1..=batches {
        let upto = (b * batch).min(queue.len());
        for &u in &queue[((b - 1) * batch).min(upto)..upto] {
            current.isolate(u);
        }
        out.push((upto, z_profile(&current, instances, steps_per_edge, mode, seed)?));
        if upto == queue.len() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_break_by_id_and_none_goes_last() {
        let s = vec![Some(1.0), None, Some(2.0), Some(1.0)];
        assert_eq!(order(&s, &[false; 4]), vec![2, 0, 3, 1]);
    }

    #[test]
    fn zero_removals_give_intact_gap() {
        let g = DirectedGraph::from_arcs(3, [(0, 1), (1, 2), (2, 0), (1, 0)]);
        let s = removal_experiment(&g, &Ranking::Degree, 0, Recompute::Once, Normalization::Row).unwrap();
        assert_eq!(s.len(), 1);
        let d = spectral_gap(&g, Normalization::Row).unwrap().delta;
        assert_eq!(s[0].delta, d);
    }
}
