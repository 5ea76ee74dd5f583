use std::collections::VecDeque;

use serde::Serialize;

use super::DirectedGraph;
use crate::error::{Error, Result};

/// Per-node (in, out) degrees.
pub fn degrees(g: &DirectedGraph) -> Vec<(usize, usize)> {
    (0..g.node_count()).map(|u| (g.in_degree(u), g.out_degree(u))).collect()
}

impl DirectedGraph {
    /// |E| / (N (N - 1)).
    pub fn density(&self) -> Result<f64> {
        let n = self.node_count();
        if n < 2 {
            return Err(Error::UndefinedInput(format!("density needs at least 2 nodes, got {n}")));
        }
        Ok(self.arc_count() as f64 / (n * (n - 1)) as f64)
    }
}

impl super::SignedGraph {
    /// 2|E| / (N (N - 1)).
    pub fn density(&self) -> Result<f64> {
        let n = self.node_count();
        if n < 2 {
            return Err(Error::UndefinedInput(format!("density needs at least 2 nodes, got {n}")));
        }
        Ok(2.0 * self.edge_count() as f64 / (n * (n - 1)) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentMode {
    Weak,
    Strong,
}

/// Node partition into weakly or strongly connected components. Each
/// component is sorted; components are ordered by their smallest node.
pub fn connected_components(g: &DirectedGraph, mode: ComponentMode) -> Vec<Vec<usize>> {
    let mut comps = match mode {
        ComponentMode::Weak => weak_components(g),
        ComponentMode::Strong => strong_components(g),
    };
    for c in &mut comps {
        c.sort_unstable();
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

fn weak_components(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &v in g.out_neighbors(u).iter().chain(g.in_neighbors(u)) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Iterative Tarjan.
fn strong_components(g: &DirectedGraph) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next_index = 0;
    // (node, position in its out-list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[u] == UNVISITED {
                index[u] = next_index;
                low[u] = next_index;
                next_index += 1;
                stack.push(u);
                on_stack[u] = true;
            }
            let outs = g.out_neighbors(u);
            if *pos < outs.len() {
                let v = outs[*pos];
                *pos += 1;
                if index[v] == UNVISITED {
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[u]);
            }
            if low[u] == index[u] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == u {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

/// Undirected neighbor sets of the symmetrized graph.
fn symmetrized(g: &DirectedGraph) -> Vec<Vec<usize>> {
    (0..g.node_count()).map(|u| g.neighbors(u)).collect()
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Local clustering of the symmetrized graph; nodes of degree < 2 get 0.
pub fn local_clustering(g: &DirectedGraph) -> Vec<f64> {
    let nb = symmetrized(g);
    nb.iter()
        .enumerate()
        .map(|(u, ns)| {
            let k = ns.len();
            if k < 2 {
                return 0.0;
            }
            // each neighbor-neighbor link is seen twice
            let links: usize = ns.iter().map(|&v| sorted_intersection_len(ns, &nb[v])).sum();
            let _ = u;
            links as f64 / (k * (k - 1)) as f64
        })
        .collect()
}

pub fn average_clustering(g: &DirectedGraph) -> f64 {
    let c = local_clustering(g);
    if c.is_empty() {
        return 0.0;
    }
    c.iter().sum::<f64>() / c.len() as f64
}

/// 6 x triangles / sum_i k_i (k_i - 1) on the symmetrized graph; 0 when no
/// node has two neighbors.
pub fn global_clustering(g: &DirectedGraph) -> f64 {
    let nb = symmetrized(g);
    let mut closed = 0usize; // = 6 x triangles
    let mut wedges = 0usize;
    for ns in &nb {
        let k = ns.len();
        wedges += k * k.saturating_sub(1);
        closed += ns.iter().map(|&v| sorted_intersection_len(ns, &nb[v])).sum::<usize>();
    }
    if wedges == 0 {
        0.0
    } else {
        closed as f64 / wedges as f64
    }
}

/// Directed shortest-path summary over ordered reachable pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathStats {
    pub avg_path_length: Option<f64>,
    pub diameter: Option<usize>,
    pub reachable_pairs: usize,
    pub unreachable_pairs: usize,
}

fn bfs_distances(g: &DirectedGraph, source: usize, dist: &mut [usize], queue: &mut VecDeque<usize>) {
    dist.fill(usize::MAX);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.out_neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
}

pub fn shortest_path_stats(g: &DirectedGraph) -> PathStats {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let (mut total, mut reachable, mut unreachable, mut diameter) = (0usize, 0usize, 0usize, 0usize);
    for s in 0..n {
        bfs_distances(g, s, &mut dist, &mut queue);
        for (t, &d) in dist.iter().enumerate() {
            if t == s {
                continue;
            }
            if d == usize::MAX {
                unreachable += 1;
            } else {
                reachable += 1;
                total += d;
                diameter = diameter.max(d);
            }
        }
    }
    PathStats {
        avg_path_length: (reachable > 0).then(|| total as f64 / reachable as f64),
        diameter: (reachable > 0).then_some(diameter),
        reachable_pairs: reachable,
        unreachable_pairs: unreachable,
    }
}

/// Brandes betweenness with fractional geodesic counting; endpoints excluded.
pub fn betweenness(g: &DirectedGraph) -> Vec<f64> {
    let n = g.node_count();
    let mut bc = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        delta.fill(0.0);
        preds.iter_mut().for_each(Vec::clear);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g.out_neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
        for &w in order.iter().rev() {
            for &u in &preds[w] {
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    bc
}

const PAGERANK_MAX_ITER: usize = 100_000;

/// Power iteration for p = d T^T p + (1 - d)/N, with the mass of
/// out-degree-zero nodes spread uniformly.
pub fn pagerank(g: &DirectedGraph, damping: f64, tol: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::UndefinedInput(format!("damping {damping} outside [0, 1]")));
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let uniform = 1.0 / n as f64;
    let mut p = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..PAGERANK_MAX_ITER {
        let dangling: f64 = (0..n).filter(|&u| g.out_degree(u) == 0).map(|u| p[u]).sum();
        let base = (1.0 - damping) * uniform + damping * dangling * uniform;
        next.fill(base);
        for u in 0..n {
            let k = g.out_degree(u);
            if k > 0 {
                let share = damping * p[u] / k as f64;
                for &v in g.out_neighbors(u) {
                    next[v] += share;
                }
            }
        }
        residual = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut p, &mut next);
        if residual < tol {
            return Ok(p);
        }
    }
    Err(Error::Convergence { iterations: PAGERANK_MAX_ITER, residual })
}

/// Bundle of the whole-graph measures emitted by `triadnet stats`.
#[derive(Clone, Debug, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub arcs: usize,
    pub density: Option<f64>,
    pub weak_components: Vec<Vec<usize>>,
    pub strong_components: Vec<Vec<usize>>,
    pub avg_path_length: Option<f64>,
    pub diameter: Option<usize>,
    pub unreachable_pairs: usize,
    pub average_clustering: f64,
    pub global_clustering: f64,
}

pub fn graph_stats(g: &DirectedGraph) -> GraphStats {
    let paths = shortest_path_stats(g);
    GraphStats {
        nodes: g.node_count(),
        arcs: g.arc_count(),
        density: g.density().ok(),
        weak_components: connected_components(g, ComponentMode::Weak),
        strong_components: connected_components(g, ComponentMode::Strong),
        avg_path_length: paths.avg_path_length,
        diameter: paths.diameter,
        unreachable_pairs: paths.unreachable_pairs,
        average_clustering: average_clustering(g),
        global_clustering: global_clustering(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SignedGraph;

    /// Arcs 1->2, 1->3, 1->4, 3->1, 4->3 (1-based) of the four-node example.
    fn four_node_example() -> DirectedGraph {
        DirectedGraph::from_arcs(4, [(0, 1), (0, 2), (0, 3), (2, 0), (3, 2)])
    }

    fn complete(n: usize) -> DirectedGraph {
        DirectedGraph::from_arcs(n, (0..n).flat_map(|u| (0..n).map(move |v| (u, v))))
    }

    #[test]
    fn degrees_of_four_node_example() {
        let outs: Vec<usize> = degrees(&four_node_example()).iter().map(|d| d.1).collect();
        assert_eq!(outs, vec![3, 0, 1, 1]);
        assert!(degrees(&DirectedGraph::new(3)).iter().all(|&d| d == (0, 0)));
        assert!(degrees(&complete(5)).iter().all(|&d| d == (4, 4)));
    }

    #[test]
    fn density_cases() {
        assert!((four_node_example().density().unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(complete(6).density().unwrap(), 1.0);
        assert_eq!(DirectedGraph::new(10).density().unwrap(), 0.0);
        assert!(DirectedGraph::new(1).density().is_err());
        let s = SignedGraph::from_edges(3, [(0, 1, crate::graph::Sign::Negative)]);
        assert!((s.density().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_graph_components_are_singletons() {
        let g = DirectedGraph::new(3);
        let singletons = vec![vec![0], vec![1], vec![2]];
        assert_eq!(connected_components(&g, ComponentMode::Weak), singletons);
        assert_eq!(connected_components(&g, ComponentMode::Strong), singletons);
    }

    #[test]
    fn triangle_and_star_clustering() {
        let tri = DirectedGraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        assert_eq!(local_clustering(&tri), vec![1.0; 3]);
        assert_eq!(global_clustering(&tri), 1.0);
        let star = DirectedGraph::from_arcs(4, [(0, 1), (0, 2), (3, 0)]);
        assert_eq!(global_clustering(&star), 0.0);
        assert_eq!(local_clustering(&star)[1], 0.0);
    }

    #[test]
    fn directed_three_cycle_paths() {
        let g = DirectedGraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]);
        let s = shortest_path_stats(&g);
        assert_eq!(s.avg_path_length, Some(1.5));
        assert_eq!(s.diameter, Some(2));
        assert_eq!(s.unreachable_pairs, 0);
    }

    #[test]
    fn isolated_pair_has_undefined_path_length() {
        let s = shortest_path_stats(&DirectedGraph::new(2));
        assert_eq!(s.avg_path_length, None);
        assert_eq!(s.unreachable_pairs, 2);
    }

    #[test]
    fn complete_graph_betweenness_is_zero() {
        assert!(betweenness(&complete(6)).iter().all(|&b| b == 0.0));
    }

    #[test]
    fn pagerank_special_cases() {
        let g = four_node_example();
        let p = pagerank(&g, 0.0, 1e-12).unwrap();
        assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        let pair = DirectedGraph::from_arcs(2, [(0, 1), (1, 0)]);
        let p = pagerank(&pair, 0.85, 1e-12).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let p = pagerank(&g, 0.85, 1e-12).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(pagerank(&g, 1.5, 1e-9).is_err());
    }
}
