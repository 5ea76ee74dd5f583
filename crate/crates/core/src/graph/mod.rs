//! Directed and signed graph substrates plus classical measures.

mod er;
mod io;
mod measures;

pub use er::generate_er;
pub use io::{load_edge_list, load_signed_edge_list, LoadedGraph, LoadedSignedGraph};
pub use measures::{
    average_clustering, betweenness, connected_components, degrees, global_clustering,
    graph_stats, local_clustering, pagerank, shortest_path_stats, ComponentMode, GraphStats,
    PathStats,
};

use serde::{Deserialize, Serialize};

/// Simple directed graph on dense node ids `0..n`.
///
/// Adjacency lists are kept sorted, so arc lookup is a binary search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    arc_count: usize,
}

impl DirectedGraph {
    pub fn new(node_count: usize) -> Self {
        DirectedGraph {
            out_adj: vec![Vec::new(); node_count],
            in_adj: vec![Vec::new(); node_count],
            arc_count: 0,
        }
    }

    /// Builds a graph from arcs, silently dropping self-arcs and duplicates.
    pub fn from_arcs<I>(node_count: usize, arcs: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = DirectedGraph::new(node_count);
        for (u, v) in arcs {
            g.add_arc(u, v);
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Inserts `u -> v`. Returns false for self-arcs and arcs already present.
    ///
    /// Panics if either endpoint is out of range.
    pub fn add_arc(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.node_count() && v < self.node_count(), "node id out of range");
        if u == v {
            return false;
        }
        match self.out_adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.out_adj[u].insert(pos, v);
                let pos = self.in_adj[v].binary_search(&u).unwrap_err();
                self.in_adj[v].insert(pos, u);
                self.arc_count += 1;
                true
            }
        }
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> bool {
        match self.out_adj[u].binary_search(&v) {
            Ok(pos) => {
                self.out_adj[u].remove(pos);
                let pos = self.in_adj[v].binary_search(&u).expect("adjacency out of sync");
                self.in_adj[v].remove(pos);
                self.arc_count -= 1;
                true
            }
            Err(_) => false,
        }
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// True if the dyad {u, v} holds an arc in either direction.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        &self.in_adj[u]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_adj[u].len()
    }

    /// Sorted union of in- and out-neighbors.
    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let (a, b) = (&self.out_adj[u], &self.in_adj[u]);
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        merged
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Counts of (unidirectional, bidirectional) links; a mutual pair counts once.
    pub fn link_counts(&self) -> (usize, usize) {
        let mut bi = 0;
        for (u, v) in self.arcs() {
            if u < v && self.has_arc(v, u) {
                bi += 1;
            }
        }
        (self.arc_count - 2 * bi, bi)
    }

    /// Per-node (in, out, unidirectional-adjacent, bidirectional-adjacent) degrees.
    pub fn degree_signature(&self) -> Vec<[usize; 4]> {
        (0..self.node_count())
            .map(|u| {
                let bi = self.out_adj[u].iter().filter(|&&v| self.has_arc(v, u)).count();
                let uni = self.out_adj[u].len() + self.in_adj[u].len() - 2 * bi;
                [self.in_adj[u].len(), self.out_adj[u].len(), uni, bi]
            })
            .collect()
    }

    /// Graph on the kept nodes, relabeled densely in ascending order of old id.
    /// Returns the new graph and the old id of each new node.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (DirectedGraph, Vec<usize>) {
        let old_ids: Vec<usize> = (0..self.node_count()).filter(|&u| keep[u]).collect();
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &u) in old_ids.iter().enumerate() {
            new_id[u] = i;
        }
        let arcs = self
            .arcs()
            .filter(|&(u, v)| keep[u] && keep[v])
            .map(|(u, v)| (new_id[u], new_id[v]));
        (DirectedGraph::from_arcs(old_ids.len(), arcs), old_ids)
    }

    /// Removes every arc touching `u`; the node id stays valid.
    pub fn isolate(&mut self, u: usize) -> usize {
        let outs = std::mem::take(&mut self.out_adj[u]);
        let ins = std::mem::take(&mut self.in_adj[u]);
        for &v in &outs {
            let pos = self.in_adj[v].binary_search(&u).expect("adjacency out of sync");
            self.in_adj[v].remove(pos);
        }
        for &v in &ins {
            let pos = self.out_adj[v].binary_search(&u).expect("adjacency out of sync");
            self.out_adj[v].remove(pos);
        }
        let removed = outs.len() + ins.len();
        self.arc_count -= removed;
        removed
    }

    /// Image of the graph under `perm`, where node `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> DirectedGraph {
        DirectedGraph::from_arcs(self.node_count(), self.arcs().map(|(u, v)| (perm[u], perm[v])))
    }
}

/// Sign of an undirected edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// Simple undirected graph whose edges carry a sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedGraph {
    adj: Vec<Vec<(usize, Sign)>>,
    edge_count: usize,
}

impl SignedGraph {
    pub fn new(node_count: usize) -> Self {
        SignedGraph { adj: vec![Vec::new(); node_count], edge_count: 0 }
    }

    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut g = SignedGraph::new(node_count);
        for (u, v, s) in edges {
            g.add_edge(u, v, s);
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Inserts {u, v}. Self-edges and already-occupied pairs are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize, sign: Sign) -> bool {
        assert!(u < self.node_count() && v < self.node_count(), "node id out of range");
        if u == v {
            return false;
        }
        match self.adj[u].binary_search_by_key(&v, |&(w, _)| w) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, (v, sign));
                let pos = self.adj[v].binary_search_by_key(&u, |&(w, _)| w).unwrap_err();
                self.adj[v].insert(pos, (u, sign));
                self.edge_count += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Option<Sign> {
        let pos = self.adj[u].binary_search_by_key(&v, |&(w, _)| w).ok()?;
        let (_, sign) = self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search_by_key(&u, |&(w, _)| w).expect("adjacency out of sync");
        self.adj[v].remove(pos);
        self.edge_count -= 1;
        Some(sign)
    }

    #[inline]
    pub fn sign(&self, u: usize, v: usize) -> Option<Sign> {
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|pos| self.adj[u][pos].1)
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, Sign)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Sign)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, vs)| {
            vs.iter().filter(move |&&(v, _)| u < v).map(move |&(v, s)| (u, v, s))
        })
    }

    /// Per-node (positive, negative) degrees.
    pub fn sign_degrees(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .map(|vs| {
                let pos = vs.iter().filter(|&&(_, s)| s == Sign::Positive).count();
                (pos, vs.len() - pos)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sums_match_arc_count() {
        let g = DirectedGraph::from_arcs(4, [(0, 1), (0, 2), (0, 3), (2, 0), (3, 2), (3, 2), (1, 1)]);
        assert_eq!(g.arc_count(), 5);
        let ins: usize = (0..4).map(|u| g.in_degree(u)).sum();
        let outs: usize = (0..4).map(|u| g.out_degree(u)).sum();
        assert_eq!(ins, 5);
        assert_eq!(outs, 5);
        assert_eq!(g.link_counts(), (3, 1));
    }

    #[test]
    fn neighbors_merge_both_directions() {
        let g = DirectedGraph::from_arcs(5, [(2, 0), (2, 4), (1, 2), (4, 2)]);
        assert_eq!(g.neighbors(2), vec![0, 1, 4]);
    }

    #[test]
    fn isolate_drops_incident_arcs() {
        let mut g = DirectedGraph::from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 0)]);
        assert_eq!(g.isolate(1), 3);
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(2, 0)]);
    }

    #[test]
    fn signed_graph_rejects_duplicates() {
        let mut g = SignedGraph::new(3);
        assert!(g.add_edge(0, 1, Sign::Positive));
        assert!(!g.add_edge(1, 0, Sign::Negative));
        assert!(!g.add_edge(2, 2, Sign::Positive));
        assert_eq!(g.sign(1, 0), Some(Sign::Positive));
        assert_eq!(g.sign_degrees(), vec![(1, 0), (1, 0), (0, 0)]);
    }
}
