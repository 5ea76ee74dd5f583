//! Complete-link agglomerative clustering (nearest-neighbour chain).

use serde::Serialize;

use crate::error::{Error, Result};

/// One agglomeration step. Leaves are 0..n, the cluster formed by merge k
/// is n + k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Dendrogram {
    pub leaves: usize,
    /// Ordered by non-decreasing distance.
    pub merges: Vec<Merge>,
}

pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Condensed upper-triangle distance matrix.
struct Condensed {
    n: usize,
    d: Vec<f64>,
}

impl Condensed {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.d[self.idx(i, j)]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.d[k] = v;
    }
}

/// Complete-link dendrogram of `points` under the squared Euclidean
/// distance.
pub fn complete_link(points: &[Vec<f64>]) -> Result<Dendrogram> {
    let n = points.len();
    if n < 2 {
        return Err(Error::UndefinedInput(format!("clustering needs at least 2 items, got {n}")));
    }
    let mut dm = Condensed { n, d: Vec::with_capacity(n * (n - 1) / 2) };
    for i in 0..n {
        for j in i + 1..n {
            dm.d.push(squared_euclidean(&points[i], &points[j]));
        }
    }

    // merges in slot terms; a merged cluster keeps the slot of its second member
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut raw: Vec<(usize, usize, f64)> = Vec::with_capacity(n - 1);
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    while raw.len() < n - 1 {
        if chain.is_empty() {
            chain.push(active.iter().position(|&a| a).unwrap());
        }
        loop {
            let a = *chain.last().unwrap();
            let prev = chain.len().checked_sub(2).map(|k| chain[k]);
            // nearest active neighbour, preferring the chain predecessor on ties
            let (mut best, mut best_d) = match prev {
                Some(p) => (p, dm.get(a, p)),
                None => (usize::MAX, f64::INFINITY),
            };
            for b in 0..n {
                if b != a && active[b] {
                    let d = dm.get(a, b);
                    if d < best_d {
                        best = b;
                        best_d = d;
                    }
                }
            }
            if Some(best) == prev {
                chain.pop();
                chain.pop();
                let (x, y) = (a.min(best), a.max(best));
                raw.push((x, y, best_d));
                active[x] = false;
                size[y] += size[x];
                for k in 0..n {
                    if active[k] && k != y {
                        let v = dm.get(x, k).max(dm.get(y, k));
                        dm.set(y, k, v);
                    }
                }
                break;
            }
            chain.push(best);
        }
    }

    // order by distance (stable, so chain order breaks ties) and relabel
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&p, &q| raw[p].2.total_cmp(&raw[q].2));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut label: Vec<usize> = (0..n).collect();
    let mut members = vec![1usize; n];
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merges = Vec::with_capacity(n - 1);
    for (k, &o) in order.iter().enumerate() {
        let (x, y, d) = raw[o];
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        let (la, lb) = (label[rx].min(label[ry]), label[rx].max(label[ry]));
        parent[rx] = ry;
        members[ry] += members[rx];
        label[ry] = n + k;
        merges.push(Merge { a: la, b: lb, distance: d, size: members[ry] });
    }
    Ok(Dendrogram { leaves: n, merges })
}

impl Dendrogram {
    fn assignment_after(&self, steps: usize) -> Vec<usize> {
        let n = self.leaves;
        let mut parent: Vec<usize> = (0..2 * n - 1).collect();
        for (k, m) in self.merges.iter().take(steps).enumerate() {
            parent[m.a] = n + k;
            parent[m.b] = n + k;
        }
        let root = |mut x: usize| {
            while parent[x] != x {
                x = parent[x];
            }
            x
        };
        // number clusters by first appearance
        let mut ids = std::collections::HashMap::new();
        (0..n)
            .map(|u| {
                let r = root(u);
                let next = ids.len();
                *ids.entry(r).or_insert(next)
            })
            .collect()
    }

    /// Cluster index of every leaf with `k` clusters.
    pub fn cut_count(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 || k > self.leaves {
            return Err(Error::UndefinedInput(format!("cluster count {k} outside 1..={}", self.leaves)));
        }
        Ok(self.assignment_after(self.leaves - k))
    }

    /// Cluster index of every leaf after all merges at distance <= `threshold`.
    pub fn cut_distance(&self, threshold: f64) -> Vec<usize> {
        let steps = self.merges.iter().take_while(|m| m.distance <= threshold).count();
        self.assignment_after(steps)
    }
}
