//! Degree-preserving switching chains for directed and signed graphs.
//!
//! Every step draws a first link uniformly (a mutual pair is one link), then
//! a second, distinct link of the same kind. Steps that end in a rejected or
//! impossible switch still count, which is what makes the chain's stationary
//! distribution uniform over the constrained ensemble.

use rand::Rng as _;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::graph::{DirectedGraph, Sign, SignedGraph};
use crate::rng::{self, Rng};

/// What a single chain step did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    PairSwitch,
    LoopSwitch,
    MutualSwitch,
    /// A switch was drawn but would have created an existing link.
    Rejected,
    /// The two links share a node and do not form a switchable loop.
    NotSwitchable,
    /// Fewer than two links of the drawn kind.
    Degenerate,
}

impl StepOutcome {
    pub fn accepted(self) -> bool {
        matches!(self, StepOutcome::PairSwitch | StepOutcome::LoopSwitch | StepOutcome::MutualSwitch)
    }
}

/// Second index drawn uniformly from `0..len` without `first`.
#[inline]
fn draw_other(rng: &mut Rng, len: usize, first: usize) -> usize {
    let k = rng.random_range(0..len - 1);
    if k >= first {
        k + 1
    } else {
        k
    }
}

/// Switching chain over a private copy of a directed graph.
#[derive(Clone, Debug)]
pub struct DirectedSwitchChain {
    g: DirectedGraph,
    uni: Vec<(usize, usize)>,
    /// Mutual pairs stored as (low, high).
    bi: Vec<(usize, usize)>,
    uni_pos: FxHashMap<(usize, usize), usize>,
}

impl DirectedSwitchChain {
    pub fn new(g: &DirectedGraph) -> Self {
        let mut uni = Vec::new();
        let mut bi = Vec::new();
        for (u, v) in g.arcs() {
            if g.has_arc(v, u) {
                if u < v {
                    bi.push((u, v));
                }
            } else {
                uni.push((u, v));
            }
        }
        let uni_pos = uni.iter().enumerate().map(|(i, &arc)| (arc, i)).collect();
        DirectedSwitchChain { g: g.clone(), uni, bi, uni_pos }
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.g
    }

    pub fn into_graph(self) -> DirectedGraph {
        self.g
    }

    /// Links in the chain's sense: unidirectional arcs plus mutual pairs.
    pub fn link_count(&self) -> usize {
        self.uni.len() + self.bi.len()
    }

    pub fn step(&mut self, rng: &mut Rng) -> StepOutcome {
        let m = self.link_count();
        if m == 0 {
            return StepOutcome::Degenerate;
        }
        let first = rng.random_range(0..m);
        if first < self.uni.len() {
            if self.uni.len() < 2 {
                return StepOutcome::Degenerate;
            }
            let second = draw_other(rng, self.uni.len(), first);
            self.uni_step(first, second)
        } else {
            let first = first - self.uni.len();
            if self.bi.len() < 2 {
                return StepOutcome::Degenerate;
            }
            let second = draw_other(rng, self.bi.len(), first);
            let cross = rng.random_bool(0.5);
            self.bi_step(first, second, cross)
        }
    }

    pub fn run(&mut self, steps: u64, rng: &mut Rng) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    fn replace_uni(&mut self, idx: usize, arc: (usize, usize)) {
        let old = self.uni[idx];
        self.uni_pos.remove(&old);
        self.g.remove_arc(old.0, old.1);
        self.uni[idx] = arc;
        self.uni_pos.insert(arc, idx);
    }

    /// Switch on unidirectional links `i` and `j` (ordered as drawn).
    pub fn uni_step(&mut self, i: usize, j: usize) -> StepOutcome {
        let (a, b) = self.uni[i];
        let (c, d) = self.uni[j];
        if a != c && a != d && b != c && b != d {
            if self.g.adjacent(a, d) || self.g.adjacent(c, b) {
                return StepOutcome::Rejected;
            }
            self.replace_uni(i, (a, d));
            self.replace_uni(j, (c, b));
            self.g.add_arc(a, d);
            self.g.add_arc(c, b);
            return StepOutcome::PairSwitch;
        }
        // a directed path x -> y -> z closed by a unidirectional z -> x
        let closing = if b == c && a != d {
            Some((d, a))
        } else if d == a && b != c {
            Some((b, c))
        } else {
            None
        };
        let Some(third) = closing else { return StepOutcome::NotSwitchable };
        let Some(&k) = self.uni_pos.get(&third) else { return StepOutcome::NotSwitchable };
        for idx in [i, j, k] {
            let (u, v) = self.uni[idx];
            self.replace_uni(idx, (v, u));
        }
        for idx in [i, j, k] {
            let (u, v) = self.uni[idx];
            self.g.add_arc(u, v);
        }
        StepOutcome::LoopSwitch
    }

    /// Switch on mutual pairs `i` and `j`: {a,b},{c,d} become {a,c},{b,d}
    /// when `cross`, else {a,d},{b,c}.
    pub fn bi_step(&mut self, i: usize, j: usize, cross: bool) -> StepOutcome {
        let (a, b) = self.bi[i];
        let (c, d) = self.bi[j];
        if a == c || a == d || b == c || b == d {
            return StepOutcome::NotSwitchable;
        }
        let (p, q) = if cross { ((a, c), (b, d)) } else { ((a, d), (b, c)) };
        if self.g.adjacent(p.0, p.1) || self.g.adjacent(q.0, q.1) {
            return StepOutcome::Rejected;
        }
        for (u, v) in [(a, b), (c, d)] {
            self.g.remove_arc(u, v);
            self.g.remove_arc(v, u);
        }
        for (u, v) in [p, q] {
            self.g.add_arc(u, v);
            self.g.add_arc(v, u);
        }
        self.bi[i] = (p.0.min(p.1), p.0.max(p.1));
        self.bi[j] = (q.0.min(q.1), q.0.max(q.1));
        StepOutcome::MutualSwitch
    }
}

/// Runs `steps` chain steps from `g` with the given generator.
pub fn randomize_directed_with(g: &DirectedGraph, steps: u64, rng: &mut Rng) -> DirectedGraph {
    let mut chain = DirectedSwitchChain::new(g);
    chain.run(steps, rng);
    chain.into_graph()
}

pub fn randomize_directed(g: &DirectedGraph, steps: u64, seed: u64) -> DirectedGraph {
    randomize_directed_with(g, steps, &mut rng::from_seed(seed))
}

/// Every graph one accepted switch away from `g` (both mutual-switch
/// variants included), without duplicates.
pub fn switch_neighbors(g: &DirectedGraph) -> Vec<DirectedGraph> {
    let base = DirectedSwitchChain::new(g);
    let mut out: Vec<DirectedGraph> = Vec::new();
    let mut push = |chain: DirectedSwitchChain| {
        let h = chain.into_graph();
        if !out.contains(&h) {
            out.push(h);
        }
    };
    for i in 0..base.uni.len() {
        for j in 0..base.uni.len() {
            if i != j {
                let mut c = base.clone();
                if c.uni_step(i, j).accepted() {
                    push(c);
                }
            }
        }
    }
    for i in 0..base.bi.len() {
        for j in 0..base.bi.len() {
            for cross in [false, true] {
                if i != j {
                    let mut c = base.clone();
                    if c.bi_step(i, j, cross).accepted() {
                        push(c);
                    }
                }
            }
        }
    }
    out
}

/// Switching chain over a private copy of a signed graph. Only same-sign
/// edges are switched, so per-node positive and negative degrees persist.
#[derive(Clone, Debug)]
pub struct SignedSwitchChain {
    g: SignedGraph,
    classes: [Vec<(usize, usize)>; 2],
}

impl SignedSwitchChain {
    pub fn new(g: &SignedGraph) -> Self {
        let mut classes = [Vec::new(), Vec::new()];
        for (u, v, s) in g.edges() {
            classes[(s == Sign::Negative) as usize].push((u, v));
        }
        SignedSwitchChain { g: g.clone(), classes }
    }

    pub fn graph(&self) -> &SignedGraph {
        &self.g
    }

    pub fn into_graph(self) -> SignedGraph {
        self.g
    }

    pub fn step(&mut self, rng: &mut Rng) -> StepOutcome {
        let m = self.classes[0].len() + self.classes[1].len();
        if m == 0 {
            return StepOutcome::Degenerate;
        }
        let mut first = rng.random_range(0..m);
        let class = if first < self.classes[0].len() {
            0
        } else {
            first -= self.classes[0].len();
            1
        };
        let len = self.classes[class].len();
        if len < 2 {
            return StepOutcome::Degenerate;
        }
        let second = draw_other(rng, len, first);
        let cross = rng.random_bool(0.5);
        self.pair_step(class, first, second, cross)
    }

    pub fn run(&mut self, steps: u64, rng: &mut Rng) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    fn pair_step(&mut self, class: usize, i: usize, j: usize, cross: bool) -> StepOutcome {
        let (a, b) = self.classes[class][i];
        let (c, d) = self.classes[class][j];
        if a == c || a == d || b == c || b == d {
            return StepOutcome::NotSwitchable;
        }
        let (p, q) = if cross { ((a, c), (b, d)) } else { ((a, d), (b, c)) };
        if self.g.sign(p.0, p.1).is_some() || self.g.sign(q.0, q.1).is_some() {
            return StepOutcome::Rejected;
        }
        let sign = self.g.remove_edge(a, b).expect("edge list out of sync");
        self.g.remove_edge(c, d);
        self.g.add_edge(p.0, p.1, sign);
        self.g.add_edge(q.0, q.1, sign);
        self.classes[class][i] = (p.0.min(p.1), p.0.max(p.1));
        self.classes[class][j] = (q.0.min(q.1), q.0.max(q.1));
        StepOutcome::PairSwitch
    }
}

pub fn randomize_signed_with(g: &SignedGraph, steps: u64, rng: &mut Rng) -> SignedGraph {
    let mut chain = SignedSwitchChain::new(g);
    chain.run(steps, rng);
    chain.into_graph()
}

pub fn randomize_signed(g: &SignedGraph, steps: u64, seed: u64) -> SignedGraph {
    randomize_signed_with(g, steps, &mut rng::from_seed(seed))
}

/// Chain length for `steps_per_edge` switches per link.
pub fn steps_for(links: usize, steps_per_edge: f64) -> u64 {
    (steps_per_edge * links as f64).ceil() as u64
}

/// Generator of ensemble instance `index`.
pub fn instance_rng(seed: u64, index: usize) -> Rng {
    rng::stream(seed, index as u64)
}

/// Applies `f` to `instances` independent randomizations of `g`, each an
/// own chain of `steps_for(links, steps_per_edge)` steps from `g`.
/// Results are ordered by instance index.
pub fn ensemble_map<T, F>(g: &DirectedGraph, instances: usize, steps_per_edge: f64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&DirectedGraph) -> T + Sync,
{
    let base = DirectedSwitchChain::new(g);
    let steps = steps_for(base.link_count(), steps_per_edge);
    (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut chain = base.clone();
            chain.run(steps, &mut instance_rng(seed, i));
            f(chain.graph())
        })
        .collect()
}

/// Randomized copies of `g`; see [`ensemble_map`].
pub fn ensemble(g: &DirectedGraph, instances: usize, steps_per_edge: f64, seed: u64) -> Vec<DirectedGraph> {
    ensemble_map(g, instances, steps_per_edge, seed, DirectedGraph::clone)
}

/// Signed counterpart of [`ensemble_map`]; steps scale with the edge count.
pub fn signed_ensemble_map<T, F>(g: &SignedGraph, instances: usize, steps_per_edge: f64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&SignedGraph) -> T + Sync,
{
    let base = SignedSwitchChain::new(g);
    let steps = steps_for(g.edge_count(), steps_per_edge);
    (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut chain = base.clone();
            chain.run(steps, &mut instance_rng(seed, i));
            f(chain.graph())
        })
        .collect()
}
