//! Node-specific triad Z scores and the measures built on them.

mod cluster;

pub use cluster::{complete_link, squared_euclidean, Dendrogram, Merge};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, SignedGraph};
use crate::motifs::{z_score, ZFlag, ZProfile};
use crate::randomizer::{instance_rng, steps_for, DirectedSwitchChain, SignedSwitchChain};
use crate::stats::{mean, pearson, std_dev, Moments, VarianceMode};
use crate::triads::{
    node_specific_counts_and_census, signed_node_specific_counts, table, CONNECTED_COUNT, FFL, ORBIT_COUNT,
    SIGNED_PATTERN_COUNT,
};

/// Ensemble size used when none is given.
pub const DEFAULT_INSTANCES: usize = 1000;
pub const DEFAULT_STEPS_PER_EDGE: f64 = 100.0;

/// Per-node Z scores over 30 directed orbits or 13 signed patterns.
#[derive(Clone, Debug, Serialize)]
pub struct NodeProfiles {
    pub width: usize,
    pub counts: Vec<Vec<u32>>,
    pub mean: Vec<Vec<f64>>,
    pub sigma: Vec<Vec<f64>>,
    pub z: Vec<Vec<f64>>,
    pub flags: Vec<Vec<ZFlag>>,
    pub instances: usize,
    pub variance_mode: VarianceMode,
    /// Whole-graph profile from the same ensemble (directed only).
    pub whole: Option<ZProfile>,
}

impl NodeProfiles {
    pub fn node_count(&self) -> usize {
        self.z.len()
    }

    /// Z of node `u`, None where the ensemble spread is zero.
    pub fn defined(&self, u: usize) -> Vec<Option<f64>> {
        self.z[u].iter().zip(&self.flags[u]).map(|(&z, &f)| (f == ZFlag::Ok).then_some(z)).collect()
    }

    /// Z table with degenerate entries set to 0, for distance-based methods.
    pub fn finite_z(&self) -> Vec<Vec<f64>> {
        (0..self.node_count()).map(|u| self.defined(u).into_iter().map(|v| v.unwrap_or(0.0)).collect()).collect()
    }

    fn from_moments(counts: Vec<Vec<u32>>, m: &Moments, width: usize, mode: VarianceMode) -> NodeProfiles {
        let (means, sds) = (m.mean(), m.std(mode));
        let n = counts.len();
        let mut p = NodeProfiles {
            width,
            counts,
            mean: Vec::with_capacity(n),
            sigma: Vec::with_capacity(n),
            z: Vec::with_capacity(n),
            flags: Vec::with_capacity(n),
            instances: m.count,
            variance_mode: mode,
            whole: None,
        };
        for u in 0..n {
            let range = u * width..(u + 1) * width;
            let (mu, sd) = (&means[range.clone()], &sds[range]);
            let (z, f): (Vec<f64>, Vec<ZFlag>) =
                (0..width).map(|i| z_score(p.counts[u][i] as f64, mu[i], sd[i])).unzip();
            p.mean.push(mu.to_vec());
            p.sigma.push(sd.to_vec());
            p.z.push(z);
            p.flags.push(f);
        }
        p
    }
}

fn check_instances(instances: usize) -> Result<()> {
    if instances < 2 {
        return Err(Error::UndefinedInput(format!("need at least 2 instances, got {instances}")));
    }
    Ok(())
}

/// Node-specific Z scores of a directed graph over `instances` degree-
/// preserving randomizations. Instance i uses the same chain as instance i
/// of [`crate::motifs::z_profile`] with the same seed, so `whole` matches it.
pub fn nospam_directed(
    g: &DirectedGraph,
    instances: usize,
    steps_per_edge: f64,
    mode: VarianceMode,
    seed: u64,
) -> Result<NodeProfiles> {
    check_instances(instances)?;
    let n = g.node_count();
    let (orig, orig_census) = node_specific_counts_and_census(g);
    let base = DirectedSwitchChain::new(g);
    let steps = steps_for(base.link_count(), steps_per_edge);
    let width = n * ORBIT_COUNT;
    // counts are integers, so the f64 sums are exact in any merge order
    let (nodes, whole) = (0..instances)
        .into_par_iter()
        .fold(
            || (Moments::new(width), Moments::new(CONNECTED_COUNT)),
            |(mut nodes, mut whole), i| {
                let mut chain = base.clone();
                chain.run(steps, &mut instance_rng(seed, i));
                let (per_node, census) = node_specific_counts_and_census(chain.graph());
                nodes.push(per_node.iter().flat_map(|row| row.iter().map(|&c| c as f64)));
                whole.push(census[3..].iter().map(|&c| c as f64));
                (nodes, whole)
            },
        )
        .reduce(
            || (Moments::new(width), Moments::new(CONNECTED_COUNT)),
            |(a, b), (c, d)| (a.merge(&c), b.merge(&d)),
        );
    let counts: Vec<Vec<u32>> = orig.iter().map(|r| r.to_vec()).collect();
    let mut p = NodeProfiles::from_moments(counts, &nodes, ORBIT_COUNT, mode);
    let mut cc = [0u64; CONNECTED_COUNT];
    cc.copy_from_slice(&orig_census[3..]);
    p.whole = Some(ZProfile::from_moments(cc, &whole, mode)?);
    Ok(p)
}

/// Node-specific Z scores of a signed graph over sign-preserving
/// randomizations.
pub fn nospam_signed(
    g: &SignedGraph,
    instances: usize,
    steps_per_edge: f64,
    mode: VarianceMode,
    seed: u64,
) -> Result<NodeProfiles> {
    check_instances(instances)?;
    let n = g.node_count();
    let orig = signed_node_specific_counts(g);
    let base = SignedSwitchChain::new(g);
    let steps = steps_for(g.edge_count(), steps_per_edge);
    let width = n * SIGNED_PATTERN_COUNT;
    let moments = (0..instances)
        .into_par_iter()
        .fold(
            || Moments::new(width),
            |mut m, i| {
                let mut chain = base.clone();
                chain.run(steps, &mut instance_rng(seed, i));
                let per_node = signed_node_specific_counts(chain.graph());
                m.push(per_node.iter().flat_map(|row| row.iter().map(|&c| c as f64)));
                m
            },
        )
        .reduce(|| Moments::new(width), |a, b| a.merge(&b));
    let counts: Vec<Vec<u32>> = orig.iter().map(|r| r.to_vec()).collect();
    Ok(NodeProfiles::from_moments(counts, &moments, SIGNED_PATTERN_COUNT, mode))
}

/// Orbit means per connected pattern (index id - 4).
#[derive(Clone, Debug, Serialize)]
pub struct MappedProfiles {
    /// None when every orbit of the pattern is degenerate at that node.
    pub m: Vec<[Option<f64>; CONNECTED_COUNT]>,
    /// True where some, but not all, orbits were left out.
    pub reduced: Vec<[bool; CONNECTED_COUNT]>,
}

impl MappedProfiles {
    /// Value of pattern `id` (4..=16) at node `u`.
    pub fn get(&self, u: usize, id: usize) -> Option<f64> {
        self.m[u][id - 4]
    }
}

/// Maps the 30 orbit Z scores of each node onto the 13 connected patterns.
pub fn map_profiles(p: &NodeProfiles) -> Result<MappedProfiles> {
    if p.width != ORBIT_COUNT {
        return Err(Error::UndefinedInput("mapping needs directed node profiles".into()));
    }
    let t = table();
    let mut out = MappedProfiles { m: Vec::new(), reduced: Vec::new() };
    for u in 0..p.node_count() {
        let z = p.defined(u);
        let mut row = [None; CONNECTED_COUNT];
        let mut reduced = [false; CONNECTED_COUNT];
        for id in 4..=16 {
            let orbits = &t.pattern(id).orbits;
            let vals: Vec<f64> = orbits.iter().filter_map(|&o| z[o - 1]).collect();
            if !vals.is_empty() {
                row[id - 4] = Some(mean(&vals));
            }
            reduced[id - 4] = !vals.is_empty() && vals.len() < orbits.len();
        }
        out.m.push(row);
        out.reduced.push(reduced);
    }
    Ok(out)
}

/// Pearson over the positions where both entries are defined.
pub fn masked_pearson(a: &[Option<f64>], b: &[Option<f64>]) -> Option<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = a.iter().zip(b).filter_map(|(p, q)| Some(((*p)?, (*q)?))).unzip();
    pearson(&x, &y)
}

#[derive(Clone, Debug, Serialize)]
pub struct Homogeneity {
    pub mean: f64,
    pub std: f64,
    /// Nodes whose correlation was defined.
    pub nodes: usize,
    pub excluded: usize,
}

/// Mean and spread over nodes of corr(M, Z) between the mapped node profile
/// and the whole-graph profile.
pub fn homogeneity(m: &MappedProfiles, whole: &ZProfile) -> Result<Homogeneity> {
    let z: Vec<Option<f64>> = whole.z.iter().zip(&whole.flags).map(|(&v, &f)| (f == ZFlag::Ok).then_some(v)).collect();
    let r: Vec<f64> = m.m.iter().filter_map(|row| masked_pearson(row, &z)).collect();
    if r.len() < 2 {
        return Err(Error::UndefinedInput(format!("homogeneity needs 2 nodes with defined correlation, got {}", r.len())));
    }
    Ok(Homogeneity { mean: mean(&r), std: std_dev(&r), nodes: r.len(), excluded: m.m.len() - r.len() })
}

/// Mean profile correlation over linked node pairs minus the mean over all
/// node pairs. `linked` lists unordered pairs; direction and repeats are
/// ignored.
pub fn homophily<I>(profiles: &[Vec<Option<f64>>], linked: I) -> Result<f64>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let n = profiles.len();
    let mut pairs: Vec<(usize, usize)> =
        linked.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let linked_r: Vec<f64> = pairs.iter().filter_map(|&(a, b)| masked_pearson(&profiles[a], &profiles[b])).collect();
    if linked_r.is_empty() {
        return Err(Error::UndefinedInput("no linked pair with defined correlation".into()));
    }
    let all: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|a| (a + 1..n).filter_map(move |b| masked_pearson(&profiles[a], &profiles[b])))
        .collect();
    Ok(mean(&linked_r) - mean(&all))
}

/// Homophily of a directed graph's node profiles; a pair is linked when an
/// arc runs either way.
pub fn homophily_directed(p: &NodeProfiles, g: &DirectedGraph) -> Result<f64> {
    let profiles: Vec<_> = (0..p.node_count()).map(|u| p.defined(u)).collect();
    homophily(&profiles, g.arcs())
}

pub fn homophily_signed(p: &NodeProfiles, g: &SignedGraph) -> Result<f64> {
    let profiles: Vec<_> = (0..p.node_count()).map(|u| p.defined(u)).collect();
    homophily(&profiles, g.edges().into_iter().map(|(a, b, _)| (a, b)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// (lower edge, count) per bin, ascending.
    pub bins: Vec<(f64, usize)>,
    pub nodes: usize,
    /// Nodes without a defined FFL value.
    pub undefined: usize,
    pub fraction_below_one: f64,
    pub max: f64,
    /// Up to ten (node, value) pairs with the largest values.
    pub top: Vec<(usize, f64)>,
}

/// Histogram of the mapped FFL score over nodes.
pub fn ffl_heterogeneity_histogram(m: &MappedProfiles, bin_width: f64) -> Result<Histogram> {
    if !(bin_width > 0.0) {
        return Err(Error::UndefinedInput("bin width must be positive".into()));
    }
    let vals: Vec<(usize, f64)> = m.m.iter().enumerate().filter_map(|(u, row)| Some((u, row[FFL - 4]?))).collect();
    let undefined = m.m.len() - vals.len();
    if vals.is_empty() {
        return Ok(Histogram {
            bin_width,
            bins: Vec::new(),
            nodes: 0,
            undefined,
            fraction_below_one: 0.0,
            max: f64::NAN,
            top: Vec::new(),
        });
    }
    let bin = |v: f64| (v / bin_width).floor() as i64;
    let lo = vals.iter().map(|&(_, v)| bin(v)).min().unwrap();
    let hi = vals.iter().map(|&(_, v)| bin(v)).max().unwrap();
    let mut counts = vec![0usize; (hi - lo + 1) as usize];
    for &(_, v) in &vals {
        counts[(bin(v) - lo) as usize] += 1;
    }
    let bins = counts.into_iter().enumerate().map(|(k, c)| ((lo + k as i64) as f64 * bin_width, c)).collect();
    let mut top = vals.clone();
    top.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    top.truncate(10);
    Ok(Histogram {
        bin_width,
        bins,
        nodes: vals.len(),
        undefined,
        fraction_below_one: vals.iter().filter(|(_, v)| v.abs() < 1.0).count() as f64 / vals.len() as f64,
        max: top[0].1,
        top,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign;

    #[test]
    fn lone_ffl_counts() {
        let g = DirectedGraph::from_arcs(6, [(0, 1), (0, 2), (1, 2)]);
        let p = nospam_directed(&g, 4, 5.0, VarianceMode::Population, 1).unwrap();
        let t = table();
        let ffl_orbits = &t.pattern(FFL).orbits;
        let mut used = Vec::new();
        for u in 0..3 {
            let nz: Vec<usize> = (0..ORBIT_COUNT).filter(|&o| p.counts[u][o] > 0 && ffl_orbits.contains(&(o + 1))).collect();
            assert_eq!(nz.len(), 1);
            used.push(nz[0]);
        }
        used.sort();
        used.dedup();
        assert_eq!(used.len(), 3);
        for u in 3..6 {
            assert!(ffl_orbits.iter().all(|&o| p.counts[u][o - 1] == 0));
        }
    }

    #[test]
    fn balanced_triangle_counts_agree() {
        let g = SignedGraph::from_edges(
            4,
            [(0, 1, Sign::Positive), (1, 2, Sign::Positive), (0, 2, Sign::Positive)],
        );
        let p = nospam_signed(&g, 3, 2.0, VarianceMode::Population, 0).unwrap();
        assert_eq!(p.counts[0], p.counts[1]);
        assert_eq!(p.counts[1], p.counts[2]);
        assert_eq!(p.counts[0].iter().sum::<u32>(), 1);
    }

    #[test]
    fn scaled_profiles_are_fully_homogeneous() {
        let z = ZProfile {
            counts: [0; CONNECTED_COUNT],
            mean: [0.0; CONNECTED_COUNT],
            sigma: [1.0; CONNECTED_COUNT],
            z: std::array::from_fn(|i| (i as f64 - 5.0).powi(3)),
            flags: [ZFlag::Ok; CONNECTED_COUNT],
            instances: 2,
            variance_mode: VarianceMode::Population,
        };
        let m = MappedProfiles {
            m: (1..5).map(|k| z.z.map(|v| Some(v * k as f64))).collect(),
            reduced: vec![[false; CONNECTED_COUNT]; 4],
        };
        let h = homogeneity(&m, &z).unwrap();
        assert!((h.mean - 1.0).abs() < 1e-12 && h.std < 1e-12);
    }

    #[test]
    fn homophily_of_identical_profiles_is_zero() {
        let row: Vec<Option<f64>> = (0..13).map(|i| Some((i * i) as f64)).collect();
        let profiles = vec![row; 6];
        assert!(homophily(&profiles, [(0, 1), (2, 3)]).unwrap().abs() < 1e-12);
        assert!(homophily(&profiles, []).is_err());
    }

    #[test]
    fn block_homophily_is_positive() {
        let a: Vec<Option<f64>> = [1.0, -1.0, 1.0, -1.0].map(Some).to_vec();
        let b: Vec<Option<f64>> = [1.0, 1.0, -1.0, -1.0].map(Some).to_vec();
        let profiles = vec![a.clone(), a.clone(), a, b.clone(), b.clone(), b];
        let h = homophily(&profiles, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert!(h > 0.0);
    }

    #[test]
    fn zero_profiles_fall_in_one_bin() {
        let m = MappedProfiles { m: vec![[Some(0.0); CONNECTED_COUNT]; 5], reduced: vec![[false; CONNECTED_COUNT]; 5] };
        let h = ffl_heterogeneity_histogram(&m, 0.5).unwrap();
        assert_eq!(h.bins, vec![(0.0, 5)]);
        assert_eq!(h.fraction_below_one, 1.0);
    }
}
