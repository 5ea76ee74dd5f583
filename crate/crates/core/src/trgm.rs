//! Triadic random graphs: one pattern distribution shared by every Steiner
//! triple of an STS.

use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rng::{self, Rng};
use crate::stats::{cross_correlate, CorrelationMatrix};
use crate::sts::{is_admissible, nearest_admissible, sts_construct};
use crate::triads::{permute_code, table, CONNECTED_COUNT, PATTERN_COUNT, PERMUTATIONS, SLOTS};

/// Probability of each pattern (index id - 1) on a Steiner triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PatternDistribution {
    p: [f64; PATTERN_COUNT],
}

impl PatternDistribution {
    pub fn new(p: [f64; PATTERN_COUNT]) -> Result<Self> {
        if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite entry in {p:?}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(PatternDistribution { p })
    }

    /// Scales nonnegative weights to sum 1.
    pub fn normalized(w: [f64; PATTERN_COUNT]) -> Result<Self> {
        if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidDistribution(format!("negative or non-finite weight in {w:?}")));
        }
        let sum: f64 = w.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("all weights are zero".into()));
        }
        let mut p = w.map(|x| x / sum);
        // push the rounding residue onto the largest entry
        let imax = (0..PATTERN_COUNT).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        p[imax] += 1.0 - p.iter().sum::<f64>();
        PatternDistribution::new(p)
    }

    /// All mass on pattern `id`.
    pub fn single(id: usize) -> Self {
        let mut p = [0.0; PATTERN_COUNT];
        p[id - 1] = 1.0;
        PatternDistribution { p }
    }

    pub fn probabilities(&self) -> &[f64; PATTERN_COUNT] {
        &self.p
    }

    /// Probability of pattern `id` (1..=16).
    pub fn get(&self, id: usize) -> f64 {
        self.p[id - 1]
    }
}

impl TryFrom<Vec<f64>> for PatternDistribution {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        let p: [f64; PATTERN_COUNT] = v
            .try_into()
            .map_err(|v: Vec<f64>| Error::InvalidDistribution(format!("expected 16 entries, got {}", v.len())))?;
        PatternDistribution::new(p)
    }
}

impl From<PatternDistribution> for Vec<f64> {
    fn from(d: PatternDistribution) -> Vec<f64> {
        d.p.to_vec()
    }
}

/// Exact number of Steiner triples carrying each pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternCounts {
    pub order: usize,
    pub counts: [u64; PATTERN_COUNT],
}

/// Number of triples of an STS of order n.
pub fn triple_count(n: usize) -> u64 {
    (n * n.saturating_sub(1) / 6) as u64
}

impl PatternCounts {
    pub fn new(order: usize, counts: [u64; PATTERN_COUNT]) -> Result<Self> {
        let got: u64 = counts.iter().sum();
        let expected = triple_count(order);
        if got != expected {
            return Err(Error::CountsMismatch { got, expected });
        }
        Ok(PatternCounts { order, counts })
    }

    /// Counts divided by the number of triples.
    pub fn distribution(&self) -> PatternDistribution {
        let total = triple_count(self.order) as f64;
        PatternDistribution::normalized(self.counts.map(|c| c as f64 / total)).expect("counts sum to a positive total")
    }

    /// Arcs of every graph sampled from these counts.
    pub fn arc_count(&self) -> u64 {
        let t = table();
        self.counts.iter().zip(&t.patterns).map(|(&c, p)| c * p.arcs as u64).sum()
    }
}

/// Either sampling mode of the model.
#[derive(Clone, Debug)]
pub enum TrgmSpec {
    /// Pattern of each triple drawn independently.
    Distribution(PatternDistribution),
    /// Multiset of patterns fixed, assigned by a random permutation.
    Counts(PatternCounts),
}

/// Counts vectors used for the order-49 FFL and loop ensembles.
pub mod fixtures {
    use super::PATTERN_COUNT;

    /// FFL series, ids 20 to 24 (arcs 98, 98, 123, 147, 172).
    pub const FFL_SERIES: [(u32, [u64; PATTERN_COUNT]); 5] = [
        (20, [357, 2, 0, 1, 1, 0, 1, 30, 0, 0, 0, 0, 0, 0, 0, 0]),
        (21, [358, 2, 0, 0, 0, 0, 0, 32, 0, 0, 0, 0, 0, 0, 0, 0]),
        (22, [351, 0, 0, 0, 0, 0, 0, 41, 0, 0, 0, 0, 0, 0, 0, 0]),
        (23, [343, 0, 0, 0, 0, 0, 0, 49, 0, 0, 0, 0, 0, 0, 0, 0]),
        (24, [334, 1, 0, 0, 0, 0, 0, 57, 0, 0, 0, 0, 0, 0, 0, 0]),
    ];

    /// Loop ensemble id 25 (98 arcs).
    pub const LOOP_25: [u64; PATTERN_COUNT] = [359, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 32, 0, 0, 0, 0];

    pub fn ffl(id: u32) -> Option<[u64; PATTERN_COUNT]> {
        FFL_SERIES.iter().find(|(i, _)| *i == id).map(|(_, c)| *c)
    }
}

/// Pattern distribution of three nodes in a graph whose arcs are independent
/// with probability p.
pub fn er_distribution(p: f64) -> Result<PatternDistribution> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidDistribution(format!("arc probability {p} outside [0, 1]")));
    }
    let t = table();
    let mut out = [0.0; PATTERN_COUNT];
    for (o, info) in out.iter_mut().zip(&t.patterns) {
        let a = info.arcs as i32;
        *o = info.class_size as f64 * p.powi(a) * (1.0 - p).powi(6 - a);
    }
    PatternDistribution::normalized(out)
}

/// Expected arc density of a graph drawn from `d`.
pub fn expected_density(d: &PatternDistribution) -> f64 {
    d.p.iter().zip(&table().patterns).map(|(p, info)| p * info.arcs as f64).sum::<f64>() / 6.0
}

/// Reusable sampler over one Steiner triple system.
#[derive(Clone, Debug)]
pub struct TrgmSampler {
    order: usize,
    triples: Vec<[usize; 3]>,
}

impl TrgmSampler {
    pub fn new(order: usize) -> Result<Self> {
        let sts = sts_construct(order)?;
        Ok(TrgmSampler { order, triples: sts.zero_based().collect() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Draws one graph.
    pub fn sample(&self, spec: &TrgmSpec, rng: &mut Rng) -> Result<DirectedGraph> {
        let patterns: Vec<usize> = match spec {
            TrgmSpec::Distribution(d) => {
                let w = WeightedIndex::new(d.p).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                (0..self.triples.len()).map(|_| w.sample(rng) + 1).collect()
            }
            TrgmSpec::Counts(c) => {
                if c.order != self.order {
                    return Err(Error::CountsMismatch { got: triple_count(c.order), expected: triple_count(self.order) });
                }
                let mut v = Vec::with_capacity(self.triples.len());
                for (i, &k) in c.counts.iter().enumerate() {
                    v.extend(std::iter::repeat_n(i + 1, k as usize));
                }
                v.shuffle(rng);
                v
            }
        };
        let t = table();
        let mut g = DirectedGraph::new(self.order);
        for (tri, &id) in self.triples.iter().zip(&patterns) {
            let perm = &PERMUTATIONS[rng.random_range(0..PERMUTATIONS.len())];
            let code = permute_code(t.pattern(id).representative, perm);
            for (k, &(x, y)) in SLOTS.iter().enumerate() {
                if code >> k & 1 == 1 {
                    g.add_arc(tri[x], tri[y]);
                }
            }
        }
        Ok(g)
    }
}

/// One triadic random graph of order `n`.
pub fn sample_trgm(n: usize, spec: &TrgmSpec, seed: u64) -> Result<DirectedGraph> {
    TrgmSampler::new(n)?.sample(spec, &mut rng::from_seed(seed))
}

/// Composition of n(n-1)/6 triples into 16 pattern counts, uniform over all
/// compositions (stars and bars).
pub fn uniform_simplex_counts(n: usize, seed: u64) -> Result<PatternCounts> {
    uniform_simplex_counts_with(n, &mut rng::from_seed(seed))
}

pub fn uniform_simplex_counts_with(n: usize, rng: &mut Rng) -> Result<PatternCounts> {
    if !is_admissible(n) {
        return Err(Error::Inadmissible { order: n, suggestion: nearest_admissible(n) });
    }
    let total = triple_count(n) as usize;
    let slots = total + PATTERN_COUNT - 1;
    let mut bars = rand::seq::index::sample(rng, slots, PATTERN_COUNT - 1).into_vec();
    bars.sort_unstable();
    let mut counts = [0u64; PATTERN_COUNT];
    let mut prev = 0;
    for (i, &b) in bars.iter().enumerate() {
        counts[i] = (b - prev) as u64;
        prev = b + 1;
    }
    counts[PATTERN_COUNT - 1] = (slots - prev) as u64;
    PatternCounts::new(n, counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeDirection {
    In,
    Out,
}

/// Probabilities that one Steiner triple gives a node exactly one or exactly
/// two arcs in `direction`.
pub fn triple_degree_probabilities(d: &PatternDistribution, direction: DegreeDirection) -> (f64, f64) {
    let (mut ps, mut pd) = (0.0, 0.0);
    for (p, info) in d.p.iter().zip(&table().patterns) {
        let code = info.representative;
        for pos in 0..3 {
            let deg = SLOTS
                .iter()
                .enumerate()
                .filter(|&(k, &(x, y))| {
                    let end = if direction == DegreeDirection::In { y } else { x };
                    end == pos && code >> k & 1 == 1
                })
                .count();
            match deg {
                1 => ps += p / 3.0,
                2 => pd += p / 3.0,
                _ => {}
            }
        }
    }
    (ps, pd)
}

fn ln_factorials(m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    for k in 1..=m {
        out[k] = out[k - 1] + (k as f64).ln();
    }
    out
}

/// `k * ln(p)` with 0 ln 0 = 0.
fn xlogy(k: usize, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.ln()
    }
}

/// Degree distribution over 0..n-1 at finite order n: each node sits in
/// (n-1)/2 triples, each contributing 0, 1 or 2 arcs.
pub fn degree_distribution(d: &PatternDistribution, n: usize, direction: DegreeDirection) -> Result<Vec<f64>> {
    if !is_admissible(n) {
        return Err(Error::Inadmissible { order: n, suggestion: nearest_admissible(n) });
    }
    let (ps, pd) = triple_degree_probabilities(d, direction);
    let p0 = (1.0 - ps - pd).max(0.0);
    let m = (n - 1) / 2;
    let lf = ln_factorials(m);
    let mut out = vec![0.0; n];
    for ns in 0..=m {
        for nd in 0..=(m - ns) {
            let r = m - ns - nd;
            let (a, b, c) = (xlogy(ns, ps), xlogy(nd, pd), xlogy(r, p0));
            if [a, b, c].iter().any(|v| *v == f64::NEG_INFINITY) {
                continue;
            }
            out[ns + 2 * nd] += (lf[m] - lf[ns] - lf[nd] - lf[r] + a + b + c).exp();
        }
    }
    Ok(out)
}

/// Large-n limit of [`degree_distribution`] for mean counts ⟨s⟩ and ⟨d⟩,
/// over degrees 0..=kmax.
pub fn degree_distribution_limit(mean_s: f64, mean_d: f64, kmax: usize) -> Vec<f64> {
    let lf = ln_factorials(kmax);
    (0..=kmax)
        .map(|k| {
            let mut sum = 0.0;
            for nd in 0..=k / 2 {
                let ns = k - 2 * nd;
                let (a, b) = (xlogy(ns, mean_s), xlogy(nd, mean_d));
                if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
                    continue;
                }
                sum += (a - lf[ns] + b - lf[nd]).exp();
            }
            sum * (-mean_s - mean_d).exp()
        })
        .collect()
}

/// 13 x 16 correlations between sampled Z scores (rows, connected patterns)
/// and the pattern distributions that produced them (columns).
pub fn p_to_z_correlation(samples: &[(PatternDistribution, [f64; CONNECTED_COUNT])]) -> Result<CorrelationMatrix> {
    let z: Vec<Vec<f64>> = samples.iter().map(|(_, z)| z.to_vec()).collect();
    let p: Vec<Vec<f64>> = samples.iter().map(|(d, _)| d.p.to_vec()).collect();
    cross_correlate(&z, &p, 10)
}

/// Dense 13 x 16 matrix with undefined entries set to 0.
pub fn correlation_values(c: &CorrelationMatrix) -> Vec<Vec<f64>> {
    c.r.iter().map(|row| row.iter().map(|v| v.unwrap_or(0.0)).collect()).collect()
}

fn check_shape(c: &[Vec<f64>]) -> Result<()> {
    if c.len() != CONNECTED_COUNT || c.iter().any(|r| r.len() != PATTERN_COUNT) {
        return Err(Error::UndefinedInput(format!("correlation matrix must be {CONNECTED_COUNT} x {PATTERN_COUNT}")));
    }
    Ok(())
}

fn unit(v: &DVector<f64>) -> Result<Vec<f64>> {
    let norm = v.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Infeasible("predicted profile is zero".into()));
    }
    Ok((v / norm).iter().copied().collect())
}

/// Significance profile predicted by the linear map `c` for distribution `d`.
pub fn predict_profile(c: &[Vec<f64>], d: &PatternDistribution) -> Result<Vec<f64>> {
    check_shape(c)?;
    let cm = DMatrix::from_fn(CONNECTED_COUNT, PATTERN_COUNT, |i, j| c[i][j]);
    unit(&(cm * DVector::from_row_slice(&d.p)))
}

#[derive(Clone, Debug, Serialize)]
pub struct Design {
    pub distribution: PatternDistribution,
    /// Profile the linear map predicts for `distribution`.
    pub predicted: Vec<f64>,
    /// Cosine similarity of `predicted` and the target.
    pub similarity: f64,
    /// Norm of c·P - SP for the unclipped least-squares P.
    pub residual: f64,
    /// Negative mass removed by clipping, relative to the total positive mass.
    pub clipped_fraction: f64,
}

/// Pattern distribution whose predicted significance profile approximates
/// `target`, via the pseudo-inverse of `c`. With `unidirectional_only`, only
/// patterns without mutual dyads get mass.
pub fn design_distribution(target: &[f64], c: &[Vec<f64>], unidirectional_only: bool) -> Result<Design> {
    check_shape(c)?;
    if target.len() != CONNECTED_COUNT {
        return Err(Error::UndefinedInput(format!("target must have {CONNECTED_COUNT} entries")));
    }
    let norm = target.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::UndefinedInput(format!("target profile has norm {norm}, expected 1")));
    }
    let t = table();
    let cols: Vec<usize> =
        (0..PATTERN_COUNT).filter(|&j| !unidirectional_only || t.patterns[j].mutual_dyads == 0).collect();
    let sub = DMatrix::from_fn(CONNECTED_COUNT, cols.len(), |i, k| c[i][cols[k]]);
    let sp = DVector::from_column_slice(target);
    let pinv = sub.clone().pseudo_inverse(1e-10).map_err(|e| Error::Infeasible(e.to_string()))?;
    let raw = &pinv * &sp;
    let residual = (&sub * &raw - &sp).norm();

    let mut w = [0.0; PATTERN_COUNT];
    let (mut pos, mut neg) = (0.0, 0.0);
    for (k, &j) in cols.iter().enumerate() {
        if raw[k] > 0.0 {
            w[j] = raw[k];
            pos += raw[k];
        } else {
            neg -= raw[k];
        }
    }
    if pos <= 0.0 {
        return Err(Error::Infeasible("no positive component survives clipping".into()));
    }
    let distribution = PatternDistribution::normalized(w)?;
    let predicted = predict_profile(c, &distribution)?;
    let similarity = predicted.iter().zip(target).map(|(a, b)| a * b).sum();
    Ok(Design { distribution, predicted, similarity, residual, clipped_fraction: neg / pos })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_named_terms() {
        let p = 0.3f64;
        let d = er_distribution(p).unwrap();
        let q = 1.0 - p;
        assert!((d.get(1) - q.powi(6)).abs() < 1e-15);
        assert!((d.get(2) - 6.0 * p * q.powi(5)).abs() < 1e-15);
        assert!((d.get(3) - 3.0 * p * p * q.powi(4)).abs() < 1e-15);
        assert!((d.get(8) - 6.0 * p.powi(3) * q.powi(3)).abs() < 1e-15);
        assert!((d.get(12) - 2.0 * p.powi(3) * q.powi(3)).abs() < 1e-15);
        assert!((d.get(16) - p.powi(6)).abs() < 1e-15);
        assert_eq!(er_distribution(0.0).unwrap(), PatternDistribution::single(1));
        assert_eq!(er_distribution(1.0).unwrap(), PatternDistribution::single(16));
        assert!(er_distribution(1.5).is_err());
    }

    #[test]
    fn density_example() {
        // pattern 4 has two arcs, pattern 15 has five
        let mut w = [0.0; PATTERN_COUNT];
        w[3] = 0.6;
        w[14] = 0.4;
        let d = PatternDistribution::normalized(w).unwrap();
        assert!((expected_density(&d) - 3.2 / 6.0).abs() < 1e-12);
        assert_eq!(expected_density(&PatternDistribution::single(1)), 0.0);
    }

    #[test]
    fn distribution_validation() {
        let mut p = [0.0; PATTERN_COUNT];
        p[0] = 0.5;
        assert!(PatternDistribution::new(p).is_err());
        p[1] = -0.5;
        p[2] = 1.0;
        assert!(PatternDistribution::new(p).is_err());
        let back: PatternDistribution = serde_json::from_str(&serde_json::to_string(&er_distribution(0.2).unwrap()).unwrap()).unwrap();
        assert!((back.get(1) - 0.8f64.powi(6)).abs() < 1e-15);
    }

    #[test]
    fn fixture_arc_counts() {
        let expected = [98, 98, 123, 147, 172];
        for ((_, c), m) in fixtures::FFL_SERIES.iter().zip(expected) {
            assert_eq!(PatternCounts::new(49, *c).unwrap().arc_count(), m);
        }
        assert_eq!(PatternCounts::new(49, fixtures::LOOP_25).unwrap().arc_count(), 98);
    }

    #[test]
    fn counts_must_sum() {
        let mut c = [0; PATTERN_COUNT];
        c[0] = 10;
        assert!(matches!(PatternCounts::new(7, c), Err(Error::CountsMismatch { got: 10, expected: 7 })));
    }

    #[test]
    fn full_pattern_gives_complete_graph() {
        let g = sample_trgm(13, &TrgmSpec::Distribution(PatternDistribution::single(16)), 1).unwrap();
        assert_eq!(g.arc_count(), 13 * 12);
    }

    #[test]
    fn simplex_counts_sum() {
        for (n, seed) in [(7, 0), (49, 1), (63, 2)] {
            let c = uniform_simplex_counts(n, seed).unwrap();
            assert_eq!(c.counts.iter().sum::<u64>(), triple_count(n));
        }
        assert!(uniform_simplex_counts(8, 0).is_err());
    }

    #[test]
    fn degree_distribution_normalized() {
        let d = er_distribution(0.1).unwrap();
        for dir in [DegreeDirection::In, DegreeDirection::Out] {
            let pk = degree_distribution(&d, 49, dir).unwrap();
            assert_eq!(pk.len(), 49);
            assert!((pk.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn limit_without_doubles_is_poisson() {
        let pk = degree_distribution_limit(3.5, 0.0, 30);
        let mut term = (-3.5f64).exp();
        for (k, v) in pk.iter().enumerate() {
            if k > 0 {
                term *= 3.5 / k as f64;
            }
            assert!((v - term).abs() < 1e-14);
        }
    }
}
