//! Whole-graph triad Z scores and significance profiles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::randomizer;
use crate::stats::{cross_correlate, CorrelationMatrix, Moments, VarianceMode};
use crate::triads::{census, CONNECTED_COUNT};

/// How a Z entry was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZFlag {
    Ok,
    /// Ensemble spread is zero and the original equals the ensemble mean;
    /// reported as 0.
    DegenerateZero,
    /// Ensemble spread is zero but the original differs; reported as
    /// signed infinity and left out of significance profiles.
    DegenerateInfinite,
}

/// Z score with its flag.
pub fn z_score(original: f64, mean: f64, sigma: f64) -> (f64, ZFlag) {
    if sigma > 0.0 {
        return ((original - mean) / sigma, ZFlag::Ok);
    }
    // equal up to accumulation rounding
    if (original - mean).abs() <= 1e-9 * original.abs().max(1.0) {
        (0.0, ZFlag::DegenerateZero)
    } else {
        (f64::INFINITY.copysign(original - mean), ZFlag::DegenerateInfinite)
    }
}

/// Z scores of the 13 connected patterns (index id - 4).
#[derive(Clone, Debug, Serialize)]
pub struct ZProfile {
    pub counts: [u64; CONNECTED_COUNT],
    pub mean: [f64; CONNECTED_COUNT],
    pub sigma: [f64; CONNECTED_COUNT],
    pub z: [f64; CONNECTED_COUNT],
    pub flags: [ZFlag; CONNECTED_COUNT],
    pub instances: usize,
    pub variance_mode: VarianceMode,
}

fn connected_counts(g: &DirectedGraph) -> [u64; CONNECTED_COUNT] {
    let full = census(g, true);
    let mut out = [0; CONNECTED_COUNT];
    out.copy_from_slice(&full[3..]);
    out
}

impl ZProfile {
    /// Profile from an original census and per-instance ensemble censuses.
    pub fn from_counts(
        counts: [u64; CONNECTED_COUNT],
        ensemble: &[[u64; CONNECTED_COUNT]],
        mode: VarianceMode,
    ) -> Result<ZProfile> {
        let mut moments = Moments::new(CONNECTED_COUNT);
        for inst in ensemble {
            moments.push(inst.iter().map(|&c| c as f64));
        }
        ZProfile::from_moments(counts, &moments, mode)
    }

    pub fn from_moments(counts: [u64; CONNECTED_COUNT], moments: &Moments, mode: VarianceMode) -> Result<ZProfile> {
        if moments.count < 2 {
            return Err(Error::UndefinedInput(format!("need at least 2 instances, got {}", moments.count)));
        }
        let (m, s) = (moments.mean(), moments.std(mode));
        let mut p = ZProfile {
            counts,
            mean: [0.0; CONNECTED_COUNT],
            sigma: [0.0; CONNECTED_COUNT],
            z: [0.0; CONNECTED_COUNT],
            flags: [ZFlag::Ok; CONNECTED_COUNT],
            instances: moments.count,
            variance_mode: mode,
        };
        for i in 0..CONNECTED_COUNT {
            p.mean[i] = m[i];
            p.sigma[i] = s[i];
            (p.z[i], p.flags[i]) = z_score(counts[i] as f64, m[i], s[i]);
        }
        Ok(p)
    }

    /// Z entries with degenerate ones set to 0.
    pub fn finite_z(&self) -> [f64; CONNECTED_COUNT] {
        let mut out = self.z;
        for (v, f) in out.iter_mut().zip(&self.flags) {
            if *f != ZFlag::Ok {
                *v = 0.0;
            }
        }
        out
    }

    /// Z of pattern `id` (4..=16).
    pub fn z_of(&self, id: usize) -> f64 {
        self.z[id - 4]
    }
}

/// Z profile of `g` against `instances` degree-preserving randomizations.
pub fn z_profile(
    g: &DirectedGraph,
    instances: usize,
    steps_per_edge: f64,
    mode: VarianceMode,
    seed: u64,
) -> Result<ZProfile> {
    if instances < 2 {
        return Err(Error::UndefinedInput(format!("need at least 2 instances, got {instances}")));
    }
    let counts = connected_counts(g);
    let ensemble = randomizer::ensemble_map(g, instances, steps_per_edge, seed, connected_counts);
    ZProfile::from_counts(counts, &ensemble, mode)
}

/// Unit-norm version of `z`.
pub fn normalize_profile(z: &[f64]) -> Result<Vec<f64>> {
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::UndefinedInput("significance profile of an all-zero or non-finite Z vector".into()));
    }
    Ok(z.iter().map(|v| v / norm).collect())
}

/// Significance profile; degenerate entries count as 0.
pub fn significance_profile(p: &ZProfile) -> Result<Vec<f64>> {
    normalize_profile(&p.finite_z())
}

/// 13 x 13 Pearson matrix of Z scores across profiles, with t-test flags.
pub fn z_cross_correlation(profiles: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    if profiles.iter().any(|p| p.len() != CONNECTED_COUNT) {
        return Err(Error::UndefinedInput(format!("profiles must have {CONNECTED_COUNT} entries")));
    }
    cross_correlate(profiles, profiles, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_with_sample_variance() {
        let mut orig = [0; CONNECTED_COUNT];
        orig[8 - 4] = 5;
        let ensemble: Vec<[u64; CONNECTED_COUNT]> = [1, 1, 0, 0]
            .iter()
            .map(|&c| {
                let mut a = [0; CONNECTED_COUNT];
                a[8 - 4] = c;
                a
            })
            .collect();
        let p = ZProfile::from_counts(orig, &ensemble, VarianceMode::Sample).unwrap();
        assert!((p.z_of(8) - 4.5 / (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(p.flags[0], ZFlag::DegenerateZero);
        let pop = ZProfile::from_counts(orig, &ensemble, VarianceMode::Population).unwrap();
        assert!((pop.z_of(8) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_flags() {
        assert_eq!(z_score(0.0, 0.0, 0.0), (0.0, ZFlag::DegenerateZero));
        assert_eq!(z_score(3.0, 1.0, 0.0), (f64::INFINITY, ZFlag::DegenerateInfinite));
    }

    #[test]
    fn profile_normalization() {
        let mut z = vec![0.0; CONNECTED_COUNT];
        z[0] = 1.0;
        assert_eq!(normalize_profile(&z).unwrap(), z);
        let scaled: Vec<f64> = (0..CONNECTED_COUNT).map(|i| i as f64 - 6.0).collect();
        let a = normalize_profile(&scaled).unwrap();
        let b = normalize_profile(&scaled.iter().map(|v| 3.5 * v).collect::<Vec<_>>()).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-15));
        assert!(normalize_profile(&vec![0.0; CONNECTED_COUNT]).is_err());
    }

    #[test]
    fn too_few_instances() {
        let g = DirectedGraph::from_arcs(3, [(0, 1)]);
        assert!(z_profile(&g, 1, 1.0, VarianceMode::Population, 0).is_err());
    }
}
