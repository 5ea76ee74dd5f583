//! Noisy linear oscillators coupled along arcs, the spectral gap of the
//! normalized coupling matrix, and node-removal experiments.

mod removal;
mod spectral;

pub use removal::{removal_experiment, z_profile_under_removal, Ranking, Recompute, RemovalStep};
pub use spectral::{coupling_for, spectral_gap, spectral_radius, Normalization, SpectralGap};

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rng::{self, Rng};

/// Parameters of one simulation. `b` is ignored by the sweeps, which set it
/// from the graph.
#[derive(Clone, Debug, Serialize)]
pub struct OscillatorParams {
    pub a: f64,
    pub omega: f64,
    pub b: f64,
    pub theta: f64,
    pub dt: f64,
    /// Steps discarded before averaging.
    pub transient: usize,
    /// Steps averaged over.
    pub steps: usize,
    /// Observables are accumulated every `stride` steps.
    pub stride: usize,
    pub seed: u64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams {
            a: 1.0,
            omega: 2.0 * PI,
            b: 0.0,
            theta: 0.0,
            dt: 0.01,
            transient: 2000,
            steps: 500_000,
            stride: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Observables {
    /// Mean of |x_j|^2 over nodes and time.
    pub output: f64,
    /// Mean over node pairs of |<x_j conj(x_k)>| / sqrt(<|x_j|^2><|x_k|^2>).
    pub correlation: f64,
}

const OVERFLOW: f64 = 1e12;

fn check(p: &OscillatorParams) -> Result<()> {
    if !(p.a > 0.0 && p.dt > 0.0 && p.steps >= 1 && p.stride >= 1) {
        return Err(Error::UndefinedInput(format!(
            "need a > 0, dt > 0, steps >= 1, stride >= 1 (got a = {}, dt = {}, steps = {}, stride = {})",
            p.a, p.dt, p.steps, p.stride
        )));
    }
    Ok(())
}

struct System<'a> {
    inputs: Vec<&'a [usize]>,
    lambda: Complex64,
    coupling: Complex64,
}

impl System<'_> {
    fn deriv(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (j, o) in out.iter_mut().enumerate() {
            let s: Complex64 = self.inputs[j].iter().map(|&k| x[k]).sum();
            *o = self.lambda * x[j] + self.coupling * s;
        }
    }
}

fn complex_normal(rng: &mut Rng, scale: f64) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * scale
}

/// Deterministic part by Heun's method, then additive complex noise with
/// standard deviation sqrt(dt) per component. Arc k -> j feeds x_k into j.
pub fn simulate(g: &DirectedGraph, p: &OscillatorParams) -> Result<Observables> {
    check(p)?;
    let n = g.node_count();
    let sys = System {
        inputs: (0..n).map(|j| g.in_neighbors(j)).collect(),
        lambda: Complex64::new(-p.a, p.omega),
        coupling: Complex64::from_polar(p.b, p.theta),
    };
    let mut rng = rng::from_seed(p.seed);
    // initial values with variance 2 (1 per component)
    let mut x: Vec<Complex64> = (0..n).map(|_| complex_normal(&mut rng, 1.0)).collect();
    let (mut k1, mut k2, mut tmp) = (vec![Complex64::default(); n], vec![Complex64::default(); n], vec![Complex64::default(); n]);
    let noise = p.dt.sqrt();
    let mut power = vec![0.0; n];
    let mut cross = vec![Complex64::default(); n * n.saturating_sub(1) / 2];
    let mut samples = 0usize;
    for step in 0..p.transient + p.steps {
        sys.deriv(&x, &mut k1);
        for j in 0..n {
            tmp[j] = x[j] + k1[j] * p.dt;
        }
        sys.deriv(&tmp, &mut k2);
        let mut largest: f64 = 0.0;
        for j in 0..n {
            x[j] += (k1[j] + k2[j]) * (0.5 * p.dt) + complex_normal(&mut rng, noise);
            largest = largest.max(x[j].norm_sqr());
        }
        if !(largest < OVERFLOW) {
            return Err(Error::Instability { theta: p.theta, coupling: p.b });
        }
        if step >= p.transient && (step - p.transient) % p.stride == 0 {
            samples += 1;
            let mut idx = 0;
            for j in 0..n {
                power[j] += x[j].norm_sqr();
                for k in j + 1..n {
                    cross[idx] += x[j] * x[k].conj();
                    idx += 1;
                }
            }
        }
    }
    let output = power.iter().sum::<f64>() / (n as f64 * samples as f64);
    let mut corr = 0.0;
    let mut idx = 0;
    for j in 0..n {
        for k in j + 1..n {
            corr += cross[idx].norm() / (power[j] * power[k]).sqrt();
            idx += 1;
        }
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let correlation = if pairs == 0 { 0.0 } else { corr / pairs as f64 };
    Ok(Observables { output, correlation })
}

/// `k` evenly spaced phases in [0, 2π).
pub fn theta_grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| 2.0 * PI * i as f64 / k as f64).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub theta: Vec<f64>,
    pub output: Vec<f64>,
    pub output_se: Vec<f64>,
    pub correlation: Vec<f64>,
    pub correlation_se: Vec<f64>,
    /// Runs averaged per phase.
    pub runs: usize,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Phase sweep averaged over `repeats` runs on each graph of `graphs`.
/// Each graph gets its own coupling from [`coupling_for`]. Every (graph,
/// repeat) pair has its own random stream, reused at each phase, so the
/// curves are smooth in θ and extrema are not blurred by sampling noise.
pub fn theta_sweep_graphs(
    graphs: &[DirectedGraph],
    base: &OscillatorParams,
    grid: &[f64],
    repeats: usize,
) -> Result<SweepResult> {
    if grid.is_empty() || graphs.is_empty() || repeats == 0 {
        return Err(Error::UndefinedInput("empty phase grid, graph list or repeat count".into()));
    }
    check(base)?;
    let couplings: Vec<f64> = graphs.iter().map(coupling_for).collect::<Result<_>>()?;
    let per_theta = graphs.len() * repeats;
    let cells: Vec<Observables> = (0..grid.len() * per_theta)
        .into_par_iter()
        .map(|cell| {
            let (t, rest) = (cell / per_theta, cell % per_theta);
            let gi = rest / repeats;
            // same stream for every phase
            let p = OscillatorParams {
                b: couplings[gi],
                theta: grid[t],
                seed: rng::derive_seed(base.seed, rest as u64),
                ..base.clone()
            };
            simulate(&graphs[gi], &p)
        })
        .collect::<Result<_>>()?;
    let mut out = SweepResult {
        theta: grid.to_vec(),
        output: Vec::new(),
        output_se: Vec::new(),
        correlation: Vec::new(),
        correlation_se: Vec::new(),
        runs: per_theta,
    };
    for chunk in cells.chunks(per_theta) {
        let (o, ose) = mean_se(&chunk.iter().map(|c| c.output).collect::<Vec<_>>());
        let (c, cse) = mean_se(&chunk.iter().map(|c| c.correlation).collect::<Vec<_>>());
        out.output.push(o);
        out.output_se.push(ose);
        out.correlation.push(c);
        out.correlation_se.push(cse);
    }
    Ok(out)
}

pub fn theta_sweep(g: &DirectedGraph, base: &OscillatorParams, grid: &[f64], repeats: usize) -> Result<SweepResult> {
    theta_sweep_graphs(std::slice::from_ref(g), base, grid, repeats)
}

/// Indices of strict local minima of a periodic sequence.
pub fn circular_minima(v: &[f64]) -> Vec<usize> {
    let n = v.len();
    (0..n).filter(|&i| v[i] < v[(i + n - 1) % n] && v[i] < v[(i + 1) % n]).collect()
}

/// Indices of strict local maxima of a periodic sequence.
pub fn circular_maxima(v: &[f64]) -> Vec<usize> {
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    circular_minima(&neg)
}

/// Grid index nearest to phase `theta` on a grid of `k` points.
pub fn nearest_grid_index(theta: f64, k: usize) -> usize {
    ((theta / (2.0 * PI) * k as f64).round() as usize) % k
}

/// Circular distance between grid indices.
pub fn grid_distance(i: usize, j: usize, k: usize) -> usize {
    let d = i.abs_diff(j) % k;
    d.min(k - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silent_decay_follows_heun_factor() {
        // one node, no noise: Heun multiplies by 1 + z + z^2/2 per step, whose
        // deviation from exp(z) is about |z|^3/6 per step
        let lambda = Complex64::new(-1.0, 2.0 * PI);
        let dt = 0.01;
        let z = lambda * dt;
        let factor = Complex64::new(1.0, 0.0) + z + z * z * 0.5;
        let rate = z.norm().powi(3) / 6.0 / dt;
        let mut x = Complex64::new(1.0, 0.0);
        let sys = System { inputs: vec![&[]], lambda, coupling: Complex64::default() };
        let (mut k1, mut k2) = ([Complex64::default()], [Complex64::default()]);
        for step in 1..=300 {
            sys.deriv(&[x], &mut k1);
            sys.deriv(&[x + k1[0] * dt], &mut k2);
            x += (k1[0] + k2[0]) * (0.5 * dt);
            assert!((x - factor.powi(step)).norm() < 1e-12);
            let t = step as f64 * dt;
            let exact = (lambda * t).exp();
            assert!((x - exact).norm() / exact.norm() < 1.05 * rate * t);
        }
        assert!(rate < 5e-3);
    }

    #[test]
    fn grid_helpers() {
        assert_eq!(theta_grid(4), vec![0.0, PI / 2.0, PI, 1.5 * PI]);
        assert_eq!(nearest_grid_index(PI, 64), 32);
        assert_eq!(nearest_grid_index(2.0 * PI - 0.01, 64), 0);
        assert_eq!(grid_distance(1, 63, 64), 2);
        assert_eq!(circular_minima(&[0.0, 1.0, 2.0, 1.0]), vec![0]);
        assert_eq!(circular_maxima(&[0.0, 1.0, 2.0, 1.0]), vec![2]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = DirectedGraph::new(2);
        let p = OscillatorParams { a: 0.0, ..Default::default() };
        assert!(simulate(&g, &p).is_err());
    }

    #[test]
    fn unstable_coupling_is_reported() {
        let g = DirectedGraph::from_arcs(2, [(0, 1), (1, 0)]);
        let p = OscillatorParams { b: 5.0, steps: 100_000, transient: 0, ..Default::default() };
        assert!(matches!(simulate(&g, &p), Err(Error::Instability { .. })));
    }
}
