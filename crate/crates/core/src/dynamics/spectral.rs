use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Which sums of the adjacency matrix are scaled to one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Each row (out-arcs of a node) sums to one.
    #[default]
    Row,
    /// Each column (in-arcs of a node) sums to one.
    Column,
}

impl Normalization {
    fn name(self) -> &'static str {
        match self {
            Normalization::Row => "row",
            Normalization::Column => "column",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectralGap {
    /// Leading eigenvalue (1 up to rounding).
    pub gamma1: f64,
    /// Largest magnitude among the remaining eigenvalues.
    pub second: f64,
    pub delta: f64,
}

fn adjacency(g: &DirectedGraph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.arcs() {
        a[(u, v)] = 1.0;
    }
    a
}

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues of `m`. The QR iteration can stall on cyclic permutation
/// matrices, whose eigenvalues all share one modulus; a diagonal shift
/// breaks the tie and is subtracted again.
fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    for shift in [0.0, 0.37, -0.61, 1.13] {
        let a = m + DMatrix::identity(n, n) * shift;
        if let Some(s) = Schur::try_new(a, f64::EPSILON, SCHUR_MAX_ITER) {
            return Ok(s.complex_eigenvalues().iter().map(|z| z - shift).collect());
        }
    }
    Err(Error::Convergence { iterations: SCHUR_MAX_ITER, residual: f64::NAN })
}

/// Gap between the leading eigenvalue of the normalized coupling matrix and
/// the next largest magnitude.
pub fn spectral_gap(g: &DirectedGraph, normalization: Normalization) -> Result<SpectralGap> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::UndefinedInput(format!("spectral gap needs 2 nodes, got {n}")));
    }
    let degree = |u: usize| match normalization {
        Normalization::Row => g.out_degree(u),
        Normalization::Column => g.in_degree(u),
    };
    let zero: Vec<usize> = (0..n).filter(|&u| degree(u) == 0).collect();
    if !zero.is_empty() {
        return Err(Error::Normalization { normalization: normalization.name(), nodes: zero });
    }
    let mut m = adjacency(g);
    for u in 0..n {
        let d = degree(u) as f64;
        match normalization {
            Normalization::Row => m.row_mut(u).scale_mut(1.0 / d),
            Normalization::Column => m.column_mut(u).scale_mut(1.0 / d),
        }
    }
    let mut ev = eigenvalues(&m)?;
    let lead = (0..ev.len()).max_by(|&i, &j| ev[i].re.total_cmp(&ev[j].re)).unwrap();
    let gamma1 = ev.swap_remove(lead).re;
    let second = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SpectralGap { gamma1, second, delta: (gamma1 - second).max(0.0) })
}

/// Largest eigenvalue magnitude of the raw adjacency matrix.
pub fn spectral_radius(g: &DirectedGraph) -> Result<f64> {
    if g.node_count() == 0 {
        return Ok(0.0);
    }
    Ok(eigenvalues(&adjacency(g))?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Coupling strength 0.8 / spectral radius; 0.8 when the radius vanishes
/// (acyclic graphs), where no coupling can destabilize the system.
pub fn coupling_for(g: &DirectedGraph) -> Result<f64> {
    let r = spectral_radius(g)?;
    if !r.is_finite() {
        return Err(Error::UndefinedInput("spectral radius is not finite".into()));
    }
    Ok(if r < 1e-9 { 0.8 } else { 0.8 / r })
}
