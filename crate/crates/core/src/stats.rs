//! Small statistics helpers shared by the profile modules.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Running sums for one-sweep mean and variance over many vectors.
#[derive(Clone, Debug)]
pub struct Moments {
    pub count: usize,
    pub sum: Vec<f64>,
    pub sum_sq: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum VarianceMode {
    /// Divide by the number of instances.
    #[default]
    Population,
    /// Divide by the number of instances minus one.
    Sample,
}

impl Moments {
    pub fn new(len: usize) -> Self {
        Moments { count: 0, sum: vec![0.0; len], sum_sq: vec![0.0; len] }
    }

    pub fn push<I: IntoIterator<Item = f64>>(&mut self, values: I) {
        self.count += 1;
        for ((s, q), x) in self.sum.iter_mut().zip(&mut self.sum_sq).zip(values) {
            *s += x;
            *q += x * x;
        }
    }

    pub fn merge(mut self, other: &Moments) -> Moments {
        self.count += other.count;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
        self
    }

    pub fn mean(&self) -> Vec<f64> {
        self.sum.iter().map(|s| s / self.count as f64).collect()
    }

    /// Standard deviation from the sums, clamped at zero against rounding.
    pub fn std(&self, mode: VarianceMode) -> Vec<f64> {
        let n = self.count as f64;
        let denom = match mode {
            VarianceMode::Population => n,
            VarianceMode::Sample => n - 1.0,
        };
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(s, q)| ((q - s * s / n) / denom).max(0.0).sqrt())
            .collect()
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation.
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Pearson correlation; None when either input is constant or too short.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson inputs differ in length");
    if x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let scale = sxx.sqrt() * syy.sqrt();
    // relative guard: columns equal up to rounding count as constant
    let tiny = 1e-14 * x.len() as f64;
    if sxx <= tiny * mx.abs().max(1.0).powi(2) || syy <= tiny * my.abs().max(1.0).powi(2) || scale == 0.0 {
        return None;
    }
    Some((sxy / scale).clamp(-1.0, 1.0))
}

/// Two-sided p value of a Pearson r over n samples (t test, n - 2 dof).
pub fn pearson_p_value(r: f64, n: usize) -> f64 {
    if n < 3 {
        return 1.0;
    }
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let dof = (n - 2) as f64;
    let t = r * (dof / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, dof).expect("positive degrees of freedom");
    2.0 * (1.0 - dist.cdf(t.abs()))
}

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Pearson correlations between the columns of two sample tables.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationMatrix {
    pub samples: usize,
    /// `r[i][j]` correlates column i of the left table with column j of the
    /// right one; None for constant columns.
    pub r: Vec<Vec<Option<f64>>>,
    /// Two-sided t test at the 5% level.
    pub significant: Vec<Vec<bool>>,
}

fn column(rows: &[Vec<f64>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j]).collect()
}

/// Correlates every column of `left` with every column of `right`; both are
/// sample-major (one row per sample) and need at least `min_samples` rows.
pub fn cross_correlate(left: &[Vec<f64>], right: &[Vec<f64>], min_samples: usize) -> Result<CorrelationMatrix> {
    let n = left.len();
    if n != right.len() {
        return Err(Error::UndefinedInput("sample tables differ in length".into()));
    }
    if n < min_samples.max(3) {
        return Err(Error::UndefinedInput(format!("need at least {} samples, got {n}", min_samples.max(3))));
    }
    let lcols: Vec<Vec<f64>> = (0..left[0].len()).map(|j| column(left, j)).collect();
    let rcols: Vec<Vec<f64>> = (0..right[0].len()).map(|j| column(right, j)).collect();
    let mut r = Vec::with_capacity(lcols.len());
    let mut significant = Vec::with_capacity(lcols.len());
    for a in &lcols {
        let row: Vec<Option<f64>> = rcols.iter().map(|b| pearson(a, b)).collect();
        significant.push(row.iter().map(|v| v.is_some_and(|r| pearson_p_value(r, n) < SIGNIFICANCE_LEVEL)).collect());
        r.push(row);
    }
    Ok(CorrelationMatrix { samples: n, r, significant })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sweep_matches_two_pass() {
        let data: Vec<f64> = (0..1000).map(|k| 1000.0 + ((k * 7919) % 101) as f64).collect();
        let mut m = Moments::new(1);
        for &x in &data {
            m.push([x]);
        }
        let direct = std_dev(&data);
        assert!((m.std(VarianceMode::Population)[0] - direct).abs() / direct < 1e-9);
        assert!((m.mean()[0] - mean(&data)).abs() < 1e-9);
    }

    #[test]
    fn pearson_basics() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &[2.0, 4.0, 6.0, 8.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&x, &[-1.0, -2.0, -3.0, -4.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson(&x, &[5.0; 4]), None);
    }

    #[test]
    fn p_value_is_monotone_in_r() {
        assert!(pearson_p_value(0.9, 12) < pearson_p_value(0.5, 12));
        assert!(pearson_p_value(0.0, 12) > 0.99);
    }
}
