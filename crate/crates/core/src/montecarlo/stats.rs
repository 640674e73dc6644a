use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::quad::CompensatedSum;

/// Monte Carlo estimate: value with standard error over `trials` draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bias_note: Option<String>,
}

impl Estimate {
    /// Sample mean with SE = sample standard deviation / √n.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        ensure(!values.is_empty(), || "cannot estimate from zero samples".into())?;
        let n = values.len() as f64;
        let mean = values.iter().copied().collect::<CompensatedSum>().value() / n;
        let ss = values.iter().map(|v| (v - mean) * (v - mean)).collect::<CompensatedSum>().value();
        let var = if values.len() > 1 { ss / (n - 1.0) } else { 0.0 };
        Ok(Self { value: mean, std_error: (var / n).sqrt(), trials: values.len() as u64, bias_note: None })
    }

    /// Frequency estimate of a probability.
    pub fn from_count(successes: u64, trials: u64) -> Result<Self> {
        ensure(trials >= 1, || "cannot estimate from zero trials".into())?;
        let p = successes as f64 / trials as f64;
        let var = if trials > 1 { p * (1.0 - p) / (trials as f64 - 1.0) } else { 0.0 };
        Ok(Self { value: p, std_error: var.sqrt(), trials, bias_note: None })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.bias_note = Some(note.into());
        self
    }

    /// Whether `target` lies within `k` standard errors.
    pub fn within_se(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }

    pub fn relative_error(&self, target: f64) -> f64 {
        ((self.value - target) / target).abs()
    }
}

/// Total-variation distance ½ Σ |p_n − q_n| between two PMFs on 0, 1, ….
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let sum: CompensatedSum =
        (0..n).map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs()).collect();
    0.5 * sum.value()
}

/// One-sample Kolmogorov–Smirnov statistic of a sorted sample against a
/// distribution with CDF `cdf` and left limits `cdf_left` (equal to `cdf`
/// for continuous laws).
pub fn ks_statistic_mixed(
    sorted: &[f64],
    mut cdf: impl FnMut(f64) -> f64,
    mut cdf_left: impl FnMut(f64) -> f64,
) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((below - cdf_left(x)).abs()).max((at - cdf(x)).abs());
        i = j;
    }
    d
}

/// One-sample KS statistic against a continuous CDF.
pub fn ks_statistic(sorted: &[f64], mut cdf: impl FnMut(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// One-sample KS statistic with the CDF evaluated in parallel at every
/// sample point, for CDFs that are expensive to compute. With
/// `atom_at_zero` the law may put mass at 0 and `cdf(0)` is its size.
pub fn ks_statistic_parallel(
    sorted: &[f64],
    cdf: impl Fn(f64) -> Result<f64> + Sync,
    atom_at_zero: bool,
) -> Result<f64> {
    let values: Vec<f64> = sorted.par_iter().map(|&x| cdf(x)).collect::<Result<_>>()?;
    let lookup = |x: f64| values[sorted.partition_point(|&s| s < x)];
    Ok(if atom_at_zero {
        ks_statistic_mixed(sorted, lookup, |x| if x <= 0.0 { 0.0 } else { lookup(x) })
    } else {
        ks_statistic(sorted, lookup)
    })
}

/// Two-sample KS statistic between sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_from_values() {
        let e = Estimate::from_values(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(e.value, 2.5);
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(Estimate::from_values(&[]).is_err());
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert!((tv_distance(&[1.0], &[0.0, 1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&xs, |x| x) - 0.005).abs() < 1e-12);
        assert!((ks_statistic_mixed(&xs, |x| x, |x| x) - 0.005).abs() < 1e-12);
    }

    #[test]
    fn ks_with_atom() {
        // half the mass at zero, the rest uniform on (0, 1)
        let mut xs = vec![0.0; 50];
        xs.extend((0..50).map(|i| (i as f64 + 0.5) / 50.0));
        let cdf = |x: f64| if x < 0.0 { 0.0 } else { 0.5 + 0.5 * x.min(1.0) };
        let left = |x: f64| if x <= 0.0 { 0.0 } else { cdf(x) };
        assert!(ks_statistic_mixed(&xs, cdf, left) < 0.011);
    }

    #[test]
    fn two_sample_identical() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
    }
}
