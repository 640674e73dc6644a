use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::montecarlo::Estimate;
use crate::quad::CompensatedSum;

/// Stirling number of the second kind S(n, k), for 1 ≤ k ≤ n ≤ 64.
pub fn stirling2(n: u32, k: u32) -> Result<BigUint> {
    ensure((1..=64).contains(&n) && (1..=n).contains(&k), || {
        format!("stirling2 requires 1 ≤ k ≤ n ≤ 64 (got n = {n}, k = {k})")
    })?;
    // row[j] = S(m, j) for the current m
    let mut row: Vec<BigUint> = vec![BigUint::zero(); k as usize + 1];
    row[0] = BigUint::one();
    for m in 1..=n as usize {
        for j in (1..=m.min(k as usize)).rev() {
            let prev = std::mem::take(&mut row[j]);
            row[j] = &row[j - 1] + prev * BigUint::from(j);
        }
        row[0] = BigUint::zero();
    }
    Ok(std::mem::take(&mut row[k as usize]))
}

fn stirling2_f64(n: u32, k: u32) -> Result<f64> {
    Ok(stirling2(n, k)?.to_f64().unwrap_or(f64::INFINITY))
}

/// Probability mass function on {0, 1, …}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreePmf {
    pub probs: Vec<f64>,
}

impl DegreePmf {
    /// Evaluates `pmf` for n = 0, 1, … until the remaining mass falls below
    /// 1e-15 (checked via the running total) or `max_n` is reached.
    pub fn from_fn(mut pmf: impl FnMut(u64) -> f64, max_n: u64) -> Self {
        let mut probs = Vec::new();
        let mut total = CompensatedSum::default();
        for n in 0..=max_n {
            let p = pmf(n);
            probs.push(p);
            total.add(p);
            if 1.0 - total.value() < 1e-15 && n > 0 {
                break;
            }
        }
        Self { probs }
    }

    /// Empirical PMF from per-outcome counts.
    pub fn from_counts(counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        Self { probs: counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect() }
    }

    pub fn get(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().copied().collect::<CompensatedSum>().value()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).collect::<CompensatedSum>().value()
    }
}

/// Out-degree PMF p^n (1 − p), p = λ_ℓ / (λ_ℓ + λ_e).
pub fn pmf_out_degree(n: u64, lambda_l: f64, lambda_e: f64) -> Result<f64> {
    ensure(lambda_e > 0.0 && lambda_l >= 0.0, || {
        format!("out-degree PMF requires lambda_e > 0 and lambda_l ≥ 0 (got {lambda_l}, {lambda_e})")
    })?;
    let p = lambda_l / (lambda_l + lambda_e);
    Ok(p.powf(n as f64) * (1.0 - p))
}

/// Out-degree PMF with L independent transmission sectors (negative
/// binomial), C(L+n−1, L−1) p^n (1 − p)^L, evaluated in log space.
pub fn pmf_out_degree_sectored(n: u64, sectors: u32, lambda_l: f64, lambda_e: f64) -> Result<f64> {
    ensure(sectors >= 1, || "sector count L must be ≥ 1".into())?;
    ensure(lambda_e > 0.0 && lambda_l >= 0.0, || {
        format!("out-degree PMF requires lambda_e > 0 and lambda_l ≥ 0 (got {lambda_l}, {lambda_e})")
    })?;
    if lambda_l == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let l = sectors as f64;
    let nf = n as f64;
    let ln_p = (lambda_l / (lambda_l + lambda_e)).ln();
    let ln_q = (lambda_e / (lambda_l + lambda_e)).ln();
    // C(L+n−1, L−1) = Π_{j<L} (1 + n/j), accurate for large n unlike lnΓ differences
    let ln_c: f64 = (1..sectors).map(|j| (nf / j as f64).ln_1p()).sum();
    Ok((ln_c + nf * ln_p + l * ln_q).exp())
}

/// Whether moments come from the published table or from simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    Table,
    Simulated,
}

/// Moments E{Ã^k}, k = 1..K, of the area of the typical cell of a
/// unit-density Poisson–Voronoi tessellation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiMoments {
    pub moments: Vec<f64>,
    pub source: MomentSource,
}

impl VoronoiMoments {
    /// Tabulated first four moments (1, 1.280, 1.993, 3.650).
    pub fn table() -> Self {
        Self { moments: vec![1.0, 1.280, 1.993, 3.650], source: MomentSource::Table }
    }

    /// E{Ã^k}; E{Ã^0} = 1.
    pub fn moment(&self, k: usize) -> Option<f64> {
        if k == 0 { Some(1.0) } else { self.moments.get(k - 1).copied() }
    }
}

/// n-th moment of the in-degree, Σ_{k=1}^n ratio^k S(n,k) E{Ã^k}.
pub fn moments_in_degree(order: u32, ratio: f64, vm: &VoronoiMoments) -> Result<f64> {
    ensure(ratio >= 0.0 && ratio.is_finite(), || format!("ratio must be finite and ≥ 0 (got {ratio})"))?;
    ensure(order as usize <= vm.moments.len(), || {
        format!("in-degree moment of order {order} needs {order} area moments, only {} available", vm.moments.len())
    })?;
    if order == 0 {
        return Ok(1.0);
    }
    let mut sum = 0.0;
    for k in 1..=order {
        sum += ratio.powi(k as i32) * stirling2_f64(order, k)? * vm.moments[k as usize - 1];
    }
    Ok(sum)
}

/// Probability that a node cannot transmit to anyone: λ_e / (λ_ℓ + λ_e).
pub fn p_out_isolation(lambda_l: f64, lambda_e: f64) -> Result<f64> {
    ensure(lambda_l >= 0.0 && lambda_e >= 0.0 && lambda_l + lambda_e > 0.0, || {
        format!("densities must be ≥ 0 and not both zero (got {lambda_l}, {lambda_e})")
    })?;
    Ok(lambda_e / (lambda_l + lambda_e))
}

/// Probability that a node cannot receive from anyone, E{exp(−ratio·Ã)},
/// estimated from cell-area samples.
pub fn p_in_isolation(ratio: f64, area_samples: &[f64]) -> Result<Estimate> {
    ensure(ratio >= 0.0, || format!("ratio must be ≥ 0 (got {ratio})"))?;
    let values: Vec<f64> = area_samples.iter().map(|a| (-ratio * a).exp()).collect();
    Estimate::from_values(&values)
}

/// Truncated power series for the in-isolation probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Magnitude of the last term included.
    pub last_term: f64,
    /// Whether the last term fell below 1e-12.
    pub converged: bool,
}

/// Σ_k (−ratio)^k / k! · E{Ã^k}, over the available area moments, stopping
/// once a term drops below 1e-12.
pub fn p_in_isolation_series(ratio: f64, vm: &VoronoiMoments) -> Result<SeriesValue> {
    ensure(ratio >= 0.0, || format!("ratio must be ≥ 0 (got {ratio})"))?;
    let mut value = 1.0;
    let mut last_term = 1.0;
    let mut coef = 1.0;
    for k in 1..=vm.moments.len() {
        coef *= -ratio / k as f64;
        let term = coef * vm.moments[k - 1];
        value += term;
        last_term = term.abs();
        if last_term < 1e-12 {
            break;
        }
    }
    Ok(SeriesValue { value, last_term, converged: last_term < 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(4, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(stirling2(7, 3).unwrap(), BigUint::from(301u32));
        for n in 1..=64 {
            assert_eq!(stirling2(n, n).unwrap(), BigUint::one());
            assert_eq!(stirling2(n, 1).unwrap(), BigUint::one());
        }
        assert!(stirling2(0, 0).is_err());
        assert!(stirling2(65, 1).is_err());
        assert!(stirling2(3, 4).is_err());
        // S(n, 2) = 2^{n−1} − 1
        assert_eq!(stirling2(64, 2).unwrap(), (BigUint::one() << 63u32) - BigUint::one());
    }

    #[test]
    fn out_degree_examples() {
        assert_eq!(pmf_out_degree(0, 1.0, 1.0).unwrap(), 0.5);
        assert!((pmf_out_degree(2, 2.0, 1.0).unwrap() - 4.0 / 27.0).abs() < 1e-15);
        let pmf = DegreePmf::from_fn(|n| pmf_out_degree(n, 2.5, 1.0).unwrap(), 10_000);
        assert!((pmf.mean() - 2.5).abs() < 1e-12);
        assert!(pmf_out_degree(0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sectored_examples() {
        for n in 0..30 {
            let a = pmf_out_degree_sectored(n, 1, 1.3, 0.7).unwrap();
            let b = pmf_out_degree(n, 1.3, 0.7).unwrap();
            assert!((a - b).abs() < 1e-14 * b.max(1e-300) + 1e-300);
        }
        assert!((pmf_out_degree_sectored(0, 4, 1.0, 1.0).unwrap() - 0.0625).abs() < 1e-15);
        for l in [1, 2, 4, 8] {
            let pmf = DegreePmf::from_fn(|n| pmf_out_degree_sectored(n, l, 2.0, 1.0).unwrap(), 100_000);
            assert!((pmf.mean() - 2.0 * l as f64).abs() < 1e-10);
        }
        assert!(pmf_out_degree_sectored(0, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn in_degree_moment_examples() {
        let vm = VoronoiMoments::table();
        assert_eq!(moments_in_degree(1, 3.0, &vm).unwrap(), 3.0);
        assert!((moments_in_degree(2, 1.0, &vm).unwrap() - 2.280).abs() < 1e-12);
        assert!((moments_in_degree(4, 1.0, &vm).unwrap() - 25.568).abs() < 1e-12);
        assert!(moments_in_degree(5, 1.0, &vm).is_err());
    }

    #[test]
    fn isolation_examples() {
        assert_eq!(p_out_isolation(1.0, 1.0).unwrap(), 0.5);
        assert!((p_out_isolation(1.0, 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(p_out_isolation(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(p_in_isolation(0.0, &[0.3, 2.0]).unwrap().value, 1.0);
        assert!(p_in_isolation(1e6, &[0.3, 2.0]).unwrap().value < 1e-100);
        assert!(p_in_isolation(1.0, &[]).is_err());
        let s = p_in_isolation_series(0.0, &VoronoiMoments::table()).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(s.converged);
        let s = p_in_isolation_series(0.5, &VoronoiMoments::table()).unwrap();
        assert!(!s.converged);
        // 1 − 0.5 + 0.125·1.28 − 0.5³/6·1.993 + 0.5⁴/24·3.65
        let expect = 1.0 - 0.5 + 0.125 * 1.28 - 0.125 / 6.0 * 1.993 + 0.0625 / 24.0 * 3.65;
        assert!((s.value - expect).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn pmfs_normalize(ll in 0.01f64..20.0, le in 0.01f64..20.0, l in 1u32..12) {
            let g = DegreePmf::from_fn(|n| pmf_out_degree(n, ll, le).unwrap(), 1_000_000);
            prop_assert!((g.total() - 1.0).abs() < 1e-12);
            let nb = DegreePmf::from_fn(|n| pmf_out_degree_sectored(n, l, ll, le).unwrap(), 1_000_000);
            prop_assert!((nb.total() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn stirling_recurrence(n in 2u32..64, k in 2u32..64) {
            prop_assume!(k < n);
            let lhs = stirling2(n, k).unwrap();
            let rhs = stirling2(n - 1, k - 1).unwrap() + BigUint::from(k) * stirling2(n - 1, k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
