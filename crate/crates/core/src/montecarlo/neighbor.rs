use std::f64::consts::PI;

use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{run_trials, CurvePoint, Estimate};
use crate::error::{ensure, Result};
use crate::pointprocess::sample_nearest_distance;
use crate::secrecy::{msr_link, NetworkConfig};

/// Secrecy rates from the typical node to its i-th nearest legitimate
/// neighbour, one per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborMsrSamples {
    pub i: u32,
    /// Sorted ascending.
    pub samples: Vec<f64>,
    /// Frequency of a strictly positive rate.
    pub p_exist: Estimate,
}

/// Draws R_ℓ,i² as a Gamma(i, πλ_ℓ) sum of exponential spacings and R_e,1
/// exactly, then evaluates the link secrecy rate.
pub fn estimate_msr_neighbor(cfg: &NetworkConfig, i: u32, trials: u64, seed: u64) -> Result<NeighborMsrSamples> {
    cfg.validate()?;
    ensure(i >= 1, || "neighbour index must be ≥ 1".into())?;
    ensure(cfg.lambda_e > 0.0, || "neighbour rate experiment needs lambda_e > 0".into())?;
    let mut samples = run_trials(seed, trials, |rng| {
        let spacing: f64 = (0..i).map(|_| -> f64 { Exp1.sample(rng) }).sum();
        let r_l = (spacing / (PI * cfg.lambda_l)).sqrt();
        let r_e = sample_nearest_distance(cfg.lambda_e, rng)?;
        msr_link(cfg.p_l / cfg.gain.path_loss(r_l), cfg.p_l / cfg.gain.path_loss(r_e), cfg.sigma2_l, cfg.sigma2_e)
    })?;
    let positive = samples.iter().filter(|&&s| s > 0.0).count() as u64;
    samples.sort_by(f64::total_cmp);
    Ok(NeighborMsrSamples { i, samples, p_exist: Estimate::from_count(positive, trials)? })
}

/// Empirical P{X ≤ x} at each grid point, from a sorted sample.
pub fn empirical_cdf(sorted: &[f64], grid: &[f64]) -> Result<Vec<CurvePoint>> {
    grid.iter()
        .map(|&x| {
            let below = sorted.partition_point(|&s| s <= x) as u64;
            Ok(CurvePoint { x, estimate: Estimate::from_count(below, sorted.len() as u64)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{cdf_msr_neighbor, p_exist_neighbor};

    #[test]
    fn existence_frequency() {
        let cfg = NetworkConfig::baseline(1.0, 0.1);
        for i in [1, 3] {
            let s = estimate_msr_neighbor(&cfg, i, 20_000, 21).unwrap();
            assert!(s.p_exist.within_se(p_exist_neighbor(i, 1.0, 0.1).unwrap(), 4.0), "{:?}", s.p_exist);
            assert!(s.samples.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn empirical_cdf_tracks_quadrature() {
        let cfg = NetworkConfig::baseline(1.0, 0.1);
        let s = estimate_msr_neighbor(&cfg, 2, 20_000, 22).unwrap();
        for pt in empirical_cdf(&s.samples, &[0.0, 0.5, 1.0, 2.0]).unwrap() {
            let f = cdf_msr_neighbor(pt.x, 2, &cfg).unwrap();
            assert!(pt.estimate.within_se(f, 4.5), "{pt:?} vs {f}");
        }
    }
}
