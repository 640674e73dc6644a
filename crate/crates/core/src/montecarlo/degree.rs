use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use super::{derive_seed, estimate_voronoi_moments, poisson, run_trials, Estimate};
use crate::analytic::{p_in_isolation, p_out_isolation, DegreePmf};
use crate::error::{ensure, Error, Result};
use crate::pointprocess::spatial::HashGrid;
use crate::pointprocess::{sample_disk, sample_nearest_distance, Point, RadialSampler};
use crate::propagation::{FadingModel, FadingSampler, GainModel};
use crate::secrecy::{EavesIndex, NetworkConfig};

/// Points generated per trial before an incremental simulation gives up.
const MAX_POINTS: usize = 20_000_000;

/// Empirical degree distribution with per-outcome standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeEstimate {
    pub pmf: DegreePmf,
    pub pmf_se: Vec<f64>,
    pub mean: Estimate,
}

impl DegreeEstimate {
    pub fn from_degrees(degrees: &[u64]) -> Result<Self> {
        ensure(!degrees.is_empty(), || "no degree samples".into())?;
        let max = *degrees.iter().max().unwrap_or(&0) as usize;
        let mut counts = vec![0u64; max + 1];
        for &d in degrees {
            counts[d as usize] += 1;
        }
        let n = degrees.len() as u64;
        let pmf_se = counts.iter().map(|&c| Estimate::from_count(c, n).map(|e| e.std_error)).collect::<Result<_>>()?;
        let values: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
        Ok(Self { pmf: DegreePmf::from_counts(&counts), pmf_se, mean: Estimate::from_values(&values)? })
    }

    /// Frequency estimate of P{N = 0}.
    pub fn p_zero(&self) -> Estimate {
        Estimate { value: self.pmf.get(0), std_error: self.pmf_se[0], trials: self.mean.trials, bias_note: None }
    }
}

fn require_eaves(cfg: &NetworkConfig) -> Result<()> {
    cfg.validate()?;
    ensure(cfg.lambda_e > 0.0, || "this estimator needs lambda_e > 0 (the degree is infinite otherwise)".into())
}

/// Out-degree of the typical node under the path-loss rule, or under the
/// fading rule when `cfg.fading` is non-trivial.
///
/// Without fading each trial draws the nearest-eavesdropper distance R_e,1
/// exactly and a Poisson(λ_ℓπR_e,1²) count of closer legitimate nodes, so
/// the estimator has no truncation bias. With fading the merged process is
/// generated outward from the origin, with one Z per point, until a Markov
/// bound on the expected number of unseen points beating the best
/// eavesdropper drops below 1e-6.
pub fn estimate_out_degree_pmf(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<DegreeEstimate> {
    require_eaves(cfg)?;
    let degrees = if cfg.fading.is_trivial() {
        run_trials(seed, trials, |rng| {
            let r = sample_nearest_distance(cfg.lambda_e, rng)?;
            poisson(cfg.lambda_l * PI * r * r, rng)
        })?
    } else {
        let sampler = cfg.fading.sampler()?;
        run_trials(seed, trials, |rng| fading_out_degree(cfg, &sampler, rng))?
    };
    let mut est = DegreeEstimate::from_degrees(&degrees)?;
    if !cfg.fading.is_trivial() {
        est.mean = est.mean.with_note("fading: outward generation stopped at Markov tail bound < 1e-6 per trial");
    }
    Ok(est)
}

/// ln of the Markov bound on the expected number of points beyond radius
/// `r` whose loss r^{2b}/Z is below `best_loss`, minimized over the moment
/// order k = 1..8.
fn ln_tail_bound(r: f64, best_loss: f64, density: f64, gain: &GainModel, fading: &FadingModel) -> f64 {
    let b = gain.b;
    (1..=8)
        .map(f64::from)
        .filter(|k| b * k > 1.0)
        .map(|k| {
            (PI * density).ln() + fading.ln_moment(k) + k * best_loss.ln() + 2.0 * (1.0 - b * k) * r.ln()
                - (b * k - 1.0).ln()
        })
        .fold(f64::INFINITY, f64::min)
}

fn fading_out_degree<R: Rng + ?Sized>(cfg: &NetworkConfig, sampler: &FadingSampler, rng: &mut R) -> Result<u64> {
    let total = cfg.lambda_l + cfg.lambda_e;
    let mut radial = RadialSampler::new(total)?;
    let mut legit_losses = Vec::new();
    let mut best = f64::INFINITY;
    let stop = 1e-6f64.ln();
    for step in 0..MAX_POINTS {
        let r = radial.next_radius(rng);
        let is_legit = rng.random::<f64>() * total < cfg.lambda_l;
        let loss = cfg.gain.path_loss(r) / sampler.sample(rng);
        if is_legit {
            legit_losses.push(loss);
        } else {
            best = best.min(loss);
        }
        if best.is_finite() && step % 8 == 0 && ln_tail_bound(r, best, total, &cfg.gain, &cfg.fading) < stop {
            return Ok(legit_losses.iter().filter(|&&l| l < best).count() as u64);
        }
    }
    Err(Error::WindowExhausted(format!("fading out-degree did not settle within {MAX_POINTS} points")))
}

/// Radius W of the legitimate window for in-degree simulation, chosen so the
/// truncation bias (λ_ℓ/λ_e) e^{−λ_eπW²} stays below 1e-4.
pub fn in_degree_window(lambda_l: f64, lambda_e: f64) -> Result<f64> {
    ensure(lambda_e > 0.0 && lambda_e.is_finite(), || "in-degree window needs 0 < lambda_e < ∞".into())?;
    let w2 = (lambda_l / lambda_e * 1e4).ln().max(1.0) / (PI * lambda_e);
    let w = w2.sqrt();
    ensure(w.is_finite(), || format!("infeasible in-degree window for ({lambda_l}, {lambda_e})"))?;
    Ok(w)
}

/// In-degree of the typical node: the legitimate points of a disk of radius
/// W lying in the origin's Voronoi cell with respect to the eavesdroppers.
/// Eavesdroppers are drawn on a disk of radius 2W, which decides every
/// candidate exactly; the only bias is from cell points beyond W.
pub fn estimate_in_degree_pmf(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<DegreeEstimate> {
    require_eaves(cfg)?;
    let w = in_degree_window(cfg.lambda_l, cfg.lambda_e)?;
    let degrees = run_trials(seed, trials, |rng| {
        let legit = sample_disk(cfg.lambda_l, w, rng)?;
        let eaves = sample_disk(cfg.lambda_e, 2.0 * w, rng)?;
        let index = EavesIndex::new(&eaves.points);
        Ok(legit.points.iter().filter(|x| x.norm() < index.nearest_distance(x)).count() as u64)
    })?;
    let bias = cfg.ratio() * (-cfg.lambda_e * PI * w * w).exp();
    let mut est = DegreeEstimate::from_degrees(&degrees)?;
    est.mean = est.mean.with_note(format!("window W = {w:.4}, truncation bias bound {bias:.3e}"));
    Ok(est)
}

/// Isolation probabilities of the typical node by every available route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationEstimate {
    pub p_out_exact: f64,
    pub p_out: Estimate,
    /// Frequency of zero in-degree from direct simulation.
    pub p_in_direct: Estimate,
    /// E{exp(−(λ_ℓ/λ_e) Ã)} over simulated cell areas.
    pub p_in_area: Estimate,
}

pub fn estimate_isolation(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<IsolationEstimate> {
    require_eaves(cfg)?;
    let out = estimate_out_degree_pmf(&NetworkConfig { fading: FadingModel::None, ..*cfg }, trials, derive_seed(seed, 1))?;
    let inn = estimate_in_degree_pmf(cfg, trials, derive_seed(seed, 2))?;
    let cells = estimate_voronoi_moments(1, trials, derive_seed(seed, 3))?;
    Ok(IsolationEstimate {
        p_out_exact: p_out_isolation(cfg.lambda_l, cfg.lambda_e)?,
        p_out: out.p_zero(),
        p_in_direct: inn.p_zero(),
        p_in_area: p_in_isolation(cfg.ratio(), &cells.areas)?,
    })
}

/// Mean out-degree under the threshold/noise rule. Each trial draws R_e,1
/// exactly and counts a Poisson number of legitimate nodes inside the secure
/// range of that distance.
pub fn estimate_thresholded_mean(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<Estimate> {
    require_eaves(cfg)?;
    let degrees = run_trials(seed, trials, |rng| {
        let range = cfg.secure_range(sample_nearest_distance(cfg.lambda_e, rng)?);
        Ok(poisson(cfg.lambda_l * PI * range * range, rng)? as f64)
    })?;
    Estimate::from_values(&degrees)
}

/// Out-degree with `sectors` independent transmission sectors. Each sector
/// of angle 2π/L holds an independent Poisson process of each kind, so per
/// sector the nearest eavesdropper distance is exact and the secure count is
/// Poisson given that distance.
pub fn estimate_sector_pmf(cfg: &NetworkConfig, sectors: u32, trials: u64, seed: u64) -> Result<DegreeEstimate> {
    require_eaves(cfg)?;
    ensure(sectors >= 1, || "sector count L must be ≥ 1".into())?;
    let l = sectors as f64;
    let degrees = run_trials(seed, trials, |rng| {
        let mut n = 0;
        for _ in 0..sectors {
            let e: f64 = Exp1.sample(rng);
            let r2 = e * l / (PI * cfg.lambda_e);
            n += poisson(cfg.lambda_l * PI * r2 / l, rng)?;
        }
        Ok(n)
    })?;
    DegreeEstimate::from_degrees(&degrees)
}

/// Mean out-degree when every legitimate node (the typical node included)
/// neutralizes eavesdroppers within `radius`.
///
/// The merged process is generated outward from the origin. An eavesdropper
/// at distance r_e is settled once generation passes r_e + radius, since
/// every legitimate node that could neutralize it is then known. The first
/// surviving eavesdropper fixes the out-degree, so the estimate is exact.
pub fn estimate_neutralization_mean(cfg: &NetworkConfig, radius: f64, trials: u64, seed: u64) -> Result<Estimate> {
    require_eaves(cfg)?;
    ensure(radius >= 0.0 && radius.is_finite(), || format!("neutralization radius must be ≥ 0 (got {radius})"))?;
    let degrees = run_trials(seed, trials, |rng| {
        if radius == 0.0 {
            let r = sample_nearest_distance(cfg.lambda_e, rng)?;
            return Ok(poisson(cfg.lambda_l * PI * r * r, rng)? as f64);
        }
        neutralized_out_degree(cfg.lambda_l, cfg.lambda_e, radius, rng).map(|n| n as f64)
    })?;
    Estimate::from_values(&degrees)
}

fn neutralized_out_degree<R: Rng + ?Sized>(lambda_l: f64, lambda_e: f64, radius: f64, rng: &mut R) -> Result<u64> {
    let total = lambda_l + lambda_e;
    let mut radial = RadialSampler::new(total)?;
    let mut grid = HashGrid::new(radius);
    grid.insert(Point::ORIGIN);
    let mut legit_radii: Vec<f64> = Vec::new();
    let mut pending: VecDeque<(Point, f64)> = VecDeque::new();
    for _ in 0..MAX_POINTS {
        let p = radial.next_point(rng);
        let r = p.norm();
        while let Some(&(e, re)) = pending.front() {
            if re + radius >= r {
                break;
            }
            pending.pop_front();
            if !grid.any_within(&e, radius) {
                return Ok(legit_radii.partition_point(|&x| x < re) as u64);
            }
        }
        if rng.random::<f64>() * total < lambda_l {
            grid.insert(p);
            legit_radii.push(r);
        } else {
            pending.push_back((p, r));
        }
    }
    Err(Error::WindowExhausted(format!("no effective eavesdropper within {MAX_POINTS} points")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{mean_out_degree_thresholded, pmf_out_degree};
    use crate::montecarlo::tv_distance;

    #[test]
    fn out_degree_mean_and_law() {
        let cfg = NetworkConfig::baseline(1.0, 0.4);
        let est = estimate_out_degree_pmf(&cfg, 40_000, 3).unwrap();
        assert!(est.mean.within_se(2.5, 4.0), "{:?}", est.mean);
        let geo = DegreePmf::from_fn(|n| pmf_out_degree(n, 1.0, 0.4).unwrap(), 10_000);
        assert!(tv_distance(&est.pmf.probs, &geo.probs) < 0.02);
        assert!((est.pmf.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_eavesdroppers_isolate() {
        let est = estimate_out_degree_pmf(&NetworkConfig::baseline(1.0, 1e4), 2000, 1).unwrap();
        assert!(est.pmf.get(0) > 0.99);
        assert!(estimate_out_degree_pmf(&NetworkConfig::baseline(1.0, 0.0), 10, 1).is_err());
    }

    #[test]
    fn fading_out_degree_mean_matches() {
        let cfg = NetworkConfig { fading: FadingModel::Nakagami { m: 1.0 }, ..NetworkConfig::baseline(1.0, 0.5) };
        let est = estimate_out_degree_pmf(&cfg, 20_000, 5).unwrap();
        assert!(est.mean.within_se(2.0, 4.0), "{:?}", est.mean);
        assert!(est.mean.bias_note.is_some());
    }

    #[test]
    fn in_degree_mean_matches_ratio() {
        let cfg = NetworkConfig::baseline(1.0, 0.5);
        let est = estimate_in_degree_pmf(&cfg, 20_000, 7).unwrap();
        assert!(est.mean.within_se(2.0, 4.0), "{:?}", est.mean);
        assert!(est.mean.bias_note.as_deref().unwrap().contains("bias"));
    }

    #[test]
    fn isolation_routes_agree() {
        let iso = estimate_isolation(&NetworkConfig::baseline(1.0, 1.0), 20_000, 11).unwrap();
        assert_eq!(iso.p_out_exact, 0.5);
        assert!(iso.p_out.within_se(0.5, 4.0));
        let se = iso.p_in_direct.std_error.hypot(iso.p_in_area.std_error);
        assert!((iso.p_in_direct.value - iso.p_in_area.value).abs() < 4.0 * se);
        assert!(iso.p_in_direct.value < iso.p_out.value);
    }

    #[test]
    fn thresholded_matches_quadrature() {
        let cfg = NetworkConfig { rho: 1.0, p_l: 5.0, ..NetworkConfig::baseline(1.0, 0.1) };
        let est = estimate_thresholded_mean(&cfg, 40_000, 2).unwrap();
        assert!(est.within_se(mean_out_degree_thresholded(&cfg).unwrap(), 4.0), "{est:?}");
    }

    #[test]
    fn sectors_scale_mean() {
        let est = estimate_sector_pmf(&NetworkConfig::baseline(1.0, 1.0), 4, 20_000, 4).unwrap();
        assert!(est.mean.within_se(4.0, 4.0), "{:?}", est.mean);
    }

    #[test]
    fn neutralization_reduces_to_baseline_and_grows() {
        let cfg = NetworkConfig::baseline(1.0, 0.5);
        let zero = estimate_neutralization_mean(&cfg, 0.0, 20_000, 8).unwrap();
        assert!(zero.within_se(2.0, 4.0));
        // a tiny radius goes through the incremental route and must agree
        let tiny = estimate_neutralization_mean(&cfg, 1e-6, 20_000, 8).unwrap();
        assert!(tiny.within_se(2.0, 4.0), "{tiny:?}");
        let half = estimate_neutralization_mean(&cfg, 0.5, 4000, 8).unwrap();
        assert!(half.value > zero.value);
    }
}
