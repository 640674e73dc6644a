use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::neighbor::empirical_cdf;
use super::{poisson, run_trials, CurvePoint, Estimate};
use crate::analytic::colluding_power_law;
use crate::error::{ensure, Result};
use crate::pointprocess::RadialSampler;
use crate::secrecy::{msr_link, tail_mean, NetworkConfig};

/// Tail tolerance for power samples that feed distribution tests.
const POWER_TAIL_SD: f64 = 1e-4;
/// Looser tail tolerance for the degree, which depends on P_e only through
/// the smooth functional P_e^{−1/b}.
const DEGREE_TAIL_SD: f64 = 1e-3;

/// Simulation radius for the aggregate eavesdropper power. Beyond W the
/// power is replaced by its mean, and W is chosen so the standard deviation
/// of the discarded part, √(2πλ_e P_ℓ² W^{2−4b}/(4b−2)), is below
/// `rel_sd` times the stable scale γ^{1/α}.
pub fn colluding_window(cfg: &NetworkConfig, rel_sd: f64) -> Result<f64> {
    let law = colluding_power_law(cfg)?;
    ensure(cfg.lambda_e > 0.0, || "colluding window needs lambda_e > 0".into())?;
    ensure(rel_sd > 0.0, || format!("relative tail sd must be > 0 (got {rel_sd})"))?;
    let b = cfg.gain.b;
    let target = rel_sd * law.gamma.powf(1.0 / law.alpha);
    let w = (2.0 * PI * cfg.lambda_e * cfg.p_l * cfg.p_l / ((4.0 * b - 2.0) * target * target)).powf(1.0 / (4.0 * b - 2.0));
    Ok(w.max(1.0))
}

/// Standard deviation of the power from eavesdroppers beyond radius `r`.
fn tail_sd(cfg: &NetworkConfig, r: f64) -> f64 {
    let b = cfg.gain.b;
    (2.0 * PI * cfg.lambda_e * cfg.p_l * cfg.p_l * r.powf(2.0 - 4.0 * b) / (4.0 * b - 2.0)).sqrt()
}

/// Aggregate and nearest-eavesdropper received power for one realization.
///
/// Eavesdroppers are generated outward until the radius passes `w_min` and
/// the spread of the remaining power is below `rel_sd` of the partial sum;
/// the remaining power is then replaced by its mean. The stop is decided at
/// an arrival of the radial process, beyond which the points are again
/// Poisson, so the tail mean is exact. The relative rule matters for large
/// b, where realizations with no nearby eavesdropper carry small totals that
/// a fixed window would badly overstate.
fn draw_powers<R: Rng + ?Sized>(cfg: &NetworkConfig, w_min: f64, rel_sd: f64, rng: &mut R) -> Result<(f64, f64)> {
    let mut radial = RadialSampler::new(cfg.lambda_e)?;
    let mut sum = 0.0;
    let mut nearest = 0.0;
    loop {
        let r = radial.next_radius(rng);
        let p = cfg.p_l / cfg.gain.path_loss(r);
        if nearest == 0.0 {
            nearest = p;
        }
        sum += p;
        if r >= w_min && tail_sd(cfg, r) <= rel_sd * sum {
            return Ok((sum + tail_mean(cfg, r)?, nearest));
        }
    }
}

/// Per-realization eavesdropper powers, in trial order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColludingPowerSamples {
    /// P_ℓ Σ R_e,i^{−2b} over the simulated disk plus the tail mean.
    pub colluding: Vec<f64>,
    /// P_ℓ R_e,1^{−2b}.
    pub noncolluding: Vec<f64>,
    /// Minimum simulation radius; trials may extend beyond it.
    pub window_radius: f64,
    /// Tail mean beyond the minimum radius, an upper bound on the
    /// correction added to any trial.
    pub tail_mean: f64,
    /// E{P_e^{−α}}, finite although P_e itself has no mean. None when there
    /// are no eavesdroppers.
    pub neg_moment: Option<Estimate>,
}

impl ColludingPowerSamples {
    pub fn sorted(&self) -> Vec<f64> {
        let mut s = self.colluding.clone();
        s.sort_by(f64::total_cmp);
        s
    }
}

pub fn estimate_colluding_power(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<ColludingPowerSamples> {
    let law = colluding_power_law(cfg)?;
    ensure(trials >= 1, || "trials must be ≥ 1".into())?;
    if cfg.lambda_e == 0.0 {
        let zeros = vec![0.0; trials as usize];
        return Ok(ColludingPowerSamples {
            colluding: zeros.clone(),
            noncolluding: zeros,
            window_radius: 0.0,
            tail_mean: 0.0,
            neg_moment: None,
        });
    }
    let w = colluding_window(cfg, POWER_TAIL_SD)?;
    let tail = tail_mean(cfg, w)?;
    let pairs = run_trials(seed, trials, |rng| draw_powers(cfg, w, POWER_TAIL_SD, rng))?;
    let (colluding, noncolluding): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let inv: Vec<f64> = colluding.iter().map(|p| p.powf(-law.alpha)).collect();
    let note = format!("window ≥ {w:.4} with tail sd ≤ {POWER_TAIL_SD:e} of the sum, tail mean added");
    Ok(ColludingPowerSamples {
        colluding,
        noncolluding,
        window_radius: w,
        tail_mean: tail,
        neg_moment: Some(Estimate::from_values(&inv)?.with_note(note)),
    })
}

/// Empirical secrecy-rate CDFs of one link against colluding and against
/// non-colluding eavesdroppers, from the same realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColludingMsrCurves {
    pub colluding: Vec<CurvePoint>,
    pub noncolluding: Vec<CurvePoint>,
}

pub fn estimate_colluding_msr_cdf(
    cfg: &NetworkConfig,
    r_l: f64,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<ColludingMsrCurves> {
    ensure(r_l > 0.0 && r_l.is_finite(), || format!("link length must be finite and > 0 (got {r_l})"))?;
    let power = estimate_colluding_power(cfg, trials, seed)?;
    let prx_l = cfg.p_l / cfg.gain.path_loss(r_l);
    let rates = |powers: &[f64]| -> Result<Vec<f64>> {
        let mut v = powers.iter().map(|&pe| msr_link(prx_l, pe, cfg.sigma2_l, cfg.sigma2_e)).collect::<Result<Vec<_>>>()?;
        v.sort_by(f64::total_cmp);
        Ok(v)
    };
    Ok(ColludingMsrCurves {
        colluding: empirical_cdf(&rates(&power.colluding)?, grid)?,
        noncolluding: empirical_cdf(&rates(&power.noncolluding)?, grid)?,
    })
}

/// Mean out-degree against colluding eavesdroppers. Each trial simulates the
/// aggregate power P_e and draws a Poisson count of legitimate nodes within
/// the radius where the link still supports rate ϱ,
/// r^{2b} < SNR_ℓ / ((1 + P_e/σ_e²) 2^ϱ − 1).
pub fn estimate_colluding_mean_degree(cfg: &NetworkConfig, trials: u64, seed: u64) -> Result<Estimate> {
    ensure(cfg.lambda_e > 0.0, || "colluding degree is infinite without eavesdroppers".into())?;
    colluding_power_law(cfg)?;
    let w = colluding_window(cfg, DEGREE_TAIL_SD)?;
    let b = cfg.gain.b;
    let degrees = run_trials(seed, trials, |rng| {
        let (pe, _) = draw_powers(cfg, w, DEGREE_TAIL_SD, rng)?;
        let reach = cfg.snr_l() / ((1.0 + pe / cfg.sigma2_e) * cfg.rho.exp2() - 1.0);
        Ok(poisson(cfg.lambda_l * PI * reach.powf(1.0 / b), rng)? as f64)
    })?;
    let note = format!("window ≥ {w:.4} with tail sd ≤ {DEGREE_TAIL_SD:e} of the sum, tail mean added");
    Ok(Estimate::from_values(&degrees)?.with_note(note))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::mean_degree_colluding;
    use crate::propagation::GainModel;
    use crate::stable::mellin_neg_moment;

    #[test]
    fn no_eavesdroppers_no_power() {
        let cfg = NetworkConfig::baseline(1.0, 0.0);
        let s = estimate_colluding_power(&cfg, 10, 1).unwrap();
        assert!(s.colluding.iter().all(|&p| p == 0.0));
        assert!(s.neg_moment.is_none());
        let div = NetworkConfig { gain: GainModel::unbounded(1.0), ..NetworkConfig::default() };
        assert!(estimate_colluding_power(&div, 10, 1).is_err());
    }

    #[test]
    fn colluding_dominates_nearest() {
        let s = estimate_colluding_power(&NetworkConfig::default(), 2000, 2).unwrap();
        assert!(s.colluding.iter().zip(&s.noncolluding).all(|(c, n)| c >= n));
        assert!(s.window_radius > 1.0 && s.tail_mean > 0.0);
    }

    #[test]
    fn negative_moment_matches_law() {
        let cfg = NetworkConfig::default();
        let law = colluding_power_law(&cfg).unwrap();
        let s = estimate_colluding_power(&cfg, 20_000, 3).unwrap();
        let target = mellin_neg_moment(law.alpha).unwrap() / law.gamma;
        assert!(s.neg_moment.unwrap().within_se(target, 4.0));
    }

    #[test]
    fn mean_degree_sinc_factor() {
        let cfg = NetworkConfig::default();
        let est = estimate_colluding_mean_degree(&cfg, 20_000, 4).unwrap();
        assert!(est.within_se(mean_degree_colluding(1.0, 0.1, 2.0).unwrap(), 4.0), "{est:?}");
    }

    #[test]
    fn msr_curves_ordered() {
        let grid = [0.5, 1.0, 2.0, 3.0];
        let c = estimate_colluding_msr_cdf(&NetworkConfig::default(), 1.0, &grid, 5000, 5).unwrap();
        for (a, b) in c.colluding.iter().zip(&c.noncolluding) {
            assert!(a.estimate.value >= b.estimate.value);
        }
    }
}
