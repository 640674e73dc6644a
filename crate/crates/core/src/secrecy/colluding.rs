use std::f64::consts::PI;

use super::{msr_link, NetworkConfig};
use crate::error::{ensure, Error, Result};
use crate::pointprocess::PointSet;
use crate::propagation::GainKind;
use crate::quad::CompensatedSum;

fn require_convergent(cfg: &NetworkConfig) -> Result<()> {
    ensure(cfg.gain.kind == GainKind::Unbounded, || "colluding analysis requires the unbounded gain".into())?;
    if cfg.gain.b <= 1.0 {
        return Err(Error::DivergentAggregate(cfg.gain.b));
    }
    Ok(())
}

/// Mean power from eavesdroppers beyond radius `w`:
/// 2πλ_e P_ℓ w^{2−2b} / (2b − 2).
pub fn tail_mean(cfg: &NetworkConfig, w: f64) -> Result<f64> {
    require_convergent(cfg)?;
    let b = cfg.gain.b;
    Ok(2.0 * PI * cfg.lambda_e * cfg.p_l * w.powf(2.0 - 2.0 * b) / (2.0 * b - 2.0))
}

/// Total power P_ℓ Σ R_e,i^{−2b} received by all eavesdroppers of the
/// realization, plus the mean contribution from beyond `tail_radius` when
/// given.
pub fn aggregate_power(eaves: &PointSet, cfg: &NetworkConfig, tail_radius: Option<f64>) -> Result<f64> {
    require_convergent(cfg)?;
    let two_b = 2.0 * cfg.gain.b;
    let mut sum: CompensatedSum = eaves.points.iter().map(|e| cfg.p_l / e.norm().powf(two_b)).collect();
    if let Some(w) = tail_radius {
        ensure(w >= eaves.window_radius, || {
            format!("tail radius {w} must be at least the window radius {}", eaves.window_radius)
        })?;
        sum.add(tail_mean(cfg, w)?);
    }
    Ok(sum.value())
}

/// Secrecy rate of a link of length `r_l` when all eavesdroppers (located
/// relative to the transmitter at the origin) pool their received power.
pub fn colluding_msr(r_l: f64, eaves: &PointSet, cfg: &NetworkConfig, tail_radius: Option<f64>) -> Result<f64> {
    cfg.validate()?;
    ensure(r_l > 0.0 && r_l.is_finite(), || format!("link length must be finite and > 0 (got {r_l})"))?;
    let prx_e = aggregate_power(eaves, cfg, tail_radius)?;
    let prx_l = cfg.p_l / cfg.gain.path_loss(r_l);
    msr_link(prx_l, prx_e, cfg.sigma2_l, cfg.sigma2_e)
}
