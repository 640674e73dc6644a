use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure, Error, Result};
use crate::propagation::GainKind;
use crate::secrecy::NetworkConfig;
use crate::special::{gamma, sinc};
use crate::stable::{cdf_normalized, StableParams};

/// C_α = (1 − α) / (Γ(2 − α) cos(πα/2)), 0 < α < 1.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    ensure(alpha > 0.0 && alpha < 1.0, || format!("α must lie in (0, 1) (got {alpha})"))?;
    Ok((1.0 - alpha) / (gamma(2.0 - alpha) * (FRAC_PI_2 * alpha).cos()))
}

fn colluding_alpha(cfg: &NetworkConfig) -> Result<f64> {
    cfg.validate()?;
    ensure(cfg.gain.kind == GainKind::Unbounded, || "colluding analysis requires the unbounded gain".into())?;
    if cfg.gain.b <= 1.0 {
        return Err(Error::DivergentAggregate(cfg.gain.b));
    }
    Ok(1.0 / cfg.gain.b)
}

/// Law of the aggregate power received by colluding eavesdroppers:
/// S(α = 1/b, β = 1, γ = πλ_e C_α^{−1} P_ℓ^{1/b}).
pub fn colluding_power_law(cfg: &NetworkConfig) -> Result<StableParams> {
    let alpha = colluding_alpha(cfg)?;
    let gamma = PI * cfg.lambda_e / c_alpha(alpha)? * cfg.p_l.powf(alpha);
    StableParams::one_sided(alpha, gamma)
}

/// Capacity of the legitimate link of length r_ℓ, log₂(1 + P_ℓ/(r_ℓ^{2b} σ_ℓ²)).
pub fn legit_capacity(r_l: f64, cfg: &NetworkConfig) -> Result<f64> {
    cfg.validate()?;
    ensure(r_l > 0.0, || format!("link length must be > 0 (got {r_l})"))?;
    Ok((cfg.snr_l() / cfg.gain.path_loss(r_l)).ln_1p() / std::f64::consts::LN_2)
}

/// Normalized aggregate-power level below which the link still supports
/// rate ϱ: ((1 + SNR_ℓ r^{−2b}) 2^{−ϱ} − 1) / ((πλ_e/C_α)^b SNR_e).
fn normalized_slack(rho: f64, r_l: f64, cfg: &NetworkConfig, alpha: f64) -> Result<f64> {
    let b = cfg.gain.b;
    let numer = (1.0 + cfg.snr_l() / cfg.gain.path_loss(r_l)) * (-rho).exp2() - 1.0;
    let denom = (PI * cfg.lambda_e / c_alpha(alpha)?).powf(b) * cfg.snr_e();
    Ok(if denom == 0.0 { f64::INFINITY } else { numer / denom })
}

/// CDF of the secrecy rate of a link of length r_ℓ against colluding
/// eavesdroppers.
pub fn cdf_msr_colluding(rho: f64, r_l: f64, cfg: &NetworkConfig) -> Result<f64> {
    let alpha = colluding_alpha(cfg)?;
    ensure(!rho.is_nan(), || "rho is NaN".into())?;
    if rho < 0.0 {
        return Ok(0.0);
    }
    if rho >= legit_capacity(r_l, cfg)? {
        return Ok(1.0);
    }
    let x = normalized_slack(rho, r_l, cfg, alpha)?;
    Ok(1.0 - cdf_normalized(x, alpha)?)
}

/// CDF of the secrecy rate of a link of length r_ℓ against the single best
/// (nearest) non-colluding eavesdropper.
pub fn cdf_msr_noncolluding_link(rho: f64, r_l: f64, cfg: &NetworkConfig) -> Result<f64> {
    cfg.validate()?;
    ensure(cfg.gain.kind == GainKind::Unbounded, || "closed form requires the unbounded gain".into())?;
    ensure(!rho.is_nan(), || "rho is NaN".into())?;
    if rho < 0.0 {
        return Ok(0.0);
    }
    if rho >= legit_capacity(r_l, cfg)? {
        return Ok(1.0);
    }
    let b = cfg.gain.b;
    let slack = (1.0 + cfg.snr_l() / cfg.gain.path_loss(r_l)) * (-rho).exp2() - 1.0;
    Ok(1.0 - (-PI * cfg.lambda_e * (cfg.snr_e() / slack).powf(1.0 / b)).exp())
}

/// Probability that a link of length r_ℓ has non-zero secrecy rate against
/// colluding eavesdroppers: F(σ_e² / ((πλ_e r_ℓ² C_α^{−1})^b σ_ℓ²)).
pub fn p_exist_colluding(r_l: f64, cfg: &NetworkConfig) -> Result<f64> {
    let alpha = colluding_alpha(cfg)?;
    ensure(r_l > 0.0, || format!("link length must be > 0 (got {r_l})"))?;
    let denom = (PI * cfg.lambda_e * r_l * r_l / c_alpha(alpha)?).powf(cfg.gain.b) * cfg.sigma2_l;
    if denom == 0.0 {
        return Ok(1.0);
    }
    cdf_normalized(cfg.sigma2_e / denom, alpha)
}

/// Mean degree with colluding eavesdroppers, (λ_ℓ/λ_e) sinc(1/b). Zero at
/// b = 1, +∞ when λ_e = 0.
pub fn mean_degree_colluding(lambda_l: f64, lambda_e: f64, b: f64) -> Result<f64> {
    ensure(lambda_l > 0.0 && lambda_e >= 0.0, || format!("invalid densities ({lambda_l}, {lambda_e})"))?;
    ensure(b >= 1.0, || format!("amplitude loss exponent must be ≥ 1 (got {b})"))?;
    if b == 1.0 {
        return Ok(0.0);
    }
    if lambda_e == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(lambda_l / lambda_e * sinc(1.0 / b))
}
