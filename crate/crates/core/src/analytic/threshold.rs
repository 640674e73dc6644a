use std::f64::consts::PI;

use crate::error::{ensure, Result};
use crate::propagation::GainKind;
use crate::quad::{integrate_semi_infinite, QuadConfig};
use crate::secrecy::NetworkConfig;

fn require_unbounded(cfg: &NetworkConfig) -> Result<()> {
    cfg.validate()?;
    ensure(cfg.gain.kind == GainKind::Unbounded, || "closed forms are available for the unbounded gain only".into())
}

/// Mean out-degree with a secrecy threshold and unequal noise powers,
/// (λ_ℓ/λ_e) ∫₀^∞ u e^{−u} (a + c (u/(πλ_e))^b)^{−1/b} du with
/// a = (σ_ℓ²/σ_e²)2^ϱ and c = (σ_ℓ²/P_ℓ)(2^ϱ − 1). Equivalent to the
/// π²λ_ℓλ_e ∫ x e^{−πλ_e x}(…) dx form after u = πλ_e x.
///
/// Returns +∞ when λ_e = 0 and ϱ = 0.
pub fn mean_out_degree_thresholded(cfg: &NetworkConfig) -> Result<f64> {
    require_unbounded(cfg)?;
    let (a, c) = cfg.threshold_coefficients();
    let b = cfg.gain.b;
    if cfg.lambda_e == 0.0 {
        // every legitimate node within c^{−1/(2b)} is reachable
        return Ok(if c > 0.0 { cfg.lambda_l * PI * c.powf(-1.0 / b) } else { f64::INFINITY });
    }
    let c_scaled = c / (PI * cfg.lambda_e).powf(b);
    let integrand = |u: f64| u * (-u).exp() * (a + c_scaled * u.powf(b)).powf(-1.0 / b);
    let cfg_q = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 2000 };
    let value = integrate_semi_infinite(integrand, 0.0, cfg_q)?.value;
    Ok(cfg.ratio() * value)
}

/// Jensen upper bound on [`mean_out_degree_thresholded`],
/// (λ_ℓ/λ_e) / (a + (σ_ℓ²/(P_ℓ(πλ_e)^b))(2^ϱ − 1))^{1/b}.
pub fn mean_out_degree_thresholded_bound(cfg: &NetworkConfig) -> Result<f64> {
    require_unbounded(cfg)?;
    let (a, c) = cfg.threshold_coefficients();
    let b = cfg.gain.b;
    if cfg.lambda_e == 0.0 {
        return Ok(if c > 0.0 { cfg.lambda_l * PI * c.powf(-1.0 / b) } else { f64::INFINITY });
    }
    Ok(cfg.ratio() / (a + c / (PI * cfg.lambda_e).powf(b)).powf(1.0 / b))
}

/// Lower bound on the mean out-degree when every legitimate node
/// neutralizes eavesdroppers within `rho_n`:
/// (λ_ℓ/λ_e)(πλ_e ρ_n² + e^{πλ_ℓ ρ_n²}).
pub fn mean_out_degree_neutralization_lb(rho_n: f64, lambda_l: f64, lambda_e: f64) -> Result<f64> {
    ensure(rho_n >= 0.0 && rho_n.is_finite(), || format!("neutralization radius must be ≥ 0 (got {rho_n})"))?;
    ensure(lambda_l > 0.0 && lambda_e >= 0.0, || format!("invalid densities ({lambda_l}, {lambda_e})"))?;
    if lambda_e == 0.0 {
        return Ok(f64::INFINITY);
    }
    let area = PI * rho_n * rho_n;
    Ok(lambda_l / lambda_e * (lambda_e * area + (lambda_l * area).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn cfg(rho: f64, snr: f64) -> NetworkConfig {
        NetworkConfig { lambda_l: 1.0, lambda_e: 0.1, p_l: snr, rho, ..NetworkConfig::default() }
    }

    #[test]
    fn zero_threshold_equal_noise() {
        let c = cfg(0.0, 5.0);
        assert!((mean_out_degree_thresholded(&c).unwrap() - 10.0).abs() < 1e-9);
        assert!((mean_out_degree_thresholded_bound(&c).unwrap() - 10.0).abs() < 1e-12);
        let noisy = NetworkConfig { sigma2_l: 2.0, ..c };
        let expect = 10.0 * 0.5f64.powf(0.5);
        assert!((mean_out_degree_thresholded(&noisy).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn high_snr_limit() {
        let c = cfg(1.5, 1e12);
        let limit = 10.0 * 2f64.powf(-1.5 / 2.0);
        assert!((mean_out_degree_thresholded(&c).unwrap() - limit).abs() < 1e-4);
        assert!((mean_out_degree_thresholded_bound(&c).unwrap() - limit).abs() < 1e-4);
    }

    #[test]
    fn matches_original_variable_form() {
        // π²λ_ℓλ_e ∫₀^∞ x e^{−πλ_e x} / (a + c x^b)^{1/b} dx, integrated on a finite range
        let c = NetworkConfig { rho: 1.0, p_l: 5.0, sigma2_e: 0.7, ..cfg(0.0, 1.0) };
        let (a, cc) = c.threshold_coefficients();
        let f = |x: f64| x * (-PI * 0.1 * x).exp() / (a + cc * x * x).sqrt();
        let direct = PI * PI * 0.1 * integrate(f, 0.0, 400.0, QuadConfig::tight()).unwrap().value;
        assert!((mean_out_degree_thresholded(&c).unwrap() - direct).abs() < 1e-8);
    }

    #[test]
    fn exact_below_bound_and_monotone() {
        for snr in [0.5, 5.0, 50.0] {
            let mut prev = f64::INFINITY;
            for rho in [0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
                let c = cfg(rho, snr);
                let e = mean_out_degree_thresholded(&c).unwrap();
                assert!(e <= mean_out_degree_thresholded_bound(&c).unwrap() * (1.0 + 1e-9));
                assert!(e <= prev);
                prev = e;
            }
        }
        let mut prev = f64::INFINITY;
        for s2 in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let e = mean_out_degree_thresholded(&NetworkConfig { sigma2_l: s2, ..cfg(1.0, 5.0) }).unwrap();
            assert!(e <= prev);
            prev = e;
        }
        let mut prev = 0.0;
        for s2 in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let e = mean_out_degree_thresholded(&NetworkConfig { sigma2_e: s2, ..cfg(1.0, 5.0) }).unwrap();
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn neutralization_bound_examples() {
        assert!((mean_out_degree_neutralization_lb(0.0, 1.0, 0.4).unwrap() - 2.5).abs() < 1e-15);
        let v = mean_out_degree_neutralization_lb(1.0, 1.0, 0.1).unwrap();
        assert!((v - 10.0 * (0.1 * PI + PI.exp())).abs() < 1e-12);
        assert!((v - 234.55).abs() < 0.01);
        let far = mean_out_degree_neutralization_lb(0.5, 1.0, 1e9).unwrap();
        assert!((far - PI * 0.25).abs() < 1e-6);
    }
}
