use std::f64::consts::{LN_2, PI};

use crate::error::{ensure, Result};
use crate::propagation::GainKind;
use crate::quad::tanh_sinh;
use crate::secrecy::NetworkConfig;
use crate::special::ln_gamma;

/// CDF of the secrecy rate from a node to its i-th nearest legitimate
/// neighbour, in the presence of the nearest eavesdropper.
///
/// P{C_s ≤ ϱ} = 1 − ∫_ϱ^∞ f_ℓ(z) · P{C_e < z − ϱ} dz, where the legitimate
/// capacity density follows from the Erlang law of the i-th neighbour
/// distance and the eavesdropper capacity from the exponential law of the
/// nearest eavesdropper distance:
///
/// f_ℓ(z) = ln2 (πλ_ℓ)^i / ((i−1)! b) · SNR_ℓ^{i/b} · 2^z / (2^z − 1)^{1+i/b}
///          · exp(−πλ_ℓ (SNR_ℓ/(2^z − 1))^{1/b}),
/// P{C_e < y} = exp(−πλ_e (SNR_e/(2^y − 1))^{1/b}),
///
/// with SNR_ℓ = P_ℓ/σ_ℓ² and SNR_e = P_ℓ/σ_e². The integral is mapped to
/// (0, 1) by z = ϱ + t/(1−t) and evaluated with tanh–sinh quadrature.
pub fn cdf_msr_neighbor(rho: f64, i: u32, cfg: &NetworkConfig) -> Result<f64> {
    cfg.validate()?;
    ensure(cfg.gain.kind == GainKind::Unbounded, || "neighbour rate CDF requires the unbounded gain".into())?;
    ensure(i >= 1, || "neighbour index must be ≥ 1".into())?;
    ensure(!rho.is_nan(), || "rho is NaN".into())?;
    if rho < 0.0 {
        return Ok(0.0);
    }
    if rho == f64::INFINITY {
        return Ok(1.0);
    }
    let b = cfg.gain.b;
    let fi = i as f64;
    let (snr_l, snr_e) = (cfg.snr_l(), cfg.snr_e());
    let ln_k = LN_2.ln() + fi * (PI * cfg.lambda_l).ln() - ln_gamma(fi) - b.ln() + fi / b * snr_l.ln();
    let integrand = |z: f64| {
        let em1 = (z * LN_2).exp_m1();
        let em1_e = ((z - rho) * LN_2).exp_m1();
        if em1 <= 0.0 || em1_e <= 0.0 {
            return 0.0;
        }
        let log_f = ln_k + z * LN_2 - (1.0 + fi / b) * em1.ln()
            - PI * cfg.lambda_l * (snr_l / em1).powf(1.0 / b)
            - PI * cfg.lambda_e * (snr_e / em1_e).powf(1.0 / b);
        log_f.exp()
    };
    let mapped = |t: f64| {
        let s = 1.0 - t;
        let v = integrand(rho + t / s) / (s * s);
        if v.is_finite() { v } else { 0.0 }
    };
    let survival = tanh_sinh(mapped, 0.0, 1.0, 1e-11)?.value;
    Ok((1.0 - survival).clamp(0.0, 1.0))
}

/// Probability that the i-th nearest neighbour link has non-zero secrecy
/// rate: (λ_ℓ/(λ_ℓ + λ_e))^i.
pub fn p_exist_neighbor(i: u32, lambda_l: f64, lambda_e: f64) -> Result<f64> {
    ensure(i >= 1, || "neighbour index must be ≥ 1".into())?;
    ensure(lambda_l > 0.0 && lambda_e >= 0.0, || format!("invalid densities ({lambda_l}, {lambda_e})"))?;
    Ok((lambda_l / (lambda_l + lambda_e)).powi(i as i32))
}

/// Probability that the secrecy rate to the i-th neighbour falls below ϱ.
pub fn p_outage_neighbor(rho: f64, i: u32, cfg: &NetworkConfig) -> Result<f64> {
    cdf_msr_neighbor(rho, i, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_with_breaks, QuadConfig};

    fn fig_cfg() -> NetworkConfig {
        NetworkConfig { lambda_l: 1.0, lambda_e: 0.1, p_l: 10.0, ..NetworkConfig::default() }
    }

    /// Same probability integrated over the squared neighbour distance
    /// u = R_ℓ,i² on the finite range where the link can beat ϱ.
    fn cdf_distance_form(rho: f64, i: u32, cfg: &NetworkConfig) -> f64 {
        let b = cfg.gain.b;
        let (snr_l, snr_e) = (cfg.snr_l(), cfg.snr_e());
        let rate = PI * cfg.lambda_l;
        let u_max = (snr_l / (rho.exp2() - 1.0)).powf(1.0 / b);
        let u_max = if u_max.is_finite() { u_max } else { 200.0 / rate };
        let f = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let erlang = (i as f64 * rate.ln() + (i as f64 - 1.0) * u.ln() - rate * u - ln_gamma(i as f64)).exp();
            let slack = (1.0 + snr_l * u.powf(-b)) * (-rho).exp2() - 1.0;
            if slack <= 0.0 {
                return 0.0;
            }
            erlang * (-PI * cfg.lambda_e * (snr_e / slack).powf(1.0 / b)).exp()
        };
        let breaks: Vec<f64> = (0..=64).map(|k| u_max * k as f64 / 64.0).collect();
        let cfg_q = QuadConfig { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 };
        1.0 - integrate_with_breaks(&mut { f }, &breaks, cfg_q).unwrap().value
    }

    #[test]
    fn support_limits() {
        let c = fig_cfg();
        assert_eq!(cdf_msr_neighbor(-0.5, 1, &c).unwrap(), 0.0);
        assert_eq!(cdf_msr_neighbor(f64::INFINITY, 1, &c).unwrap(), 1.0);
        assert!(cdf_msr_neighbor(80.0, 1, &c).unwrap() > 1.0 - 1e-11);
        assert!(cdf_msr_neighbor(1.0, 0, &c).is_err());
    }

    #[test]
    fn zero_threshold_gives_existence_probability() {
        let c = fig_cfg();
        for i in [1, 2, 4, 6] {
            let at_zero = 1.0 - cdf_msr_neighbor(0.0, i, &c).unwrap();
            assert!((at_zero - p_exist_neighbor(i, 1.0, 0.1).unwrap()).abs() < 1e-8, "i={i}");
        }
        assert!((p_exist_neighbor(4, 1.0, 0.25).unwrap() - 0.4096).abs() < 1e-15);
        assert_eq!(p_exist_neighbor(1, 1.0, 1.0).unwrap(), 0.5);
        assert_eq!(p_exist_neighbor(3, 1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn matches_distance_domain_integral() {
        for (snr_e_scale, i) in [(1.0, 1), (1.0, 3), (0.5, 2), (2.0, 1)] {
            let c = NetworkConfig { sigma2_e: snr_e_scale, ..fig_cfg() };
            for rho in [0.0, 0.3, 1.0, 2.0, 3.0, 5.0] {
                let a = cdf_msr_neighbor(rho, i, &c).unwrap();
                let b = cdf_distance_form(rho, i, &c);
                assert!((a - b).abs() < 1e-8, "i={i} ρ={rho}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn nondecreasing_in_rho() {
        let c = fig_cfg();
        for i in [1, 2, 4] {
            let mut prev = 0.0;
            for k in 0..60 {
                let v = cdf_msr_neighbor(k as f64 * 0.1, i, &c).unwrap();
                assert!(v + 1e-10 >= prev);
                prev = v;
            }
        }
    }
}
