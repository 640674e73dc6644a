//! Link secrecy rates and the iS-graph edge rules.

mod builders;
mod colluding;
mod graph;

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::propagation::{FadingModel, GainKind, GainModel};

pub use builders::{
    build_baseline, build_fading, build_neutralized, build_sectorized, build_thresholded, effective_eavesdroppers,
    sector_of, EavesIndex,
};
pub use colluding::{aggregate_power, colluding_msr, tail_mean};
pub use graph::ISGraph;

/// Densities, powers, threshold and channel model for one network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Legitimate node density (nodes/m²).
    pub lambda_l: f64,
    /// Eavesdropper density (nodes/m²).
    pub lambda_e: f64,
    /// Transmit power.
    pub p_l: f64,
    /// Noise power at legitimate receivers.
    pub sigma2_l: f64,
    /// Noise power at eavesdroppers.
    pub sigma2_e: f64,
    /// Secrecy rate threshold (bits per complex dimension).
    pub rho: f64,
    pub gain: GainModel,
    pub fading: FadingModel,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            lambda_l: 1.0,
            lambda_e: 0.1,
            p_l: 10.0,
            sigma2_l: 1.0,
            sigma2_e: 1.0,
            rho: 0.0,
            gain: GainModel::unbounded(2.0),
            fading: FadingModel::None,
        }
    }
}

impl NetworkConfig {
    /// Path-loss-only configuration with ϱ = 0 and equal noise powers.
    pub fn baseline(lambda_l: f64, lambda_e: f64) -> Self {
        Self { lambda_l, lambda_e, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| ensure(v.is_finite() && v > 0.0, || format!("{name} must be finite and > 0 (got {v})"));
        pos("lambda_l", self.lambda_l)?;
        ensure(self.lambda_e.is_finite() && self.lambda_e >= 0.0, || {
            format!("lambda_e must be finite and ≥ 0 (got {})", self.lambda_e)
        })?;
        pos("power", self.p_l)?;
        pos("sigma2_l", self.sigma2_l)?;
        pos("sigma2_e", self.sigma2_e)?;
        ensure(self.rho >= 0.0 && !self.rho.is_nan(), || format!("rho must be ≥ 0 (got {})", self.rho))?;
        self.gain.validate()?;
        self.fading.validate()
    }

    pub fn ratio(&self) -> f64 {
        self.lambda_l / self.lambda_e
    }

    pub fn snr_l(&self) -> f64 {
        self.p_l / self.sigma2_l
    }

    pub fn snr_e(&self) -> f64 {
        self.p_l / self.sigma2_e
    }

    /// Coefficients (a, c) of the thresholded edge rule
    /// g(d_ij) > a·g(d_ie*) + c.
    pub fn threshold_coefficients(&self) -> (f64, f64) {
        let two_rho = self.rho.exp2();
        let a = self.sigma2_l / self.sigma2_e * two_rho;
        let c = self.sigma2_l / self.p_l * (two_rho - 1.0);
        (a, c)
    }

    /// Largest legitimate distance that still gives a secure edge when the
    /// nearest eavesdropper is at `d_e` (no fading). Edges require d < range.
    pub fn secure_range(&self, d_e: f64) -> f64 {
        let (a, c) = self.threshold_coefficients();
        if a == 1.0 && c == 0.0 {
            return d_e;
        }
        let two_b = 2.0 * self.gain.b;
        match self.gain.kind {
            GainKind::Unbounded => {
                if d_e.is_infinite() {
                    return if c > 0.0 { c.powf(-1.0 / two_b) } else { f64::INFINITY };
                }
                d_e / (a + c * d_e.powf(two_b)).powf(1.0 / two_b)
            }
            GainKind::Bounded => {
                let t = a / (1.0 + d_e.powf(two_b)) + c;
                if t >= 1.0 {
                    0.0
                } else if t == 0.0 {
                    f64::INFINITY
                } else {
                    (1.0 / t - 1.0).powf(1.0 / two_b)
                }
            }
        }
    }
}

/// Secrecy rate of a Gaussian wiretap link,
/// [log₂(1 + P_ℓ/σ_ℓ²) − log₂(1 + P_e/σ_e²)]⁺, with received powers P_ℓ, P_e.
pub fn msr_link(prx_legit: f64, prx_eave: f64, sigma2_l: f64, sigma2_e: f64) -> Result<f64> {
    for (name, v) in [("prx_legit", prx_legit), ("prx_eave", prx_eave)] {
        ensure(v >= 0.0 && !v.is_nan(), || format!("{name} must be ≥ 0 (got {v})"))?;
    }
    for (name, v) in [("sigma2_l", sigma2_l), ("sigma2_e", sigma2_e)] {
        ensure(v.is_finite() && v > 0.0, || format!("{name} must be finite and > 0 (got {v})"))?;
    }
    ensure(prx_legit.is_finite(), || "prx_legit must be finite".into())?;
    let cl = (prx_legit / sigma2_l).ln_1p();
    let ce = (prx_eave / sigma2_e).ln_1p();
    Ok(((cl - ce) / LN_2).max(0.0))
}

/// Sector offset policy for sectorized transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum SectorOffsets {
    /// Independent uniform offsets in [0, 2π/L) per source.
    IidUniform,
    /// The same offset (radians) for every source.
    Fixed { angle: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorConfig {
    pub sectors: usize,
    pub offsets: SectorOffsets,
}

impl SectorConfig {
    pub fn new(sectors: usize) -> Self {
        Self { sectors, offsets: SectorOffsets::IidUniform }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.sectors >= 1, || "sector count L must be ≥ 1".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeutralizationConfig {
    /// Neutralization radius around each legitimate node (m).
    pub radius: f64,
}

impl NeutralizationConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.radius >= 0.0 && self.radius.is_finite(), || {
            format!("neutralization radius must be finite and ≥ 0 (got {})", self.radius)
        })
    }
}
