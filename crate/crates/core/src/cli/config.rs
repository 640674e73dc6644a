use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::propagation::{FadingModel, GainKind, GainModel};
use crate::secrecy::NetworkConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FadingKind {
    #[default]
    None,
    Nakagami,
    Lognormal,
    NakagamiLognormal,
}

/// Flat run configuration, loadable from TOML. Every key is optional in the
/// file; CLI flags override file values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Subcommand name; checked against the invoked subcommand when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    pub lambda_l: f64,
    pub lambda_e: f64,
    pub b: f64,
    pub gain: GainKind,
    pub power: f64,
    pub sigma2_l: f64,
    pub sigma2_e: f64,
    pub rho: f64,
    pub fading: FadingKind,
    pub nakagami_m: f64,
    pub sigma_s: f64,
    /// Trials per estimate; each experiment has its own default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Transmission sectors L.
    pub sectors: u32,
    /// Neighbour rank i for the secrecy-rate experiment.
    pub neighbor: u32,
    /// Legitimate link length r_ℓ for the colluding experiment.
    pub link_length: f64,
    /// Sweep values (meaning depends on the experiment); empty means default.
    pub grid: Vec<f64>,
    /// Amplitude loss exponent sweep "start:stop:step" for `collude`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_b: Option<String>,
    pub k_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            lambda_l: 1.0,
            lambda_e: 0.1,
            b: 2.0,
            gain: GainKind::Unbounded,
            power: 10.0,
            sigma2_l: 1.0,
            sigma2_e: 1.0,
            rho: 0.0,
            fading: FadingKind::None,
            nakagami_m: 1.0,
            sigma_s: 1.0,
            trials: None,
            seed: None,
            out: None,
            format: OutputFormat::Csv,
            sectors: 4,
            neighbor: 1,
            link_length: 1.0,
            grid: Vec::new(),
            sweep_b: None,
            k_max: 4,
        }
    }
}

impl RunConfig {
    pub fn network(&self) -> Result<NetworkConfig> {
        let fading = match self.fading {
            FadingKind::None => FadingModel::None,
            FadingKind::Nakagami => FadingModel::Nakagami { m: self.nakagami_m },
            FadingKind::Lognormal => FadingModel::Lognormal { sigma_s: self.sigma_s },
            FadingKind::NakagamiLognormal => FadingModel::NakagamiLognormal { m: self.nakagami_m, sigma_s: self.sigma_s },
        };
        let cfg = NetworkConfig {
            lambda_l: self.lambda_l,
            lambda_e: self.lambda_e,
            p_l: self.power,
            sigma2_l: self.sigma2_l,
            sigma2_e: self.sigma2_e,
            rho: self.rho,
            gain: GainModel { kind: self.gain, b: self.b },
            fading,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.network()?;
        ensure(self.trials != Some(0), || "trials must be ≥ 1".into())?;
        ensure(self.sectors >= 1, || "sectors must be ≥ 1".into())?;
        ensure(self.neighbor >= 1, || "neighbor must be ≥ 1".into())?;
        ensure(self.link_length > 0.0 && self.link_length.is_finite(), || {
            format!("link_length must be finite and > 0 (got {})", self.link_length)
        })?;
        ensure(self.grid.iter().all(|g| g.is_finite()), || "grid values must be finite".into())?;
        ensure((1..=6).contains(&self.k_max), || format!("k_max must be in 1..=6 (got {})", self.k_max))?;
        if let Some(s) = &self.sweep_b {
            parse_sweep(s)?;
        }
        Ok(())
    }

    /// Copy used for the echo in output files: the output path is dropped so
    /// that identical runs written to different paths stay byte-identical.
    pub fn echo(&self) -> Self {
        Self { out: None, ..self.clone() }
    }
}

/// Parses "start:stop:step" into the inclusive list of values.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidArgument(format!("sweep must be start:stop:step (got {s:?})"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
    let (start, stop, step) = (v[0], v[1], v[2]);
    ensure(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite(), || {
        format!("sweep needs step > 0 and stop ≥ start (got {s:?})")
    })?;
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    ensure(n < 100_000, || format!("sweep {s:?} has too many points"))?;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// Serializes a configuration as TOML.
pub fn emit_config(cfg: &RunConfig) -> Result<String> {
    toml::to_string(cfg).map_err(|e| Error::InvalidArgument(format!("cannot serialize config: {e}")))
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::InvalidArgument(format!("config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads, parses and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::InvalidArgument(format!("{}: {m}", path.display())),
        other => other,
    })
}
