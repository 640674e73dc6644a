//! Channel gain functions and fading samplers.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GainKind {
    /// g(r, z) = z / r^{2b}
    Unbounded,
    /// g(r, z) = z / (1 + r^{2b})
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainModel {
    pub kind: GainKind,
    /// Amplitude loss exponent.
    pub b: f64,
}

impl GainModel {
    pub fn unbounded(b: f64) -> Self {
        Self { kind: GainKind::Unbounded, b }
    }

    pub fn bounded(b: f64) -> Self {
        Self { kind: GainKind::Bounded, b }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.b.is_finite() && self.b > 0.0, || format!("amplitude loss exponent b must be > 0 (got {})", self.b))
    }

    /// Deterministic part 1/g(r, 1), the path loss at distance r.
    pub fn path_loss(&self, r: f64) -> f64 {
        let p = r.powf(2.0 * self.b);
        match self.kind {
            GainKind::Unbounded => p,
            GainKind::Bounded => 1.0 + p,
        }
    }
}

/// Power gain g(r, z) under the given model.
pub fn gain(model: &GainModel, r: f64, z: f64) -> Result<f64> {
    model.validate()?;
    ensure(r.is_finite() && r >= 0.0, || format!("distance must be finite and ≥ 0 (got {r})"))?;
    ensure(z.is_finite() && z > 0.0, || format!("fading coefficient must be finite and > 0 (got {z})"))?;
    if r == 0.0 && model.kind == GainKind::Unbounded {
        return Err(Error::InvalidArgument("unbounded gain is singular at r = 0".into()));
    }
    Ok(z / model.path_loss(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingModel {
    None,
    /// Nakagami-m amplitude: power Z ~ Gamma(m, 1/m).
    Nakagami { m: f64 },
    /// Log-normal shadowing Z = exp(2 σ_s N).
    Lognormal { sigma_s: f64 },
    /// Product of independent Nakagami-m power and log-normal shadowing.
    NakagamiLognormal { m: f64, sigma_s: f64 },
}

impl FadingModel {
    pub fn validate(&self) -> Result<()> {
        let check_m = |m: f64| ensure(m.is_finite() && m > 0.0, || format!("Nakagami m must be > 0 (got {m})"));
        let check_s = |s: f64| ensure(s.is_finite() && s >= 0.0, || format!("σ_s must be ≥ 0 (got {s})"));
        match *self {
            FadingModel::None => Ok(()),
            FadingModel::Nakagami { m } => check_m(m),
            FadingModel::Lognormal { sigma_s } => check_s(sigma_s),
            FadingModel::NakagamiLognormal { m, sigma_s } => check_m(m).and(check_s(sigma_s)),
        }
    }

    /// Pre-validated sampler for repeated draws.
    pub fn sampler(&self) -> Result<FadingSampler> {
        self.validate()?;
        let gamma = |m: f64| Gamma::new(m, 1.0 / m).map_err(|e| Error::InvalidArgument(format!("gamma({m}): {e}")));
        Ok(match *self {
            FadingModel::None => FadingSampler { gamma: None, two_sigma: 0.0 },
            FadingModel::Nakagami { m } => FadingSampler { gamma: Some(gamma(m)?), two_sigma: 0.0 },
            FadingModel::Lognormal { sigma_s } => FadingSampler { gamma: None, two_sigma: 2.0 * sigma_s },
            FadingModel::NakagamiLognormal { m, sigma_s } => {
                FadingSampler { gamma: Some(gamma(m)?), two_sigma: 2.0 * sigma_s }
            }
        })
    }

    /// ln E{Z^k} for k > 0.
    pub fn ln_moment(&self, k: f64) -> f64 {
        let nak = |m: f64| ln_gamma(m + k) - ln_gamma(m) - k * m.ln();
        let ln = |s: f64| 2.0 * k * k * s * s;
        match *self {
            FadingModel::None => 0.0,
            FadingModel::Nakagami { m } => nak(m),
            FadingModel::Lognormal { sigma_s } => ln(sigma_s),
            FadingModel::NakagamiLognormal { m, sigma_s } => nak(m) + ln(sigma_s),
        }
    }

    /// Whether Z is identically 1.
    pub fn is_trivial(&self) -> bool {
        matches!(self, FadingModel::None | FadingModel::Lognormal { sigma_s: 0.0 })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FadingSampler {
    gamma: Option<Gamma<f64>>,
    two_sigma: f64,
}

impl FadingSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut z = match &self.gamma {
            Some(g) => g.sample(rng),
            None => 1.0,
        };
        if self.two_sigma > 0.0 {
            let n: f64 = StandardNormal.sample(rng);
            z *= (self.two_sigma * n).exp();
        }
        z
    }
}

/// One draw of the power fading coefficient Z.
pub fn sample_fading<R: Rng + ?Sized>(model: &FadingModel, rng: &mut R) -> Result<f64> {
    Ok(model.sampler()?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointprocess::StreamRng;
    use proptest::prelude::*;

    #[test]
    fn gain_examples() {
        assert_eq!(gain(&GainModel::unbounded(2.0), 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(gain(&GainModel::unbounded(2.0), 2.0, 1.0).unwrap(), 0.0625);
        assert_eq!(gain(&GainModel::bounded(1.0), 0.0, 1.0).unwrap(), 1.0);
        assert!(gain(&GainModel::unbounded(2.0), 0.0, 1.0).is_err());
        assert!(gain(&GainModel::unbounded(-1.0), 1.0, 1.0).is_err());
        assert!(gain(&GainModel::bounded(1.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn trivial_fading_is_one() {
        let mut rng = StreamRng::new(1, 0).generator();
        for _ in 0..10 {
            assert_eq!(sample_fading(&FadingModel::None, &mut rng).unwrap(), 1.0);
            assert_eq!(sample_fading(&FadingModel::Lognormal { sigma_s: 0.0 }, &mut rng).unwrap(), 1.0);
        }
        assert!(sample_fading(&FadingModel::Nakagami { m: 0.0 }, &mut rng).is_err());
        assert!(sample_fading(&FadingModel::Lognormal { sigma_s: -1.0 }, &mut rng).is_err());
    }

    #[test]
    fn rayleigh_power_is_unit_exponential() {
        let n = 100_000;
        let s = FadingModel::Nakagami { m: 1.0 }.sampler().unwrap();
        let mut rng = StreamRng::new(2, 0).generator();
        let mut z: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
        z.sort_by(f64::total_cmp);
        let mut ks: f64 = 0.0;
        for (i, v) in z.iter().enumerate() {
            let f = 1.0 - (-v).exp();
            ks = ks.max((f - i as f64 / n as f64).abs()).max(((i + 1) as f64 / n as f64 - f).abs());
        }
        // 1% critical value ≈ 1.63/√n
        assert!(ks < 1.63 / (n as f64).sqrt(), "ks {ks}");
    }

    #[test]
    fn nakagami_unit_mean() {
        let n = 1_000_000;
        for m in [0.5, 1.0, 3.0] {
            let s = FadingModel::Nakagami { m }.sampler().unwrap();
            let mut rng = StreamRng::new(3, 0).generator();
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for _ in 0..n {
                let z = s.sample(&mut rng);
                sum += z;
                sumsq += z * z;
            }
            let mean = sum / n as f64;
            let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
            assert!((mean - 1.0).abs() < 3.0 * se, "m={m}: {mean}");
        }
    }

    #[test]
    fn moments_match_closed_forms() {
        let m = FadingModel::Nakagami { m: 1.0 };
        assert!((m.ln_moment(3.0).exp() - 6.0).abs() < 1e-9);
        let l = FadingModel::Lognormal { sigma_s: 0.5 };
        assert!((l.ln_moment(1.0) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn gain_strictly_decreasing(r1 in 0.01f64..50.0, dr in 1e-3f64..10.0, z in 0.01f64..10.0,
                                    b in 0.5f64..4.0, bounded in any::<bool>()) {
            let model = if bounded { GainModel::bounded(b) } else { GainModel::unbounded(b) };
            let g1 = gain(&model, r1, z).unwrap();
            let g2 = gain(&model, r1 + dr, z).unwrap();
            prop_assert!(g1 > g2);
        }
    }
}
