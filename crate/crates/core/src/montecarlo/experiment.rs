use serde::{Deserialize, Serialize};

use super::{
    empirical_cdf, estimate_colluding_mean_degree, estimate_colluding_msr_cdf, estimate_colluding_power,
    estimate_in_degree_pmf, estimate_isolation, estimate_msr_neighbor, estimate_neutralization_mean,
    estimate_out_degree_pmf, estimate_sector_pmf, estimate_thresholded_mean, estimate_voronoi_moments, DegreeEstimate,
    Estimate,
};
use crate::error::{ensure, Error, Result};
use crate::secrecy::NetworkConfig;

/// One point of an estimated curve: a PMF entry, a moment or a CDF value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub estimate: Estimate,
}

/// Experiment selector with its variant knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentKind {
    OutDegreePmf,
    InDegreePmf,
    Isolation,
    VoronoiMoments { k_max: u32 },
    ThresholdedMean,
    SectorPmf { sectors: u32 },
    NeutralizationMean { radius: f64 },
    MsrCdfNeighbor { i: u32, rho_grid: Vec<f64> },
    ColludingPower,
    ColludingMsrCdf { r_l: f64, rho_grid: Vec<f64> },
    ColludingMeanDegree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub cfg: NetworkConfig,
    pub trials: u64,
    pub base_seed: u64,
}

/// Headline estimate plus an optional curve.
///
/// | kind | primary | curve |
/// |---|---|---|
/// | degree PMFs | mean degree | P{N = n} |
/// | isolation | P{N_in = 0} (direct) | out, in-direct, in-area at x = 0, 1, 2 |
/// | voronoi moments | E{Ã} | E{Ã^k} at x = k |
/// | thresholded, neutralization, colluding degree | mean degree | empty |
/// | neighbour and colluding rate CDFs | P{C_s > 0} | CDF on the ϱ grid |
/// | colluding power | E{P_e^{−α}} | empty |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub primary: Estimate,
    pub curve: Vec<CurvePoint>,
}

fn pmf_outcome(d: DegreeEstimate) -> Outcome {
    let curve = d
        .pmf
        .probs
        .iter()
        .zip(&d.pmf_se)
        .enumerate()
        .map(|(n, (&p, &se))| CurvePoint {
            x: n as f64,
            estimate: Estimate { value: p, std_error: se, trials: d.mean.trials, bias_note: None },
        })
        .collect();
    Outcome { primary: d.mean, curve }
}

fn scalar(e: Estimate) -> Outcome {
    Outcome { primary: e, curve: Vec::new() }
}

/// Runs the experiment described by `spec`.
pub fn estimate_generic(spec: &ExperimentSpec) -> Result<Outcome> {
    ensure(spec.trials >= 1, || "trials must be ≥ 1".into())?;
    let (cfg, n, seed) = (&spec.cfg, spec.trials, spec.base_seed);
    Ok(match &spec.kind {
        ExperimentKind::OutDegreePmf => pmf_outcome(estimate_out_degree_pmf(cfg, n, seed)?),
        ExperimentKind::InDegreePmf => pmf_outcome(estimate_in_degree_pmf(cfg, n, seed)?),
        ExperimentKind::SectorPmf { sectors } => pmf_outcome(estimate_sector_pmf(cfg, *sectors, n, seed)?),
        ExperimentKind::Isolation => {
            let iso = estimate_isolation(cfg, n, seed)?;
            let curve = [iso.p_out.clone(), iso.p_in_direct.clone(), iso.p_in_area]
                .into_iter()
                .enumerate()
                .map(|(k, estimate)| CurvePoint { x: k as f64, estimate })
                .collect();
            Outcome { primary: iso.p_in_direct, curve }
        }
        ExperimentKind::VoronoiMoments { k_max } => {
            let v = estimate_voronoi_moments(*k_max, n, seed)?;
            let curve: Vec<CurvePoint> = v
                .moments
                .into_iter()
                .enumerate()
                .map(|(k, estimate)| CurvePoint { x: (k + 1) as f64, estimate })
                .collect();
            Outcome { primary: curve[0].estimate.clone(), curve }
        }
        ExperimentKind::ThresholdedMean => scalar(estimate_thresholded_mean(cfg, n, seed)?),
        ExperimentKind::NeutralizationMean { radius } => scalar(estimate_neutralization_mean(cfg, *radius, n, seed)?),
        ExperimentKind::ColludingMeanDegree => scalar(estimate_colluding_mean_degree(cfg, n, seed)?),
        ExperimentKind::MsrCdfNeighbor { i, rho_grid } => {
            let s = estimate_msr_neighbor(cfg, *i, n, seed)?;
            Outcome { primary: s.p_exist, curve: empirical_cdf(&s.samples, rho_grid)? }
        }
        ExperimentKind::ColludingMsrCdf { r_l, rho_grid } => {
            let grid: Vec<f64> = std::iter::once(0.0).chain(rho_grid.iter().copied()).collect();
            let mut curve = estimate_colluding_msr_cdf(cfg, *r_l, &grid, n, seed)?.colluding;
            let at_zero = curve.remove(0).estimate;
            Outcome { primary: Estimate { value: 1.0 - at_zero.value, ..at_zero }, curve }
        }
        ExperimentKind::ColludingPower => {
            let s = estimate_colluding_power(cfg, n, seed)?;
            let primary = s
                .neg_moment
                .ok_or_else(|| Error::InvalidArgument("colluding power experiment needs lambda_e > 0".into()))?;
            scalar(primary)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: ExperimentKind, cfg: NetworkConfig) -> ExperimentSpec {
        ExperimentSpec { kind, cfg, trials: 4000, base_seed: 17 }
    }

    #[test]
    fn dispatch_shapes() {
        let cfg = NetworkConfig::baseline(1.0, 0.5);
        let out = estimate_generic(&spec(ExperimentKind::OutDegreePmf, cfg)).unwrap();
        assert!(out.curve.len() > 3);
        let v = estimate_generic(&spec(ExperimentKind::VoronoiMoments { k_max: 3 }, cfg)).unwrap();
        assert_eq!(v.curve.len(), 3);
        let m = estimate_generic(&spec(ExperimentKind::MsrCdfNeighbor { i: 1, rho_grid: vec![0.0, 1.0] }, cfg)).unwrap();
        assert_eq!(m.curve.len(), 2);
        assert!((m.primary.value + m.curve[0].estimate.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reproducible_and_serializable() {
        let s = spec(ExperimentKind::SectorPmf { sectors: 2 }, NetworkConfig::baseline(1.0, 1.0));
        assert_eq!(estimate_generic(&s).unwrap(), estimate_generic(&s).unwrap());
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentSpec>(&text).unwrap(), s);
        let zero = ExperimentSpec { trials: 0, ..s };
        assert!(estimate_generic(&zero).is_err());
    }
}
