//! The acceptance suite: each criterion runs its experiment at full scale and
//! checks the stated tolerance. Shared by the `selftest` subcommand and the
//! acceptance test target.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::analytic::{
    c_alpha, cdf_msr_colluding, cdf_msr_neighbor, cdf_msr_noncolluding_link, colluding_power_law, legit_capacity,
    mean_degree_colluding, mean_out_degree_neutralization_lb, mean_out_degree_thresholded,
    mean_out_degree_thresholded_bound, moments_in_degree, p_exist_neighbor, pmf_out_degree, pmf_out_degree_sectored,
    DegreePmf, VoronoiMoments,
};
use crate::error::Result;
use crate::montecarlo::{
    derive_seed, estimate_colluding_mean_degree, estimate_colluding_power, estimate_generic, estimate_in_degree_pmf,
    estimate_isolation, estimate_msr_neighbor, estimate_neutralization_mean, estimate_out_degree_pmf,
    estimate_sector_pmf, estimate_thresholded_mean, estimate_voronoi_moments, ks_statistic_parallel, run_trials, tv_distance, ExperimentKind, ExperimentSpec,
};
use crate::propagation::{FadingModel, GainModel};
use crate::secrecy::NetworkConfig;
use crate::special::{q_function, sinc};
use crate::stable::{cdf_normalized_inversion, mellin_neg_moment, StableCdfTable, StableParams, StableSampler};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {:>2} {:<28} {} ({:.1} s)", self.id, self.name, self.detail, self.elapsed.as_secs_f64())
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

/// Criterion ids, names and checks, in order.
pub const CRITERIA: &[(u32, &str, Check)] = &[
    (1, "out-degree law", out_degree_law),
    (2, "voronoi moments", voronoi_moments),
    (3, "in-degree second moment", in_degree_moment),
    (4, "isolation ordering", isolation_ordering),
    (5, "fading invariance", fading_invariance),
    (6, "thresholded mean degree", thresholded_mean),
    (7, "sectorized degree", sectors),
    (8, "neutralization bound", neutralization),
    (9, "neighbour secrecy rate", neighbour_msr),
    (10, "stable numerics", stable_numerics),
    (11, "colluding power law", colluding_power),
    (12, "colluding degree", colluding_degree),
    (13, "colluding vs non-colluding", colluding_outage),
    (14, "thread determinism", determinism),
];

/// Runs one criterion. Library errors count as failures.
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionResult> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (pass, detail) = match check(derive_seed(seed, id as u64)) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult { id, name, pass, detail, elapsed: start.elapsed() })
}

/// Runs every criterion, calling `report` as each finishes.
pub fn run_all(seed: u64, mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter_map(|c| {
            let r = run_criterion(c.0, seed)?;
            report(&r);
            Some(r)
        })
        .collect()
}

fn geometric(lambda_l: f64, lambda_e: f64) -> DegreePmf {
    DegreePmf::from_fn(|n| pmf_out_degree(n, lambda_l, lambda_e).unwrap_or(0.0), 1_000_000)
}

fn out_degree_law(seed: u64) -> Result<(bool, String)> {
    let start = Instant::now();
    let est = estimate_out_degree_pmf(&NetworkConfig::baseline(1.0, 0.4), 100_000, seed)?;
    let secs = start.elapsed().as_secs_f64();
    let tv = tv_distance(&est.pmf.probs, &geometric(1.0, 0.4).probs);
    let z = (est.mean.value - 2.5) / est.mean.std_error;
    let pass = tv < 0.01 && z.abs() <= 3.0 && secs < 10.0;
    Ok((pass, format!("TV {tv:.4} < 0.01, mean {:.4} ({z:+.2} SE), {secs:.2} s < 10 s", est.mean.value)))
}

fn voronoi_moments(seed: u64) -> Result<(bool, String)> {
    let start = Instant::now();
    let est = estimate_voronoi_moments(4, 100_000, seed)?;
    let secs = start.elapsed().as_secs_f64();
    let table = VoronoiMoments::table();
    let tol = [0.01, 0.05, 0.05, 0.08];
    let mut pass = secs < 300.0;
    let mut parts = Vec::new();
    for k in 0..4 {
        let rel = est.moments[k].relative_error(table.moments[k]);
        pass &= rel < tol[k];
        parts.push(format!("E[A^{}] {:.4} ({:.2}% < {}%)", k + 1, est.moments[k].value, 100.0 * rel, 100.0 * tol[k]));
    }
    Ok((pass, format!("{}, {secs:.1} s", parts.join(", "))))
}

fn in_degree_moment(seed: u64) -> Result<(bool, String)> {
    let est = estimate_in_degree_pmf(&NetworkConfig::baseline(1.0, 1.0), 100_000, seed)?;
    let second: f64 = est.pmf.probs.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
    let target = moments_in_degree(2, 1.0, &VoronoiMoments::table())?;
    let rel = (second - target) / target;
    Ok((rel.abs() < 0.05, format!("E[N_in^2] {second:.4} vs {target:.3} ({:+.2}% within 5%)", 100.0 * rel)))
}

fn isolation_ordering(seed: u64) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, le) in [0.25, 0.5, 1.0, 2.0, 4.0].into_iter().enumerate() {
        let iso = estimate_isolation(&NetworkConfig::baseline(1.0, le), 100_000, derive_seed(seed, k as u64))?;
        let gap = iso.p_out.value - iso.p_in_direct.value;
        let se = iso.p_out.std_error.hypot(iso.p_in_direct.std_error);
        pass &= gap > 3.0 * se;
        parts.push(format!("{le}: {:.4} > {:.4} ({:.1} SE)", iso.p_out.value, iso.p_in_direct.value, gap / se));
    }
    Ok((pass, format!("p_out > p_in at λe/λl {}", parts.join("; "))))
}

fn fading_invariance(seed: u64) -> Result<(bool, String)> {
    let models = [
        ("none", FadingModel::None),
        ("nakagami(1)", FadingModel::Nakagami { m: 1.0 }),
        ("nakagami(3)", FadingModel::Nakagami { m: 3.0 }),
        ("lognormal(1)", FadingModel::Lognormal { sigma_s: 1.0 }),
    ];
    let geo = geometric(1.0, 0.4);
    let mut pmfs = Vec::new();
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, (name, fading)) in models.iter().enumerate() {
        let cfg = NetworkConfig { fading: *fading, ..NetworkConfig::baseline(1.0, 0.4) };
        let est = estimate_out_degree_pmf(&cfg, 100_000, derive_seed(seed, k as u64))?;
        let tv = tv_distance(&est.pmf.probs, &geo.probs);
        pass &= tv < 0.01;
        parts.push(format!("{name} {tv:.4}"));
        pmfs.push(est.pmf.probs);
    }
    let mut pair_max: f64 = 0.0;
    for i in 0..pmfs.len() {
        for j in i + 1..pmfs.len() {
            pair_max = pair_max.max(tv_distance(&pmfs[i], &pmfs[j]));
        }
    }
    pass &= pair_max < 0.015;
    Ok((pass, format!("TV to geometric {} (< 0.01); max pairwise {pair_max:.4} (< 0.015)", parts.join(", "))))
}

fn thresholded_mean(seed: u64) -> Result<(bool, String)> {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut k = 0;
    for snr in [0.5, 5.0] {
        for rho in [0.0, 0.5, 1.0, 2.0, 4.0] {
            let cfg = NetworkConfig { p_l: snr, rho, ..NetworkConfig::baseline(1.0, 0.1) };
            let exact = mean_out_degree_thresholded(&cfg)?;
            pass &= exact <= mean_out_degree_thresholded_bound(&cfg)? * (1.0 + 1e-12);
            let sim = estimate_thresholded_mean(&cfg, 400_000, derive_seed(seed, k))?;
            k += 1;
            let rel = sim.relative_error(exact);
            worst = worst.max(rel);
            pass &= rel < 0.03;
        }
    }
    let mut zero_err: f64 = 0.0;
    for s2e in [0.5, 1.0, 2.0] {
        let cfg = NetworkConfig { sigma2_e: s2e, p_l: 5.0, ..NetworkConfig::baseline(1.0, 0.1) };
        zero_err = zero_err.max((mean_out_degree_thresholded(&cfg)? - 10.0 * s2e.sqrt()).abs());
    }
    pass &= zero_err < 1e-6;
    Ok((pass, format!("worst relative gap {:.2}% < 3%, bound respected, ϱ = 0 error {zero_err:.1e}", 100.0 * worst)))
}

fn sectors(seed: u64) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for l in [1u32, 2, 4, 8] {
        let est = estimate_sector_pmf(&NetworkConfig::baseline(1.0, 1.0), l, 100_000, derive_seed(seed, l as u64))?;
        let nb = DegreePmf::from_fn(|n| pmf_out_degree_sectored(n, l, 1.0, 1.0).unwrap_or(0.0), 1_000_000);
        let tv = tv_distance(&est.pmf.probs, &nb.probs);
        let z = (est.mean.value - l as f64) / est.mean.std_error;
        pass &= tv < 0.015 && z.abs() <= 3.0;
        parts.push(format!("L={l} TV {tv:.4} mean {z:+.2} SE"));
    }
    Ok((pass, parts.join("; ")))
}

/// Trials per neutralization grid point. The simulated mean exceeds the
/// lower bound by under 1% at small radii, so those points need many cheap
/// trials; at large radii the gap is about 5% but each trial generates
/// thousands of points.
pub fn neutralization_trials(radius: f64) -> u64 {
    match radius {
        r if r == 0.0 => 100_000,
        r if r <= 0.25 => 500_000,
        r if r <= 0.5 => 50_000,
        _ => 20_000,
    }
}

fn neutralization(seed: u64) -> Result<(bool, String)> {
    let mut pass = true;
    let mut min_margin = f64::INFINITY;
    let mut zero_parts = Vec::new();
    for (i, le) in [0.1, 0.2, 0.5].into_iter().enumerate() {
        let cfg = NetworkConfig::baseline(1.0, le);
        for j in 0..=6 {
            let radius = 0.25 * j as f64;
            let trials = neutralization_trials(radius);
            let est = estimate_neutralization_mean(&cfg, radius, trials, derive_seed(seed, (10 * i + j) as u64))?;
            let bound = mean_out_degree_neutralization_lb(radius, 1.0, le)?;
            if j == 0 {
                // the bound is exact here, so compare statistically
                let z = (est.value - bound) / est.std_error;
                pass &= z.abs() <= 3.0;
                zero_parts.push(format!("{z:+.2}"));
            } else {
                min_margin = min_margin.min(est.value / bound);
                pass &= est.value >= bound;
            }
        }
    }
    Ok((pass, format!("min sim/bound over ρ_n > 0 {min_margin:.4} ≥ 1; ρ_n = 0 offsets {} SE", zero_parts.join(", "))))
}

fn neighbour_msr(seed: u64) -> Result<(bool, String)> {
    let cfg = NetworkConfig::baseline(1.0, 0.1);
    let mut pass = true;
    let mut parts = Vec::new();
    for i in [1u32, 2, 4, 6] {
        let s = estimate_msr_neighbor(&cfg, i, 100_000, derive_seed(seed, i as u64))?;
        let z = (s.p_exist.value - p_exist_neighbor(i, 1.0, 0.1)?) / s.p_exist.std_error;
        let ks = ks_statistic_parallel(&s.samples, |x| cdf_msr_neighbor(x, i, &cfg), true)?;
        pass &= z.abs() <= 3.0 && ks < 0.02;
        parts.push(format!("i={i} p_exist {z:+.2} SE, KS {ks:.4}"));
    }
    Ok((pass, format!("{} (KS < 0.02)", parts.join("; "))))
}

fn stable_numerics(seed: u64) -> Result<(bool, String)> {
    let mut q_err: f64 = 0.0;
    for k in 0..=600 {
        let x = 10f64.powf(-3.0 + k as f64 * 0.01);
        q_err = q_err.max((cdf_normalized_inversion(x, 0.5)? - 2.0 * q_function(1.0 / x.sqrt())).abs());
    }
    let mut ks_parts = Vec::new();
    let mut ks_max: f64 = 0.0;
    for (k, alpha) in [0.5, 1.0 / 3.0].into_iter().enumerate() {
        let sampler = StableSampler::new(&StableParams::one_sided(alpha, 1.0)?)?;
        let mut xs = run_trials(derive_seed(seed, k as u64), 2_000_000, |rng| Ok(sampler.sample(rng)))?;
        xs.sort_by(f64::total_cmp);
        let table = StableCdfTable::covering(alpha)?;
        let ks = ks_statistic_parallel(&xs, |x| table.eval(x), false)?;
        ks_max = ks_max.max(ks);
        ks_parts.push(format!("{ks:.5}"));
    }
    let mut mellin_err: f64 = 0.0;
    for alpha in [0.2, 1.0 / 3.0, 0.5, 0.75] {
        mellin_err = mellin_err.max((c_alpha(alpha)? * mellin_neg_moment(alpha)? - sinc(alpha)).abs());
    }
    let pass = q_err < 1e-6 && ks_max < 0.002 && mellin_err < 1e-9;
    Ok((
        pass,
        format!(
            "max |F − 2Q| {q_err:.1e} < 1e-6, CMS KS {} < 0.002, Mellin error {mellin_err:.1e} < 1e-9",
            ks_parts.join("/")
        ),
    ))
}

fn colluding_power(seed: u64) -> Result<(bool, String)> {
    let cfg = NetworkConfig::default();
    let law = colluding_power_law(&cfg)?;
    let expect_gamma = PI * 0.1 / c_alpha(0.5)? * 10f64.sqrt();
    let s = estimate_colluding_power(&cfg, 100_000, seed)?;
    let table = StableCdfTable::covering(law.alpha)?;
    let scale = law.gamma.powf(1.0 / law.alpha);
    let ks = ks_statistic_parallel(&s.sorted(), |x| table.eval(x / scale), false)?;
    let dominated = s.colluding.iter().zip(&s.noncolluding).all(|(c, n)| c >= n);
    let pass = ks < 0.01 && (law.gamma - expect_gamma).abs() < 1e-12 && dominated;
    Ok((pass, format!("γ = {:.6}, KS {ks:.4} < 0.01, colluding ≥ nearest in every trial: {dominated}", law.gamma)))
}

fn colluding_degree(seed: u64) -> Result<(bool, String)> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, b) in [1.5, 2.0, 3.0, 4.0, 6.0].into_iter().enumerate() {
        let cfg = NetworkConfig { gain: GainModel::unbounded(b), ..NetworkConfig::baseline(1.0, 0.1) };
        let est = estimate_colluding_mean_degree(&cfg, 100_000, derive_seed(seed, k as u64))?;
        let eta = est.value / cfg.ratio();
        let rel = (eta - sinc(1.0 / b)) / sinc(1.0 / b);
        pass &= rel.abs() < 0.03;
        parts.push(format!("b={b} {eta:.4} ({:+.2}%)", 100.0 * rel));
    }
    let at2 = mean_degree_colluding(1.0, 0.1, 2.0)? / 10.0;
    pass &= (at2 - 0.6366).abs() < 5e-5;
    Ok((pass, format!("η(b) vs sinc(1/b) within 3%: {}; η(2) = {at2:.4}", parts.join(", "))))
}

fn colluding_outage(seed: u64) -> Result<(bool, String)> {
    let _ = seed;
    let mut pass = true;
    let mut checked = 0;
    for le in [0.01, 0.1, 0.5] {
        let cfg = NetworkConfig::baseline(1.0, le);
        let cap = legit_capacity(1.0, &cfg)?;
        for k in 1..400 {
            let rho = cap * k as f64 / 400.0;
            pass &= cdf_msr_colluding(rho, 1.0, &cfg)? >= cdf_msr_noncolluding_link(rho, 1.0, &cfg)?;
            checked += 1;
        }
    }
    let cap = legit_capacity(1.0, &NetworkConfig::default())?;
    pass &= (cap - 11f64.log2()).abs() < 1e-12 && (cap - 3.46).abs() < 5e-3;
    Ok((pass, format!("colluding outage ≥ non-colluding at {checked} points; capacity {cap:.4} bits")))
}

/// Every experiment kind must give identical serialized output on one
/// thread and on several.
fn determinism(seed: u64) -> Result<(bool, String)> {
    let base = NetworkConfig::baseline(1.0, 0.4);
    let kinds = [
        (ExperimentKind::OutDegreePmf, NetworkConfig { fading: FadingModel::Nakagami { m: 3.0 }, ..base }),
        (ExperimentKind::InDegreePmf, base),
        (ExperimentKind::Isolation, base),
        (ExperimentKind::VoronoiMoments { k_max: 4 }, base),
        (ExperimentKind::ThresholdedMean, NetworkConfig { rho: 1.0, ..base }),
        (ExperimentKind::SectorPmf { sectors: 4 }, base),
        (ExperimentKind::NeutralizationMean { radius: 0.5 }, base),
        (ExperimentKind::MsrCdfNeighbor { i: 2, rho_grid: vec![0.0, 1.0, 2.0] }, base),
        (ExperimentKind::ColludingPower, base),
        (ExperimentKind::ColludingMsrCdf { r_l: 1.0, rho_grid: vec![0.5, 1.0] }, base),
        (ExperimentKind::ColludingMeanDegree, base),
    ];
    let many = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let pool = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| crate::Error::Numeric(format!("thread pool: {e}")))
    };
    let (one, several) = (pool(1)?, pool(many)?);
    let mut identical = 0;
    for (kind, cfg) in kinds.iter().cloned() {
        let spec = ExperimentSpec { kind, cfg, trials: 2000, base_seed: seed };
        let a = one.install(|| estimate_generic(&spec))?;
        let b = several.install(|| estimate_generic(&spec))?;
        let same = serde_json::to_vec(&a).ok() == serde_json::to_vec(&b).ok();
        identical += same as usize;
    }
    Ok((identical == kinds.len(), format!("{identical}/{} experiments identical on 1 vs {many} threads", kinds.len())))
}
