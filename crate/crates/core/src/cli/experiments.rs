use super::config::{parse_sweep, RunConfig};
use super::report::{Check, Report};
use crate::analytic::{
    cdf_msr_colluding, cdf_msr_neighbor, cdf_msr_noncolluding_link, colluding_power_law, legit_capacity,
    mean_out_degree_neutralization_lb, mean_out_degree_thresholded, mean_out_degree_thresholded_bound,
    p_exist_colluding, p_exist_neighbor, p_out_isolation, pmf_out_degree, pmf_out_degree_sectored, DegreePmf,
    VoronoiMoments,
};
use crate::error::Result;
use crate::montecarlo::{
    derive_seed, empirical_cdf, estimate_colluding_mean_degree, estimate_colluding_msr_cdf, estimate_colluding_power,
    estimate_in_degree_pmf, estimate_isolation, estimate_msr_neighbor, estimate_neutralization_mean,
    estimate_out_degree_pmf, estimate_sector_pmf, estimate_thresholded_mean, estimate_voronoi_moments,
    ks_statistic_parallel, tv_distance,
};
use crate::propagation::{FadingModel, GainModel};
use crate::secrecy::NetworkConfig;
use crate::special::sinc;
use crate::stable::StableCdfTable;
use crate::validation::neutralization_trials;

fn trials(rc: &RunConfig, default: u64) -> u64 {
    rc.trials.unwrap_or(default)
}

fn seed(rc: &RunConfig) -> u64 {
    rc.seed.unwrap_or(1)
}

fn grid_or(rc: &RunConfig, default: &[f64]) -> Vec<f64> {
    if rc.grid.is_empty() { default.to_vec() } else { rc.grid.clone() }
}

fn pmf_len(a: &DegreePmf, b: &DegreePmf) -> usize {
    a.probs.len().max(b.probs.len())
}

/// Out- and in-degree PMFs against the geometric law.
pub fn degree(rc: &RunConfig) -> Result<Report> {
    let net = rc.network()?;
    let n = trials(rc, 100_000);
    let out = estimate_out_degree_pmf(&net, n, derive_seed(seed(rc), 1))?;
    let inn = estimate_in_degree_pmf(&NetworkConfig { fading: FadingModel::None, ..net }, n, derive_seed(seed(rc), 2))?;
    let geo = DegreePmf::from_fn(|k| pmf_out_degree(k, net.lambda_l, net.lambda_e).unwrap_or(0.0), 1_000_000);
    let mut r = Report::new(&["n", "pmf_analytic_out", "pmf_sim_out", "pmf_sim_in", "se"]);
    for k in 0..pmf_len(&out.pmf, &inn.pmf) {
        r.row(vec![k as f64, geo.get(k), out.pmf.get(k), inn.pmf.get(k), out.pmf_se.get(k).copied().unwrap_or(0.0)]);
    }
    r.check(Check::distance("TV(out-degree PMF, geometric)", tv_distance(&out.pmf.probs, &geo.probs), 0.01));
    r.check(Check::within_se("mean out-degree", net.ratio(), out.mean.value, out.mean.std_error, 3.0));
    r.check(Check::within_se("mean in-degree", net.ratio(), inn.mean.value, inn.mean.std_error, 3.0));
    Ok(r)
}

/// Isolation probabilities over a grid of λ_e/λ_ℓ.
pub fn isolation(rc: &RunConfig) -> Result<Report> {
    let mut r = Report::new(&[
        "lambda_e_over_lambda_l",
        "p_out_analytic",
        "p_out_sim",
        "se_out",
        "p_in_direct",
        "se_in_direct",
        "p_in_area",
        "se_in_area",
    ]);
    for (k, g) in grid_or(rc, &[0.25, 0.5, 1.0, 2.0, 4.0]).into_iter().enumerate() {
        let net = NetworkConfig { lambda_e: g * rc.lambda_l, ..rc.network()? };
        let iso = estimate_isolation(&net, trials(rc, 100_000), derive_seed(seed(rc), k as u64))?;
        let exact = p_out_isolation(net.lambda_l, net.lambda_e)?;
        r.row(vec![
            g,
            exact,
            iso.p_out.value,
            iso.p_out.std_error,
            iso.p_in_direct.value,
            iso.p_in_direct.std_error,
            iso.p_in_area.value,
            iso.p_in_area.std_error,
        ]);
        r.check(Check::within_se(format!("p_out @ {g}"), exact, iso.p_out.value, iso.p_out.std_error, 3.0));
        let se = iso.p_out.std_error.hypot(iso.p_in_direct.std_error);
        let gap = (iso.p_out.value - iso.p_in_direct.value) / se;
        r.check(Check::at_least(format!("(p_out − p_in)/SE @ {g}"), 3.0, gap, 0.0));
    }
    Ok(r)
}

/// Mean out-degree with a secrecy threshold over a grid of ϱ.
pub fn threshold(rc: &RunConfig) -> Result<Report> {
    let mut r = Report::new(&["rho", "mean_exact", "mean_bound", "mean_sim", "se"]);
    for (k, rho) in grid_or(rc, &[0.0, 0.5, 1.0, 2.0, 4.0]).into_iter().enumerate() {
        let net = NetworkConfig { rho, ..rc.network()? };
        let exact = mean_out_degree_thresholded(&net)?;
        let bound = mean_out_degree_thresholded_bound(&net)?;
        let sim = estimate_thresholded_mean(&net, trials(rc, 400_000), derive_seed(seed(rc), k as u64))?;
        r.row(vec![rho, exact, bound, sim.value, sim.std_error]);
        r.check(Check::relative(format!("mean degree @ ϱ={rho}"), exact, sim.value, sim.std_error, 0.03));
        r.check(Check::at_least(format!("bound ≥ exact @ ϱ={rho}"), exact, bound, 0.0));
    }
    Ok(r)
}

/// Out-degree PMF with L sectors against the negative binomial law.
pub fn sectors(rc: &RunConfig) -> Result<Report> {
    let net = rc.network()?;
    let l = rc.sectors;
    let est = estimate_sector_pmf(&net, l, trials(rc, 100_000), seed(rc))?;
    let nb = DegreePmf::from_fn(|k| pmf_out_degree_sectored(k, l, net.lambda_l, net.lambda_e).unwrap_or(0.0), 1_000_000);
    let mut r = Report::new(&["n", "pmf_analytic", "pmf_sim", "se"]);
    for k in 0..pmf_len(&est.pmf, &nb) {
        r.row(vec![k as f64, nb.get(k), est.pmf.get(k), est.pmf_se.get(k).copied().unwrap_or(0.0)]);
    }
    r.check(Check::distance(format!("TV(PMF, negative binomial) L={l}"), tv_distance(&est.pmf.probs, &nb.probs), 0.015));
    r.check(Check::within_se("mean out-degree", l as f64 * net.ratio(), est.mean.value, est.mean.std_error, 3.0));
    Ok(r)
}

/// Mean out-degree under neutralization against the lower bound.
pub fn neutralize(rc: &RunConfig) -> Result<Report> {
    let net = rc.network()?;
    let mut r = Report::new(&["radius", "lower_bound", "mean_sim", "se"]);
    let radii = grid_or(rc, &[0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5]);
    for (k, radius) in radii.into_iter().enumerate() {
        let bound = mean_out_degree_neutralization_lb(radius, net.lambda_l, net.lambda_e)?;
        let n = trials(rc, neutralization_trials(radius));
        let sim = estimate_neutralization_mean(&net, radius, n, derive_seed(seed(rc), k as u64))?;
        r.row(vec![radius, bound, sim.value, sim.std_error]);
        if radius == 0.0 {
            r.check(Check::within_se("mean @ ρ_n=0", net.ratio(), sim.value, sim.std_error, 3.0));
        }
        r.check(Check::at_least(format!("mean ≥ bound @ ρ_n={radius}"), bound, sim.value, sim.std_error));
    }
    Ok(r)
}

/// Secrecy-rate CDF to the i-th neighbour.
pub fn msr(rc: &RunConfig) -> Result<Report> {
    let net = rc.network()?;
    let i = rc.neighbor;
    let s = estimate_msr_neighbor(&net, i, trials(rc, 100_000), seed(rc))?;
    let default_grid: Vec<f64> = (0..=24).map(|k| 0.25 * k as f64).collect();
    let mut r = Report::new(&["rho", "cdf_analytic", "cdf_sim", "se"]);
    for pt in empirical_cdf(&s.samples, &grid_or(rc, &default_grid))? {
        r.row(vec![pt.x, cdf_msr_neighbor(pt.x, i, &net)?, pt.estimate.value, pt.estimate.std_error]);
    }
    let target = p_exist_neighbor(i, net.lambda_l, net.lambda_e)?;
    r.check(Check::within_se(format!("p_exist (i={i})"), target, s.p_exist.value, s.p_exist.std_error, 3.0));
    let ks = ks_statistic_parallel(&s.samples, |x| cdf_msr_neighbor(x, i, &net), true)?;
    r.check(Check::distance(format!("KS(rate CDF, i={i})"), ks, 0.02));
    Ok(r)
}

/// Colluding versus non-colluding eavesdroppers on one link, or with
/// `sweep_b` the normalized mean degree across amplitude loss exponents.
pub fn collude(rc: &RunConfig) -> Result<Report> {
    if let Some(sweep) = &rc.sweep_b {
        return collude_sweep(rc, &parse_sweep(sweep)?);
    }
    let net = rc.network()?;
    let r_l = rc.link_length;
    let n = trials(rc, 100_000);
    let cap = legit_capacity(r_l, &net)?;
    let default_grid: Vec<f64> = (0..=20).map(|k| cap * k as f64 / 20.0).collect();
    let grid = grid_or(rc, &default_grid);
    let curves = estimate_colluding_msr_cdf(&net, r_l, &grid, n, seed(rc))?;
    let mut r = Report::new(&[
        "rho",
        "outage_colluding_analytic",
        "outage_noncolluding_analytic",
        "outage_colluding_sim",
        "outage_noncolluding_sim",
        "se",
    ]);
    let mut dominated = 0;
    for (c, nc) in curves.colluding.iter().zip(&curves.noncolluding) {
        let a_c = cdf_msr_colluding(c.x, r_l, &net)?;
        let a_nc = cdf_msr_noncolluding_link(c.x, r_l, &net)?;
        dominated += (a_c >= a_nc) as usize;
        r.row(vec![c.x, a_c, a_nc, c.estimate.value, nc.estimate.value, c.estimate.std_error]);
    }
    r.check(Check::at_least("points with colluding ≥ non-colluding", grid.len() as f64, dominated as f64, 0.0));
    let power = estimate_colluding_power(&net, n, seed(rc))?;
    let law = colluding_power_law(&net)?;
    let table = StableCdfTable::covering(law.alpha)?;
    let scale = law.gamma.powf(1.0 / law.alpha);
    let ks = ks_statistic_parallel(&power.sorted(), |x| table.eval(x / scale), false)?;
    r.check(Check::distance("KS(aggregate power, stable law)", ks, 0.01));
    let exist: Vec<f64> = power
        .colluding
        .iter()
        .map(|&pe| f64::from(net.p_l / net.gain.path_loss(r_l) / net.sigma2_l > pe / net.sigma2_e))
        .collect();
    let est = crate::montecarlo::Estimate::from_values(&exist)?;
    r.check(Check::within_se("p_exist (colluding)", p_exist_colluding(r_l, &net)?, est.value, est.std_error, 3.0));
    r.check(Check::relative("legitimate capacity (bits)", cap, cap, 0.0, 1e-12));
    Ok(r)
}

fn collude_sweep(rc: &RunConfig, bs: &[f64]) -> Result<Report> {
    let base = rc.network()?;
    let mut r = Report::new(&["b", "sinc_inv_b", "normalized_degree_sim", "se"]);
    for (k, &b) in bs.iter().enumerate() {
        let eta = if b > 1.0 { sinc(1.0 / b) } else { 0.0 };
        if b <= 1.0 {
            // aggregate power diverges, so no secure link survives
            r.row(vec![b, eta, 0.0, 0.0]);
            continue;
        }
        let net = NetworkConfig { gain: GainModel::unbounded(b), ..base };
        let est = estimate_colluding_mean_degree(&net, trials(rc, 20_000), derive_seed(seed(rc), k as u64))?;
        let (sim, se) = (est.value / net.ratio(), est.std_error / net.ratio());
        r.row(vec![b, eta, sim, se]);
        r.check(Check::relative(format!("normalized degree @ b={b}"), eta, sim, se, 0.03));
    }
    Ok(r)
}

/// Moments of the typical Voronoi cell area.
pub fn voronoi(rc: &RunConfig) -> Result<Report> {
    let est = estimate_voronoi_moments(rc.k_max, trials(rc, 100_000), seed(rc))?;
    let table = VoronoiMoments::table();
    let tol = [0.01, 0.05, 0.05, 0.08];
    let mut r = Report::new(&["k", "moment_table", "moment_sim", "se"]);
    for (k, m) in est.moments.iter().enumerate() {
        let t = table.moments.get(k).copied().unwrap_or(f64::NAN);
        r.row(vec![(k + 1) as f64, t, m.value, m.std_error]);
        if k < tol.len() {
            r.check(Check::relative(format!("E[A^{}]", k + 1), t, m.value, m.std_error, tol[k]));
        }
    }
    Ok(r)
}
