use proptest::prelude::*;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

use secgraph::analytic::{mean_out_degree_thresholded, mean_out_degree_thresholded_bound};
use secgraph::montecarlo::{ks_statistic, ks_two_sample};
use secgraph::pointprocess::sample_disk;
use secgraph::secrecy::build_baseline;
use secgraph::{NetworkConfig, Point, PointSet, StreamRng};

const TRIALS: u64 = 100_000;

#[test]
fn disk_counts_are_poisson() {
    let (density, w) = (1.0, 2.0);
    let counts: Vec<usize> = (0..TRIALS)
        .into_par_iter()
        .map(|t| sample_disk(density, w, &mut StreamRng::new(3, t).generator()).unwrap().len())
        .collect();
    let law = Poisson::new(density * std::f64::consts::PI * w * w).unwrap();
    let max = *counts.iter().max().unwrap();
    let mut observed = vec![0.0; max + 1];
    for &c in &counts {
        observed[c] += 1.0;
    }
    // merge cells until each expects at least 5 draws; the last cell takes the upper tail
    let n = TRIALS as f64;
    let (mut stat, mut cells) = (0.0, 0);
    let (mut obs, mut exp) = (0.0, 0.0);
    for k in 0..=max {
        obs += observed[k];
        exp += n * law.pmf(k as u64);
        if exp >= 5.0 && n * (1.0 - law.cdf(k as u64)) >= 5.0 {
            stat += (obs - exp) * (obs - exp) / exp;
            cells += 1;
            obs = 0.0;
            exp = 0.0;
        }
    }
    let tail_exp = n * (1.0 - law.cdf(max as u64)) + exp;
    stat += (obs - tail_exp) * (obs - tail_exp) / tail_exp;
    cells += 1;
    let p = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
    assert!(p > 1e-3, "chi-square {stat:.1} on {} dof, p = {p:.2e}", cells - 1);
}

#[test]
fn disk_points_uniform_in_area() {
    let w = 3.0;
    let mut u: Vec<f64> = (0..20_000u64)
        .into_par_iter()
        .flat_map_iter(|t| {
            let ps = sample_disk(0.5, w, &mut StreamRng::new(4, t).generator()).unwrap();
            ps.points.into_iter().map(move |p| (p.norm() / w).powi(2))
        })
        .collect();
    u.sort_by(f64::total_cmp);
    let d = ks_statistic(&u, |x| x.clamp(0.0, 1.0));
    assert!(d < 1.95 / (u.len() as f64).sqrt(), "KS {d:.5} over {} radii", u.len());
}

/// Out-degree of a node placed at the origin, from the full baseline graph.
fn origin_out_degrees(lambda_l: f64, lambda_e: f64, w: f64, trials: u64, seed: u64) -> Vec<f64> {
    let mut degrees: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = StreamRng::new(seed, t).generator();
            let legit = sample_disk(lambda_l, w, &mut rng).unwrap();
            let eaves = sample_disk(lambda_e, w, &mut rng).unwrap();
            let mut pts = vec![Point::new(0.0, 0.0)];
            pts.extend(legit.points);
            let legit = PointSet::new(pts, lambda_l, w).unwrap();
            build_baseline(&legit, &eaves).out_degree(0) as f64
        })
        .collect();
    degrees.sort_by(f64::total_cmp);
    degrees
}

#[test]
fn degree_law_depends_only_on_density_ratio() {
    // joint rescaling of both densities by 5 shrinks the window by √5
    let n = 20_000;
    let a = origin_out_degrees(0.2, 0.1, 12.0, n, 5);
    let b = origin_out_degrees(1.0, 0.5, 12.0 / 5f64.sqrt(), n, 6);
    let d = ks_two_sample(&a, &b);
    assert!(d < 1.95 * (2.0 / n as f64).sqrt(), "two-sample KS {d:.4}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thresholded_mean_ordered_and_monotone(
        ratio in 0.2f64..20.0,
        b in 1.2f64..4.0,
        rho in 0.0f64..3.0,
        s_l in 0.1f64..5.0,
        s_e in 0.1f64..5.0,
        step in 0.05f64..1.0,
    ) {
        let base = NetworkConfig { lambda_l: ratio * 0.1, lambda_e: 0.1, rho, sigma2_l: s_l, sigma2_e: s_e,
            gain: secgraph::GainModel::unbounded(b), ..NetworkConfig::default() };
        let exact = mean_out_degree_thresholded(&base).unwrap();
        let tol = 1e-7 * exact.max(1e-12);
        prop_assert!(exact <= mean_out_degree_thresholded_bound(&base).unwrap() + tol);
        let more_rho = NetworkConfig { rho: rho + step, ..base };
        prop_assert!(mean_out_degree_thresholded(&more_rho).unwrap() <= exact + tol);
        let noisier_l = NetworkConfig { sigma2_l: s_l * (1.0 + step), ..base };
        prop_assert!(mean_out_degree_thresholded(&noisier_l).unwrap() <= exact + tol);
        let noisier_e = NetworkConfig { sigma2_e: s_e * (1.0 + step), ..base };
        prop_assert!(mean_out_degree_thresholded(&noisier_e).unwrap() >= exact - tol);
    }
}
