//! Reproducible Monte Carlo estimators.
//!
//! Every trial is a pure function of `(base_seed, trial_index)`: it draws from
//! its own ChaCha stream, trials run in parallel on the current rayon pool, and
//! results are reduced in trial order. Output is therefore bitwise identical
//! for any thread count.

mod colluding;
mod degree;
mod experiment;
mod neighbor;
mod stats;
mod voronoi;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::error::{ensure, Error, Result};
use crate::pointprocess::{avalanche, StreamRng};

pub use colluding::{
    colluding_window, estimate_colluding_mean_degree, estimate_colluding_msr_cdf, estimate_colluding_power,
    ColludingMsrCurves, ColludingPowerSamples,
};
pub use degree::{
    estimate_in_degree_pmf, estimate_isolation, estimate_neutralization_mean, estimate_out_degree_pmf,
    estimate_sector_pmf, estimate_thresholded_mean, in_degree_window, DegreeEstimate, IsolationEstimate,
};
pub use experiment::{estimate_generic, CurvePoint, ExperimentKind, ExperimentSpec, Outcome};
pub use neighbor::{empirical_cdf, estimate_msr_neighbor, NeighborMsrSamples};
pub use stats::{ks_statistic, ks_statistic_mixed, ks_statistic_parallel, ks_two_sample, tv_distance, Estimate};
pub use voronoi::{estimate_voronoi_moments, typical_cell_area, VoronoiEstimate};

/// Runs `trials` independent trials, trial `t` seeded by stream `t` of
/// `seed`, and returns the results in trial order.
pub fn run_trials<T, F>(seed: u64, trials: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    ensure(trials >= 1, || "trials must be ≥ 1".into())?;
    (0..trials).into_par_iter().map(|t| f(&mut StreamRng::new(seed, t).generator())).collect()
}

/// Seed for an independent sub-experiment labelled `tag`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    avalanche(seed ^ avalanche(tag.wrapping_add(0x5EC6_8A9B)))
}

/// Poisson draw tolerant of a zero mean.
pub(crate) fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| Error::Numeric(format!("poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as u64)
}
