//! Closed-form and quadrature-based predictions.

mod colluding;
mod degree;
mod neighbor;
mod threshold;

pub use colluding::{
    c_alpha, cdf_msr_colluding, cdf_msr_noncolluding_link, colluding_power_law, legit_capacity,
    mean_degree_colluding, p_exist_colluding,
};
pub use degree::{
    moments_in_degree, p_in_isolation, p_in_isolation_series, p_out_isolation, pmf_out_degree,
    pmf_out_degree_sectored, stirling2, DegreePmf, MomentSource, SeriesValue, VoronoiMoments,
};
pub use neighbor::{cdf_msr_neighbor, p_exist_neighbor, p_outage_neighbor};
pub use threshold::{
    mean_out_degree_neutralization_lb, mean_out_degree_thresholded, mean_out_degree_thresholded_bound,
};
