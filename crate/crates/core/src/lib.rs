//! Simulation and analysis of the intrinsically secure communications graph
//! (iS-graph) formed by a Poisson field of legitimate nodes in the presence of
//! a Poisson field of eavesdroppers.
//!
//! The crate is split into:
//! - [`pointprocess`]: Poisson point-process realizations and exact ordered
//!   distance sampling.
//! - [`propagation`]: gain functions and fading samplers.
//! - [`secrecy`]: link secrecy rates and the graph builders for every edge
//!   rule (baseline, thresholded, fading, sectorized, neutralized) plus the
//!   colluding-eavesdropper link rate.
//! - [`analytic`]: closed forms and quadrature-based predictions.
//! - [`stable`]: one-sided stable law numerics (CF, CDF, sampling, Mellin
//!   moment).
//! - [`montecarlo`]: reproducible parallel estimators for every predicted
//!   quantity.
//! - [`validation`]: the simulation-versus-theory checks shared by the test
//!   suite and the `selftest` subcommand.
//! - [`cli`]: the command-line front end.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod pointprocess;
pub mod propagation;
pub mod quad;
pub mod secrecy;
pub mod special;
pub mod stable;
pub mod validation;

pub use error::{Error, Result};
pub use pointprocess::{Point, PointSet, StreamRng};
pub use propagation::{FadingModel, GainKind, GainModel};
pub use secrecy::{ISGraph, NetworkConfig};
pub use stable::StableParams;
