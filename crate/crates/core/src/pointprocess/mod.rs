//! Homogeneous Poisson point processes in the plane.

mod rng;
pub mod spatial;

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{ensure, Error, Result};

pub use rng::{avalanche, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Angle of `other` as seen from `self`, in [0, 2π).
    pub fn bearing_to(&self, other: &Point) -> f64 {
        let a = (other.y - self.y).atan2(other.x - self.x);
        if a < 0.0 { a + 2.0 * PI } else { a }
    }
}

/// One realization of a planar Poisson process restricted to a disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub points: Vec<Point>,
    pub density: f64,
    pub window_radius: f64,
}

impl PointSet {
    /// Wraps an explicit point list, checking the window invariants.
    pub fn new(points: Vec<Point>, density: f64, window_radius: f64) -> Result<Self> {
        ensure(density.is_finite() && density >= 0.0, || format!("density must be finite and ≥ 0 (got {density})"))?;
        ensure(window_radius > 0.0, || format!("window radius must be > 0 (got {window_radius})"))?;
        for p in &points {
            ensure(p.x.is_finite() && p.y.is_finite(), || "point coordinates must be finite".into())?;
            ensure(p.norm() <= window_radius, || {
                format!("point ({}, {}) lies outside the window of radius {window_radius}", p.x, p.y)
            })?;
        }
        Ok(Self { points, density, window_radius })
    }

    pub fn empty(window_radius: f64) -> Self {
        Self { points: Vec::new(), density: 0.0, window_radius }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Homogeneous Poisson process of the given density on the disk of radius
/// `window_radius` centred at the origin.
pub fn sample_disk<R: Rng + ?Sized>(density: f64, window_radius: f64, rng: &mut R) -> Result<PointSet> {
    ensure(density.is_finite() && density >= 0.0, || format!("density must be finite and ≥ 0 (got {density})"))?;
    ensure(window_radius.is_finite() && window_radius > 0.0, || {
        format!("window radius must be finite and > 0 (got {window_radius})")
    })?;
    let mean = density * PI * window_radius * window_radius;
    let n = if mean > 0.0 {
        let pois = Poisson::new(mean).map_err(|e| Error::InvalidArgument(format!("poisson mean {mean}: {e}")))?;
        pois.sample(rng) as usize
    } else {
        0
    };
    let points = (0..n)
        .map(|_| {
            let r = window_radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            Point::polar(r, theta)
        })
        .collect();
    Ok(PointSet { points, density, window_radius })
}

/// Distance from the origin to the nearest point of an unbounded Poisson
/// process: R² ~ Exponential(πλ).
pub fn sample_nearest_distance<R: Rng + ?Sized>(density: f64, rng: &mut R) -> Result<f64> {
    ensure(density.is_finite() && density > 0.0, || format!("density must be finite and > 0 (got {density})"))?;
    let e: f64 = Exp1.sample(rng);
    Ok((e / (PI * density)).sqrt())
}

/// Norms of the points sorted ascending. The sort is stable, so ties keep
/// insertion order.
pub fn ordered_distances(ps: &PointSet) -> Vec<f64> {
    let mut d: Vec<f64> = ps.points.iter().map(Point::norm).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Points of an unbounded Poisson process emitted in order of increasing
/// distance from the origin, using R_k² = Γ_k / (πλ) with Γ_k the arrival
/// times of a unit-rate Poisson process.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    rate: f64,
    arrival: f64,
}

impl RadialSampler {
    pub fn new(density: f64) -> Result<Self> {
        ensure(density.is_finite() && density > 0.0, || format!("density must be finite and > 0 (got {density})"))?;
        Ok(Self { rate: PI * density, arrival: 0.0 })
    }

    /// Distance of the next point.
    pub fn next_radius<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        self.arrival += e;
        (self.arrival / self.rate).sqrt()
    }

    /// Next point with a uniform bearing.
    pub fn next_point<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Point {
        let r = self.next_radius(rng);
        Point::polar(r, 2.0 * PI * rng.random::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_density_is_empty() {
        let mut rng = StreamRng::new(1, 0).generator();
        assert!(sample_disk(0.0, 3.0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn invalid_inputs_rejected() {
        let mut rng = StreamRng::new(1, 0).generator();
        assert!(sample_disk(-1.0, 3.0, &mut rng).is_err());
        assert!(sample_disk(1.0, 0.0, &mut rng).is_err());
        assert!(sample_disk(f64::NAN, 1.0, &mut rng).is_err());
        assert!(sample_nearest_distance(0.0, &mut rng).is_err());
        assert!(PointSet::new(vec![Point::new(2.0, 0.0)], 1.0, 1.0).is_err());
    }

    #[test]
    fn ordered_distances_examples() {
        let ps = PointSet::new(vec![Point::new(3.0, 4.0), Point::new(0.0, 1.0)], 1.0, 5.0).unwrap();
        assert_eq!(ordered_distances(&ps), vec![1.0, 5.0]);
        assert!(ordered_distances(&PointSet::empty(1.0)).is_empty());
    }

    #[test]
    fn determinism() {
        let a = sample_disk(1.0, 5.0, &mut StreamRng::new(9, 2).generator()).unwrap();
        let b = sample_disk(1.0, 5.0, &mut StreamRng::new(9, 2).generator()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn points_inside_window() {
        let mut rng = StreamRng::new(3, 0).generator();
        let ps = sample_disk(2.0, 4.0, &mut rng).unwrap();
        assert!(ps.points.iter().all(|p| p.norm() <= 4.0));
    }

    #[test]
    fn mean_count() {
        let trials = 20_000;
        let mut total = 0usize;
        for t in 0..trials {
            let mut rng = StreamRng::new(5, t).generator();
            total += sample_disk(1.0, 10.0, &mut rng).unwrap().len();
        }
        let mean = total as f64 / trials as f64;
        let expect = 100.0 * PI;
        // Poisson variance equals the mean
        let se = (expect / trials as f64).sqrt();
        assert!((mean - expect).abs() < 4.0 * se, "{mean} vs {expect}");
    }

    #[test]
    fn nearest_distance_moments() {
        let n = 1_000_000;
        let mut rng = StreamRng::new(21, 0).generator();
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut beyond = 0usize;
        let mut rng2 = StreamRng::new(21, 1).generator();
        for _ in 0..n {
            let r = sample_nearest_distance(1.0, &mut rng).unwrap();
            sum += r * r;
            sumsq += r.powi(4);
            if sample_nearest_distance(0.1, &mut rng2).unwrap() > 1.0 {
                beyond += 1;
            }
        }
        let mean = sum / n as f64;
        let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - 1.0 / PI).abs() < 3.0 * se);
        let p = (-0.1 * PI).exp();
        let freq = beyond as f64 / n as f64;
        assert!((freq - p).abs() < 3.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn radial_sampler_is_increasing() {
        let mut rng = StreamRng::new(4, 0).generator();
        let mut s = RadialSampler::new(0.3).unwrap();
        let mut last = 0.0;
        for _ in 0..100 {
            let r = s.next_radius(&mut rng);
            assert!(r > last);
            last = r;
        }
    }
}
