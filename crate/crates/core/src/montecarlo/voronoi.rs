use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{run_trials, Estimate};
use crate::analytic::{MomentSource, VoronoiMoments};
use crate::error::{ensure, Error, Result};
use crate::pointprocess::{Point, RadialSampler};

/// Half-width of the initial bounding square, in units of the mean
/// inter-point spacing.
const BOUND: f64 = 64.0;
const MAX_NEIGHBOURS: usize = 100_000;

/// Keeps the part of a convex polygon on the origin's side of the bisector
/// between the origin and `p`, i.e. {y : y·p ≤ |p|²/2}.
fn clip_bisector(poly: &[Point], p: &Point) -> Vec<Point> {
    let c = 0.5 * (p.x * p.x + p.y * p.y);
    let side = |q: &Point| q.x * p.x + q.y * p.y - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (i, a) in poly.iter().enumerate() {
        let b = &poly[(i + 1) % poly.len()];
        let (da, db) = (side(a), side(b));
        if da <= 0.0 {
            out.push(*a);
        }
        if (da <= 0.0) != (db <= 0.0) {
            let t = da / (da - db);
            out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

fn shoelace(poly: &[Point]) -> f64 {
    let twice: f64 = (0..poly.len())
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            a.x * b.y - b.x * a.y
        })
        .sum();
    0.5 * twice.abs()
}

/// Area of the Voronoi cell of a point added at the origin of a unit-density
/// Poisson process.
///
/// Neighbours arrive in order of distance and each one clips the cell by its
/// bisector. Once the next neighbour is farther than twice the largest
/// vertex distance its bisector cannot reach the cell, nor can any later one,
/// so the cell is final.
pub fn typical_cell_area<R: Rng + ?Sized>(rng: &mut R) -> Result<f64> {
    let mut cell = vec![
        Point::new(-BOUND, -BOUND),
        Point::new(BOUND, -BOUND),
        Point::new(BOUND, BOUND),
        Point::new(-BOUND, BOUND),
    ];
    let mut reach = BOUND * std::f64::consts::SQRT_2;
    let mut radial = RadialSampler::new(1.0)?;
    for _ in 0..MAX_NEIGHBOURS {
        let p = radial.next_point(rng);
        if p.norm() > 2.0 * reach {
            if cell.iter().any(|v| v.x.abs().max(v.y.abs()) >= BOUND * (1.0 - 1e-12)) {
                break;
            }
            return Ok(shoelace(&cell));
        }
        cell = clip_bisector(&cell, &p);
        reach = cell.iter().map(Point::norm).fold(0.0, f64::max);
    }
    Err(Error::WindowExhausted("typical Voronoi cell still touches its bounding square".into()))
}

/// Simulated moments of the normalized typical-cell area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiEstimate {
    /// E{Ã^k} for k = 1..=k_max.
    pub moments: Vec<Estimate>,
    pub areas: Vec<f64>,
}

impl VoronoiEstimate {
    pub fn to_moments(&self) -> VoronoiMoments {
        VoronoiMoments { moments: self.moments.iter().map(|e| e.value).collect(), source: MomentSource::Simulated }
    }
}

pub fn estimate_voronoi_moments(k_max: u32, trials: u64, seed: u64) -> Result<VoronoiEstimate> {
    ensure((1..=6).contains(&k_max), || format!("k_max must be in 1..=6 (got {k_max})"))?;
    let areas = run_trials(seed, trials, |rng| typical_cell_area(rng))?;
    let moments = (1..=k_max as i32)
        .map(|k| Estimate::from_values(&areas.iter().map(|a| a.powi(k)).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    Ok(VoronoiEstimate { moments, areas })
}
