use std::f64::consts::PI;

use rand::Rng;

use super::{ISGraph, NetworkConfig, NeutralizationConfig, SectorConfig, SectorOffsets};
use crate::error::Result;
use crate::pointprocess::spatial::GridIndex;
use crate::pointprocess::{Point, PointSet};

const GRID_THRESHOLD: usize = 256;

/// Nearest-eavesdropper lookup: brute force for small sets, uniform grid
/// above 256 points.
pub enum EavesIndex<'a> {
    Brute(&'a [Point]),
    Grid(GridIndex),
}

impl<'a> EavesIndex<'a> {
    pub fn new(points: &'a [Point]) -> Self {
        if points.len() > GRID_THRESHOLD {
            EavesIndex::Grid(GridIndex::new(points, 2.0))
        } else {
            EavesIndex::Brute(points)
        }
    }

    /// Distance to the nearest point, or +∞ for an empty set.
    pub fn nearest_distance(&self, q: &Point) -> f64 {
        match self {
            EavesIndex::Brute(pts) => pts.iter().map(|e| q.dist(e)).fold(f64::INFINITY, f64::min),
            EavesIndex::Grid(g) => g.nearest(q).map_or(f64::INFINITY, |(_, d)| d),
        }
    }
}

/// Edges i → j for every j ≠ i with |x_i − x_j| < range(i).
fn build_by_range(legit: &PointSet, eaves: &PointSet, mut range: impl FnMut(usize) -> f64) -> ISGraph {
    let pts = &legit.points;
    let out_edges = (0..pts.len())
        .map(|i| {
            let r = range(i);
            (0..pts.len()).filter(|&j| j != i && pts[i].dist(&pts[j]) < r).collect()
        })
        .collect();
    ISGraph { legit: legit.clone(), eaves: eaves.clone(), out_edges }
}

/// Baseline rule: x_i → x_j iff x_j is closer to x_i than every
/// eavesdropper. With no eavesdroppers the graph is complete.
pub fn build_baseline(legit: &PointSet, eaves: &PointSet) -> ISGraph {
    let index = EavesIndex::new(&eaves.points);
    build_by_range(legit, eaves, |i| index.nearest_distance(&legit.points[i]))
}

/// Non-zero threshold and unequal noise, no fading:
/// g(d_ij) > (σ_ℓ²/σ_e²)·2^ϱ·g(d_ie*) + (σ_ℓ²/P_ℓ)(2^ϱ − 1).
pub fn build_thresholded(legit: &PointSet, eaves: &PointSet, cfg: &NetworkConfig) -> Result<ISGraph> {
    cfg.validate()?;
    let index = EavesIndex::new(&eaves.points);
    Ok(build_by_range(legit, eaves, |i| cfg.secure_range(index.nearest_distance(&legit.points[i]))))
}

/// Fading rule: x_i → x_j iff g(d_ij, Z_ij) exceeds the largest
/// eavesdropper gain max_k g(d_ik, Z_ik). One Z is drawn per ordered pair:
/// for each source, eavesdropper draws first, then legitimate targets in
/// index order.
pub fn build_fading<R: Rng + ?Sized>(
    legit: &PointSet,
    eaves: &PointSet,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> Result<ISGraph> {
    cfg.validate()?;
    if cfg.fading.is_trivial() {
        return Ok(build_baseline(legit, eaves));
    }
    let sampler = cfg.fading.sampler()?;
    let model = cfg.gain;
    let pts = &legit.points;
    let mut out_edges = Vec::with_capacity(pts.len());
    for (i, src) in pts.iter().enumerate() {
        let best_eave = eaves
            .points
            .iter()
            .map(|e| sampler.sample(rng) / model.path_loss(src.dist(e)))
            .fold(0.0, f64::max);
        let mut targets = Vec::new();
        for (j, dst) in pts.iter().enumerate() {
            if j == i {
                continue;
            }
            let g = sampler.sample(rng) / model.path_loss(src.dist(dst));
            if g > best_eave {
                targets.push(j);
            }
        }
        out_edges.push(targets);
    }
    Ok(ISGraph { legit: legit.clone(), eaves: eaves.clone(), out_edges })
}

/// Index of the sector containing bearing `theta` for a node whose sectors
/// start at `offset`.
pub fn sector_of(theta: f64, offset: f64, sectors: usize) -> usize {
    let width = 2.0 * PI / sectors as f64;
    let k = ((theta - offset).rem_euclid(2.0 * PI) / width).floor() as usize;
    k.min(sectors - 1)
}

/// Sectorized rule: x_i → x_j iff x_j is closer than the nearest
/// eavesdropper lying in the same transmission sector of x_i.
pub fn build_sectorized<R: Rng + ?Sized>(
    legit: &PointSet,
    eaves: &PointSet,
    sector: &SectorConfig,
    rng: &mut R,
) -> Result<ISGraph> {
    sector.validate()?;
    let l = sector.sectors;
    let pts = &legit.points;
    let mut out_edges = Vec::with_capacity(pts.len());
    let mut nearest = vec![f64::INFINITY; l];
    for (i, src) in pts.iter().enumerate() {
        let offset = match sector.offsets {
            SectorOffsets::IidUniform => rng.random::<f64>() * 2.0 * PI / l as f64,
            SectorOffsets::Fixed { angle } => angle,
        };
        nearest.fill(f64::INFINITY);
        for e in &eaves.points {
            let k = sector_of(src.bearing_to(e), offset, l);
            nearest[k] = nearest[k].min(src.dist(e));
        }
        let targets = (0..pts.len())
            .filter(|&j| j != i && src.dist(&pts[j]) < nearest[sector_of(src.bearing_to(&pts[j]), offset, l)])
            .collect();
        out_edges.push(targets);
    }
    Ok(ISGraph { legit: legit.clone(), eaves: eaves.clone(), out_edges })
}

/// Eavesdroppers farther than `radius` from every legitimate node.
pub fn effective_eavesdroppers(legit: &PointSet, eaves: &PointSet, radius: f64) -> PointSet {
    let keep: Vec<Point> = if legit.len() > GRID_THRESHOLD {
        let grid = GridIndex::new(&legit.points, 2.0);
        eaves.points.iter().filter(|e| !grid.any_within(e, radius)).copied().collect()
    } else {
        eaves.points.iter().filter(|e| legit.points.iter().all(|x| x.dist(e) > radius)).copied().collect()
    };
    PointSet { points: keep, density: eaves.density, window_radius: eaves.window_radius }
}

/// Neutralization rule: the baseline rule against only the eavesdroppers
/// that lie outside every neutralization disk.
pub fn build_neutralized(legit: &PointSet, eaves: &PointSet, n: &NeutralizationConfig) -> Result<ISGraph> {
    n.validate()?;
    let effective = effective_eavesdroppers(legit, eaves, n.radius);
    let mut g = build_baseline(legit, &effective);
    g.eaves = eaves.clone();
    Ok(g)
}
