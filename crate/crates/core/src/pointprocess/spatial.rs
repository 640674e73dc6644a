use std::collections::HashMap;

use super::Point;

/// Uniform-grid bucket index over a static point list.
#[derive(Debug, Clone)]
pub struct GridIndex {
    cell: f64,
    x0: f64,
    y0: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
    points: Vec<Point>,
}

impl GridIndex {
    /// Builds an index with roughly `per_cell` points per occupied cell.
    pub fn new(points: &[Point], per_cell: f64) -> Self {
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            xmin = xmin.min(p.x);
            ymin = ymin.min(p.y);
            xmax = xmax.max(p.x);
            ymax = ymax.max(p.y);
        }
        if points.is_empty() {
            (xmin, ymin, xmax, ymax) = (0.0, 0.0, 1.0, 1.0);
        }
        let w = (xmax - xmin).max(1e-12);
        let h = (ymax - ymin).max(1e-12);
        let cell = (w * h * per_cell / points.len().max(1) as f64).sqrt().max(1e-12);
        let nx = ((w / cell).floor() as usize + 1).min(1 << 12);
        let ny = ((h / cell).floor() as usize + 1).min(1 << 12);
        let cell = cell.max(w / nx as f64).max(h / ny as f64);
        let mut buckets = vec![Vec::new(); nx * ny];
        let mut idx = Self { cell, x0: xmin, y0: ymin, nx, ny, buckets: Vec::new(), points: points.to_vec() };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = idx.cell_of(p);
            buckets[cy * nx + cx].push(i as u32);
        }
        idx.buckets = buckets;
        idx
    }

    fn cell_of(&self, p: &Point) -> (usize, usize) {
        let cx = ((p.x - self.x0) / self.cell).floor().clamp(0.0, (self.nx - 1) as f64) as usize;
        let cy = ((p.y - self.y0) / self.cell).floor().clamp(0.0, (self.ny - 1) as f64) as usize;
        (cx, cy)
    }

    /// Nearest indexed point to `q`: (index, distance). Ties resolve to the
    /// lowest index.
    pub fn nearest(&self, q: &Point) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        // unclamped cell coordinates of q, so queries outside the box work
        let qx = ((q.x - self.x0) / self.cell).floor() as i64;
        let qy = ((q.y - self.y0) / self.cell).floor() as i64;
        let mut best: Option<(usize, f64)> = None;
        let max_ring = (self.nx.max(self.ny) as i64) + qx.abs().max(qy.abs()) + 1;
        for ring in 0..=max_ring {
            if let Some((_, d)) = best {
                // every point in ring k is at least (k-1)·cell away
                if ((ring - 1) as f64) * self.cell > d {
                    break;
                }
            }
            for cy in (qy - ring)..=(qy + ring) {
                if cy < 0 || cy >= self.ny as i64 {
                    continue;
                }
                let on_edge_row = cy == qy - ring || cy == qy + ring;
                let step = if on_edge_row { 1 } else { (2 * ring).max(1) };
                let mut cx = qx - ring;
                while cx <= qx + ring {
                    if cx >= 0 && cx < self.nx as i64 {
                        for &i in &self.buckets[cy as usize * self.nx + cx as usize] {
                            let d = q.dist(&self.points[i as usize]);
                            let i = i as usize;
                            match best {
                                Some((bi, bd)) if d > bd || (d == bd && i > bi) => {}
                                _ => best = Some((i, d)),
                            }
                        }
                    }
                    cx += step;
                }
            }
        }
        best
    }

    /// Whether any indexed point lies within distance `r` of `q` (inclusive).
    pub fn any_within(&self, q: &Point, r: f64) -> bool {
        let lo_x = ((q.x - r - self.x0) / self.cell).floor().max(0.0) as usize;
        let lo_y = ((q.y - r - self.y0) / self.cell).floor().max(0.0) as usize;
        let hi_x = ((q.x + r - self.x0) / self.cell).floor();
        let hi_y = ((q.y + r - self.y0) / self.cell).floor();
        if hi_x < 0.0 || hi_y < 0.0 {
            return false;
        }
        let hi_x = (hi_x as usize).min(self.nx - 1);
        let hi_y = (hi_y as usize).min(self.ny - 1);
        for cy in lo_y..=hi_y {
            for cx in lo_x..=hi_x {
                for &i in &self.buckets[cy * self.nx + cx] {
                    if q.dist(&self.points[i as usize]) <= r {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Hash grid that accepts insertions, for incrementally generated processes.
#[derive(Debug, Clone)]
pub struct HashGrid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<Point>>,
}

impl HashGrid {
    pub fn new(cell: f64) -> Self {
        Self { cell, cells: HashMap::new() }
    }

    fn key(&self, p: &Point) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    pub fn insert(&mut self, p: Point) {
        let k = self.key(&p);
        self.cells.entry(k).or_default().push(p);
    }

    /// Whether any stored point lies within distance `r ≤ cell` of `q`.
    pub fn any_within(&self, q: &Point, r: f64) -> bool {
        let (kx, ky) = self.key(q);
        let reach = (r / self.cell).ceil() as i64;
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                if let Some(v) = self.cells.get(&(kx + dx, ky + dy)) {
                    if v.iter().any(|p| q.dist(p) <= r) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointprocess::{sample_disk, StreamRng};

    fn brute_nearest(pts: &[Point], q: &Point) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in pts.iter().enumerate() {
            let d = q.dist(p);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best
    }

    #[test]
    fn grid_nearest_matches_brute_force() {
        let mut rng = StreamRng::new(11, 0).generator();
        let ps = sample_disk(2.0, 10.0, &mut rng).unwrap();
        let grid = GridIndex::new(&ps.points, 2.0);
        let queries = sample_disk(0.5, 14.0, &mut rng).unwrap();
        for q in &queries.points {
            assert_eq!(grid.nearest(q), brute_nearest(&ps.points, q));
        }
        // a query far outside the indexed box
        let far = Point::new(100.0, -80.0);
        assert_eq!(grid.nearest(&far), brute_nearest(&ps.points, &far));
    }

    #[test]
    fn grid_range_matches_brute_force() {
        let mut rng = StreamRng::new(12, 0).generator();
        let ps = sample_disk(1.0, 8.0, &mut rng).unwrap();
        let grid = GridIndex::new(&ps.points, 1.0);
        let mut hash = HashGrid::new(0.7);
        for p in &ps.points {
            hash.insert(*p);
        }
        let queries = sample_disk(1.0, 9.0, &mut rng).unwrap();
        for q in &queries.points {
            let brute = ps.points.iter().any(|p| q.dist(p) <= 0.7);
            assert_eq!(grid.any_within(q, 0.7), brute);
            assert_eq!(hash.any_within(q, 0.7), brute);
        }
    }
}
