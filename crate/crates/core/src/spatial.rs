//! Uniform-grid index over exact triangles.

use std::collections::HashMap;

use crate::geom::{triangles_intersect, ExactPoint};
use crate::rational::ExactRational;

const CELL: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Bounds {
    x0: i64,
    x1: i64,
    y0: i64,
    y1: i64,
}

impl Bounds {
    fn of(t: &[ExactPoint; 3]) -> Self {
        let fl = |q: &ExactRational| i64::try_from(q.floor()).expect("coordinate fits in i64");
        let xs = t.iter().map(|p| fl(&p.x));
        let ys = t.iter().map(|p| fl(&p.y));
        Bounds {
            x0: xs.clone().min().unwrap(),
            x1: xs.max().unwrap(),
            y0: ys.clone().min().unwrap(),
            y1: ys.max().unwrap(),
        }
    }

    // Integer floors are a conservative filter: disjoint floor ranges imply
    // disjoint exact ranges.
    fn may_touch(&self, o: &Bounds) -> bool {
        self.x0 <= o.x1 && o.x0 <= self.x1 && self.y0 <= o.y1 && o.y0 <= self.y1
    }

    fn cells(&self) -> impl Iterator<Item = (i64, i64)> {
        let (cx0, cx1) = (self.x0.div_euclid(CELL), self.x1.div_euclid(CELL));
        let (cy0, cy1) = (self.y0.div_euclid(CELL), self.y1.div_euclid(CELL));
        (cx0..=cx1).flat_map(move |x| (cy0..=cy1).map(move |y| (x, y)))
    }
}

pub struct TriangleIndex {
    tris: Vec<[ExactPoint; 3]>,
    bounds: Vec<Bounds>,
    grid: HashMap<(i64, i64), Vec<u32>>,
}

impl TriangleIndex {
    pub fn new(tris: Vec<[ExactPoint; 3]>) -> Self {
        let bounds: Vec<Bounds> = tris.iter().map(Bounds::of).collect();
        let mut grid: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, b) in bounds.iter().enumerate() {
            for c in b.cells() {
                grid.entry(c).or_default().push(i as u32);
            }
        }
        TriangleIndex { tris, bounds, grid }
    }

    pub fn len(&self) -> usize {
        self.tris.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tris.is_empty()
    }

    pub fn triangle(&self, i: usize) -> &[ExactPoint; 3] {
        &self.tris[i]
    }

    /// Indices of all triangles whose closed set meets triangle `t`, sorted.
    pub fn query(&self, t: &[ExactPoint; 3]) -> Vec<usize> {
        let b = Bounds::of(t);
        let mut cand: Vec<usize> = b.cells().filter_map(|c| self.grid.get(&c)).flatten().map(|&i| i as usize).collect();
        cand.sort_unstable();
        cand.dedup();
        cand.retain(|&j| self.bounds[j].may_touch(&b) && triangles_intersect(&self.tris[j], t));
        cand
    }

    /// Triangles meeting triangle `i`, excluding `i` itself.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out = self.query(&self.tris[i]);
        out.retain(|&j| j != i);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::{patch, pinwheel_rule};

    #[test]
    fn matches_brute_force() {
        let p = patch(3, &pinwheel_rule(), 9).unwrap();
        let tris = p.tiles.vertices();
        let idx = TriangleIndex::new(tris.clone());
        for i in (0..tris.len()).step_by(7) {
            let brute: Vec<usize> =
                (0..tris.len()).filter(|&j| j != i && triangles_intersect(&tris[i], &tris[j])).collect();
            assert_eq!(idx.neighbors(i), brute);
        }
    }
}
