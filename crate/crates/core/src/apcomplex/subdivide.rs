//! The eight-triangle subdivision of a tile.
//!
//! Local vertices: 0 long-leg end, 1 right angle, 2 short-leg end; 3, 4, 5
//! on the long leg at 1/4, 1/2, 3/4 from vertex 0; 6 the short-leg
//! midpoint; 7, 8, 9 on the hypotenuse at 1/4, 1/2, 3/4 from vertex 2.

use crate::geom::{signed_area2, ExactPoint, TilePose};
use crate::rational::ExactRational as Q;

pub const VERTICES: usize = 10;
pub const TRIANGLES: usize = 8;

/// Counterclockwise for the positive reference tile, in the order of the
/// sweep from the right-angle corner to the long-leg end.
pub const LOCAL_TRIANGLES: [[usize; 3]; TRIANGLES] =
    [[1, 6, 5], [6, 2, 5], [2, 7, 5], [5, 7, 4], [4, 7, 8], [4, 8, 3], [3, 8, 9], [3, 9, 0]];

/// Local edges as `(low, high)` pairs, sorted.
pub fn local_edges() -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = LOCAL_TRIANGLES
        .iter()
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    e.sort_unstable();
    e.dedup();
    e
}

/// Position of each local vertex along the tile boundary, as `(side, t)`
/// with sides 0: v0→v1, 1: v1→v2, 2: v2→v0.
pub fn boundary_parameter(k: usize) -> (usize, Q) {
    match k {
        0 => (0, Q::zero()),
        1 => (1, Q::zero()),
        2 => (2, Q::zero()),
        3 => (0, Q::ratio(1, 4)),
        4 => (0, Q::ratio(1, 2)),
        5 => (0, Q::ratio(3, 4)),
        6 => (1, Q::ratio(1, 2)),
        7 => (2, Q::ratio(1, 4)),
        8 => (2, Q::ratio(1, 2)),
        9 => (2, Q::ratio(3, 4)),
        _ => panic!("local vertex {k} out of range"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileSubdivision {
    pub vertices: [ExactPoint; VERTICES],
    /// Local vertex indices; orientation follows the tile's pose.
    pub triangles: [[usize; 3]; TRIANGLES],
    pub barycenters: [ExactPoint; TRIANGLES],
}

impl TileSubdivision {
    pub fn triangle(&self, k: usize) -> [ExactPoint; 3] {
        self.triangles[k].map(|i| self.vertices[i].clone())
    }
}

pub fn subdivide(t: &TilePose) -> TileSubdivision {
    let [a, b, c] = t.vertices();
    let vertices = std::array::from_fn(|k| {
        let (side, s) = boundary_parameter(k);
        let (p, q) = match side {
            0 => (&a, &b),
            1 => (&b, &c),
            _ => (&c, &a),
        };
        p.lerp(q, &s)
    });
    let barycenters = std::array::from_fn(|k| {
        let [i, j, l] = LOCAL_TRIANGLES[k];
        let v: &[ExactPoint; VERTICES] = &vertices;
        (&(&v[i] + &v[j]) + &v[l]).scale(&Q::ratio(1, 3))
    });
    TileSubdivision { vertices, triangles: LOCAL_TRIANGLES, barycenters }
}

/// Orientation of each subdivision triangle relative to the plane: the
/// chirality sign of the tile.
pub fn plane_sign(t: &TilePose, k: usize) -> i32 {
    let s = subdivide(t);
    let [p, q, r] = s.triangle(k);
    signed_area2(&p, &q, &r).signum()
}

/// Midpoint of the segment joining the short-leg end to the long-leg
/// midpoint: the point where the perpendicular bisector of the long leg
/// meets the median from the short-leg end.
pub fn punctuation(t: &TilePose) -> ExactPoint {
    let [a, b, c] = t.vertices();
    let mid = (&a + &b).scale(&Q::ratio(1, 2));
    c.lerp(&mid, &Q::ratio(1, 2))
}
