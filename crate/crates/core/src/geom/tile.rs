//! Exact triangle predicates.

use super::{ExactPoint, TilePose};
use crate::rational::ExactRational as Q;

/// Twice the signed area of `abc`.
pub fn signed_area2(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> Q {
    (b - a).cross(&(c - a))
}

/// Sign of the turn `a → b → c`: 1 left, -1 right, 0 collinear.
pub fn orient(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint) -> i32 {
    signed_area2(a, b, c).signum()
}

/// Closed segment membership.
pub fn point_on_segment(p: &ExactPoint, a: &ExactPoint, b: &ExactPoint) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    (a - p).dot(&(b - p)).signum() <= 0
}

/// Closed segments `ab` and `cd` share a point.
pub fn segments_intersect(a: &ExactPoint, b: &ExactPoint, c: &ExactPoint, d: &ExactPoint) -> bool {
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    point_on_segment(c, a, b) || point_on_segment(d, a, b) || point_on_segment(a, c, d) || point_on_segment(b, c, d)
}

/// Closed triangle membership (either vertex orientation).
pub fn point_in_triangle(p: &ExactPoint, t: &[ExactPoint; 3]) -> bool {
    let s = [orient(&t[0], &t[1], p), orient(&t[1], &t[2], p), orient(&t[2], &t[0], p)];
    !(s.iter().any(|&x| x > 0) && s.iter().any(|&x| x < 0))
}

/// Open triangle membership for a non-degenerate triangle.
pub fn point_strictly_in_triangle(p: &ExactPoint, t: &[ExactPoint; 3]) -> bool {
    let s = [orient(&t[0], &t[1], p), orient(&t[1], &t[2], p), orient(&t[2], &t[0], p)];
    s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0)
}

// Separating-axis test over the six edge lines. `strict` asks for a line
// with the other triangle strictly outside, which separates closed sets;
// otherwise touching the line is allowed, which separates interiors.
fn separated_by_edge(a: &[ExactPoint; 3], b: &[ExactPoint; 3], strict: bool) -> bool {
    for i in 0..3 {
        let p = &a[i];
        let q = &a[(i + 1) % 3];
        let inside = orient(p, q, &a[(i + 2) % 3]);
        let outside = b.iter().all(|v| {
            let o = orient(p, q, v) * inside;
            if strict {
                o < 0
            } else {
                o <= 0
            }
        });
        if outside {
            return true;
        }
    }
    false
}

/// The closed triangles share at least one point.
pub fn triangles_intersect(a: &[ExactPoint; 3], b: &[ExactPoint; 3]) -> bool {
    !separated_by_edge(a, b, true) && !separated_by_edge(b, a, true)
}

/// The open triangles share a point.
pub fn triangles_overlap(a: &[ExactPoint; 3], b: &[ExactPoint; 3]) -> bool {
    !separated_by_edge(a, b, false) && !separated_by_edge(b, a, false)
}

pub fn tiles_intersect(a: &TilePose, b: &TilePose) -> bool {
    triangles_intersect(&a.vertices(), &b.vertices())
}
