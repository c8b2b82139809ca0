//! A coarser cell structure on the level-0 approximant, one 2-cell per
//! collared class, with boundary vertices chosen so that the substitution
//! map is cellular. The induced endomorphism of cohomology is computed here.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::corona::Enumeration;
use crate::error::{Error, Result};
use crate::geom::{point_in_triangle, point_on_segment, reference_vertices, Chirality, ExactPoint, TilePose};
use crate::linalg::{IntMatrix, SparseMatrix};
use crate::rational::ExactRational as Q;
use crate::substitution::SubstitutionRule;

use super::adjacency::Adjacency;
use super::cohomology::{cohomology_of, eventual_rank, induced_on_free_part, CohomologyReport};
use super::subdivide::{subdivide, VERTICES};
use super::uf::ParityUnionFind;

const MAX_POINTS: usize = 256;

/// Position on the boundary of the base tile as `(side, t)`, sides running
/// v0→v1→v2→v0 and corners taken at `t = 0`.
fn boundary_param(v: &[ExactPoint; 3], z: &ExactPoint) -> Option<(usize, Q)> {
    for s in 0..3 {
        let (p, q) = (&v[s], &v[(s + 1) % 3]);
        if point_on_segment(z, p, q) {
            let d = q - p;
            let t = &(z - p).dot(&d) * &d.norm2().recip().expect("nondegenerate side");
            if t != Q::one() {
                return Some((s, t));
            }
        }
    }
    None
}

/// Boundary vertices of each class, in boundary order.
fn saturate(r: &SubstitutionRule, e: &Enumeration, adj: &Adjacency) -> Result<Vec<Vec<ExactPoint>>> {
    let n = e.len();
    let verts: Vec<[ExactPoint; 3]> = e.classes.iter().map(|c| reference_vertices(c.chirality)).collect();
    let mut w: Vec<BTreeSet<ExactPoint>> =
        e.classes.iter().map(|c| subdivide(&TilePose::base(c.chirality)).vertices.into_iter().collect()).collect();
    let kids: Vec<Vec<TilePose>> = e.classes.iter().map(|c| r.children_of(&TilePose::base(c.chirality))).collect();
    loop {
        let mut added = false;
        for p in &adj.pairs {
            let m = p.pose.direct_part();
            let moved: Vec<ExactPoint> =
                w[p.b].iter().map(|z| m.apply(z)).filter(|z| boundary_param(&verts[p.a], z).is_some()).collect();
            for z in moved {
                added |= w[p.a].insert(z);
            }
        }
        for j in 0..n {
            let images: Vec<ExactPoint> = w[j].iter().map(|z| r.inflate_point(z)).collect();
            for z in images {
                for (c, kid) in kids[j].iter().enumerate() {
                    if point_in_triangle(&z, &kid.vertices()) {
                        let back = kid.direct_part().inverse().apply(&z);
                        added |= w[e.children[j][c]].insert(back);
                    }
                }
            }
        }
        if w.iter().any(|s| s.len() > MAX_POINTS) {
            return Err(Error::NonCellular("boundary vertex sets do not saturate".into()));
        }
        if !added {
            break;
        }
    }
    Ok(w.into_iter()
        .zip(&verts)
        .map(|(s, v)| {
            let mut pts: Vec<(usize, Q, ExactPoint)> = s
                .into_iter()
                .map(|z| {
                    let (side, t) = boundary_param(v, &z).expect("boundary point");
                    (side, t, z)
                })
                .collect();
            pts.sort();
            pts.into_iter().map(|(_, _, z)| z).collect()
        })
        .collect())
}

/// The tile-level complex: class `k` contributes one 2-cell whose boundary
/// is the cycle through `points[k]`.
#[derive(Clone, Debug)]
pub struct TileComplex {
    pub chirality: Vec<Chirality>,
    pub points: Vec<Vec<ExactPoint>>,
    offsets: Vec<usize>,
    index: Vec<HashMap<ExactPoint, usize>>,
    pub vertex_id: Vec<usize>,
    pub edge_id: Vec<(usize, i64)>,
    pub edge_ends: Vec<(usize, usize)>,
    pub counts: [usize; 3],
    pub boundary1: SparseMatrix,
    pub boundary2: SparseMatrix,
}

impl TileComplex {
    fn local(&self, k: usize, i: usize) -> usize {
        self.offsets[k] + i
    }

    fn next(&self, k: usize, i: usize) -> usize {
        (i + 1) % self.points[k].len()
    }

    pub fn point_counts(&self) -> Vec<usize> {
        self.points.iter().map(Vec::len).collect()
    }
}

pub fn build_tile_complex(r: &SubstitutionRule, e: &Enumeration, adj: &Adjacency) -> Result<TileComplex> {
    let points = saturate(r, e, adj)?;
    let n = points.len();
    let chirality: Vec<Chirality> = e.classes.iter().map(|c| c.chirality).collect();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut total = 0;
    for p in &points {
        offsets.push(total);
        total += p.len();
    }
    offsets.push(total);
    let index: Vec<HashMap<ExactPoint, usize>> =
        points.iter().map(|p| p.iter().cloned().enumerate().map(|(i, z)| (z, i)).collect()).collect();
    let verts: Vec<[ExactPoint; 3]> = chirality.iter().map(|&c| reference_vertices(c)).collect();

    // Local vertex i and local edge i (from point i to point i+1) share the
    // same flat index.
    let mut vuf = ParityUnionFind::new(total);
    let mut euf = ParityUnionFind::new(total);
    for p in &adj.pairs {
        let m = p.pose.direct_part();
        let mut map = HashMap::new();
        for (i, z) in points[p.b].iter().enumerate() {
            let y = m.apply(z);
            if boundary_param(&verts[p.a], &y).is_some() {
                let u = *index[p.a].get(&y).ok_or_else(|| {
                    Error::NonCellular(format!("classes {} and {}: boundary point {:?} not saturated", p.a, p.b, y))
                })?;
                vuf.union(offsets[p.a] + u, offsets[p.b] + i, false);
                map.insert(i, u);
            }
        }
        let (la, lb) = (points[p.a].len(), points[p.b].len());
        for i in 0..lb {
            if let (Some(&x), Some(&y)) = (map.get(&i), map.get(&((i + 1) % lb))) {
                let (ea, odd) = if (x + 1) % la == y {
                    (x, false)
                } else if (y + 1) % la == x {
                    (y, true)
                } else {
                    return Err(Error::NonCellular(format!("classes {} and {}: edge has no partner", p.a, p.b)));
                };
                if !euf.union(offsets[p.a] + ea, offsets[p.b] + i, odd) {
                    return Err(Error::NonCellular("edge glued to itself reversed".into()));
                }
            }
        }
    }

    let mut vertex_id = vec![0; total];
    let mut roots: HashMap<usize, usize> = HashMap::new();
    for (x, slot) in vertex_id.iter_mut().enumerate() {
        let root = vuf.find(x).0;
        let next = roots.len();
        *slot = *roots.entry(root).or_insert(next);
    }
    let nv = roots.len();
    let class_of = |x: usize| offsets.partition_point(|&o| o <= x) - 1;
    let mut edge_id = vec![(0, 1); total];
    let mut eroots: HashMap<usize, (usize, bool, bool)> = HashMap::new();
    let mut edge_ends = Vec::new();
    for x in 0..total {
        let k = class_of(x);
        let i = x - offsets[k];
        let (t, h) = (vertex_id[x], vertex_id[offsets[k] + (i + 1) % points[k].len()]);
        let (root, px) = euf.find(x);
        let next = eroots.len();
        let &mut (id, p0, flip) = eroots.entry(root).or_insert_with(|| {
            edge_ends.push(if t > h { (h, t) } else { (t, h) });
            (next, px, t > h)
        });
        let sign = if px ^ p0 ^ flip { -1 } else { 1 };
        let (gt, gh) = edge_ends[id];
        if (if sign == 1 { (t, h) } else { (h, t) }) != (gt, gh) {
            return Err(Error::NonCellular(format!("edge {i} of class {k} disagrees with its endpoints")));
        }
        edge_id[x] = (id, sign);
    }
    let ne = edge_ends.len();
    let boundary1 = SparseMatrix::from_triplets(
        nv,
        ne,
        edge_ends.iter().enumerate().filter(|(_, (t, h))| t != h).flat_map(|(j, &(t, h))| [(h, j, 1), (t, j, -1)]),
    );
    let boundary2 = SparseMatrix::from_triplets(
        ne,
        n,
        (0..total).map(|x| {
            let (g, s) = edge_id[x];
            (g, class_of(x), s)
        }),
    );
    Ok(TileComplex {
        chirality,
        points,
        offsets,
        index,
        vertex_id,
        edge_id,
        edge_ends,
        counts: [nv, ne, n],
        boundary1,
        boundary2,
    })
}

/// The substitution map on the tile-level complex: a point `x` of tile `j`
/// goes to `Φ(x)` in the child containing it.
pub fn substitution_chain_map(r: &SubstitutionRule, e: &Enumeration, q: &TileComplex) -> Result<[SparseMatrix; 3]> {
    let n = q.points.len();
    let mut vcol: Vec<Option<usize>> = vec![None; q.counts[0]];
    let mut ecol: Vec<Option<BTreeMap<usize, i64>>> = vec![None; q.counts[1]];
    let mut faces = Vec::new();
    for j in 0..n {
        let kids = r.children_of(&TilePose::base(q.chirality[j]));
        let frames: Vec<_> = kids.iter().map(|t| (t.direct_part(), t.direct_part().inverse(), t.vertices())).collect();
        for (i, z) in q.points[j].iter().enumerate() {
            let y = r.inflate_point(z);
            let mut img = None;
            for (c, (_, inv, tri)) in frames.iter().enumerate() {
                if point_in_triangle(&y, tri) {
                    let k = e.children[j][c];
                    let u = *q.index[k].get(&inv.apply(&y)).ok_or_else(|| {
                        Error::NonCellular(format!("image of boundary point {i} of class {j} is not a vertex"))
                    })?;
                    let g = q.vertex_id[q.local(k, u)];
                    if img.is_some_and(|h| h != g) {
                        return Err(Error::NonCellular(format!("point {i} of class {j} has two images")));
                    }
                    img = Some(g);
                }
            }
            let g = img.ok_or_else(|| Error::NonCellular(format!("point {i} of class {j} has no image")))?;
            let v = q.vertex_id[q.local(j, i)];
            match vcol[v] {
                Some(h) if h != g => return Err(Error::NonCellular(format!("vertex {v} has two images"))),
                _ => vcol[v] = Some(g),
            }

            let (s0, s1) = (y, r.inflate_point(&q.points[j][q.next(j, i)]));
            let dir = &s1 - &s0;
            let len2 = dir.norm2();
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            let mut covered = Q::zero();
            for (c, (fwd, _, _)) in frames.iter().enumerate() {
                let k = e.children[j][c];
                for a in 0..q.points[k].len() {
                    let b = q.next(k, a);
                    let (x0, x1) = (fwd.apply(&q.points[k][a]), fwd.apply(&q.points[k][b]));
                    if point_on_segment(&x0, &s0, &s1) && point_on_segment(&x1, &s0, &s1) {
                        let t = &(&x1 - &x0).dot(&dir) * &len2.recip().expect("nondegenerate edge");
                        let s = t.signum() as i64;
                        covered = &covered + &t.abs();
                        let (g, sg) = q.edge_id[q.local(k, a)];
                        *col.entry(g).or_default() += s * sg;
                    }
                }
            }
            if covered != Q::one() {
                return Err(Error::NonCellular(format!("image of edge {i} of class {j} is not a union of edges")));
            }
            let (g, sg) = q.edge_id[q.local(j, i)];
            let col: BTreeMap<usize, i64> =
                col.into_iter().filter(|(_, v)| *v != 0).map(|(h, v)| (h, v * sg)).collect();
            match &ecol[g] {
                Some(old) if *old != col => return Err(Error::NonCellular(format!("edge {g} has two images"))),
                _ => ecol[g] = Some(col),
            }
        }
        for (c, kid) in kids.iter().enumerate() {
            faces.push((e.children[j][c], j, q.chirality[j].sign() * kid.chirality.sign()));
        }
    }
    let g0 = SparseMatrix::from_triplets(
        q.counts[0],
        q.counts[0],
        vcol.iter().enumerate().map(|(x, g)| (g.expect("every vertex has an image"), x, 1)),
    );
    let g1 = SparseMatrix::from_triplets(
        q.counts[1],
        q.counts[1],
        ecol.iter()
            .enumerate()
            .flat_map(|(x, col)| col.as_ref().expect("every edge has an image").iter().map(move |(&g, &v)| (g, x, v))),
    );
    let g2 = SparseMatrix::from_triplets(q.counts[2], q.counts[2], faces);
    let ok = q.boundary1.mul(&g1)? == g0.mul(&q.boundary1)? && q.boundary2.mul(&g2)? == g1.mul(&q.boundary2)?;
    if !ok {
        return Err(Error::NonCellular("substitution map does not commute with the boundary".into()));
    }
    Ok([g0, g1, g2])
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionReport {
    pub cohomology: CohomologyReport,
    /// `M*` on `Hⁱ / torsion`, columns the images of basis classes.
    pub endomorphisms: Vec<Vec<Vec<i64>>>,
    /// Rank of `M*ᵏ` for large `k`: the rank of the rational direct limit.
    pub eventual_ranks: [usize; 3],
    pub rank_sequences: Vec<Vec<usize>>,
}

/// Cohomology of the tile-level complex and the substitution action on it.
pub fn cohomology_action(q: &TileComplex, g: &[SparseMatrix; 3]) -> Result<ActionReport> {
    let cohomology = cohomology_of(&q.boundary1, &q.boundary2, true)?;
    let d0 = q.boundary1.transpose();
    let d1 = q.boundary2.transpose();
    let gt: Vec<SparseMatrix> = g.iter().map(SparseMatrix::transpose).collect();
    let m = [
        induced_on_free_part(None, Some(&d0), q.counts[0], &gt[0])?,
        induced_on_free_part(Some(&d0), Some(&d1), q.counts[1], &gt[1])?,
        induced_on_free_part(Some(&d1), None, q.counts[2], &gt[2])?,
    ];
    let ranks: Vec<(usize, Vec<usize>)> = m.iter().map(eventual_rank).collect();
    Ok(ActionReport {
        cohomology,
        endomorphisms: m.iter().map(rows_i64).collect(),
        eventual_ranks: [ranks[0].0, ranks[1].0, ranks[2].0],
        rank_sequences: ranks.into_iter().map(|r| r.1).collect(),
    })
}

fn rows_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| i64::try_from(m.get(i, j)).expect("entry fits in i64")).collect())
        .collect()
}

/// Each subdivision vertex of a tile is among its boundary points.
pub fn contains_subdivision_vertices(q: &TileComplex) -> bool {
    q.points.iter().zip(&q.chirality).all(|(pts, &ch)| {
        let s = subdivide(&TilePose::base(ch));
        (0..VERTICES).all(|i| pts.contains(&s.vertices[i]))
    })
}
