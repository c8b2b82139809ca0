//! The subdivided level-l supertile of a base tile.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::{point_in_triangle, point_on_segment, Chirality, ExactPoint, TilePose};
use crate::rational::ExactRational as Q;
use crate::substitution::SubstitutionRule;

use super::subdivide::{local_edges, subdivide, TRIANGLES, VERTICES};

/// Unit tiles of `Φˡ(T)` subdivided, with vertices and edges deduplicated by
/// exact position. Face `8u + s` is triangle `s` of unit tile `u`.
#[derive(Clone, Debug)]
pub struct Template {
    pub level: u32,
    pub chirality: Chirality,
    pub tiles: Vec<TilePose>,
    pub region: [ExactPoint; 3],
    pub vertices: Vec<ExactPoint>,
    pub tile_vertices: Vec<[usize; VERTICES]>,
    /// `(low, high)` template vertex ids; the low end is the tail.
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<[usize; 3]>,
    /// Vertices on the boundary of the region.
    pub boundary_vertices: Vec<usize>,
    /// Edges bounding a single face.
    pub boundary_edges: Vec<usize>,
    vertex_index: HashMap<ExactPoint, usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

fn on_boundary(p: &ExactPoint, t: &[ExactPoint; 3]) -> bool {
    (0..3).any(|i| point_on_segment(p, &t[i], &t[(i + 1) % 3]))
}

impl Template {
    pub fn new(r: &SubstitutionRule, chirality: Chirality, level: u32) -> Self {
        let mut tiles = vec![TilePose::base(chirality)];
        for _ in 0..level {
            tiles = r.expand_patch(&crate::geom::Patch::new(tiles)).tiles;
        }
        let region = r.supertile_vertices(chirality, level);
        let mut vertices = Vec::new();
        let mut vertex_index = HashMap::new();
        let mut tile_vertices = Vec::with_capacity(tiles.len());
        for t in &tiles {
            let s = subdivide(t);
            tile_vertices.push(s.vertices.map(|p| {
                *vertex_index.entry(p.clone()).or_insert_with(|| {
                    vertices.push(p);
                    vertices.len() - 1
                })
            }));
        }
        let local = local_edges();
        let mut edges = Vec::new();
        let mut edge_index = HashMap::new();
        for tv in &tile_vertices {
            for &(i, j) in &local {
                let (a, b) = (tv[i].min(tv[j]), tv[i].max(tv[j]));
                edge_index.entry((a, b)).or_insert_with(|| {
                    edges.push((a, b));
                    edges.len() - 1
                });
            }
        }
        let faces: Vec<[usize; 3]> = tile_vertices
            .iter()
            .flat_map(|tv| subdivide(&TilePose::base(chirality)).triangles.map(|t| t.map(|i| tv[i])))
            .collect();
        let mut degree = vec![0usize; edges.len()];
        for f in &faces {
            for k in 0..3 {
                let (a, b) = (f[k].min(f[(k + 1) % 3]), f[k].max(f[(k + 1) % 3]));
                degree[edge_index[&(a, b)]] += 1;
            }
        }
        let boundary_edges = (0..edges.len()).filter(|&e| degree[e] == 1).collect();
        let boundary_vertices = (0..vertices.len()).filter(|&v| on_boundary(&vertices[v], &region)).collect();
        Template {
            level,
            chirality,
            tiles,
            region,
            vertices,
            tile_vertices,
            edges,
            faces,
            boundary_vertices,
            boundary_edges,
            vertex_index,
            edge_index,
        }
    }

    pub fn vertex_at(&self, p: &ExactPoint) -> Option<usize> {
        self.vertex_index.get(p).copied()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    /// Template edge of local edge `(i, j)` of unit tile `u`, with `+1` if
    /// the template orientation runs from local `i` to local `j`.
    pub fn local_edge(&self, u: usize, i: usize, j: usize) -> (usize, i64) {
        let (a, b) = (self.tile_vertices[u][i], self.tile_vertices[u][j]);
        (self.edge_between(a, b).expect("local edge is a template edge"), if a < b { 1 } else { -1 })
    }

    /// Boundary of face `f` as `(edge, sign)` triples, following the face's
    /// vertex order.
    pub fn face_boundary(&self, f: usize) -> [(usize, i64); 3] {
        let t = self.faces[f];
        std::array::from_fn(|k| {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            (self.edge_between(a, b).expect("face edge"), if a < b { 1 } else { -1 })
        })
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        point_in_triangle(p, &self.region)
    }

    /// Checks that the union subdivision is a simplicial complex: every
    /// edge bounds one or two faces, single-face edges lie on the region
    /// boundary, and no vertex lies inside an edge.
    pub fn check_simplicial(&self) -> Result<SimplicialReport> {
        let mut degree = vec![0usize; self.edges.len()];
        for f in 0..self.faces.len() {
            for (e, _) in self.face_boundary(f) {
                degree[e] += 1;
            }
        }
        let mut interior = 0;
        for (e, &d) in degree.iter().enumerate() {
            let (a, b) = self.edges[e];
            match d {
                2 => interior += 1,
                1 if on_boundary(&self.vertices[a].lerp(&self.vertices[b], &Q::ratio(1, 2)), &self.region) => {}
                _ => {
                    return Err(Error::NonSimplicialAdjacency(format!(
                        "edge {:?}-{:?} bounds {d} triangles",
                        self.vertices[a], self.vertices[b]
                    )))
                }
            }
        }
        let grid = VertexGrid::new(&self.vertices);
        for &(a, b) in &self.edges {
            let (p, q) = (&self.vertices[a], &self.vertices[b]);
            for v in grid.near_segment(p, q) {
                if v != a && v != b && point_on_segment(&self.vertices[v], p, q) {
                    return Err(Error::NonSimplicialAdjacency(format!(
                        "vertex {:?} lies inside edge {:?}-{:?}",
                        self.vertices[v], p, q
                    )));
                }
            }
        }
        Ok(SimplicialReport {
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            faces: self.faces.len(),
            interior_edges: interior,
            boundary_edges: self.edges.len() - interior,
        })
    }

    pub fn faces_per_tile() -> usize {
        TRIANGLES
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SimplicialReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub interior_edges: usize,
    pub boundary_edges: usize,
}

/// Vertices bucketed by integer floor of their coordinates.
struct VertexGrid {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

fn floor(q: &Q) -> i64 {
    i64::try_from(q.floor()).expect("coordinate fits in i64")
}

impl VertexGrid {
    fn new(v: &[ExactPoint]) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in v.iter().enumerate() {
            cells.entry((floor(&p.x), floor(&p.y))).or_default().push(i);
        }
        VertexGrid { cells }
    }

    fn near_segment(&self, p: &ExactPoint, q: &ExactPoint) -> Vec<usize> {
        let (x0, x1) = (floor(&p.x).min(floor(&q.x)), floor(&p.x).max(floor(&q.x)));
        let (y0, y1) = (floor(&p.y).min(floor(&q.y)), floor(&p.y).max(floor(&q.y)));
        (x0..=x1)
            .flat_map(|x| (y0..=y1).map(move |y| (x, y)))
            .filter_map(|c| self.cells.get(&c))
            .flatten()
            .copied()
            .collect()
    }
}
