//! Gluing subdivided collared supertiles into the approximant complex.

use std::collections::HashMap;

use dashu_int::IBig;
use serde::Serialize;

use crate::corona::Enumeration;
use crate::error::{Error, Result};
use crate::geom::{Chirality, Isometry};
use crate::linalg::SparseMatrix;
use crate::par;
use crate::substitution::SubstitutionRule;

use super::adjacency::{Adjacency, PairType};
use super::template::Template;
use super::uf::ParityUnionFind;

/// The two templates of one level.
#[derive(Clone, Debug)]
pub struct Templates {
    pub plus: Template,
    pub minus: Template,
}

impl Templates {
    pub fn new(r: &SubstitutionRule, level: u32) -> Self {
        let mut both = par::map(&[Chirality::Plus, Chirality::Minus], |&ch| Template::new(r, ch, level));
        let minus = both.pop().expect("two templates");
        let plus = both.pop().expect("two templates");
        Templates { plus, minus }
    }

    pub fn get(&self, ch: Chirality) -> &Template {
        match ch {
            Chirality::Plus => &self.plus,
            Chirality::Minus => &self.minus,
        }
    }
}

/// `Φˡ ∘ g ∘ Φ⁻ˡ` for a direct isometry `g`.
pub fn conjugate_n(r: &SubstitutionRule, g: &Isometry, level: u32) -> Isometry {
    (0..level).fold(g.clone(), |h, _| r.conjugate_by_phi(&h))
}

struct Merges {
    vertices: Vec<(usize, usize)>,
    edges: Vec<(usize, usize, bool)>,
}

fn glue_pair(p: &PairType, ta: &Template, tb: &Template, m: &Isometry) -> Result<Merges> {
    let mut vmap = HashMap::new();
    for &v in &tb.boundary_vertices {
        let z = m.apply(&tb.vertices[v]);
        if ta.contains(&z) {
            let u = ta.vertex_at(&z).ok_or_else(|| {
                Error::NonSimplicialAdjacency(format!(
                    "classes {} and {}: vertex {:?} of the second is not a vertex of the first",
                    p.a, p.b, z
                ))
            })?;
            vmap.insert(v, u);
        }
    }
    let minv = m.inverse();
    for &u in &ta.boundary_vertices {
        let z = minv.apply(&ta.vertices[u]);
        if tb.contains(&z) && tb.vertex_at(&z).is_none() {
            return Err(Error::NonSimplicialAdjacency(format!(
                "classes {} and {}: vertex {:?} of the first is not a vertex of the second",
                p.a, p.b, ta.vertices[u]
            )));
        }
    }
    let mut edges = Vec::new();
    for &e in &tb.boundary_edges {
        let (x, y) = tb.edges[e];
        if let (Some(&ux), Some(&uy)) = (vmap.get(&x), vmap.get(&y)) {
            let ea = ta.edge_between(ux, uy).ok_or_else(|| {
                Error::NonSimplicialAdjacency(format!(
                    "classes {} and {}: edge {:?}-{:?} has no partner",
                    p.a, p.b, ta.vertices[ux], ta.vertices[uy]
                ))
            })?;
            edges.push((ea, e, ux != ta.edges[ea].0));
        }
    }
    Ok(Merges { vertices: vmap.into_iter().map(|(v, u)| (u, v)).collect(), edges })
}

/// The approximant complex at level `l`: one subdivided level-l supertile
/// per collared class, glued along every adjacency type.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub level: u32,
    pub chirality: Vec<Chirality>,
    pub templates: Templates,
    /// Global vertex of `(class, template vertex)`, at `class·nv + v`.
    pub vertex_id: Vec<usize>,
    /// Global edge of `(class, template edge)` and the sign of the template
    /// orientation relative to the global one.
    pub edge_id: Vec<(usize, i64)>,
    /// Tail and head of each global edge.
    pub edge_ends: Vec<(usize, usize)>,
    pub counts: [usize; 3],
    pub boundary1: SparseMatrix,
    pub boundary2: SparseMatrix,
}

impl CellComplex {
    pub fn per_class(&self) -> [usize; 3] {
        let t = &self.templates.plus;
        [t.vertices.len(), t.edges.len(), t.faces.len()]
    }

    pub fn classes(&self) -> usize {
        self.chirality.len()
    }

    pub fn template(&self, class: usize) -> &Template {
        self.templates.get(self.chirality[class])
    }

    pub fn face_id(&self, class: usize, face: usize) -> usize {
        class * self.per_class()[2] + face
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts[0] as i64 - self.counts[1] as i64 + self.counts[2] as i64
    }

    /// Occurrences `(class, local cell)` of every global cell of dimension
    /// `dim`.
    pub fn cell_classes(&self, dim: usize) -> Vec<Vec<(usize, usize)>> {
        let per = self.per_class()[dim];
        let mut out = vec![Vec::new(); self.counts[dim]];
        for x in 0..self.classes() * per {
            let g = match dim {
                0 => self.vertex_id[x],
                1 => self.edge_id[x].0,
                _ => x,
            };
            out[g].push((x / per, x % per));
        }
        out
    }

    /// Whether `∂₁∘∂₂` vanishes.
    pub fn boundaries_compose_to_zero(&self) -> Result<bool> {
        Ok(self.boundary1.mul(&self.boundary2)?.is_zero())
    }

    /// Incidence numbers of each face with its edges are ±1 and each face
    /// boundary is a cycle.
    pub fn orientation_coherent(&self) -> bool {
        let b2t = self.boundary2.transpose();
        (0..self.counts[2]).all(|f| {
            let row = b2t.row(f);
            let unit = row.values().all(|v| *v == IBig::ONE || *v == IBig::NEG_ONE);
            let mut acc: HashMap<usize, IBig> = HashMap::new();
            for (&e, s) in row {
                let (t, h) = self.edge_ends[e];
                *acc.entry(h).or_default() += s;
                *acc.entry(t).or_default() -= s;
            }
            unit && row.len() == 3 && acc.values().all(|v| *v == IBig::ZERO)
        })
    }

    pub fn dump(&self) -> ComplexDump {
        let trip = |m: &SparseMatrix| {
            m.triplets()
                .into_iter()
                .map(|(i, j, v)| (i, j, i64::try_from(&v).expect("incidence fits in i64")))
                .collect()
        };
        ComplexDump {
            level: self.level,
            counts: self.counts,
            boundary1: trip(&self.boundary1),
            boundary2: trip(&self.boundary2),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDump {
    pub level: u32,
    pub counts: [usize; 3],
    pub boundary1: Vec<(usize, usize, i64)>,
    pub boundary2: Vec<(usize, usize, i64)>,
}

pub fn build_complex(r: &SubstitutionRule, e: &Enumeration, adj: &Adjacency, level: u32) -> Result<CellComplex> {
    let templates = Templates::new(r, level);
    build_with_templates(r, e, adj, templates)
}

pub fn build_with_templates(
    r: &SubstitutionRule,
    e: &Enumeration,
    adj: &Adjacency,
    templates: Templates,
) -> Result<CellComplex> {
    let level = templates.plus.level;
    let chirality: Vec<Chirality> = e.classes.iter().map(|c| c.chirality).collect();
    let n = chirality.len();
    let (nv, ne, nf) = {
        let t = &templates.plus;
        (t.vertices.len(), t.edges.len(), t.faces.len())
    };
    let m = &templates.minus;
    if (m.vertices.len(), m.edges.len(), m.faces.len()) != (nv, ne, nf) {
        return Err(Error::NonSimplicialAdjacency("mirror templates differ in size".into()));
    }
    for p in &adj.pairs {
        if p.a >= n || p.b >= n {
            return Err(Error::UnknownClass(p.a.max(p.b)));
        }
    }

    let merges = par::map(&adj.pairs, |p| {
        let g = conjugate_n(r, &p.pose.direct_part(), level);
        glue_pair(p, templates.get(chirality[p.a]), templates.get(chirality[p.b]), &g)
    });
    let mut vuf = ParityUnionFind::new(n * nv);
    let mut euf = ParityUnionFind::new(n * ne);
    for (p, mg) in adj.pairs.iter().zip(merges) {
        let mg = mg?;
        for (u, v) in mg.vertices {
            vuf.union(p.a * nv + u, p.b * nv + v, false);
        }
        for (ea, eb, odd) in mg.edges {
            if !euf.union(p.a * ne + ea, p.b * ne + eb, odd) {
                return Err(Error::NonSimplicialAdjacency(format!(
                    "classes {} and {}: an edge is glued to itself reversed",
                    p.a, p.b
                )));
            }
        }
    }

    let mut vertex_id = vec![0; n * nv];
    let mut vroot: HashMap<usize, usize> = HashMap::new();
    for (x, slot) in vertex_id.iter_mut().enumerate() {
        let (root, _) = vuf.find(x);
        let next = vroot.len();
        *slot = *vroot.entry(root).or_insert(next);
    }
    let nvg = vroot.len();

    // First occurrence of each edge class fixes its representative.
    let tmpl = |k: usize| templates.get(chirality[k]);
    let ends = |x: usize| {
        let (a, b) = tmpl(x / ne).edges[x % ne];
        let k = x / ne;
        (vertex_id[k * nv + a], vertex_id[k * nv + b])
    };
    let mut edge_id = vec![(0usize, 1i64); n * ne];
    let mut eroot: HashMap<usize, (usize, bool, bool)> = HashMap::new();
    let mut edge_ends = Vec::new();
    for (x, slot) in edge_id.iter_mut().enumerate() {
        let (root, px) = euf.find(x);
        let (t, h) = ends(x);
        let next = eroot.len();
        let &mut (id, p0, flip) = eroot.entry(root).or_insert_with(|| {
            let flip = t > h;
            edge_ends.push(if flip { (h, t) } else { (t, h) });
            (next, px, flip)
        });
        let sign = if (px ^ p0) ^ flip { -1 } else { 1 };
        let (gt, gh) = edge_ends[id];
        let consistent = if sign == 1 { (t, h) == (gt, gh) } else { (h, t) == (gt, gh) };
        if !consistent {
            return Err(Error::NonSimplicialAdjacency(format!(
                "edge occurrence {} of class {} disagrees with its glued endpoints",
                x % ne,
                x / ne
            )));
        }
        *slot = (id, sign);
    }
    let neg = edge_ends.len();
    let nfg = n * nf;

    let boundary1 = SparseMatrix::from_triplets(
        nvg,
        neg,
        edge_ends.iter().enumerate().filter(|(_, (t, h))| t != h).flat_map(|(j, &(t, h))| [(h, j, 1), (t, j, -1)]),
    );
    let mut b2 = Vec::with_capacity(3 * nfg);
    for k in 0..n {
        let t = tmpl(k);
        for f in 0..nf {
            for (te, s) in t.face_boundary(f) {
                let (g, sign) = edge_id[k * ne + te];
                b2.push((g, k * nf + f, s * sign));
            }
        }
    }
    let boundary2 = SparseMatrix::from_triplets(neg, nfg, b2);

    Ok(CellComplex {
        level,
        chirality,
        templates,
        vertex_id,
        edge_id,
        edge_ends,
        counts: [nvg, neg, nfg],
        boundary1,
        boundary2,
    })
}
