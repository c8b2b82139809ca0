//! The forgetful map from the level-(l+1) approximant to the level-l one:
//! each unit simplex of a level-(l+1) supertile goes to the equal simplex of
//! the level-l supertile of its child.

use dashu_int::IBig;
use serde::Serialize;

use crate::corona::Enumeration;
use crate::error::{Error, Result};
use crate::geom::TilePose;
use crate::linalg::{IntMatrix, SparseMatrix};
use crate::rational::ExactRational as Q;
use crate::substitution::SubstitutionRule;

use super::complex::{conjugate_n, CellComplex};
use super::subdivide::{local_edges, TRIANGLES, VERTICES};

/// Chain map `f#` in each dimension; `maps[d]` sends `d`-chains of the
/// finer complex to `d`-chains of the coarser.
#[derive(Clone, Debug)]
pub struct CellMap {
    pub from_level: u32,
    pub maps: [SparseMatrix; 3],
}

impl CellMap {
    /// `∂∘f# = f#∘∂` in dimensions 1 and 2.
    pub fn commutes(&self, fine: &CellComplex, coarse: &CellComplex) -> Result<bool> {
        let b1 = coarse.boundary1.mul(&self.maps[1])? == self.maps[0].mul(&fine.boundary1)?;
        let b2 = coarse.boundary2.mul(&self.maps[2])? == self.maps[1].mul(&fine.boundary2)?;
        Ok(b1 && b2)
    }

    /// Unsigned incidence pattern of `f#` in dimension `d`.
    pub fn incidence(&self, d: usize) -> SparseMatrix {
        let m = &self.maps[d];
        SparseMatrix::from_triplets(m.rows(), m.cols(), m.triplets().into_iter().map(|(i, j, _)| (i, j, 1)))
    }
}

struct Slot<T> {
    value: Option<T>,
}

fn assign<T: PartialEq + std::fmt::Debug>(slot: &mut Slot<T>, v: T, what: &str) -> Result<()> {
    match &slot.value {
        None => {
            slot.value = Some(v);
            Ok(())
        }
        Some(old) if *old == v => Ok(()),
        Some(old) => Err(Error::NonCellular(format!("{what}: images {old:?} and {v:?} disagree"))),
    }
}

/// Builds `f#: C(fine) → C(coarse)` where `fine` has level `l + 1` and
/// `coarse` has level `l`.
pub fn substitution_on_cells(
    r: &SubstitutionRule,
    e: &Enumeration,
    fine: &CellComplex,
    coarse: &CellComplex,
) -> Result<CellMap> {
    let l = coarse.level;
    if fine.level != l + 1 {
        return Err(Error::DimensionMismatch { expected: l as usize + 1, got: fine.level as usize });
    }
    let block = 5usize.pow(l);
    let [fv, fe, ff] = fine.per_class();
    let [cv, ce, cf] = coarse.per_class();
    let mut vimg: Vec<Slot<usize>> = (0..fine.counts[0]).map(|_| Slot { value: None }).collect();
    let mut eimg: Vec<Slot<(usize, i64)>> = (0..fine.counts[1]).map(|_| Slot { value: None }).collect();
    let mut faces = Vec::with_capacity(fine.counts[2]);
    let local = local_edges();
    for j in 0..e.len() {
        let tf = fine.template(j);
        let kids = r.children_of(&TilePose::base(fine.chirality[j]));
        for (u, tile) in tf.tiles.iter().enumerate() {
            let (c, u2) = (u / block, u % block);
            let k = e.children[j][c];
            let tc = coarse.template(k);
            let m = conjugate_n(r, &kids[c].direct_part(), l);
            if tc.tiles[u2].transform(&m) != *tile {
                return Err(Error::NonCellular(format!("unit tile {u} of class {j} is not placed by child {c}")));
            }
            for i in 0..VERTICES {
                let g_fine = fine.vertex_id[j * fv + tf.tile_vertices[u][i]];
                let g_coarse = coarse.vertex_id[k * cv + tc.tile_vertices[u2][i]];
                assign(&mut vimg[g_fine], g_coarse, "vertex")?;
            }
            for &(a, b) in &local {
                let (te_f, tau_f) = tf.local_edge(u, a, b);
                let (te_c, tau_c) = tc.local_edge(u2, a, b);
                let (g_f, s_f) = fine.edge_id[j * fe + te_f];
                let (g_c, s_c) = coarse.edge_id[k * ce + te_c];
                assign(&mut eimg[g_f], (g_c, tau_f * s_f * tau_c * s_c), "edge")?;
            }
            for s in 0..TRIANGLES {
                faces.push((k * cf + u2 * TRIANGLES + s, j * ff + u * TRIANGLES + s, 1));
            }
        }
    }
    let f0 = SparseMatrix::from_triplets(
        coarse.counts[0],
        fine.counts[0],
        vimg.iter().enumerate().map(|(x, s)| (s.value.expect("every vertex is hit"), x, 1)),
    );
    let f1 = SparseMatrix::from_triplets(
        coarse.counts[1],
        fine.counts[1],
        eimg.iter().enumerate().map(|(x, s)| {
            let (g, sign) = s.value.expect("every edge is hit");
            (g, x, sign)
        }),
    );
    let f2 = SparseMatrix::from_triplets(coarse.counts[2], fine.counts[2], faces);
    let map = CellMap { from_level: l + 1, maps: [f0, f1, f2] };
    if !map.commutes(fine, coarse)? {
        return Err(Error::NonCellular("f# does not commute with the boundary".into()));
    }
    Ok(map)
}

/// Simplex-level refinement matrix at level 0: entry `((i, s'), (j, s))`
/// counts unit simplices of slot `s` in the level-1 supertile of class `j`
/// landing on simplex `s'` of class `i`.
pub fn refinement_matrix(map: &CellMap, classes: usize) -> Result<IntMatrix> {
    if map.from_level != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: map.from_level as usize });
    }
    let per_fine = 5 * TRIANGLES;
    let n = classes * TRIANGLES;
    let mut out = IntMatrix::zeros(n, n);
    for (row, col, v) in map.maps[2].triplets() {
        let (j, f) = (col / per_fine, col % per_fine);
        out.add_to(row, j * TRIANGLES + f % TRIANGLES, &v);
    }
    Ok(out)
}

/// `Σ_{s'} R[(i, s'), (j, s)]` for a fixed source slot `s`.
pub fn summed_over_slots(refinement: &IntMatrix, classes: usize, s: usize) -> IntMatrix {
    IntMatrix::from_fn(classes, classes, |i, j| {
        (0..TRIANGLES).map(|t| refinement.get(i * TRIANGLES + t, j * TRIANGLES + s).clone()).sum()
    })
}

/// `A ⊗ I₈`, indexed `(i, s)` at `8i + s`.
pub fn kron_identity(a: &IntMatrix) -> IntMatrix {
    let n = a.rows() * TRIANGLES;
    IntMatrix::from_fn(n, n, |x, y| {
        if x % TRIANGLES == y % TRIANGLES {
            a.get(x / TRIANGLES, y / TRIANGLES).clone()
        } else {
            IBig::ZERO
        }
    })
}

/// Pushforward `Ψ` of a simplex-level vector to tile level.
pub fn psi(k: &[IBig]) -> Vec<IBig> {
    k.chunks(TRIANGLES).map(|c| c.iter().sum()).collect()
}

/// State of a simplex-level limit element `[k, n]` with frequencies
/// `alpha_i` for every simplex of class `i`, relative to the tile count.
pub fn simplex_state(k: &[IBig], level: u32, alpha: &[Q], lambda: i64) -> Result<Q> {
    if k.len() != alpha.len() * TRIANGLES {
        return Err(Error::DimensionMismatch { expected: alpha.len() * TRIANGLES, got: k.len() });
    }
    let sum: Q = k.iter().enumerate().map(|(x, v)| &alpha[x / TRIANGLES] * &Q::from(v.clone())).sum();
    Ok(&sum * &Q::from(lambda).pow(1 - level as i64))
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementReport {
    pub kron_matches: bool,
    pub slot_sums_match: bool,
    pub eigenvector: bool,
}

/// Compares the geometric refinement matrix with the collared matrix `a`
/// and checks that `α ⊗ 1` is a `λ`-eigenvector of it.
pub fn check_refinement(refinement: &IntMatrix, a: &IntMatrix, alpha: &[Q], lambda: i64) -> Result<RefinementReport> {
    let n = a.rows();
    let slot_sums_match = (0..TRIANGLES).all(|s| summed_over_slots(refinement, n, s) == *a);
    let kron_matches = *refinement == kron_identity(a);
    let lifted: Vec<Q> = (0..n * TRIANGLES).map(|x| alpha[x / TRIANGLES].clone()).collect();
    let image = refinement.mul_rat_vec(&lifted)?;
    let eigenvector = image.iter().zip(&lifted).all(|(y, x)| *y == x * &Q::from(lambda));
    Ok(RefinementReport { kron_matches, slot_sums_match, eigenvector })
}
