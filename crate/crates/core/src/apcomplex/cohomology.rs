//! Integer cohomology of a two-dimensional cochain complex through Smith
//! normal forms, and induced maps on its free part.

use dashu_int::IBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, SparseMatrix};
use crate::snf::{snf_sparse, SnfResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degree {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: usize,
    pub relations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub counts: [usize; 3],
    pub degrees: [Degree; 3],
    /// `H²` as the cokernel of `δ¹: Z^E → Z^F`.
    pub h2_presentation: Presentation,
    pub euler_characteristic: i64,
    /// Whether every Smith form was re-multiplied and checked.
    pub verified: bool,
}

impl CohomologyReport {
    pub fn betti(&self) -> [usize; 3] {
        self.degrees.clone().map(|d| d.rank)
    }

    pub fn euler_matches(&self) -> bool {
        let [b0, b1, b2] = self.betti();
        b0 as i64 - b1 as i64 + b2 as i64 == self.euler_characteristic
    }
}

fn small(v: &[IBig]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("invariant factor fits in i64")).collect()
}

/// Cohomology of `Z^V ← Z^E ← Z^F` given the boundary maps `∂₁` and `∂₂`.
/// With `verify`, transforms are tracked and every Smith form is checked.
pub fn cohomology_of(b1: &SparseMatrix, b2: &SparseMatrix, verify: bool) -> Result<CohomologyReport> {
    let (v, e, f) = (b1.rows(), b1.cols(), b2.cols());
    if b2.rows() != e {
        return Err(Error::DimensionMismatch { expected: e, got: b2.rows() });
    }
    let s1 = snf_sparse(b1, verify);
    let s2 = snf_sparse(b2, verify);
    let verified = verify && s1.verify(b1)? && s2.verify(b2)?;
    if verify && !verified {
        return Err(Error::NonCellular("Smith form failed re-multiplication".into()));
    }
    let (r1, r2) = (s1.rank(), s2.rank());
    let degrees = [
        Degree { rank: v - r1, torsion: vec![] },
        Degree { rank: e - r1 - r2, torsion: small(&s1.torsion()) },
        Degree { rank: f - r2, torsion: small(&s2.torsion()) },
    ];
    Ok(CohomologyReport {
        counts: [v, e, f],
        degrees,
        h2_presentation: Presentation { generators: f, relations: e },
        euler_characteristic: v as i64 - e as i64 + f as i64,
        verified,
    })
}

fn tracked(a: &SparseMatrix) -> (SnfResult, crate::snf::Transforms) {
    let s = snf_sparse(a, true);
    let t = s.transforms.clone().expect("tracked");
    (s, t)
}

/// The map induced on `Hⁱ / torsion` by a cochain endomorphism `g` of `Cⁱ`.
/// `prev` is `δⁱ⁻¹` (into `Cⁱ`) and `next` is `δⁱ` (out of `Cⁱ`); either
/// may be absent at the ends of the complex. Columns of the result are the
/// images of a basis of the free part.
pub fn induced_on_free_part(
    prev: Option<&SparseMatrix>,
    next: Option<&SparseMatrix>,
    n: usize,
    g: &SparseMatrix,
) -> Result<IntMatrix> {
    let (r, u, u_inv) = match prev {
        Some(p) => {
            let (s, t) = tracked(p);
            (s.rank(), t.u, t.u_inv)
        }
        None => (0, SparseMatrix::identity(n), SparseMatrix::identity(n)),
    };
    let rest = n - r;
    let reduced = match next {
        Some(d) => d.mul(&u_inv)?.columns(r, n),
        None => SparseMatrix::zeros(0, rest),
    };
    let (s2, t2) = tracked(&reduced);
    let r2 = s2.rank();
    let dim = rest - r2;
    let v2 = t2.v.to_dense();
    let mut out = IntMatrix::zeros(dim, dim);
    for t in 0..dim {
        let mut y = vec![IBig::ZERO; n];
        for i in 0..rest {
            y[r + i] = v2.get(i, r2 + t).clone();
        }
        let x = u_inv.mul_vec(&y)?;
        let x2 = g.mul_vec(&x)?;
        let y2 = u.mul_vec(&x2)?;
        let c = t2.v_inv.mul_vec(&y2[r..])?;
        if c[..r2].iter().any(|z| *z != IBig::ZERO) {
            return Err(Error::NonCellular("image of a cocycle is not a cocycle".into()));
        }
        for (i, z) in c[r2..].iter().enumerate() {
            out.set(i, t, z.clone());
        }
    }
    Ok(out)
}

/// Ranks of `M, M², …` until two consecutive powers have equal rank.
pub fn eventual_rank(m: &IntMatrix) -> (usize, Vec<usize>) {
    if m.rows() == 0 {
        return (0, vec![]);
    }
    let mut ranks = Vec::new();
    let mut p = m.clone();
    loop {
        ranks.push(p.rank());
        let k = ranks.len();
        if k > 1 && ranks[k - 1] == ranks[k - 2] {
            return (ranks[k - 1], ranks);
        }
        p = p.mul(m).expect("square");
    }
}
