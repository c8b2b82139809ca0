//! Smith normal form over the integers.
//!
//! Elimination runs on a sparse row map with column supports. Pivots are
//! chosen by smallest absolute value, ties broken row-major. Transforms are
//! optional; when tracked, `U·A·V = D` with `U⁻¹` and `V⁻¹` kept alongside.

use std::collections::{BTreeMap, BTreeSet};

use dashu_int::ops::Abs;
use dashu_int::IBig;

use crate::error::Result;
use crate::linalg::{IntMatrix, SparseMatrix};
use crate::rational::int;

type Row = BTreeMap<usize, IBig>;

/// `dst += q·src`.
fn axpy(dst: &mut Row, src: &Row, q: &IBig) {
    for (&j, x) in src {
        let e = dst.entry(j).or_insert(IBig::ZERO);
        *e += q * x;
        if *e == IBig::ZERO {
            dst.remove(&j);
        }
    }
}

fn identity_rows(n: usize) -> Vec<Row> {
    (0..n).map(|i| BTreeMap::from([(i, IBig::ONE)])).collect()
}

struct Tracked {
    u: Vec<Row>,
    /// Columns of `U⁻¹`.
    u_inv_cols: Vec<Row>,
    /// Columns of `V`.
    v_cols: Vec<Row>,
    v_inv: Vec<Row>,
}

struct Engine {
    a: Vec<Row>,
    colsup: Vec<BTreeSet<usize>>,
    live_rows: BTreeSet<usize>,
    t: Option<Tracked>,
}

impl Engine {
    fn new(m: &SparseMatrix, track: bool) -> Self {
        let a: Vec<Row> = (0..m.rows()).map(|i| m.row(i).clone()).collect();
        let mut colsup = vec![BTreeSet::new(); m.cols()];
        for (i, r) in a.iter().enumerate() {
            for &j in r.keys() {
                colsup[j].insert(i);
            }
        }
        let live_rows = (0..m.rows()).filter(|&i| !a[i].is_empty()).collect();
        let t = track.then(|| Tracked {
            u: identity_rows(m.rows()),
            u_inv_cols: identity_rows(m.rows()),
            v_cols: identity_rows(m.cols()),
            v_inv: identity_rows(m.cols()),
        });
        Engine { a, colsup, live_rows, t }
    }

    /// `row_i -= q·row_r`.
    fn row_op(&mut self, i: usize, r: usize, q: &IBig) {
        let src = self.a[r].clone();
        let neg = -q;
        for (&j, x) in &src {
            let e = self.a[i].entry(j).or_insert(IBig::ZERO);
            *e += &neg * x;
            if *e == IBig::ZERO {
                self.a[i].remove(&j);
                self.colsup[j].remove(&i);
            } else {
                self.colsup[j].insert(i);
            }
        }
        if let Some(t) = &mut self.t {
            let ur = t.u[r].clone();
            axpy(&mut t.u[i], &ur, &neg);
            let ci = t.u_inv_cols[i].clone();
            axpy(&mut t.u_inv_cols[r], &ci, q);
        }
    }

    /// `col_j -= q·col_c`.
    fn col_op(&mut self, j: usize, c: usize, q: &IBig) {
        let rows: Vec<usize> = self.colsup[c].iter().copied().collect();
        for i in rows {
            let x = self.a[i][&c].clone();
            let e = self.a[i].entry(j).or_insert(IBig::ZERO);
            *e -= q * &x;
            if *e == IBig::ZERO {
                self.a[i].remove(&j);
                self.colsup[j].remove(&i);
            } else {
                self.colsup[j].insert(i);
            }
        }
        if let Some(t) = &mut self.t {
            let vc = t.v_cols[c].clone();
            axpy(&mut t.v_cols[j], &vc, &-q);
            let rj = t.v_inv[j].clone();
            axpy(&mut t.v_inv[c], &rj, q);
        }
    }

    fn find_pivot(&mut self) -> Option<(usize, usize)> {
        let mut best: Option<(IBig, usize, usize)> = None;
        let mut dead = Vec::new();
        for &i in &self.live_rows {
            if self.a[i].is_empty() {
                dead.push(i);
                continue;
            }
            for (&j, x) in &self.a[i] {
                let ax = x.clone().abs();
                if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                    let unit = ax == IBig::ONE;
                    best = Some((ax, i, j));
                    if unit {
                        for d in dead {
                            self.live_rows.remove(&d);
                        }
                        return Some((i, j));
                    }
                }
            }
        }
        for d in dead {
            self.live_rows.remove(&d);
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Clears row `r` and column `c` around the pivot; returns the final
    /// pivot position.
    fn isolate(&mut self, mut r: usize, mut c: usize) -> (usize, usize) {
        loop {
            let others: Vec<usize> = self.colsup[c].iter().copied().filter(|&i| i != r).collect();
            let p = self.a[r][&c].clone();
            for i in others {
                let q = &self.a[i][&c] / &p;
                if q != IBig::ZERO {
                    self.row_op(i, r, &q);
                }
            }
            let rem = self.colsup[c].iter().filter(|&&i| i != r).map(|&i| (self.a[i][&c].clone().abs(), i)).min();
            if let Some((_, i)) = rem {
                r = i;
                continue;
            }
            let others: Vec<usize> = self.a[r].keys().copied().filter(|&j| j != c).collect();
            for j in others {
                let q = &self.a[r][&j] / &p;
                if q != IBig::ZERO {
                    self.col_op(j, c, &q);
                }
            }
            let rem = self.a[r].iter().filter(|(&j, _)| j != c).map(|(&j, x)| (x.clone().abs(), j)).min();
            match rem {
                Some((_, j)) => c = j,
                None => return (r, c),
            }
        }
    }

    fn run(mut self, rows: usize, cols: usize) -> SnfResult {
        let mut pivots: Vec<(usize, usize, IBig)> = Vec::new();
        while let Some((r0, c0)) = self.find_pivot() {
            let (r, c) = self.isolate(r0, c0);
            let p = self.a[r].remove(&c).expect("pivot present");
            self.colsup[c].remove(&r);
            self.live_rows.remove(&r);
            pivots.push((r, c, p));
        }
        let order = |n: usize, used: Vec<usize>| -> Vec<usize> {
            let set: BTreeSet<usize> = used.iter().copied().collect();
            used.into_iter().chain((0..n).filter(|x| !set.contains(x))).collect()
        };
        let row_order = order(rows, pivots.iter().map(|p| p.0).collect());
        let col_order = order(cols, pivots.iter().map(|p| p.1).collect());
        let mut diag: Vec<IBig> = pivots.into_iter().map(|p| p.2).collect();
        let mut t = self.t.map(|t| Tracked {
            u: row_order.iter().map(|&i| t.u[i].clone()).collect(),
            u_inv_cols: row_order.iter().map(|&i| t.u_inv_cols[i].clone()).collect(),
            v_cols: col_order.iter().map(|&j| t.v_cols[j].clone()).collect(),
            v_inv: col_order.iter().map(|&j| t.v_inv[j].clone()).collect(),
        });
        fix_divisibility(&mut diag, t.as_mut());
        for (k, d) in diag.iter_mut().enumerate() {
            if *d < IBig::ZERO {
                *d = -d.clone();
                if let Some(t) = &mut t {
                    negate(&mut t.u[k]);
                    negate(&mut t.u_inv_cols[k]);
                }
            }
        }
        let transforms = t.map(|t| Transforms {
            u: from_rows(rows, rows, t.u),
            u_inv: from_rows(rows, rows, t.u_inv_cols).transpose(),
            v: from_rows(cols, cols, t.v_cols).transpose(),
            v_inv: from_rows(cols, cols, t.v_inv),
        });
        SnfResult { rows, cols, diag, transforms }
    }
}

fn negate(r: &mut Row) {
    for x in r.values_mut() {
        *x = -x.clone();
    }
}

fn from_rows(rows: usize, cols: usize, data: Vec<Row>) -> SparseMatrix {
    let mut m = SparseMatrix::zeros(rows, cols);
    *m.rows_mut() = data;
    m
}

/// Replaces `(a, b)` on positions `i < j` by `(gcd, lcm)` until each entry
/// divides the next.
fn fix_divisibility(diag: &mut [IBig], mut t: Option<&mut Tracked>) {
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let (a, b) = (diag[i].clone(), diag[j].clone());
            if &b % &a == IBig::ZERO {
                continue;
            }
            let (g, s, tt) = int::ext_gcd(&a, &b);
            let a1 = &a / &g;
            let b1 = &b / &g;
            diag[i] = g.clone();
            diag[j] = &a1 * &b;
            if let Some(t) = t.as_deref_mut() {
                // L = [[s, t], [-b', a']] on rows, R = [[1, -t b'], [1, s a']] on columns.
                let (ui, uj) = (t.u[i].clone(), t.u[j].clone());
                t.u[i] = lin(&ui, &s, &uj, &tt);
                t.u[j] = lin(&ui, &-&b1, &uj, &a1);
                let (ci, cj) = (t.u_inv_cols[i].clone(), t.u_inv_cols[j].clone());
                t.u_inv_cols[i] = lin(&ci, &a1, &cj, &b1);
                t.u_inv_cols[j] = lin(&ci, &-&tt, &cj, &s);
                let (vi, vj) = (t.v_cols[i].clone(), t.v_cols[j].clone());
                t.v_cols[i] = lin(&vi, &IBig::ONE, &vj, &IBig::ONE);
                t.v_cols[j] = lin(&vi, &-(&tt * &b1), &vj, &(&s * &a1));
                let (wi, wj) = (t.v_inv[i].clone(), t.v_inv[j].clone());
                t.v_inv[i] = lin(&wi, &(&s * &a1), &wj, &(&tt * &b1));
                t.v_inv[j] = lin(&wi, &-IBig::ONE, &wj, &IBig::ONE);
            }
        }
    }
}

fn lin(x: &Row, p: &IBig, y: &Row, q: &IBig) -> Row {
    let mut out = Row::new();
    axpy(&mut out, x, p);
    axpy(&mut out, y, q);
    out
}

#[derive(Clone, Debug)]
pub struct Transforms {
    pub u: SparseMatrix,
    pub u_inv: SparseMatrix,
    pub v: SparseMatrix,
    pub v_inv: SparseMatrix,
}

#[derive(Clone, Debug)]
pub struct SnfResult {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diag: Vec<IBig>,
    pub transforms: Option<Transforms>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<IBig> {
        self.diag.iter().filter(|d| **d != IBig::ONE).cloned().collect()
    }

    pub fn d_sparse(&self) -> SparseMatrix {
        let mut d = SparseMatrix::zeros(self.rows, self.cols);
        for (k, x) in self.diag.iter().enumerate() {
            d.set(k, k, x.clone());
        }
        d
    }

    pub fn d(&self) -> IntMatrix {
        self.d_sparse().to_dense()
    }

    /// Re-multiplies `U·A·V` against `D` and checks both inverse pairs,
    /// which certifies `|det U| = |det V| = 1`.
    pub fn verify(&self, a: &SparseMatrix) -> Result<bool> {
        let Some(t) = &self.transforms else {
            return Ok(false);
        };
        let uav = t.u.mul(a)?.mul(&t.v)?;
        let chain = self.diag.windows(2).all(|w| &w[1] % &w[0] == IBig::ZERO);
        Ok(chain && uav == self.d_sparse() && t.u.mul(&t.u_inv)?.is_identity() && t.v.mul(&t.v_inv)?.is_identity())
    }
}

/// Smith form with transforms.
pub fn snf(a: &IntMatrix) -> SnfResult {
    snf_sparse(&SparseMatrix::from_dense(a), true)
}

pub fn snf_sparse(a: &SparseMatrix, track: bool) -> SnfResult {
    Engine::new(a, track).run(a.rows(), a.cols())
}

pub fn invariant_factors(a: &SparseMatrix) -> Vec<IBig> {
    snf_sparse(a, false).diag
}
