//! Dense arbitrary-precision integer matrices.

use std::collections::BTreeMap;
use std::fmt;

use dashu_int::IBig;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use crate::rational::ExactRational as Q;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<IBig>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![IBig::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, IBig::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> IBig) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| IBig::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &IBig {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: IBig) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &IBig) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[IBig] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let rows = par::map_range(self.rows, |i| {
            let mut out = vec![IBig::ZERO; rhs.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == IBig::ZERO {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                    if *b != IBig::ZERO {
                        *o += a * b;
                    }
                }
            }
            out
        });
        Ok(IntMatrix { rows: self.rows, cols: rhs.cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn mul_vec(&self, v: &[IBig]) -> Result<Vec<IBig>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn mul_rat_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| Q::from(a.clone()) * b).sum()).collect())
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, got: rhs.rows * rhs.cols });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scaled(&self, k: i64) -> Self {
        let k = IBig::from(k);
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * &k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| *x == IBig::ZERO)
    }

    pub fn column_sums(&self) -> Vec<IBig> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).sum()).collect()
    }

    /// `P A Pᵀ` for the permutation sending index `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }

    /// Fraction-free row echelon form; returns the reduced matrix and its
    /// pivot columns.
    pub fn bareiss(&self) -> (IntMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut prev = IBig::ONE;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| *m.get(i, c) != IBig::ZERO) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let piv = m.get(r, c).clone();
            for i in r + 1..m.rows {
                let f = m.get(i, c).clone();
                for j in c + 1..m.cols {
                    let v = (&piv * m.get(i, j) - &f * m.get(r, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, c, IBig::ZERO);
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1.len()
    }

    /// Basis of the rational kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (m, pivots) = self.bareiss();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (r, &pc) in pivots.iter().enumerate().rev() {
                    let s: Q = (pc + 1..self.cols)
                        .filter(|&j| *m.get(r, j) != IBig::ZERO)
                        .map(|j| Q::from(m.get(r, j).clone()) * &x[j])
                        .sum();
                    x[pc] = -s / Q::from(m.get(r, pc).clone());
                }
                x
            })
            .collect()
    }

    /// Rows as `i64`, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| i64::try_from(x.clone()).ok()).collect()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn nonzero_entries(&self) -> Vec<(usize, usize, IBig)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for (j, x) in self.row(i).iter().enumerate() {
                if *x != IBig::ZERO {
                    out.push((i, j, x.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            let r: Vec<String> = self.row(i).iter().take(12).map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_i64_rows() {
            Some(rows) => rows.serialize(s),
            None => (0..self.rows)
                .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
                .serialize(s),
        }
    }
}

/// Square 0/1 matrix packed into `u64` words, for reachability powers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn support(a: &IntMatrix) -> Self {
        let n = a.rows();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..a.cols() {
                if *a.get(i, j) != IBig::ZERO {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BitMatrix { n, words, bits }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        let rows = par::map_range(self.n, |i| {
            let mut out = vec![0u64; self.words];
            for k in 0..self.n {
                if self.row(i)[k / 64] >> (k % 64) & 1 == 1 {
                    for (o, b) in out.iter_mut().zip(rhs.row(k)) {
                        *o |= b;
                    }
                }
            }
            out
        });
        BitMatrix { n: self.n, words: self.words, bits: rows.into_iter().flatten().collect() }
    }

    pub fn all_ones(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.row(i)[j / 64] >> (j % 64) & 1 == 1))
    }
}

/// Row-major sparse integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, IBig>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, IBig::ONE);
        }
        m
    }

    pub fn from_dense(a: &IntMatrix) -> Self {
        let mut m = Self::zeros(a.rows(), a.cols());
        for (i, j, x) in a.nonzero_entries() {
            m.data[i].insert(j, x);
        }
        m
    }

    /// Sums duplicate entries.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, x) in entries {
            m.add(i, j, &IBig::from(x));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> IBig {
        self.data[i].get(&j).cloned().unwrap_or(IBig::ZERO)
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, IBig> {
        &self.data[i]
    }

    pub fn add(&mut self, i: usize, j: usize, x: &IBig) {
        let e = self.data[i].entry(j).or_insert(IBig::ZERO);
        *e += x;
        if *e == IBig::ZERO {
            self.data[i].remove(&j);
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: IBig) {
        if x == IBig::ZERO {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, x) in r {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (&j, x) in r {
                t.data[j].insert(i, x.clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: rhs.rows });
        }
        let data = par::map(&self.data, |r| {
            let mut out: BTreeMap<usize, IBig> = BTreeMap::new();
            for (&k, a) in r {
                for (&j, b) in &rhs.data[k] {
                    *out.entry(j).or_insert(IBig::ZERO) += a * b;
                }
            }
            out.retain(|_, v| *v != IBig::ZERO);
            out
        });
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[IBig]) -> Result<Vec<IBig>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok(self.data.iter().map(|r| r.iter().map(|(&j, a)| a * &v[j]).sum()).collect())
    }

    /// Columns `start..end`, renumbered from zero.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        let data =
            self.data.iter().map(|r| r.range(start..end).map(|(&j, x)| (j - start, x.clone())).collect()).collect();
        SparseMatrix { rows: self.rows, cols: end - start, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(i, r)| r.len() == 1 && r.get(&i) == Some(&IBig::ONE))
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, IBig)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(&j, x)| (i, j, x.clone()))).collect()
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<BTreeMap<usize, IBig>> {
        &mut self.data
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_rat_vec(&ns[0]).unwrap().iter().all(Q::is_zero));
    }

    #[test]
    fn bareiss_last_pivot_is_determinant() {
        let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        let (e, p) = m.bareiss();
        assert_eq!(p, vec![0, 1, 2]);
        assert_eq!(*e.get(2, 2), IBig::from(18));
    }

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = a.mul(&a.transpose()).unwrap();
        assert_eq!(b, IntMatrix::from_rows(&[vec![5, 11], vec![11, 25]]));
    }

    #[test]
    fn sparse_roundtrip_and_product() {
        let a = IntMatrix::from_rows(&[vec![1, 0, 2], vec![0, -3, 0]]);
        let s = SparseMatrix::from_dense(&a);
        assert_eq!(s.to_dense(), a);
        assert_eq!(s.nnz(), 3);
        let p = s.mul(&s.transpose()).unwrap().to_dense();
        assert_eq!(p, a.mul(&a.transpose()).unwrap());
    }

    #[test]
    fn bit_powers() {
        let a = IntMatrix::from_rows(&[vec![0, 1], vec![1, 1]]);
        let b = BitMatrix::support(&a);
        assert!(!b.all_ones());
        assert!(b.mul(&b).all_ones());
    }
}
