//! Collared substitution matrix and its Perron data.

use dashu_int::IBig;

use crate::error::{Error, Result};
use crate::linalg::{BitMatrix, IntMatrix};
use crate::rational::{int, ExactRational as Q};

/// `A[i][j]` = number of children of class `j` that lie in class `i`.
pub fn collared_matrix(children: &[Vec<usize>]) -> IntMatrix {
    let n = children.len();
    let mut a = IntMatrix::zeros(n, n);
    for (j, kids) in children.iter().enumerate() {
        for &i in kids {
            a.add_to(i, j, &IBig::ONE);
        }
    }
    a
}

/// Smallest `k <= max_power` with `A^k` entrywise positive.
pub fn primitivity(a: &IntMatrix, max_power: u32) -> Result<u32> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: a.cols() });
    }
    let base = BitMatrix::support(a);
    let mut p = base.clone();
    for k in 1..=max_power {
        if p.all_ones() {
            return Ok(k);
        }
        p = p.mul(&base);
    }
    Err(Error::NotPrimitive(max_power))
}

pub fn is_mirror_symmetric(a: &IntMatrix, mirror: &[usize]) -> bool {
    a.permute(mirror) == *a
}

#[derive(Clone, Debug)]
pub struct PerronData {
    pub lambda: i64,
    /// Normalized eigenvector, `Σ α = 1`.
    pub alpha: Vec<Q>,
    /// Least common denominator of `alpha`.
    pub denominator: IBig,
    /// `D·α`.
    pub alpha_prime: Vec<IBig>,
    pub gcd: IBig,
    /// Rank of `A − λI`.
    pub rank: usize,
}

pub fn perron_data(a: &IntMatrix, lambda: i64) -> Result<PerronData> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.cols() });
    }
    let sums = a.column_sums();
    if sums.windows(2).all(|w| w[0] == w[1]) && sums.first().is_some_and(|s| *s != IBig::from(lambda)) {
        return Err(Error::WrongEigenvalue { lambda, column_sum: sums[0].to_string() });
    }
    let shifted = a.sub(&IntMatrix::identity(n).scaled(lambda))?;
    let kernel = shifted.nullspace();
    let rank = n - kernel.len();
    if kernel.len() != 1 {
        return Err(Error::EigenspaceDim { lambda, dim: kernel.len() });
    }
    let v = &kernel[0];
    let total: Q = v.iter().cloned().sum();
    if total.is_zero() {
        return Err(Error::NoPositiveSolution);
    }
    let alpha: Vec<Q> = v.iter().map(|x| x / &total).collect();
    if alpha.iter().any(|x| x.signum() <= 0) {
        return Err(Error::NoPositiveSolution);
    }
    let denominator = alpha.iter().fold(IBig::ONE, |acc, x| {
        let d = x.denom();
        let g = int::gcd(&acc, &d);
        &acc / &g * &d
    });
    let dq = Q::from(denominator.clone());
    let alpha_prime: Vec<IBig> = alpha.iter().map(|x| (x * &dq).numer().clone()).collect();
    let gcd = alpha_prime.iter().fold(IBig::ZERO, |g, x| int::gcd(&g, x));
    Ok(PerronData { lambda, alpha, denominator, alpha_prime, gcd, rank })
}

/// Sorted values with multiplicity.
pub fn multiset(values: &[IBig]) -> Vec<IBig> {
    let mut v = values.to_vec();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = IntMatrix::from_rows(&[vec![2, 3], vec![3, 2]]);
        assert_eq!(primitivity(&a, 32).unwrap(), 1);
        let p = perron_data(&a, 5).unwrap();
        assert_eq!(p.alpha, vec![Q::ratio(1, 2), Q::ratio(1, 2)]);
        assert_eq!(p.rank, 1);
        assert!(is_mirror_symmetric(&a, &[1, 0]));
    }

    #[test]
    fn identity_not_primitive() {
        assert!(matches!(primitivity(&IntMatrix::identity(2), 32), Err(Error::NotPrimitive(32))));
    }

    #[test]
    fn degenerate_eigenspace() {
        let a = IntMatrix::from_rows(&[vec![5, 0], vec![0, 5]]);
        assert!(matches!(perron_data(&a, 5), Err(Error::EigenspaceDim { dim: 2, .. })));
    }

    #[test]
    fn wrong_lambda() {
        let a = IntMatrix::from_rows(&[vec![2, 3], vec![3, 2]]);
        assert!(perron_data(&a, 4).is_err());
    }

    #[test]
    fn matrix_from_children() {
        let a = collared_matrix(&[vec![0, 0, 1, 1, 1], vec![0, 0, 0, 1, 1]]);
        assert_eq!(a, IntMatrix::from_rows(&[vec![2, 3], vec![3, 2]]));
    }
}
