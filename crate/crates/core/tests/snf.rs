mod common;

use proptest::prelude::*;

use pinwheel_core::linalg::{IntMatrix, SparseMatrix};
use pinwheel_core::snf::{invariant_factors, snf};

use common::determinantal_invariants;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(m, n)| proptest::collection::vec(proptest::collection::vec(-7i64..=7, n), m))
}

/// Low-rank products exercise the zero invariants and large torsion.
fn product() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=3, 1usize..=4).prop_flat_map(|(m, k, n)| {
        (
            proptest::collection::vec(proptest::collection::vec(-4i64..=4, k), m),
            proptest::collection::vec(proptest::collection::vec(-4i64..=4, n), k),
        )
            .prop_map(move |(a, b)| {
                (0..m).map(|i| (0..n).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
            })
    })
}

fn check(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let a = IntMatrix::from_rows(rows);
    let s = snf(&a);
    prop_assert!(s.verify(&SparseMatrix::from_dense(&a)).unwrap());
    let got: Vec<i128> = s.diag.iter().map(|d| i128::try_from(d).unwrap()).collect();
    prop_assert_eq!(&got, &determinantal_invariants(rows));
    prop_assert_eq!(s.rank(), a.rank());
    let untracked = invariant_factors(&SparseMatrix::from_dense(&a));
    prop_assert_eq!(untracked, s.diag);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_determinantal_divisors(rows in matrix()) {
        check(&rows)?;
    }

    #[test]
    fn low_rank_products(rows in product()) {
        check(&rows)?;
    }

    #[test]
    fn transpose_has_the_same_form(rows in matrix()) {
        let a = IntMatrix::from_rows(&rows);
        prop_assert_eq!(snf(&a).diag, snf(&a.transpose()).diag);
    }
}

#[test]
fn known_forms() {
    let cases: [(Vec<Vec<i64>>, Vec<i128>); 3] = [
        (vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], vec![2, 6, 12]),
        (vec![vec![0, 0], vec![0, 0]], vec![]),
        (vec![vec![6, 0], vec![0, 4]], vec![2, 12]),
    ];
    for (rows, expected) in cases {
        assert_eq!(determinantal_invariants(&rows), expected);
        let got: Vec<i128> =
            snf(&IntMatrix::from_rows(&rows)).diag.iter().map(|d| i128::try_from(d).unwrap()).collect();
        assert_eq!(got, expected);
    }
}
