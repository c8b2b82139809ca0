#![allow(dead_code)]

use std::sync::OnceLock;

use pinwheel_core::apcomplex::{enumerate_pairs, Adjacency};
use pinwheel_core::corona::{enumerate_collared, EnumConfig, Enumeration};
use pinwheel_core::linalg::IntMatrix;
use pinwheel_core::perron::{collared_matrix, perron_data, PerronData};
use pinwheel_core::substitution::{pinwheel_rule, SubstitutionRule};

pub struct Fixture {
    pub rule: SubstitutionRule,
    pub classes: Enumeration,
    pub matrix: IntMatrix,
    pub perron: PerronData,
    adjacency: OnceLock<Adjacency>,
}

impl Fixture {
    pub fn adjacency(&self) -> &Adjacency {
        self.adjacency
            .get_or_init(|| enumerate_pairs(&self.rule, &self.classes, EnumConfig::default()).expect("adjacency types"))
    }
}

pub fn pinwheel() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let rule = pinwheel_rule();
        let classes = enumerate_collared(&rule, EnumConfig::default()).expect("enumeration");
        let matrix = collared_matrix(&classes.children);
        let perron = perron_data(&matrix, 5).expect("perron data");
        Fixture { rule, classes, matrix, perron, adjacency: OnceLock::new() }
    })
}

/// The 54 values listed for the normalized eigenvector, one per mirror pair.
pub const REFERENCE_ALPHA_PRIME: [i64; 54] = [
    765, 1185, 360, 255, 735, 1185, 360, 255, 765, 90, 90, 255, 250, 80, 735, 255, 80, 400, 360, 660, 600, 660, 300,
    360, 360, 255, 400, 360, 90, 255, 90, 350, 90, 255, 250, 255, 80, 80, 163, 18, 237, 72, 90, 360, 237, 72, 204, 204,
    163, 300, 51, 18, 50, 51,
];

/// Smith invariants of a small matrix from determinantal divisors: `d_k` is
/// the gcd of all `k×k` minors and the `k`-th invariant is `d_k / d_{k-1}`.
pub fn determinantal_invariants(a: &[Vec<i64>]) -> Vec<i128> {
    let (m, n) = (a.len(), a.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev: i128 = 1;
    for k in 1..=m.min(n) {
        let mut g: i128 = 0;
        for rows in subsets(m, k) {
            for cols in subsets(n, k) {
                let sub: Vec<Vec<i128>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j] as i128).collect()).collect();
                g = gcd(g, det(sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Cofactor expansion along the first row.
fn det(a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .filter(|&j| a[0][j] != 0)
        .map(|j| {
            let minor = a[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * a[0][j] * det(minor)
        })
        .sum()
}
