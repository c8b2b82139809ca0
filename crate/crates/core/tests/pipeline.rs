//! End-to-end checks over the built-in rule: collared data, states, the
//! approximant complexes and the substitution action on them.

mod common;

use dashu_int::IBig;
use proptest::prelude::*;

use pinwheel_core::apcomplex::adjacency::scan_pairs;
use pinwheel_core::apcomplex::tilecw::{
    build_tile_complex, cohomology_action, contains_subdivision_vertices, substitution_chain_map,
};
use pinwheel_core::apcomplex::{build_complex, cohomology_of, substitution_on_cells};
use pinwheel_core::corona::CoronaScanner;
use pinwheel_core::gaplabel::{class_frequency, gap_module, membership, state, LimitElement};
use pinwheel_core::substitution::{patch, DEFAULT_MAX_LEVEL};
use pinwheel_core::ExactRational as Q;

use common::pinwheel;

fn vector(lo: i64, hi: i64) -> impl Strategy<Value = Vec<IBig>> {
    proptest::collection::vec((lo..=hi).prop_map(IBig::from), 108)
}

fn p(e: &LimitElement) -> Q {
    let f = pinwheel();
    state(e, &f.perron.alpha_prime, &f.perron.denominator, 5).expect("state")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn state_is_additive(a in vector(-30, 30), b in vector(-30, 30), level in 1u32..6) {
        let sum: Vec<IBig> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = p(&LimitElement::new(sum, level));
        let rhs = &p(&LimitElement::new(a, level)) + &p(&LimitElement::new(b, level));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn state_is_invariant_under_advance(k in vector(-30, 30), level in 1u32..5) {
        let e = LimitElement::new(k, level);
        let a = &pinwheel().matrix;
        prop_assert_eq!(p(&e), p(&e.advance(a).unwrap()));
        prop_assert_eq!(p(&e), p(&e.advance(a).unwrap().advance(a).unwrap()));
    }

    #[test]
    fn states_lie_in_the_module(k in vector(-30, 30), level in 1u32..8) {
        let f = pinwheel();
        let m = gap_module(&f.perron.alpha_prime, &f.perron.denominator, 5);
        prop_assert!(membership(&p(&LimitElement::new(k, level)), &m));
    }

    #[test]
    fn positive_vectors_have_positive_state(k in vector(0, 9), level in 1u32..6) {
        let s = p(&LimitElement::new(k.clone(), level));
        if k.iter().any(|x| *x != IBig::ZERO) {
            prop_assert!(s.signum() > 0);
        } else {
            prop_assert!(s.is_zero());
        }
    }
}

#[test]
fn order_unit_and_frequencies() {
    let f = pinwheel();
    assert_eq!(p(&LimitElement::order_unit(108)), Q::one());
    for level in 0..4 {
        let total: Q = (0..108).map(|i| class_frequency(&f.perron.alpha, i, level, 5).unwrap()).sum();
        assert_eq!(total, Q::from(5).pow(-(level as i64)));
    }
    let image = f.matrix.mul_rat_vec(&f.perron.alpha).unwrap();
    assert!(image.iter().zip(&f.perron.alpha).all(|(y, x)| *y == x * &Q::from(5)));
}

#[test]
fn adjacency_types_stabilize() {
    let f = pinwheel();
    let adj = f.adjacency();
    assert_eq!(adj.pairs.len(), 2724);
    assert!(adj.pairs.iter().all(|q| adj.pairs.iter().any(|r| r.a == q.b && r.b == q.a)));
    let p5 = patch(5, &f.rule, DEFAULT_MAX_LEVEL).unwrap();
    let scanner = CoronaScanner::new(&p5);
    let seen = scan_pairs(&scanner, &f.classes).unwrap();
    assert!(!seen.is_empty());
    assert!(seen.iter().all(|q| adj.pairs.contains(q)), "level 5 shows an adjacency not in the closed set");
}

#[test]
fn refined_complex_has_the_same_cohomology() {
    let f = pinwheel();
    let adj = f.adjacency();
    let c0 = build_complex(&f.rule, &f.classes, adj, 0).unwrap();
    let c1 = build_complex(&f.rule, &f.classes, adj, 1).unwrap();
    assert_eq!(c0.counts, [283, 1134, 864]);
    assert_eq!(c1.counts, [1849, 6156, 4320]);
    assert!(c1.boundaries_compose_to_zero().unwrap() && c1.orientation_coherent());
    let h0 = cohomology_of(&c0.boundary1, &c0.boundary2, true).unwrap();
    let h1 = cohomology_of(&c1.boundary1, &c1.boundary2, true).unwrap();
    assert_eq!(h0.degrees, h1.degrees);
    assert_eq!(h0.betti(), [1, 1, 13]);
    assert_eq!(h0.degrees[2].torsion, vec![2]);

    let map = substitution_on_cells(&f.rule, &f.classes, &c1, &c0).unwrap();
    assert!(map.commutes(&c1, &c0).unwrap());
    // Each fine triangle lands on exactly one coarse triangle.
    let hits = map.incidence(2).transpose();
    let per_face: Vec<usize> = (0..c1.counts[2]).map(|j| hits.row(j).len()).collect();
    assert!(per_face.iter().all(|&n| n == 1));
}

#[test]
fn tile_complex_and_substitution_action() {
    let f = pinwheel();
    let adj = f.adjacency();
    let q = build_tile_complex(&f.rule, &f.classes, adj).unwrap();
    assert!(contains_subdivision_vertices(&q));
    assert_eq!(q.counts[2], 108);
    let g = substitution_chain_map(&f.rule, &f.classes, &q).unwrap();
    assert!(q.boundary1.mul(&g[1]).unwrap() == g[0].mul(&q.boundary1).unwrap());
    assert!(q.boundary2.mul(&g[2]).unwrap() == g[1].mul(&q.boundary2).unwrap());
    let act = cohomology_action(&q, &g).unwrap();

    let c0 = build_complex(&f.rule, &f.classes, adj, 0).unwrap();
    let h0 = cohomology_of(&c0.boundary1, &c0.boundary2, true).unwrap();
    assert_eq!(act.cohomology.degrees, h0.degrees);
    assert_eq!(act.endomorphisms[0], vec![vec![1]]);
    assert_eq!(act.endomorphisms[2].len(), 13);
    assert_eq!(act.eventual_ranks[0], 1);
    assert!(act.eventual_ranks[2] <= 13);
}
