//! Acceptance gate: one pass/fail line per criterion.
//!
//! Tolerances: every criterion is exact except 9, where each empirical
//! class frequency over the certified tiles of patch(7) must lie within
//! 1/50 of the Perron frequency.

mod common;

use std::io::Write;
use std::time::Instant;

use dashu_int::IBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pinwheel_core::apcomplex::cellmap::{psi, refinement_matrix, simplex_state};
use pinwheel_core::apcomplex::template::Template;
use pinwheel_core::apcomplex::tilecw::{build_tile_complex, cohomology_action, substitution_chain_map};
use pinwheel_core::apcomplex::{build_complex, cohomology_of, substitution_on_cells};
use pinwheel_core::corona::{class_histogram, enumerate_uncollared};
use pinwheel_core::gaplabel::{gap_module, state, LimitElement};
use pinwheel_core::geom::{triangles_overlap, Chirality, ExactPoint};
use pinwheel_core::linalg::{IntMatrix, SparseMatrix};
use pinwheel_core::perron::{collared_matrix, is_mirror_symmetric, multiset, perron_data, primitivity};
use pinwheel_core::snf::snf;
use pinwheel_core::spatial::TriangleIndex;
use pinwheel_core::substitution::{chirality_counts, denominators_divide, patch, patches_upto, DEFAULT_MAX_LEVEL};
use pinwheel_core::ExactRational as Q;

use common::{determinantal_invariants, pinwheel, REFERENCE_ALPHA_PRIME};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn big(v: i64) -> IBig {
    IBig::from(v)
}

fn criterion_1() -> Outcome {
    let f = pinwheel();
    let e = &f.classes;
    let cert = &e.certificate;
    ensure(cert.closed, "closure certificate missing")?;
    let n = cert.scans.len();
    ensure(n >= 2 && cert.scans[n - 1].classes == cert.scans[n - 2].classes, "no stabilization")?;
    ensure(e.len() == 108, format!("{} classes", e.len()))?;
    let (plus, minus) = e.count_by_chirality();
    ensure((plus, minus) == (54, 54), format!("split {plus}/{minus}"))?;
    let m = e.mirror_permutation();
    let involution = (0..e.len()).all(|i| m[m[i]] == i && e.classes[m[i]].chirality != e.classes[i].chirality);
    ensure(involution, "mirror map is not a chirality-swapping involution")?;
    Ok(format!("108 classes, 54 + 54 mirrored, stabilized at level {}", cert.stabilized_at))
}

fn criterion_2() -> Outcome {
    let f = pinwheel();
    let a = &f.matrix;
    ensure(a.column_sums().iter().all(|s| *s == big(5)), "column sum differs from 5")?;
    let k = primitivity(a, 32).map_err(|e| e.to_string())?;
    ensure(k <= 6, format!("first positive power {k}"))?;
    ensure(f.perron.rank == 107, format!("rank(A-5I) = {}", f.perron.rank))?;
    ensure(is_mirror_symmetric(a, &f.classes.mirror_permutation()), "PAP != A")?;
    Ok(format!("column sums 5, A^{k} > 0, rank(A-5I) = 107, PAP = A"))
}

fn criterion_3() -> Outcome {
    let p = &pinwheel().perron;
    let mut reference: Vec<IBig> = REFERENCE_ALPHA_PRIME.iter().flat_map(|&v| [big(v), big(v)]).collect();
    reference.sort();
    let ours = multiset(&p.alpha_prime);
    ensure(p.gcd == IBig::ONE, format!("gcd {}", p.gcd))?;
    ensure(ours.last() == Some(&big(1185)) && ours.first() == Some(&big(18)), "extremes differ")?;
    if p.denominator == big(33000) {
        ensure(ours == reference, "multiset differs from the reference list")?;
    } else {
        // Ratio test against the reference values after rescaling.
        let s = Q::new(p.denominator.clone(), big(33000)).map_err(|e| e.to_string())?;
        let scaled: Vec<Q> = reference.iter().map(|v| &Q::from(v.clone()) * &s).collect();
        let ok = ours.iter().zip(&scaled).all(|(x, y)| Q::from(x.clone()) == *y);
        ensure(ok, format!("D = {} and ratios differ", p.denominator))?;
    }
    Ok(format!("D = {}, gcd = 1, multiset matches the 54 reference values doubled", p.denominator))
}

fn criterion_4() -> Outcome {
    let p = &pinwheel().perron;
    let m = gap_module(&p.alpha_prime, &p.denominator, 5);
    ensure(m.coefficient == Q::ratio(1, 264) && m.base == 5, format!("module {m}"))?;
    Ok(format!("module = {m}"))
}

fn criterion_5() -> Outcome {
    let f = pinwheel();
    let (ap, d) = (&f.perron.alpha_prime, &f.perron.denominator);
    let n = ap.len();
    let unit = state(&LimitElement::order_unit(n), ap, d, 5).map_err(|e| e.to_string())?;
    ensure(unit == Q::one(), format!("p(u) = {unit}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let level = rng.gen_range(1..6);
        let k: Vec<IBig> = (0..n).map(|_| big(rng.gen_range(-50..=50))).collect();
        let e = LimitElement::new(k, level);
        let before = state(&e, ap, d, 5).map_err(|e| e.to_string())?;
        let after = state(&e.advance(&f.matrix).map_err(|e| e.to_string())?, ap, d, 5).map_err(|e| e.to_string())?;
        ensure(before == after, format!("trial {trial}: state changed under advance"))?;
        let nonneg: Vec<IBig> = (0..n).map(|_| big(rng.gen_range(0..=50))).collect();
        let s = state(&LimitElement::new(nonneg, level), ap, d, 5).map_err(|e| e.to_string())?;
        ensure(s.signum() >= 0, format!("trial {trial}: negative state"))?;
    }
    Ok("p(u) = 1; invariance and positivity on 1000 random vectors".into())
}

fn criterion_6() -> Outcome {
    let r = &pinwheel().rule;
    let u = enumerate_uncollared(r);
    ensure(u.chirality.len() == 2, format!("{} bare classes", u.chirality.len()))?;
    let a = collared_matrix(&u.children);
    ensure(a == IntMatrix::from_rows(&[vec![2, 3], vec![3, 2]]), "bare matrix differs")?;
    let p = perron_data(&a, 5).map_err(|e| e.to_string())?;
    ensure(p.alpha == vec![Q::ratio(1, 2), Q::ratio(1, 2)], "bare Perron vector differs")?;
    let p4 = patch(4, r, DEFAULT_MAX_LEVEL).map_err(|e| e.to_string())?;
    let (plus, minus) = chirality_counts(&p4.tiles);
    ensure([plus, minus].iter().max() == Some(&313) && plus + minus == 625, format!("{plus}/{minus}"))?;
    Ok(format!("2 classes, [[2,3],[3,2]], (1/2, 1/2), patch(4) split {plus}/{minus}"))
}

fn criterion_7() -> Outcome {
    let r = &pinwheel().rule;
    let one = r.supertile_vertices(Chirality::Plus, 1);
    ensure(one == [ExactPoint::int(-2, 1), ExactPoint::int(2, -1), ExactPoint::int(3, 1)], "1-supertile")?;
    let two = r.supertile_vertices(Chirality::Plus, 2);
    ensure(two == [ExactPoint::int(-5, 5), ExactPoint::int(1, -3), ExactPoint::int(5, 0)], "2-supertile")?;
    let levels = patches_upto(5, r, DEFAULT_MAX_LEVEL).map_err(|e| e.to_string())?;
    for (n, p) in levels.iter().enumerate() {
        let tris = p.tiles.vertices();
        let area: Q = tris.iter().map(|t| pinwheel_core::geom::signed_area2(&t[0], &t[1], &t[2]).abs()).sum();
        ensure(area == Q::from(2 * 5i64.pow(n as u32)), format!("level {n}: area"))?;
        let congruent =
            tris.iter().all(|t| (&t[1] - &t[0]).norm2() == Q::from(4) && (&t[2] - &t[1]).norm2() == Q::from(1));
        ensure(congruent, format!("level {n}: congruence"))?;
        let index = TriangleIndex::new(tris.clone());
        let disjoint =
            (0..tris.len()).all(|i| index.neighbors(i).iter().all(|&j| !triangles_overlap(&tris[i], &tris[j])));
        ensure(disjoint, format!("level {n}: overlap"))?;
        if n > 0 {
            let parents = levels[n - 1].tiles.tiles.iter();
            let nested = parents.enumerate().all(|(i, t)| {
                let sup = r.children_of(t);
                sup == p.tiles.tiles[5 * i..5 * i + 5]
                    && tris[5 * i..5 * i + 5]
                        .iter()
                        .flatten()
                        .all(|v| pinwheel_core::geom::point_in_triangle(v, &p.region))
            });
            ensure(nested, format!("level {n}: nesting"))?;
        }
        ensure(denominators_divide(&p.tiles, 5u64.pow(n as u32)), format!("level {n}: denominators"))?;
    }
    Ok("supertile vertices exact; area, congruence, disjointness, nesting, denominators at levels 0..=5".into())
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    let sparse = rng.gen_bool(0.3);
    (0..rows)
        .map(|_| (0..cols).map(|_| if sparse && rng.gen_bool(0.6) { 0 } else { rng.gen_range(-9..=9) }).collect())
        .collect()
}

fn criterion_8() -> Outcome {
    let f = pinwheel();
    let adj = f.adjacency();
    let c = build_complex(&f.rule, &f.classes, adj, 0).map_err(|e| e.to_string())?;
    ensure(c.counts[2] == 864, format!("{} two-cells", c.counts[2]))?;
    ensure(c.boundaries_compose_to_zero().map_err(|e| e.to_string())?, "d1 d2 != 0")?;
    ensure(c.orientation_coherent(), "incoherent orientation")?;
    let h = cohomology_of(&c.boundary1, &c.boundary2, true).map_err(|e| e.to_string())?;
    ensure(h.verified && h.euler_matches(), "SNF or Euler check failed on B0")?;
    let q = build_tile_complex(&f.rule, &f.classes, adj).map_err(|e| e.to_string())?;
    let g = substitution_chain_map(&f.rule, &f.classes, &q).map_err(|e| e.to_string())?;
    let act = cohomology_action(&q, &g).map_err(|e| e.to_string())?;
    ensure(act.cohomology.verified && act.cohomology.degrees == h.degrees, "tile-level complex disagrees")?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..200 {
        let rows = random_matrix(&mut rng, 6, 6);
        let a = IntMatrix::from_rows(&rows);
        let s = snf(&a);
        ensure(
            s.verify(&SparseMatrix::from_dense(&a)).map_err(|e| e.to_string())?,
            format!("trial {trial}: UAV != D"),
        )?;
        let got: Vec<i128> = s.diag.iter().map(|d| i128::try_from(d).expect("small")).collect();
        ensure(got == determinantal_invariants(&rows), format!("trial {trial}: invariants differ"))?;
    }
    for ch in [Chirality::Plus, Chirality::Minus] {
        Template::new(&f.rule, ch, 3).check_simplicial().map_err(|e| e.to_string())?;
    }
    let [b0, b1, b2] = h.betti();
    Ok(format!(
        "864 two-cells, d1 d2 = 0, SNF verified, 200 random 6x6 match the minor oracle, level 3 simplicial; \
         H0 = Z^{b0}, H1 = Z^{b1}, H2 = Z^{b2} + torsion {:?}",
        h.degrees[2].torsion
    ))
}

fn criterion_9() -> Outcome {
    let f = pinwheel();
    let p7 = patch(7, &f.rule, DEFAULT_MAX_LEVEL).map_err(|e| e.to_string())?;
    let counts = class_histogram(&p7, &f.classes).map_err(|e| e.to_string())?;
    let total: u64 = counts.iter().sum();
    let tol = Q::ratio(1, 50);
    let mut worst = Q::zero();
    for (i, &c) in counts.iter().enumerate() {
        let emp = Q::new(c, total).map_err(|e| e.to_string())?;
        let dev = (&emp - &f.perron.alpha[i]).abs();
        if dev > worst {
            worst = dev;
        }
    }
    ensure(worst <= tol, format!("max deviation {worst}"))?;
    Ok(format!("{total} certified tiles, max deviation {worst} <= 1/50"))
}

fn criterion_10() -> Outcome {
    let f = pinwheel();
    let adj = f.adjacency();
    let c0 = build_complex(&f.rule, &f.classes, adj, 0).map_err(|e| e.to_string())?;
    let c1 = build_complex(&f.rule, &f.classes, adj, 1).map_err(|e| e.to_string())?;
    let map = substitution_on_cells(&f.rule, &f.classes, &c1, &c0).map_err(|e| e.to_string())?;
    let r = refinement_matrix(&map, f.classes.len()).map_err(|e| e.to_string())?;
    let rep = pinwheel_core::apcomplex::cellmap::check_refinement(&r, &f.matrix, &f.perron.alpha, 5)
        .map_err(|e| e.to_string())?;
    ensure(rep.slot_sums_match && rep.kron_matches && rep.eigenvector, format!("{rep:?}"))?;
    let (ap, d) = (&f.perron.alpha_prime, &f.perron.denominator);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..200 {
        let level = rng.gen_range(1..5);
        let k: Vec<IBig> = (0..r.rows()).map(|_| big(rng.gen_range(-20..=20))).collect();
        let simplex = simplex_state(&k, level, &f.perron.alpha, 5).map_err(|e| e.to_string())?;
        let tile = state(&LimitElement::new(psi(&k), level), ap, d, 5).map_err(|e| e.to_string())?;
        ensure(simplex == tile, format!("trial {trial}: simplex and tile states differ"))?;
        let advanced = r.transpose().mul_vec(&k).map_err(|e| e.to_string())?;
        let next = simplex_state(&advanced, level + 1, &f.perron.alpha, 5).map_err(|e| e.to_string())?;
        ensure(next == simplex, format!("trial {trial}: simplex state not invariant"))?;
    }
    let slot = simplex_state(&unit_vector(r.rows(), 0), 1, &f.perron.alpha, 5).map_err(|e| e.to_string())?;
    ensure(slot == f.perron.alpha[0], "single simplex frequency")?;
    Ok("refinement = A (x) I8, slot sums = A, simplex states equal tile states on 200 random vectors".into())
}

fn unit_vector(n: usize, i: usize) -> Vec<IBig> {
    (0..n).map(|j| if i == j { IBig::ONE } else { IBig::ZERO }).collect()
}

/// Written to the process stderr directly so the lines survive output capture.
fn report(line: String) {
    let mut err = std::io::stderr().lock();
    writeln!(err, "{line}").expect("stderr");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("collared count", criterion_1),
        ("matrix invariants", criterion_2),
        ("Perron data", criterion_3),
        ("gap-labelling module", criterion_4),
        ("state laws", criterion_5),
        ("uncollared oracle", criterion_6),
        ("geometry and substitution", criterion_7),
        ("complex validity", criterion_8),
        ("frequency convergence", criterion_9),
        ("simplex/tile consistency", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => report(format!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1)),
            Err(why) => {
                report(format!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
