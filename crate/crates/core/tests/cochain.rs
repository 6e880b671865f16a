mod common;

use std::sync::Arc;

use common::*;
use iwacoh_core::cochain::bar::BarResolution;
use iwacoh_core::cochain::*;
use iwacoh_core::complex::{ChainMap, Complex};
use iwacoh_core::random::{random_complex, random_module};
use iwacoh_core::{FinAb, GModule, Matrix, ModuleMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cochain(rng: &mut ChaCha8Rng, m: &GModule, deg: usize) -> Cochain {
    let ring = *m.ring();
    Cochain::from_fn(m.clone(), deg, |_| m.exps().iter().map(|&a| rng.gen_range(0..ring.pow(a))).collect())
}

#[test]
fn known_cohomology_of_z2_and_z3() {
    let z2 = GModule::trivial(ring(2, 1), group("cyclic:2"), vec![1]);
    for i in 0..=2 {
        assert_eq!(cochain_cohomology(&z2, i).unwrap(), FinAb::cyclic(2, 1), "H^{i}(Z/2, Z/2)");
        assert_eq!(brute_cohomology(&z2, i), FinAb::cyclic(2, 1));
    }
    let z3 = GModule::trivial(ring(3, 1), group("cyclic:3"), vec![1]);
    assert_eq!(cochain_cohomology(&z3, 2).unwrap(), FinAb::cyclic(3, 1));
    assert_eq!(brute_cohomology(&z3, 2), FinAb::cyclic(3, 1));
}

#[test]
fn cohomology_matches_enumeration_on_small_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = [("cyclic:2", 2, 2), ("cyclic:3", 3, 1), ("klein", 2, 1), ("cyclic:4", 2, 1), ("s3", 3, 1)];
    for (name, p, e) in cases {
        for _ in 0..3 {
            let m = random_module(&mut rng, ring(p, e), group(name), 2);
            let count = |i: u32| (p as f64).powf((m.order_log() * (m.group().order() as u64).pow(i)) as f64);
            for i in (0..=2).filter(|&i| count(i as u32) <= 1e5) {
                assert_eq!(cochain_cohomology(&m, i).unwrap(), brute_cohomology(&m, i), "{name}, degree {i}");
            }
        }
    }
}

#[test]
fn h0_is_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for name in ["cyclic:2", "cyclic:4", "s3", "klein", "d4", "q8"] {
        for p in [2, 3] {
            let m = random_module(&mut rng, ring(p, 2), group(name), 3);
            assert_eq!(cochain_cohomology(&m, 0).unwrap(), brute_invariants(&m), "{name}");
        }
    }
}

#[test]
fn coboundary_matrix_agrees_with_direct_formula_and_bar_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for name in ["cyclic:3", "s3", "klein"] {
        let m = random_module(&mut rng, ring(3, 2), group(name), 3);
        let bar = BarResolution::new(m.group().clone());
        for n in 0..=2 {
            let d = coboundary_matrix(&m, n);
            assert_eq!(bar.hom_coboundary(&m, n), d);
            let c = random_cochain(&mut rng, &m, n);
            assert_eq!(Cochain::new(m.clone(), n + 1, d.apply(c.table(), m.ring())).unwrap(), c.coboundary());
        }
    }
}

#[test]
fn bar_resolution_is_exact_over_the_integers() {
    for name in ["trivial", "cyclic:2", "cyclic:3", "cyclic:4", "klein", "s3"] {
        BarResolution::new(group(name)).check_exact(2).unwrap();
    }
}

#[test]
fn cup_leibniz_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut checked = 0;
    for name in ["cyclic:2", "cyclic:3", "cyclic:4", "s3"] {
        for _ in 0..60 {
            let r = rand_ring(&mut rng);
            let l = random_module(&mut rng, r, group(name), 2);
            let rt = random_module(&mut rng, r, group(name), 2);
            let pairing = Pairing::new(l.clone(), rt.clone(), l.tensor(&rt), Matrix::identity(l.rank() * rt.rank())).unwrap();
            let i = rng.gen_range(0..=2);
            let j = rng.gen_range(0..=3 - i);
            let a = random_cochain(&mut rng, &l, i);
            let b = random_cochain(&mut rng, &rt, j);
            let lhs = a.cup(&b, &pairing).unwrap().coboundary();
            let rhs = a.coboundary().cup(&b, &pairing).unwrap().add(&a.cup(&b.coboundary(), &pairing).unwrap().scale(r.sign(i as i64, 1)));
            assert_eq!(lhs, rhs, "{name} degrees ({i}, {j})");
            checked += 1;
        }
    }
    assert!(checked >= 200);
}

#[test]
fn cup_matrix_matches_direct_cup_and_is_a_chain_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for name in ["cyclic:2", "s3"] {
        let r = ring(2, 2);
        let l = random_module(&mut rng, r, group(name), 2);
        let m = random_module(&mut rng, r, group(name), 2);
        let pairing = Pairing::new(l.clone(), m.clone(), l.tensor(&m), Matrix::identity(l.rank() * m.rank())).unwrap();
        for (i, j) in [(0, 1), (1, 1), (2, 0), (1, 2)] {
            let cm = cup_matrix(&pairing, i, j).unwrap();
            let a = random_cochain(&mut rng, &l, i);
            let b = random_cochain(&mut rng, &m, j);
            let mut ab = vec![0u64; cm.rows()];
            let nb = b.table().len();
            for (x, &va) in a.table().iter().enumerate() {
                for (y, &vb) in b.table().iter().enumerate() {
                    ab[x * nb + y] = r.mul(va, vb);
                }
            }
            let mut got = cm.apply(&ab, &r);
            for (v, &e) in got.iter_mut().zip(cochain_exps(pairing.target(), i + j).iter()) {
                *v %= r.pow(e);
            }
            assert_eq!(got, a.cup(&b, &pairing).unwrap().table().to_vec());
        }
        pairing_chain_map(&pairing, if name == "s3" { 1 } else { 3 }).unwrap();
    }
}

#[test]
fn non_equivariant_pairing_is_rejected() {
    let r = ring(3, 1);
    let g = group("cyclic:3");
    let perm = iwacoh_core::random::permutation_module(r, g.clone(), &[0], 1);
    let triv = GModule::trivial(r, g, vec![1]);
    let mut mat = Matrix::zeros(3, 1);
    mat.set(0, 0, 1);
    let err = Pairing::new(perm, triv.clone(), triv, mat).unwrap_err();
    assert!(matches!(err, iwacoh_core::Error::NonEquivariantPairing(_)));
}

#[test]
fn hypercochains_of_a_module_are_its_cochains() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let m = random_module(&mut rng, ring(2, 2), group("cyclic:4"), 2);
    let (h, _) = hyper_cochain_complex(&Complex::concentrated(m.clone(), 0), 3).unwrap();
    assert_eq!(h, cochain_complex(&m, 3).unwrap());
}

#[test]
fn hypercochain_complexes_and_total_cup() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..6 {
        let r = rand_ring(&mut rng);
        let g = group(["cyclic:2", "cyclic:3", "klein"][rng.gen_range(0..3)]);
        let lo = rng.gen_range(-1..=0);
        let x = random_complex(&mut rng, r, g.clone(), lo, 2, 2);
        let (h, _) = hyper_cochain_complex(&x, 2).unwrap();
        h.validate().unwrap();
        // X ⊗ Z/p^e placed in degree k is X moved up by k, with the same differential.
        for k in [0, 1] {
            let unit = Complex::concentrated(GModule::trivial(r, g.clone(), vec![r.e()]), k);
            let t = iwacoh_core::complex::tensor_complex(&x, &unit);
            let terms = (x.lo()..=x.hi()).map(|i| x.term(i)).collect();
            let diffs = (x.lo()..x.hi()).map(|i| x.diff(i)).collect();
            let z = Complex::new(x.lo() + k, terms, diffs, r, g.clone()).unwrap();
            let act = ChainMap::from_fn(t, z, |n| Matrix::identity(x.rank(n - k))).unwrap();
            let cup = total_cup(&x, &unit, &act, 2).unwrap();
            cup.validate().unwrap();
        }
    }
}

#[test]
fn bockstein_sequence_for_z2() {
    let g = group("cyclic:2");
    let r = ring(2, 2);
    let a = GModule::trivial(r, g.clone(), vec![1]);
    let b = GModule::trivial(r, g.clone(), vec![2]);
    let alpha = ModuleMap::new(a.clone(), b.clone(), Matrix::from_rows(1, &[vec![2]])).unwrap();
    let beta = ModuleMap::new(b, a, Matrix::from_rows(1, &[vec![1]])).unwrap();
    let les = cochain_les(&alpha, &beta, 2).unwrap();
    assert!(les.is_exact());
    let conn = les.connecting();
    assert!(conn[0].1.is_zero());
    assert!(conn[1].1.is_bijective());
}

#[test]
fn random_short_exact_sequences_give_exact_les() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..8 {
        let r = rand_ring(&mut rng);
        let g = group(["cyclic:2", "cyclic:3", "s3"][rng.gen_range(0..3)]);
        let a = random_module(&mut rng, r, g.clone(), 2);
        let c = random_module(&mut rng, r, g.clone(), 2);
        let b = a.direct_sum(&c).unwrap();
        let inc = Matrix::identity(a.rank()).hstack(&Matrix::zeros(a.rank(), c.rank()));
        let proj = Matrix::zeros(a.rank(), c.rank()).vstack(&Matrix::identity(c.rank()));
        let alpha = ModuleMap::new(a, b.clone(), inc).unwrap();
        let beta = ModuleMap::new(b, c, proj).unwrap();
        assert!(cochain_les(&alpha, &beta, 2).unwrap().is_exact());
    }
}

#[test]
fn corestriction_after_restriction_is_the_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for (name, order) in [("cyclic:4", 2), ("s3", 3), ("s3", 2), ("klein", 2)] {
        let g = group(name);
        let x = (0..g.order()).find(|&x| g.element_order(x) == order).unwrap();
        let sub = g.generated(&[x]);
        let u = SubgroupOf::new(&g, &sub).unwrap();
        let index = (g.order() / sub.len()) as u64;
        for p in [2, 3] {
            let m = random_module(&mut rng, ring(p, 2), g.clone(), 2);
            let res = restriction(&m, &u, 3).unwrap();
            let cor = corestriction(&m, &u, 3).unwrap();
            res.validate().unwrap();
            cor.validate().unwrap();
            let both = res.then(&cor);
            for n in 0..=2 {
                let expected = ChainMap::identity(&both.source).scale(index).induced(n);
                assert_eq!(both.induced(n).matrix, expected.matrix, "{name} ⊃ {sub:?}, degree {n}");
            }
        }
    }
}

#[test]
fn inflation_is_injective_on_h1() {
    let g = group("cyclic:4");
    let (q, proj) = quotient_group(&g, &[0, 2]).unwrap();
    let m = GModule::trivial(ring(2, 1), Arc::new(q), vec![1]);
    let inf = inflation(&m, g, &proj, 2).unwrap();
    inf.validate().unwrap();
    assert!(inf.induced(1).is_injective());
    assert!(quotient_group(&group("s3"), &[0, 3]).is_err());
}

#[test]
fn degree_cap_is_enforced() {
    let m = GModule::trivial(ring(2, 1), group("cyclic:2"), vec![1]);
    assert!(matches!(cochain_cohomology(&m, 4), Err(iwacoh_core::Error::CapExceeded { .. })));
}

#[test]
fn cohomology_representatives_are_cocycles() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let m = random_module(&mut rng, ring(2, 2), group("cyclic:4"), 2);
    for i in 0..=2 {
        let cl = cohomology_classes(&m, i).unwrap();
        assert_eq!(cl.representatives.len(), cl.invariants.exps().len());
        for c in &cl.representatives {
            assert!(c.coboundary().is_zero());
            assert!(!is_coboundary(c));
        }
    }
}
