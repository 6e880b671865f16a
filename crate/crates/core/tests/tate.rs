mod common;

use std::collections::HashSet;

use common::*;
use iwacoh_core::cochain::tate::*;
use iwacoh_core::complex::dd_zero;
use iwacoh_core::random::random_module;
use iwacoh_core::{FinAb, GModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The subgroup of M generated by a set of elements.
fn span(m: &GModule, gens: &[Vec<u64>]) -> HashSet<Vec<u64>> {
    let mut set: HashSet<Vec<u64>> = HashSet::from([vec![0; m.rank()]]);
    let mut frontier: Vec<Vec<u64>> = set.iter().cloned().collect();
    while let Some(v) = frontier.pop() {
        for g in gens {
            let w = m.add(&v, g);
            if set.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    set
}

fn norm(m: &GModule, v: &[u64]) -> Vec<u64> {
    (0..m.group().order()).fold(vec![0; m.rank()], |acc, g| m.add(&acc, &m.act(g, v)))
}

/// Ĥ^0 = M^G / N M and Ĥ^{−1} = ker N / I_G M by enumeration.
fn norm_oracle(m: &GModule) -> (FinAb, FinAb) {
    let elems = m.elements();
    let fixed: Vec<Vec<u64>> = elems.iter().filter(|v| (0..m.group().order()).all(|g| &m.act(g, v) == *v)).cloned().collect();
    let norms: HashSet<Vec<u64>> = elems.iter().map(|v| norm(m, v)).collect();
    let h0 = quotient_of_sets(m, &fixed, &norms);
    let kernel: Vec<Vec<u64>> = elems.iter().filter(|v| norm(m, v).iter().all(|&x| x == 0)).cloned().collect();
    let aug: Vec<Vec<u64>> = elems.iter().flat_map(|v| (0..m.group().order()).map(|g| m.sub(&m.act(g, v), v)).collect::<Vec<_>>()).collect();
    let hm1 = quotient_of_sets(m, &kernel, &span(m, &aug));
    (h0, hm1)
}

#[test]
fn tate_degree_zero_and_minus_one_of_cyclic_groups() {
    for n in [2, 3, 4, 8, 9] {
        for mm in [2u64, 3, 4, 8, 9] {
            let p = if mm % 2 == 0 { 2 } else { 3 };
            let e = mm.ilog(p);
            let m = GModule::trivial(ring(p, e), group(&format!("cyclic:{n}")), vec![e]);
            let d = gcd(n as u64, mm);
            let expected = if d == 1 { FinAb::zero(p) } else { FinAb::cyclic(p, d.ilog(p)) };
            let (h0, hm1) = norm_oracle(&m);
            assert_eq!(h0, expected, "oracle Ĥ^0(Z/{n}, Z/{mm})");
            assert_eq!(hm1, expected, "oracle Ĥ^-1(Z/{n}, Z/{mm})");
            assert_eq!(tate_cohomology(&m, 0).unwrap(), expected, "Ĥ^0(Z/{n}, Z/{mm})");
            assert_eq!(tate_cohomology(&m, -1).unwrap(), expected, "Ĥ^-1(Z/{n}, Z/{mm})");
        }
    }
}

#[test]
fn tate_cohomology_of_z2_with_z9_vanishes() {
    let m = GModule::trivial(ring(3, 2), group("cyclic:2"), vec![2]);
    for i in -3..=3 {
        assert!(tate_cohomology(&m, i).unwrap().is_zero(), "degree {i}");
    }
}

#[test]
fn tate_complex_squares_to_zero_across_the_splice() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for name in ["cyclic:2", "cyclic:3", "s3", "klein", "cyclic:4"] {
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, group(name), 2);
        let c = tate_complex(&m, -2, 1).unwrap();
        assert!(dd_zero(&c), "{name}");
    }
}

#[test]
fn random_modules_match_the_norm_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for name in ["cyclic:2", "cyclic:4", "klein", "s3", "cyclic:3"] {
        for _ in 0..3 {
            let r = ring([2, 3][rng.gen_range(0..2)], 2);
            let m = random_module(&mut rng, r, group(name), 3);
            let (h0, hm1) = norm_oracle(&m);
            assert_eq!(tate_cohomology(&m, 0).unwrap(), h0, "{name}");
            assert_eq!(tate_cohomology(&m, -1).unwrap(), hm1, "{name}");
        }
    }
}

#[test]
fn positive_tate_degrees_are_ordinary_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let m = random_module(&mut rng, ring(2, 2), group("klein"), 2);
    for i in 1..=2 {
        assert_eq!(tate_cohomology(&m, i).unwrap(), iwacoh_core::cochain::cochain_cohomology(&m, i as usize).unwrap());
    }
}

#[test]
fn periodic_model_agrees_with_the_complete_complex() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for name in ["cyclic:2", "cyclic:3", "cyclic:4"] {
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, group(name), 2);
        let per = periodic_complex(&m, -3, 2).unwrap();
        assert!(dd_zero(&per));
        for i in -3..=2 {
            assert_eq!(per.cohomology(i), tate_cohomology(&m, i).unwrap(), "{name} degree {i}");
        }
    }
    assert!(periodic_complex(&GModule::trivial(ring(2, 1), group("klein"), vec![1]), 0, 0).is_err());
}

#[test]
fn finite_duality_orders_and_cyclic_perfectness() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for name in ["cyclic:2", "cyclic:3", "cyclic:4", "klein", "s3"] {
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, group(name), 2);
        for n in -2..=2 {
            let lhs = tate_cohomology(&m, n).unwrap();
            let rhs = tate_cohomology(&m.dual(), -n - 1).unwrap();
            assert_eq!(lhs.order_log(), rhs.order_log(), "{name} degree {n}");
            if m.group().cyclic_generator().is_some() {
                let pairing = cyclic_tate_pairing(&m, n).unwrap();
                assert!(pairing.perfect, "{name} degree {n}: {pairing:?}");
                assert_eq!(pairing.left, lhs);
            }
        }
    }
}
