mod common;

use std::sync::Arc;

use common::*;
use iwacoh_core::cochain::{cochain_cohomology, Pairing, SubgroupOf};
use iwacoh_core::compact::*;
use iwacoh_core::complex::{dd_zero, tensor_map, ChainMap};
use iwacoh_core::random::random_module;
use iwacoh_core::{Error, FinAb, FiniteGroup, GModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOP: usize = 3;

fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..g.order()).map(|x| g.generated(&[x])).collect();
    out.push((0..g.order()).collect());
    out.sort();
    out.dedup();
    out
}

fn random_datum(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, allow_tate: bool) -> LocalDatum {
    let subs = subgroups(g);
    let count = rng.gen_range(0..=2);
    let places = (0..count)
        .map(|_| {
            let s = &subs[rng.gen_range(0..subs.len())];
            Place::subgroup(g, s, allow_tate && rng.gen_bool(0.5)).unwrap()
        })
        .collect();
    LocalDatum::new(g.clone(), places).unwrap()
}

fn small_groups() -> Vec<Arc<FiniteGroup>> {
    ["cyclic:2", "cyclic:3", "cyclic:4", "klein", "s3"].iter().map(|n| group(n)).collect()
}

#[test]
fn empty_support_gives_ordinary_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for g in small_groups() {
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, g.clone(), 2);
        let d = LocalDatum::empty(g.clone());
        for i in 0..TOP {
            assert_eq!(compact_cohomology(&d, &m, i as i64, TOP).unwrap(), cochain_cohomology(&m, i).unwrap());
        }
    }
}

#[test]
fn identity_place_kills_compact_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for g in small_groups() {
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, g.clone(), 2);
        let d = LocalDatum::new(g.clone(), vec![Place::identity(g.clone(), false)]).unwrap();
        for i in 0..TOP as i64 {
            assert_eq!(compact_cohomology(&d, &m, i, TOP).unwrap(), FinAb::zero(r.p()), "H^{i}_c for {}", g.label());
        }
    }
}

#[test]
fn compact_complexes_square_to_zero_and_sequences_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..60 {
        let groups = small_groups();
        let g = groups[rng.gen_range(0..groups.len())].clone();
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, g.clone(), 2);
        let d = random_datum(&mut rng, &g, true);
        let cc = compact_complex(&d, &m, TOP).unwrap();
        assert!(dd_zero(&cc.complex), "case {case}");
        let les = compact_les(&d, &m, TOP).unwrap();
        assert!(les.is_exact(), "case {case}: {:?}", les.exact);
    }
}

#[test]
fn tate_place_with_coprime_order_changes_nothing() {
    let g = group("cyclic:2");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let e = rng.gen_range(1..=2);
        let m = random_module(&mut rng, ring(3, e), g.clone(), 2);
        let d = LocalDatum::new(g.clone(), vec![Place::identity(g.clone(), true)]).unwrap();
        let (lo, hi) = d.window(TOP);
        for i in lo..=hi {
            let expected = if i < 0 { FinAb::zero(3) } else { cochain_cohomology(&m, i as usize).unwrap() };
            assert_eq!(compact_cohomology(&d, &m, i, TOP).unwrap(), expected);
        }
    }
}

#[test]
fn tate_place_for_z2_shifts_tate_cohomology() {
    // With S = {G}, H^i_c ≅ Ĥ^{i−1} for i ≤ 0 and H^i_c = 0 for i ≥ 1.
    let g = group("cyclic:2");
    let m = GModule::trivial(ring(2, 1), g.clone(), vec![1]);
    let d = LocalDatum::new(g.clone(), vec![Place::identity(g.clone(), true)]).unwrap();
    let (lo, hi) = d.window(TOP);
    for i in lo..=hi {
        let expected = if i <= 0 { FinAb::new(2, vec![1]) } else { FinAb::zero(2) };
        assert_eq!(compact_cohomology(&d, &m, i, TOP).unwrap(), expected, "degree {i}");
    }
}

#[test]
fn malformed_places_are_rejected() {
    let g = group("cyclic:4");
    let h = group("cyclic:2");
    let err = LocalDatum::new(g, vec![Place::new(h, vec![0, 1], false)]).unwrap_err();
    assert!(matches!(err, Error::MalformedDatum(_)));
}

#[test]
fn compact_cups_are_chain_maps_compatible_with_the_cone() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..12 {
        let groups = small_groups();
        let g = groups[rng.gen_range(0..3)].clone();
        let r = rand_ring(&mut rng);
        let m = random_module(&mut rng, r, g.clone(), 2);
        let d = random_datum(&mut rng, &g, false);
        let pairing = Pairing::evaluation(&m);
        let cups = compact_cups(&d, &pairing, 2).unwrap();
        cups.cup_c.validate().unwrap();
        cups.c_cup.validate().unwrap();
        // cup0 factors through the projection of the first factor.
        let p1 = compact_complex(&d, pairing.left(), 2).unwrap().projection;
        let via = tensor_map(&p1, &ChainMap::identity(&cups.cone.e2)).then(&cups.cup_c);
        for n in cups.cone.cup0.degree_range().0..=cups.cone.cup0.degree_range().1 {
            assert_eq!(via.component(n), cups.cone.cup0.component(n), "case {case}, degree {n}");
        }
        let p2 = compact_complex(&d, pairing.right(), 2).unwrap().projection;
        let via = tensor_map(&ChainMap::identity(&cups.cone.e1), &p2).then(&cups.c_cup);
        for n in cups.cone.cup1.degree_range().0..=cups.cone.cup1.degree_range().1 {
            assert_eq!(via.component(n), cups.cone.cup1.component(n), "case {case}, degree {n}");
        }
    }
}

#[test]
fn cups_reject_tate_places() {
    let g = group("cyclic:2");
    let m = GModule::trivial(ring(2, 1), g.clone(), vec![1]);
    let d = LocalDatum::new(g.clone(), vec![Place::identity(g.clone(), true)]).unwrap();
    assert!(matches!(compact_cups(&d, &Pairing::evaluation(&m), 2), Err(Error::MalformedDatum(_))));
}

#[test]
fn duality_triangle_for_the_trivial_group() {
    let g = group("trivial");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let m = random_module(&mut rng, ring(3, 2), g.clone(), 3);
    let d = LocalDatum::empty(g);
    let trace = TraceDatum { degree: 0, functional: vec![1] };
    let t = duality_triangle(&d, &m, &trace, 2).unwrap();
    assert_eq!(t.report.quasi_iso, [true, true, true]);
    assert!(t.report.consistent);
}

#[test]
fn duality_triangle_with_two_points() {
    // G = Z/2 at p = 3 with two trivial places: H^1_c(μ) = μ via s1 − s2.
    let g = group("cyclic:2");
    let trivial = Arc::new(FiniteGroup::trivial());
    let places = vec![Place::new(trivial.clone(), vec![0], false), Place::new(trivial, vec![0], false)];
    let d = LocalDatum::new(g.clone(), places).unwrap();
    let r = ring(3, 1);
    let trace = TraceDatum { degree: 1, functional: vec![0, 0, 1, 2] };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4 {
        let m = random_module(&mut rng, r, g.clone(), 2);
        let t = duality_triangle(&d, &m, &trace, 3).unwrap();
        assert!(t.report.consistent, "{:?} {:?}", t.windows, t.statuses);
        assert!(t.report.quasi_iso[1], "local row: {:?}", t.statuses[1]);
        assert_eq!(t.report.quasi_iso[0], t.report.quasi_iso[2], "{:?}", t.statuses);
    }
}

#[test]
fn trace_must_be_a_quasi_isomorphism() {
    let g = group("cyclic:2");
    let d = LocalDatum::new(g.clone(), vec![Place::identity(g.clone(), false)]).unwrap();
    let m = GModule::trivial(ring(3, 1), g, vec![1]);
    let err = duality_triangle(&d, &m, &TraceDatum { degree: 0, functional: vec![1] }, 2).unwrap_err();
    assert!(matches!(err, Error::TraceNotQuasiIso(_)), "{err:?}");
}

#[test]
fn compact_shapiro_is_a_quasi_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cases: Vec<(Arc<FiniteGroup>, Vec<usize>)> = vec![(group("cyclic:4"), vec![0, 2]), (group("s3"), Vec::new()), (group("klein"), Vec::new())];
    for (g, u) in cases {
        let u = if u.is_empty() {
            subgroups(&g).into_iter().find(|s| s.len() * 2 == g.order() && g.is_normal(s)).unwrap()
        } else {
            u
        };
        let sub = SubgroupOf::new(&g, &u).unwrap();
        for _ in 0..3 {
            let r = ring([2, 3][rng.gen_range(0..2)], 1);
            let m = random_module(&mut rng, r, g.clone(), 1);
            let d = random_datum(&mut rng, &g, false);
            let sh = shapiro_compact(&d, &sub, &m, 2).unwrap();
            assert!(sh.is_quasi_iso(), "{} over {:?}", g.label(), u);
        }
    }
}

#[test]
fn induced_places_follow_double_cosets() {
    let g = group("cyclic:4");
    let sub = SubgroupOf::new(&g, &[0, 2]).unwrap();
    let places = vec![Place::subgroup(&g, &[0, 2], false).unwrap(), Place::identity(g.clone(), false)];
    let d = LocalDatum::new(g, places).unwrap();
    let (induced, origin) = induced_places(&d, &sub).unwrap();
    assert_eq!(induced.places().len(), 3);
    assert_eq!(origin.iter().map(|o| o.0).collect::<Vec<_>>(), vec![0, 0, 1]);
}
