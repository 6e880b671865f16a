mod common;

use std::sync::Arc;

use common::*;
use iwacoh_core::cochain::{cochain_cohomology, SubgroupOf};
use iwacoh_core::iwasawa::*;
use iwacoh_core::module::LambdaAction;
use iwacoh_core::random::{random_equivariant, random_module};
use iwacoh_core::{Error, FinAb, FiniteGroup, GModule, Matrix, ModuleMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn subgroup_of_order(g: &FiniteGroup, k: usize) -> Vec<usize> {
    let x = (0..g.order()).find(|&x| g.element_order(x) == k).expect("element of that order");
    g.generated(&[x])
}

fn datum(g: &Arc<FiniteGroup>, u: &[usize]) -> QuotientDatum {
    QuotientDatum::new(g.clone(), u).unwrap()
}

/// Normal chains 1 ⊆ … ⊆ G for a few groups, smallest first.
fn normal_chains() -> Vec<(Arc<FiniteGroup>, Vec<Vec<usize>>)> {
    let z8 = group("cyclic:8");
    let s3 = group("s3");
    let d4 = group("d4");
    let center = (0..d4.order()).filter(|&z| (0..d4.order()).all(|g| d4.mul(z, g) == d4.mul(g, z))).collect::<Vec<_>>();
    let klein = (0..d4.order())
        .map(|x| d4.generated(&[x]))
        .chain((0..d4.order()).flat_map(|x| (0..d4.order()).map(move |y| (x, y))).map(|(x, y)| d4.generated(&[x, y])))
        .find(|h| h.len() == 4 && h.iter().all(|&x| d4.element_order(x) <= 2) && center.iter().all(|z| h.contains(z)))
        .unwrap();
    vec![
        (z8.clone(), vec![vec![0], vec![0, 4], vec![0, 2, 4, 6], (0..8).collect()]),
        (s3.clone(), vec![vec![0], subgroup_of_order(&s3, 3), (0..6).collect()]),
        (d4.clone(), vec![vec![0], center, klein, (0..8).collect()]),
    ]
}

fn random_data(rng: &mut ChaCha8Rng) -> (QuotientDatum, GModule) {
    let chains = normal_chains();
    let (g, chain) = &chains[rng.gen_range(0..chains.len())];
    let u = &chain[rng.gen_range(0..chain.len())];
    let r = rand_ring(rng);
    (datum(g, u), random_module(rng, r, g.clone(), 2))
}

#[test]
fn induction_from_the_whole_group_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for name in ["cyclic:4", "s3", "klein"] {
        let g = group(name);
        let m = random_module(&mut rng, ring(3, 2), g.clone(), 2);
        let q = QuotientDatum::whole(g);
        assert_eq!(induce_hom(&q, &m).unwrap().without_lambda(), m);
        assert_eq!(induce_tensor(&q, &m).unwrap().without_lambda(), m);
        assert_eq!(kronecker_iso(&q, &m).unwrap().matrix, Matrix::identity(m.rank()));
    }
}

#[test]
fn induced_modules_have_the_expected_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let g = group("cyclic:4");
    let q = datum(&g, &[0, 2]);
    let z2 = GModule::trivial(ring(2, 1), g.clone(), vec![1]);
    assert_eq!(induce_hom(&q, &z2).unwrap().elements().len(), 4);
    for _ in 0..5 {
        let (q, m) = random_data(&mut rng);
        let n = q.index() as u64;
        assert_eq!(induce_tensor(&q, &m).unwrap().order_log(), n * m.order_log());
        assert_eq!(induce_hom(&q, &m).unwrap().order_log(), n * m.order_log());
    }
    // Γ/U = Z/2 inside Z/4: |M_U| = |M|^2.
    let t = TowerSpec::cyclic_p_tower(2, 2, 1).unwrap();
    let m = GModule::trivial(ring(2, 2), t.group().clone(), vec![2]);
    let top = ff_gamma_level(&t, &m, 1).unwrap();
    assert_eq!(top.module.order_log(), 2 * m.order_log());
}

#[test]
fn invariants_of_the_hom_induction_are_the_u_invariants() {
    let g = group("cyclic:4");
    let q = datum(&g, &[0, 2]);
    // (Z/2)^2 with the generator swapping coordinates; U = 2Z/4 acts trivially.
    let swap = Matrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
    let m = GModule::from_generators(ring(2, 1), g.clone(), vec![1, 1], &[(1, swap)]).unwrap();
    let hom = induce_hom(&q, &m).unwrap();
    let u = q.subgroup().unwrap();
    let mu = m.restrict(u.group.clone(), &u.elems).unwrap();
    assert_eq!(brute_invariants(&hom), brute_invariants(&mu));
    assert_eq!(brute_invariants(&mu), FinAb::new(2, [1, 1]));
    let inv = invariant_submodule(&q, &m).unwrap();
    assert_eq!(inv.finab(), brute_invariants(&mu));
    assert_eq!(inv.group().order(), 2);
}

#[test]
fn kronecker_map_sends_tensors_to_delta_functions() {
    let g = group("cyclic:4");
    let q = datum(&g, &[0, 2]);
    let m = GModule::trivial(ring(2, 2), g, vec![2, 1]);
    let k = kronecker_iso(&q, &m).unwrap();
    let r = m.rank();
    for beta in 0..q.index() {
        for x in m.elements() {
            // β ⊗ x in M_U.
            let mut v = vec![0; q.index() * r];
            v[beta * r..(beta + 1) * r].copy_from_slice(&x);
            let f = k.apply(&v);
            for b in 0..q.index() {
                let expected = if b == beta { x.clone() } else { vec![0; r] };
                assert_eq!(&f[b * r..(b + 1) * r], &expected[..]);
            }
        }
    }
}

#[test]
fn kronecker_iso_is_equivariant_and_bijective() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..20 {
        let (q, m) = random_data(&mut rng);
        let k = kronecker_iso(&q, &m).unwrap();
        assert!(k.is_bijective());
        k.check_equivariant().unwrap();
        assert!(lambda_compatible(&k, None).unwrap());
    }
}

#[test]
fn transition_maps_fit_the_kronecker_squares() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for (g, chain) in normal_chains() {
        for i in 0..chain.len() {
            for j in i..chain.len() {
                let (qu, qv) = (datum(&g, &chain[i]), datum(&g, &chain[j]));
                let m = random_module(&mut rng, ring(2, 2), g.clone(), 2);
                let t = transition_maps(&qu, &qv, &m).unwrap();
                let (ku, kv) = (kronecker_iso(&qu, &m).unwrap(), kronecker_iso(&qv, &m).unwrap());
                assert_eq!(t.pr_star_ten.then(&kv).unwrap().matrix, ku.then(&t.tr_star_hom).unwrap().matrix, "{} {i} {j}", g.label());
                assert_eq!(t.tr_star_ten.then(&ku).unwrap().matrix, kv.then(&t.pr_star_hom).unwrap().matrix, "{} {i} {j}", g.label());
                assert!(lambda_compatible(&t.pr_star_ten, Some(&t.level_proj)).unwrap());
                assert!(lambda_compatible(&t.tr_star_hom, Some(&t.level_proj)).unwrap());
                if i == j {
                    for f in [&t.pr_star_hom, &t.tr_star_hom, &t.pr_star_ten, &t.tr_star_ten] {
                        assert_eq!(f.matrix, Matrix::identity(f.source.rank()));
                    }
                }
                // Tr followed by pr is multiplication by [V:U] on R[Γ/V].
                let r = ring(2, 3);
                let (pr, tr) = pr_and_trace(&qu, &qv, r).unwrap();
                let index = (qu.index() / qv.index()) as u64;
                let mut expected = Matrix::identity(qv.index()).scale(index, &r);
                expected.reduce_columns(tr.source.exps(), &r);
                assert_eq!(tr.then(&pr).unwrap().matrix, expected);
            }
        }
    }
}

#[test]
fn transitions_require_nested_subgroups() {
    let s3 = group("s3");
    let a3 = subgroup_of_order(&s3, 3);
    let m = GModule::trivial(ring(3, 1), s3.clone(), vec![1]);
    let err = transition_maps(&datum(&s3, &a3), &datum(&s3, &[0]), &m).unwrap_err();
    assert!(matches!(err, Error::NotNested(_)));
    let t2 = subgroup_of_order(&s3, 2);
    assert!(matches!(QuotientDatum::new(s3, &t2), Err(Error::NotNormal(_))));
}

/// Permutation matrices of β ↦ f(β), scaled up by M's rank.
fn moves(k: usize, r: usize, f: impl Fn(usize) -> usize) -> Matrix {
    let mut m = Matrix::zeros(k * r, k * r);
    for b in 0..k {
        m.set_block(b * r, f(b) * r, &Matrix::identity(r));
    }
    m
}

#[test]
fn iota_twists_match_the_opposite_constructions() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..10 {
        let (q, m) = random_data(&mut rng);
        let quo = q.quotient();
        let (k, r) = (q.index(), m.rank());
        // Hom_R(R[Γ/U]^ι, M): (γf)(β) = f(γ^{-1}β), (fγ)(β) = f(βγ^{-1}); δ_c moves to γc and cγ.
        let hom = induce_hom(&q, &m).unwrap();
        let expected = LambdaAction {
            quotient: (**quo).clone(),
            left: (0..k).map(|x| moves(k, r, |c| quo.mul(x, c))).collect(),
            right: (0..k).map(|x| moves(k, r, |c| quo.mul(c, x))).collect(),
        };
        assert_eq!(hom.iota_twist().unwrap().lambda(), Some(&expected));
        // R[Γ/U] ⊗ M with multiplication on the group-algebra factor.
        let ten = induce_tensor(&q, &m).unwrap();
        assert_eq!(ten.iota_twist().unwrap().lambda(), Some(&expected));
        assert_eq!(ten.iota_twist().unwrap().iota_twist().unwrap(), ten);
    }
    assert_eq!(group("cyclic:2").order(), 2);
    let plain = GModule::trivial(ring(2, 1), group("cyclic:2"), vec![1]);
    assert!(matches!(plain.iota_twist(), Err(Error::NoLambdaAction)));
}

#[test]
fn duality_isomorphism_is_bijective_and_natural() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut cases = 0;
    while cases < 60 {
        let (q, m) = random_data(&mut rng);
        let n = random_module(&mut rng, *m.ring(), m.group().clone(), 2);
        let f = ModuleMap::new(m.clone(), n.clone(), random_equivariant(&mut rng, &m, &n)).unwrap();
        let dm = dfm_duality(&q, &m).unwrap();
        let dn = dfm_duality(&q, &n).unwrap();
        assert!(dm.is_bijective() && dn.is_bijective());
        assert!(lambda_compatible(&dm, None).unwrap());
        // (f_U)^∨ then the duality for M equals the duality for N then (_U f^∨)^ι.
        let lhs = induced_tensor_map(&q, &f).unwrap().dual().then(&dm).unwrap();
        let rhs = dn.then(&induced_hom_map(&q, &f.dual()).unwrap()).unwrap();
        assert_eq!(lhs.matrix, rhs.matrix);
        cases += 1;
    }
}

#[test]
fn duality_for_z4_over_index_two_by_enumeration() {
    let g = group("cyclic:4");
    let q = datum(&g, &[0, 2]);
    let m = GModule::trivial(ring(2, 1), g, vec![1]);
    let d = dfm_duality(&q, &m).unwrap();
    assert_eq!(d.source.elements().len(), 4);
    assert_eq!(d.target.elements().len(), 4);
    let images: std::collections::HashSet<Vec<u64>> = d.source.elements().iter().map(|v| d.apply(v)).collect();
    assert_eq!(images.len(), 4);
}

#[test]
fn shapiro_isomorphism_in_low_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let s3 = group("s3");
    let cases: Vec<(Arc<FiniteGroup>, Vec<usize>)> = vec![
        (group("cyclic:4"), vec![0, 2]),
        (group("cyclic:9"), vec![0, 3, 6]),
        (s3.clone(), subgroup_of_order(&s3, 3)),
        (s3.clone(), subgroup_of_order(&s3, 2)),
    ];
    for (g, u) in cases {
        for _ in 0..2 {
            let p = if g.order() % 3 == 0 { 3 } else { 2 };
            let m = random_module(&mut rng, ring(p, 2), g.clone(), 1);
            let sub = SubgroupOf::new(&g, &u).unwrap();
            let ind = induced_module(&m, &sub);
            if g.is_normal(&u) {
                assert_eq!(induce_tensor(&datum(&g, &u), &m).unwrap().without_lambda(), ind);
            }
            let m_u = m.restrict(sub.group.clone(), &sub.elems).unwrap();
            let sh = shapiro_map(&m, &sub, 3).unwrap();
            for j in 0..=2 {
                let lhs = cochain_cohomology(&ind, j).unwrap();
                let rhs = cochain_cohomology(&m_u, j).unwrap();
                assert_eq!(lhs, rhs, "{} degree {j}", g.label());
                assert!(sh.induced(j as i64).is_bijective(), "{} degree {j}", g.label());
            }
        }
    }
}

#[test]
fn tower_colimits_stabilize() {
    for w in [1, 2] {
        let t = TowerSpec::cyclic_p_tower(2, 4, w).unwrap();
        let m = GModule::trivial(ring(2, 1), t.group().clone(), vec![1]);
        let h0 = colim_cohomology(&t, &m, 0).unwrap();
        assert_eq!(h0.value(), Some(&FinAb::cyclic(2, 1)));
        let h1 = colim_cohomology(&t, &m, 1).unwrap();
        assert_eq!(h1.stabilization, Stabilization::Stable { level: 1, value: FinAb::cyclic(2, 1) }, "w = {w}");
        assert!(h1.transitions_iso.iter().all(|&b| b));
        let h2 = colim_cohomology(&t, &m, 2).unwrap();
        assert_eq!(h2.levels, vec![FinAb::cyclic(2, 1); 4]);
        assert!(h2.transitions_iso.iter().all(|&b| !b));
        assert_eq!(h2.stabilization, Stabilization::Stable { level: 2, value: FinAb::zero(2) }, "w = {w}");
        assert!(h2.cofinality_assumed);
    }
    let t3 = TowerSpec::cyclic_p_tower(3, 3, 1).unwrap();
    let m3 = GModule::trivial(ring(3, 1), t3.group().clone(), vec![1]);
    assert_eq!(colim_cohomology(&t3, &m3, 1).unwrap().value(), Some(&FinAb::cyclic(3, 1)));
}

#[test]
fn short_towers_are_inconclusive() {
    let t = TowerSpec::cyclic_p_tower(2, 1, 1).unwrap();
    let m = GModule::trivial(ring(2, 1), t.group().clone(), vec![1]);
    let h = colim_cohomology(&t, &m, 1).unwrap();
    assert_eq!(h.stabilization, Stabilization::Inconclusive { levels: 1, window: 1 });
    assert!(matches!(t.level(2), Err(Error::LevelOutOfRange { level: 2, levels: 1 })));
    assert!(matches!(f_gamma_level(&t, &m, 0), Err(Error::LevelOutOfRange { .. })));
}

#[test]
fn tower_limits_stabilize() {
    for (p, name) in [(2u64, "cyclic:2"), (3, "cyclic:3")] {
        let (mods, maps) = z_mod_pk_tower(group(name), p, 4).unwrap();
        for w in [1, 2] {
            let h2 = lim_cohomology(&mods, &maps, 2, w).unwrap();
            assert_eq!(h2.value(), Some(&FinAb::cyclic(p, 1)), "p = {p}, w = {w}");
            let h1 = lim_cohomology(&mods, &maps, 1, w).unwrap();
            assert_eq!(h1.value(), Some(&FinAb::zero(p)), "p = {p}, w = {w}");
        }
    }
    // A constant tower gives H^i of the module.
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    let m = random_module(&mut rng, ring(2, 2), group("klein"), 2);
    let mods = vec![m.clone(); 4];
    let maps = vec![ModuleMap::identity(&m); 3];
    for i in 0..=2 {
        assert_eq!(lim_cohomology(&mods, &maps, i, 2).unwrap().value(), Some(&cochain_cohomology(&m, i).unwrap()));
    }
}

#[test]
fn tower_levels_dualize_with_iota() {
    let mut rng = ChaCha8Rng::seed_from_u64(58);
    let t = TowerSpec::cyclic_p_tower(2, 3, 2).unwrap();
    let m = random_module(&mut rng, ring(2, 2), t.group().clone(), 2);
    for k in 1..=3 {
        let ff = ff_gamma_level(&t, &m, k).unwrap();
        let f = f_gamma_level(&t, &m.dual(), k).unwrap();
        let d = dfm_duality(t.level(k).unwrap(), &m).unwrap();
        assert_eq!(d.source, ff.module.dual());
        assert_eq!(d.target, f.module.iota_twist().unwrap());
        assert_eq!(ff.transition.is_some(), k < 3);
    }
}
