//! Randomized verification suites. Each check returns a [`Check`] with the
//! number of instances tried and the first failing witness.

use std::sync::Arc;

use iwacoh_core::cochain::tate::{cyclic_tate_pairing, tate_cohomology, tate_complex};
use iwacoh_core::cochain::{cochain_cohomology, cochain_complex, Cochain, Pairing, SubgroupOf};
use iwacoh_core::compact::{compact_cohomology, compact_complex, compact_cups, compact_les, duality_triangle, shapiro_compact, LocalDatum, Place, TraceDatum};
use iwacoh_core::complex::{
    cone, dd_zero, fiber, hom_complex, shift, tensor_complex, truncate, two_out_of_three, ChainMap, Complex, Triangle, TrianglePair, TruncationKind,
};
use iwacoh_core::iwasawa::{
    colim_cohomology, dfm_duality, induced_hom_map, induced_module, induced_tensor_map, lambda_compatible, lim_cohomology, shapiro_map, z_mod_pk_tower,
    QuotientDatum, Stabilization, TowerSpec,
};
use iwacoh_core::random::{direct_sum_complex, random_chain_map, random_complex, random_equivariant, random_module};
use iwacoh_core::{FinAb, FiniteGroup, GModule, Matrix, ModuleMap, RingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Check;

pub const SUITES: [&str; 8] = ["signs", "cones", "cups", "tate", "shapiro", "duality", "towers", "compact"];

/// Groups of order at most 8.
pub const SMALL_GROUPS: [&str; 9] = ["trivial", "cyclic:2", "cyclic:3", "cyclic:4", "klein", "s3", "cyclic:8", "d4", "q8"];

/// Groups of order at most 6, for the heavier constructions.
const TINY_GROUPS: [&str; 6] = ["trivial", "cyclic:2", "cyclic:3", "cyclic:4", "klein", "s3"];

/// An independent stream per suite, so suites can run in any order.
pub fn suite_rng(seed: u64, suite: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SUITES.iter().position(|s| *s == suite).unwrap_or(SUITES.len()) as u64);
    rng
}

pub fn run_suite(name: &str, seed: u64) -> Vec<Check> {
    let rng = &mut suite_rng(seed, name);
    match name {
        "signs" => vec![dd_zero_check(rng, 500)],
        "cones" => vec![cone_cup_check(rng, 100), two_of_three_check(rng, 24)],
        "cups" => vec![leibniz_check(rng, 200), known_cohomology_check(rng)],
        "tate" => vec![tate_gcd_check(), tate_vanishing_check()],
        "shapiro" => vec![shapiro_check(rng), dfm_check(rng, 50), compact_shapiro_check(rng, 6)],
        "duality" => vec![finite_duality_check(rng), cyclic_pairing_check(rng), duality_triangle_check(rng)],
        "towers" => vec![tower_check()],
        "compact" => vec![compact_les_check(rng, 50)],
        _ => {
            let mut c = Check::new(format!("suite {name}"));
            c.record(false, || format!("unknown suite '{name}'"));
            vec![c]
        }
    }
}

pub fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::builtin(name).expect("builtin group"))
}

fn pick_group(rng: &mut ChaCha8Rng, names: &[&str]) -> Arc<FiniteGroup> {
    group(names[rng.gen_range(0..names.len())])
}

fn rand_ring(rng: &mut ChaCha8Rng) -> RingSpec {
    RingSpec::new([2, 3][rng.gen_range(0..2)], rng.gen_range(1..=3)).expect("valid ring")
}

fn ring_label(r: &RingSpec) -> String {
    format!("Z/{}", r.modulus())
}

/// Cyclic subgroups together with the whole group.
pub fn cyclic_subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..g.order()).map(|x| g.generated(&[x])).collect();
    out.push((0..g.order()).collect());
    out.sort();
    out.dedup();
    out
}

/// A local datum with up to two places at cyclic subgroups.
pub fn random_datum(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, allow_tate: bool) -> LocalDatum {
    let subs = cyclic_subgroups(g);
    let count = rng.gen_range(0..=2);
    let places = (0..count)
        .map(|_| {
            let s = &subs[rng.gen_range(0..subs.len())];
            Place::subgroup(g, s, allow_tate && rng.gen_bool(0.5)).expect("subgroup place")
        })
        .collect();
    LocalDatum::new(g.clone(), places).expect("places at subgroups are well formed")
}

fn random_cochain(rng: &mut ChaCha8Rng, m: &GModule, deg: usize) -> Cochain {
    let ring = *m.ring();
    Cochain::from_fn(m.clone(), deg, |_| m.exps().iter().map(|&a| rng.gen_range(0..ring.pow(a))).collect())
}

fn tensor_pairing(l: &GModule, r: &GModule) -> Pairing {
    Pairing::new(l.clone(), r.clone(), l.tensor(r), Matrix::identity(l.rank() * r.rank())).expect("tensor pairing is equivariant")
}

/// d∘d = 0 for shifts, truncations, cones, fibres, Hom, tensor, cochain,
/// Tate and compactly supported complexes.
pub fn dd_zero_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("d∘d = 0");
    for case in 0..cases {
        let r = rand_ring(rng);
        let g = pick_group(rng, &SMALL_GROUPS);
        let top = if g.order() > 4 { 2 } else { 3 };
        let lo = rng.gen_range(-1..=1);
        let x = random_complex(rng, r, g.clone(), lo, 3, 2);
        let y = random_complex(rng, r, g.clone(), 0, 2, 2);
        let f = random_chain_map(rng, &x, 2);
        let n = rng.gen_range(-2..=2);
        let cut = rng.gen_range(-1..=2);
        let m = random_module(rng, r, g.clone(), 2);
        let datum = random_datum(rng, &g, true);
        let mut built: Vec<(String, Result<Complex, String>)> = vec![(format!("shift by {n}"), Ok(shift(&x, n)))];
        for kind in [TruncationKind::SigmaLe, TruncationKind::SigmaGe, TruncationKind::TauLe, TruncationKind::TauGe] {
            built.push((format!("{kind:?} truncation at {cut}"), Ok(truncate(&x, kind, cut).complex)));
        }
        built.push(("cone".into(), Ok(cone(&f).cone)));
        built.push(("fibre".into(), Ok(fiber(&f).0)));
        built.push(("Hom".into(), Ok(hom_complex(&x, &y))));
        built.push(("tensor".into(), Ok(tensor_complex(&x, &y))));
        built.push(("cochain".into(), cochain_complex(&m, top).map_err(|e| e.to_string())));
        built.push(("Tate".into(), tate_complex(&m, -(top as i64), top as i64 - 1).map_err(|e| e.to_string())));
        built.push(("compact support".into(), compact_complex(&datum, &m, top).map(|c| c.complex).map_err(|e| e.to_string())));
        let bad = built.iter().find(|(_, c)| !matches!(c, Ok(c) if dd_zero(c)));
        check.record(bad.is_none(), || {
            let (name, res) = bad.expect("failing construct");
            let why = match res {
                Err(e) => e.clone(),
                Ok(_) => "d∘d ≠ 0".into(),
            };
            format!("case {case}: {name} complex over {} with coefficients in {}: {why}", g.label(), ring_label(&r))
        });
    }
    check
}

/// ∪_1 − ∪_0 = ds + sd for the two products on compactly supported cochains.
pub fn cone_cup_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("∪_1 − ∪_0 = ds + sd");
    for case in 0..cases {
        let r = rand_ring(rng);
        let g = pick_group(rng, &TINY_GROUPS[..5]);
        let m = random_module(rng, r, g.clone(), 2);
        let datum = random_datum(rng, &g, false);
        let res = compact_cups(&datum, &Pairing::evaluation(&m), 2).and_then(|c| c.cone.homotopy.validate());
        check.record(res.is_ok(), || {
            format!("case {case}: {} over {} with {} places: {}", ring_label(&r), g.label(), datum.places().len(), res.unwrap_err())
        });
    }
    check
}

/// Inclusion X → X ⊕ W as a chain map.
fn inclusion(x: &Complex, xw: &Complex) -> ChainMap {
    ChainMap::from_fn(x.clone(), xw.clone(), |i| {
        let mut m = Matrix::zeros(x.rank(i), xw.rank(i));
        m.set_block(0, 0, &Matrix::identity(x.rank(i)));
        m
    })
    .expect("inclusion of a summand")
}

/// f ⊕ 0: X ⊕ W → Y ⊕ W'.
fn extend_by_zero(f: &ChainMap, xw: &Complex, yw: &Complex) -> ChainMap {
    ChainMap::from_fn(xw.clone(), yw.clone(), |i| {
        let mut m = Matrix::zeros(xw.rank(i), yw.rank(i));
        m.set_block(0, 0, &f.component(i));
        m
    })
    .expect("f ⊕ 0 is a chain map")
}

/// If two of a, b, c are quasi-isomorphisms, so is the third; the synthetic
/// pairs have known statuses.
pub fn two_of_three_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("two-of-three for morphisms of triangles");
    for case in 0..cases {
        let r = rand_ring(rng);
        let g = pick_group(rng, &TINY_GROUPS);
        let x = random_complex(rng, r, g.clone(), 0, 2, 2);
        let f = random_chain_map(rng, &x, 1);
        let y = f.target.clone();
        let variant = case % 4;
        let (pair, expected) = match variant {
            0 => (TrianglePair::new(Triangle::new(f.clone()), Triangle::new(f.clone()), ChainMap::identity(&x), ChainMap::identity(&y), None), Some([true; 3])),
            1 => {
                let w1 = random_complex(rng, r, g.clone(), 0, 2, 2);
                let w2 = random_complex(rng, r, g.clone(), 0, 2, 2);
                let xc = direct_sum_complex(&x, &cone(&ChainMap::identity(&w1)).cone);
                let yc = direct_sum_complex(&y, &cone(&ChainMap::identity(&w2)).cone);
                let bottom = Triangle::new(extend_by_zero(&f, &xc, &yc));
                (TrianglePair::new(Triangle::new(f.clone()), bottom, inclusion(&x, &xc), inclusion(&y, &yc), None), Some([true; 3]))
            }
            2 => {
                let bottom = Triangle::new(ChainMap::zero(&x, &y));
                let pair = TrianglePair::new(Triangle::new(ChainMap::zero(&x, &y)), bottom, ChainMap::identity(&x), ChainMap::zero(&y, &y), None);
                let acyclic = y.is_acyclic();
                (pair, Some([true, acyclic, acyclic]))
            }
            _ => {
                let pair = TrianglePair::new(Triangle::new(f.clone()), Triangle::new(f.clone()), ChainMap::zero(&x, &x), ChainMap::zero(&y, &y), None);
                let c = cone(&f).cone.is_acyclic();
                (pair, Some([x.is_acyclic(), y.is_acyclic(), c]))
            }
        };
        match pair {
            Err(e) => check.record(false, || format!("case {case}: malformed synthetic pair (variant {variant}): {e}")),
            Ok(pair) => {
                let rep = two_out_of_three(&pair);
                let ok = rep.consistent && expected.is_none_or(|e| e == rep.quasi_iso);
                check.record(ok, || format!("case {case} (variant {variant}) over {}: statuses {:?}, expected {:?}", g.label(), rep.quasi_iso, expected));
            }
        }
    }
    check
}

/// d(a ∪ b) = da ∪ b + (−1)^i a ∪ db for i + j ≤ 3.
pub fn leibniz_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("d(a∪b) = da∪b + (−1)^i a∪db");
    let names = ["cyclic:2", "cyclic:3", "cyclic:4", "s3"];
    for case in 0..cases {
        let name = names[case % names.len()];
        let r = rand_ring(rng);
        let l = random_module(rng, r, group(name), 2);
        let rt = random_module(rng, r, group(name), 2);
        let pairing = tensor_pairing(&l, &rt);
        let i = rng.gen_range(0..=2);
        let j = rng.gen_range(0..=3 - i);
        let a = random_cochain(rng, &l, i);
        let b = random_cochain(rng, &rt, j);
        let res = (|| -> iwacoh_core::Result<bool> {
            let lhs = a.cup(&b, &pairing)?.coboundary();
            let rhs = a.coboundary().cup(&b, &pairing)?.add(&a.cup(&b.coboundary(), &pairing)?.scale(r.sign(i as i64, 1)));
            Ok(lhs == rhs)
        })();
        check.record(matches!(res, Ok(true)), || format!("case {case}: {name}, {}, degrees ({i}, {j}), a = {}, b = {}", ring_label(&r), a.render(), b.render()));
    }
    check
}

/// Invariants of a finite abelian p-group from |A[p^k]|, k = 0, 1, ….
pub fn finab_from_torsion_counts(p: u64, counts: &[usize]) -> FinAb {
    let log = |mut x: usize| {
        let mut k = 0u32;
        while x > 1 {
            x /= p as usize;
            k += 1;
        }
        k
    };
    let r: Vec<u32> = counts.windows(2).map(|w| log(w[1]) - log(w[0])).collect();
    let mut exps = Vec::new();
    for k in 0..r.len() {
        let next = r.get(k + 1).copied().unwrap_or(0);
        exps.extend(std::iter::repeat_n(k as u32 + 1, (r[k] - next) as usize));
    }
    FinAb::new(p, exps)
}

/// M^G by listing the fixed elements.
pub fn enumerated_invariants(m: &GModule) -> FinAb {
    let fixed: Vec<Vec<u64>> = m.elements().into_iter().filter(|v| (0..m.group().order()).all(|g| &m.act(g, v) == v)).collect();
    let counts: Vec<usize> = (0..=m.ring().e()).map(|k| fixed.iter().filter(|v| m.scale(m.ring().pow(k), v).iter().all(|&x| x == 0)).count()).collect();
    finab_from_torsion_counts(m.ring().p(), &counts)
}

/// H^i(Z/2, Z/2) = Z/2 for i ≤ 2, H^2(Z/3, Z/3) = Z/3, and H^0 = M^G.
pub fn known_cohomology_check(rng: &mut ChaCha8Rng) -> Check {
    let mut check = Check::new("known cohomology groups");
    let trivial = |p: u64, name: &str| GModule::trivial(RingSpec::new(p, 1).expect("valid ring"), group(name), vec![1]);
    let z2 = trivial(2, "cyclic:2");
    for i in 0..=2 {
        let h = cochain_cohomology(&z2, i);
        check.record(h.as_ref().ok() == Some(&FinAb::cyclic(2, 1)), || format!("H^{i}(Z/2, Z/2) = {h:?}, expected Z/2"));
    }
    let h = cochain_cohomology(&trivial(3, "cyclic:3"), 2);
    check.record(h.as_ref().ok() == Some(&FinAb::cyclic(3, 1)), || format!("H^2(Z/3, Z/3) = {h:?}, expected Z/3"));
    for name in ["cyclic:2", "cyclic:4", "klein", "s3", "d4", "q8"] {
        for p in [2, 3] {
            let m = random_module(rng, RingSpec::new(p, 2).expect("valid ring"), group(name), 3);
            let h = cochain_cohomology(&m, 0);
            let fixed = enumerated_invariants(&m);
            check.record(h.as_ref().ok() == Some(&fixed), || format!("H^0({name}, M) = {h:?} but M^G = {fixed} for M with exponents {:?}", m.exps()));
        }
    }
    check
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ĥ^0 = Ĥ^{−1}(Z/n, Z/m) = Z/gcd(n, m).
pub fn tate_gcd_check() -> Check {
    let mut check = Check::new("Ĥ^0 = Ĥ^-1(Z/n, Z/m) = Z/gcd(n, m)");
    let orders = [2u64, 3, 4, 8, 9];
    for n in orders {
        for mm in orders {
            let p = if mm % 2 == 0 { 2 } else { 3 };
            let e = mm.ilog(p);
            let m = GModule::trivial(RingSpec::new(p, e).expect("valid ring"), group(&format!("cyclic:{n}")), vec![e]);
            let d = gcd(n, mm);
            let expected = if d == 1 { FinAb::zero(p) } else { FinAb::cyclic(p, d.ilog(p)) };
            for i in [0, -1] {
                let h = tate_cohomology(&m, i);
                check.record(h.as_ref().ok() == Some(&expected), || format!("Ĥ^{i}(Z/{n}, Z/{mm}) = {h:?}, expected {expected}"));
            }
        }
    }
    check
}

/// Ĥ^i(Z/2, Z/9) = 0 for −3 ≤ i ≤ 3.
pub fn tate_vanishing_check() -> Check {
    let mut check = Check::new("Ĥ^i(Z/2, Z/9) = 0");
    let m = GModule::trivial(RingSpec::new(3, 2).expect("valid ring"), group("cyclic:2"), vec![2]);
    for i in -3..=3 {
        let h = tate_cohomology(&m, i);
        check.record(matches!(&h, Ok(h) if h.is_zero()), || format!("Ĥ^{i}(Z/2, Z/9) = {h:?}"));
    }
    check
}

fn subgroup_of_order(g: &FiniteGroup, k: usize) -> Vec<usize> {
    let x = (0..g.order()).find(|&x| g.element_order(x) == k).expect("element of that order");
    g.generated(&[x])
}

/// The subgroup pairs (G, U) used for Shapiro's lemma.
pub fn shapiro_pairs() -> Vec<(Arc<FiniteGroup>, Vec<usize>)> {
    let s3 = group("s3");
    let a3 = subgroup_of_order(&s3, 3);
    vec![(group("cyclic:4"), vec![0, 2]), (group("cyclic:9"), vec![0, 3, 6]), (s3, a3)]
}

/// H^j(G, Ind M) ≅ H^j(U, M) for j ≤ 2, both computed, plus bijectivity of
/// the Shapiro map.
pub fn shapiro_check(rng: &mut ChaCha8Rng) -> Check {
    let mut check = Check::new("H^j(G, Ind_U M) ≅ H^j(U, M)");
    for (g, u) in shapiro_pairs() {
        let p = if g.order() % 3 == 0 { 3 } else { 2 };
        for _ in 0..2 {
            let m = random_module(rng, RingSpec::new(p, 2).expect("valid ring"), g.clone(), 1);
            let res = (|| -> iwacoh_core::Result<Option<String>> {
                let sub = SubgroupOf::new(&g, &u)?;
                let ind = induced_module(&m, &sub);
                let m_u = m.restrict(sub.group.clone(), &sub.elems)?;
                let sh = shapiro_map(&m, &sub, 3)?;
                for j in 0..=2 {
                    let (lhs, rhs) = (cochain_cohomology(&ind, j)?, cochain_cohomology(&m_u, j)?);
                    if lhs != rhs || !sh.induced(j as i64).is_bijective() {
                        return Ok(Some(format!("{} ⊃ {u:?}, degree {j}: H(G, Ind M) = {lhs}, H(U, M) = {rhs}", g.label())));
                    }
                }
                Ok(None)
            })();
            check.record(matches!(res, Ok(None)), || match res {
                Ok(w) => w.unwrap_or_default(),
                Err(e) => e.to_string(),
            });
        }
    }
    check
}

/// Normal chains 1 ⊆ … ⊆ G of a few groups of order ≤ 8.
pub fn normal_chains() -> Vec<(Arc<FiniteGroup>, Vec<Vec<usize>>)> {
    let z8 = group("cyclic:8");
    let s3 = group("s3");
    let d4 = group("d4");
    let center: Vec<usize> = (0..d4.order()).filter(|&z| (0..d4.order()).all(|g| d4.mul(z, g) == d4.mul(g, z))).collect();
    let klein = (0..d4.order())
        .flat_map(|x| (0..d4.order()).map(move |y| (x, y)))
        .map(|(x, y)| d4.generated(&[x, y]))
        .find(|h| h.len() == 4 && h.iter().all(|&x| d4.element_order(x) <= 2) && center.iter().all(|z| h.contains(z)))
        .expect("Klein subgroup of D4");
    vec![
        (z8, vec![vec![0], vec![0, 4], vec![0, 2, 4, 6], (0..8).collect()]),
        (s3.clone(), vec![vec![0], subgroup_of_order(&s3, 3), (0..6).collect()]),
        (d4, vec![vec![0], center, klein, (0..8).collect()]),
    ]
}

/// The duality (M_U)^∨ ≅ (M^∨)_U is bijective, compatible with the group-algebra
/// actions and natural in M.
pub fn dfm_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("(M_U)^∨ ≅ _U(M^∨) bijective and natural");
    let chains = normal_chains();
    for case in 0..cases {
        let (g, chain) = &chains[rng.gen_range(0..chains.len())];
        let u = &chain[rng.gen_range(0..chain.len())];
        let r = rand_ring(rng);
        let m = random_module(rng, r, g.clone(), 2);
        let n = random_module(rng, r, g.clone(), 2);
        let f = random_equivariant(rng, &m, &n);
        let res = (|| -> iwacoh_core::Result<Option<&'static str>> {
            let q = QuotientDatum::new(g.clone(), u)?;
            let f = ModuleMap::new(m.clone(), n.clone(), f)?;
            let dm = dfm_duality(&q, &m)?;
            let dn = dfm_duality(&q, &n)?;
            if !dm.is_bijective() || !dn.is_bijective() {
                return Ok(Some("not bijective"));
            }
            if !lambda_compatible(&dm, None)? {
                return Ok(Some("not compatible with the group-algebra action"));
            }
            let lhs = induced_tensor_map(&q, &f)?.dual().then(&dm)?;
            let rhs = dn.then(&induced_hom_map(&q, &f.dual())?)?;
            Ok((lhs.matrix != rhs.matrix).then_some("naturality square does not commute"))
        })();
        check.record(matches!(res, Ok(None)), || {
            let why = match &res {
                Ok(w) => w.unwrap_or_default().to_string(),
                Err(e) => e.to_string(),
            };
            format!("case {case}: {} over {u:?}, {}: {why}", g.label(), ring_label(&r))
        });
    }
    check
}

/// Shapiro's lemma for compactly supported cochains with induced places.
pub fn compact_shapiro_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("H_c(G, Ind M) ≅ H_c(U, M) for induced places");
    let klein = group("klein");
    let kh = subgroup_of_order(&klein, 2);
    let pairs = [(group("cyclic:4"), vec![0, 2]), (group("s3"), subgroup_of_order(&group("s3"), 3)), (klein, kh)];
    for case in 0..cases {
        let (g, u) = &pairs[case % pairs.len()];
        let r = RingSpec::new([2, 3][rng.gen_range(0..2)], 1).expect("valid ring");
        let m = random_module(rng, r, g.clone(), 1);
        let datum = random_datum(rng, g, false);
        let res = SubgroupOf::new(g, u).and_then(|sub| shapiro_compact(&datum, &sub, &m, 2));
        check.record(matches!(&res, Ok(s) if s.is_quasi_iso()), || {
            let why = res.err().map(|e| e.to_string()).unwrap_or_else(|| "not a quasi-isomorphism".into());
            format!("case {case}: {} ⊃ {u:?} with {} places: {why}", g.label(), datum.places().len())
        });
    }
    check
}

/// A random module with |M| ≤ 81.
fn bounded_module(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>) -> GModule {
    loop {
        let r = rand_ring(rng);
        let m = random_module(rng, r, g.clone(), 3);
        if (r.p() as u128).pow(m.order_log() as u32) <= 81 {
            return m;
        }
    }
}

/// |Ĥ^n(G, M)| = |Ĥ^{−n−1}(G, M^∨)| for two sampled modules per group of
/// order ≤ 8 and −2 ≤ n ≤ 2.
pub fn finite_duality_check(rng: &mut ChaCha8Rng) -> Check {
    let mut check = Check::new("|Ĥ^n(G, M)| = |Ĥ^(-n-1)(G, M^∨)|");
    for name in SMALL_GROUPS {
        let g = group(name);
        for _ in 0..2 {
            let m = bounded_module(rng, &g);
            for n in -2..=2 {
                let res = tate_cohomology(&m, n).and_then(|l| Ok((l, tate_cohomology(&m.dual(), -n - 1)?)));
                check.record(matches!(&res, Ok((l, r)) if l.order_log() == r.order_log()), || {
                    format!("{name}, M with exponents {:?} over {}, n = {n}: {res:?}", m.exps(), ring_label(m.ring()))
                });
            }
        }
    }
    check
}

/// The cup-product pairing Ĥ^n × Ĥ^{−n−1}(M^∨) → Q/Z is perfect for cyclic G.
pub fn cyclic_pairing_check(rng: &mut ChaCha8Rng) -> Check {
    let mut check = Check::new("Tate pairing is perfect for cyclic G");
    for name in ["cyclic:2", "cyclic:3", "cyclic:4", "cyclic:8"] {
        let g = group(name);
        for _ in 0..2 {
            let m = bounded_module(rng, &g);
            for n in -2..=2 {
                let res = cyclic_tate_pairing(&m, n);
                check.record(matches!(&res, Ok(p) if p.perfect), || format!("{name}, M with exponents {:?}, n = {n}: {res:?}", m.exps()));
            }
        }
    }
    check
}

/// Duality triangles for the trivial group and for Z/2 with two trivial places
/// at p = 3: the report must be consistent, the local row a quasi-isomorphism.
pub fn duality_triangle_check(rng: &mut ChaCha8Rng) -> Check {
    let mut check = Check::new("duality triangle is consistent with two-of-three");
    let trivial = group("trivial");
    for _ in 0..3 {
        let m = random_module(rng, RingSpec::new(3, 2).expect("valid ring"), trivial.clone(), 3);
        let res = duality_triangle(&LocalDatum::empty(trivial.clone()), &m, &TraceDatum { degree: 0, functional: vec![1] }, 2);
        check.record(matches!(&res, Ok(t) if t.report.quasi_iso == [true; 3]), || format!("trivial group, M = {}: {res:?}", m.finab()));
    }
    let g = group("cyclic:2");
    let point = || Place::new(trivial.clone(), vec![0], false);
    let datum = LocalDatum::new(g.clone(), vec![point(), point()]).expect("two points");
    let trace = TraceDatum { degree: 1, functional: vec![0, 0, 1, 2] };
    for _ in 0..3 {
        let m = random_module(rng, RingSpec::new(3, 1).expect("valid ring"), g.clone(), 2);
        let res = duality_triangle(&datum, &m, &trace, 3);
        check.record(matches!(&res, Ok(t) if t.report.consistent && t.report.quasi_iso[1]), || {
            format!("Z/2 with two points, M with exponents {:?}: {:?}", m.exps(), res.map(|t| t.statuses))
        });
    }
    check
}

fn stable_value(s: &Stabilization) -> Option<(usize, &FinAb)> {
    match s {
        Stabilization::Stable { level, value } => Some((*level, value)),
        Stabilization::Inconclusive { .. } => None,
    }
}

/// Colimit and limit towers: H^1 of the Z_p-tower with Z/p stabilizes to Z/p,
/// H^2 to 0, lim H^2(Z/p, Z/p^k) = Z/p, and the values do not change when
/// the window grows by one.
pub fn tower_check() -> Check {
    let mut check = Check::new("tower cohomology stabilizes");
    let expect = |check: &mut Check, what: String, got: Result<Option<(usize, FinAb)>, String>, want: &FinAb| {
        let ok = matches!(&got, Ok(Some((level, v))) if v == want && *level <= 4);
        check.record(ok, || format!("{what}: got {got:?}, expected {want} within 4 levels"));
    };
    let colim = |p: u64, levels: usize, w: usize, i: usize| -> Result<Option<(usize, FinAb)>, String> {
        let t = TowerSpec::cyclic_p_tower(p, levels, w).map_err(|e| e.to_string())?;
        let m = GModule::trivial(RingSpec::new(p, 1).map_err(|e| e.to_string())?, t.group().clone(), vec![1]);
        let h = colim_cohomology(&t, &m, i).map_err(|e| e.to_string())?;
        Ok(stable_value(&h.stabilization).map(|(l, v)| (l, v.clone())))
    };
    let lim = |p: u64, w: usize, i: usize| -> Result<Option<(usize, FinAb)>, String> {
        let (mods, maps) = z_mod_pk_tower(group(&format!("cyclic:{p}")), p, 5).map_err(|e| e.to_string())?;
        let h = lim_cohomology(&mods, &maps, i, w).map_err(|e| e.to_string())?;
        Ok(stable_value(&h.stabilization).map(|(l, v)| (l, v.clone())))
    };
    for w in [1, 2] {
        expect(&mut check, format!("colim H^1, p = 2, w = {w}"), colim(2, 4, w, 1), &FinAb::cyclic(2, 1));
        expect(&mut check, format!("colim H^1, p = 3, w = {w}"), colim(3, 3, w, 1), &FinAb::cyclic(3, 1));
        for p in [2, 3] {
            expect(&mut check, format!("lim H^2(Z/{p}, Z/{p}^k), w = {w}"), lim(p, w, 2), &FinAb::cyclic(p, 1));
            expect(&mut check, format!("lim H^1(Z/{p}, Z/{p}^k), w = {w}"), lim(p, w, 1), &FinAb::zero(p));
        }
    }
    expect(&mut check, "colim H^2, p = 2, w = 1".into(), colim(2, 4, 1, 2), &FinAb::zero(2));
    let values = |r: Result<Option<(usize, FinAb)>, String>| r.ok().flatten().map(|(_, v)| v);
    for (what, a, b) in [
        ("colim H^1, p = 2", values(colim(2, 4, 1, 1)), values(colim(2, 4, 2, 1))),
        ("colim H^2, p = 2", values(colim(2, 4, 1, 2)), values(colim(2, 4, 2, 2))),
        ("lim H^2, p = 3", values(lim(3, 1, 2)), values(lim(3, 2, 2))),
        ("lim H^2, p = 2", values(lim(2, 2, 2)), values(lim(2, 3, 2))),
    ] {
        check.record(a.is_some() && a == b, || format!("{what}: window w gives {a:?}, w + 1 gives {b:?}"));
    }
    check
}

/// The long exact sequence of compactly supported cohomology is exact, with
/// H_c = H for S = ∅ and H_c = 0 for the identity place.
pub fn compact_les_check(rng: &mut ChaCha8Rng, cases: usize) -> Check {
    let mut check = Check::new("H_c → H → H_S long exact sequence");
    for case in 0..cases {
        let g = pick_group(rng, &TINY_GROUPS);
        let r = rand_ring(rng);
        let m = random_module(rng, r, g.clone(), 2);
        let datum = match case {
            0 => LocalDatum::empty(g.clone()),
            1 => LocalDatum::new(g.clone(), vec![Place::identity(g.clone(), false)]).expect("identity place"),
            _ => random_datum(rng, &g, true),
        };
        let top = 3;
        let les = compact_les(&datum, &m, top);
        let exact = matches!(&les, Ok(l) if l.is_exact());
        let degenerate = match case {
            0 => (0..top).all(|i| compact_cohomology(&datum, &m, i as i64, top).ok() == cochain_cohomology(&m, i).ok()),
            1 => (0..top as i64).all(|i| matches!(compact_cohomology(&datum, &m, i, top), Ok(h) if h.is_zero())),
            _ => true,
        };
        check.record(exact && degenerate, || {
            let why = match (&les, exact) {
                (Err(e), _) => e.to_string(),
                (Ok(l), false) => format!("not exact: {:?}", l.exact),
                _ if case == 0 => "H_c ≠ H for empty S".into(),
                _ => "H_c ≠ 0 for the identity place".into(),
            };
            format!("case {case}: {} with {}, {} places: {why}", g.label(), ring_label(&r), datum.places().len())
        });
    }
    check
}
