#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use iwacoh_core::cochain::Cochain;
use iwacoh_core::{FinAb, FiniteGroup, GModule, RingSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ring(p: u64, e: u32) -> RingSpec {
    RingSpec::new(p, e).unwrap()
}

pub fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::builtin(name).unwrap())
}

pub fn rand_ring(rng: &mut ChaCha8Rng) -> RingSpec {
    ring([2, 3][rng.gen_range(0..2)], rng.gen_range(1..=3))
}

/// Invariants of a finite abelian p-group from the sizes c_k = |H[p^k]|, k = 0, 1, ….
pub fn finab_from_torsion_counts(p: u64, counts: &[u128]) -> FinAb {
    let log = |x: u128| {
        let mut k = 0;
        let mut x = x;
        while x > 1 {
            assert_eq!(x % p as u128, 0, "torsion count is not a power of p");
            x /= p as u128;
            k += 1;
        }
        k
    };
    // r_k = number of cyclic factors of order ≥ p^k.
    let r: Vec<u32> = counts.windows(2).map(|w| log(w[1]) - log(w[0])).collect();
    let mut exps = Vec::new();
    for k in 0..r.len() {
        let next = r.get(k + 1).copied().unwrap_or(0);
        for _ in 0..r[k] - next {
            exps.push(k as u32 + 1);
        }
    }
    FinAb::new(p, exps)
}

/// All cochains of a given degree.
pub fn all_cochains(m: &GModule, deg: usize) -> Vec<Cochain> {
    let elems = m.elements();
    let slots = m.group().order().pow(deg as u32);
    let mut out = vec![Vec::new()];
    for _ in 0..slots {
        out = out.into_iter().flat_map(|t: Vec<u64>| elems.iter().map(move |e| [t.clone(), e.clone()].concat())).collect();
    }
    out.into_iter().map(|t| Cochain::new(m.clone(), deg, t).unwrap()).collect()
}

/// H^i(G, M) by listing every cocycle and every coboundary.
pub fn brute_cohomology(m: &GModule, i: usize) -> FinAb {
    let p = m.ring().p();
    let cocycles: Vec<Cochain> = all_cochains(m, i).into_iter().filter(|c| c.coboundary().is_zero()).collect();
    let boundaries: HashSet<Vec<u64>> = if i == 0 {
        HashSet::from([vec![0; m.rank()]])
    } else {
        all_cochains(m, i - 1).iter().map(|c| c.coboundary().table().to_vec()).collect()
    };
    for b in &boundaries {
        assert!(Cochain::new(m.clone(), i, b.clone()).unwrap().coboundary().is_zero(), "d∘d ≠ 0");
    }
    let e = m.ring().e();
    let counts: Vec<u128> = (0..=e)
        .map(|k| {
            let scale = m.ring().pow(k);
            let killed = cocycles.iter().filter(|c| boundaries.contains(c.scale(scale).table())).count();
            (killed / boundaries.len()) as u128
        })
        .collect();
    finab_from_torsion_counts(p, &counts)
}

/// M^G by enumeration.
pub fn brute_invariants(m: &GModule) -> FinAb {
    let p = m.ring().p();
    let fixed: Vec<Vec<u64>> = m.elements().into_iter().filter(|v| (0..m.group().order()).all(|g| &m.act(g, v) == v)).collect();
    let counts: Vec<u128> =
        (0..=m.ring().e()).map(|k| fixed.iter().filter(|v| m.scale(m.ring().pow(k), v).iter().all(|&x| x == 0)).count() as u128).collect();
    finab_from_torsion_counts(p, &counts)
}

/// Invariants of a subquotient A/B of M given as explicit element sets.
pub fn quotient_of_sets(m: &GModule, top: &[Vec<u64>], bottom: &HashSet<Vec<u64>>) -> FinAb {
    let counts: Vec<u128> = (0..=m.ring().e())
        .map(|k| (top.iter().filter(|v| bottom.contains(&m.scale(m.ring().pow(k), v))).count() / bottom.len()) as u128)
        .collect();
    finab_from_torsion_counts(m.ring().p(), &counts)
}
