//! Enumeration oracles: every value here comes from listing group elements,
//! cochains and module elements, never from the linear algebra under test.

use std::collections::HashSet;

use iwacoh_core::cochain::Cochain;
use iwacoh_core::{FinAb, GModule};

/// Invariants of a finite abelian p-group from the sizes c_k = |A[p^k]|.
pub fn finab_from_torsion_counts(p: u64, counts: &[u128]) -> FinAb {
    let log = |mut x: u128| {
        let mut k = 0u32;
        while x > 1 {
            assert_eq!(x % p as u128, 0, "torsion count is not a power of p");
            x /= p as u128;
            k += 1;
        }
        k
    };
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

fn all_cochains(m: &GModule, deg: usize) -> Vec<Cochain> {
    let elems = m.elements();
    let slots = m.group().order().pow(deg as u32);
    let mut out = vec![Vec::new()];
    for _ in 0..slots {
        out = out.into_iter().flat_map(|t: Vec<u64>| elems.iter().map(move |e| [t.clone(), e.clone()].concat())).collect();
    }
    out.into_iter().map(|t| Cochain::new(m.clone(), deg, t).expect("cochain table")).collect()
}

/// Invariants of A/B for explicit element sets B ⊆ A of M.
pub fn quotient_of_sets(m: &GModule, top: &[Vec<u64>], bottom: &HashSet<Vec<u64>>) -> FinAb {
    let counts: Vec<u128> = (0..=m.ring().e())
        .map(|k| (top.iter().filter(|v| bottom.contains(&m.scale(m.ring().pow(k), v))).count() / bottom.len()) as u128)
        .collect();
    finab_from_torsion_counts(m.ring().p(), &counts)
}

/// H^i(G, M) from the sets of all cocycles and all coboundaries.
pub fn brute_cohomology(m: &GModule, i: usize) -> FinAb {
    let cocycles: Vec<Cochain> = all_cochains(m, i).into_iter().filter(|c| c.coboundary().is_zero()).collect();
    let boundaries: HashSet<Vec<u64>> = if i == 0 {
        HashSet::from([vec![0; m.rank()]])
    } else {
        all_cochains(m, i - 1).iter().map(|c| c.coboundary().table().to_vec()).collect()
    };
    let counts: Vec<u128> = (0..=m.ring().e())
        .map(|k| {
            let scale = m.ring().pow(k);
            let killed = cocycles.iter().filter(|c| boundaries.contains(c.scale(scale).table())).count();
            (killed / boundaries.len()) as u128
        })
        .collect();
    finab_from_torsion_counts(m.ring().p(), &counts)
}

/// M^G by listing the fixed elements.
pub fn brute_invariants(m: &GModule) -> FinAb {
    let fixed: Vec<Vec<u64>> = m.elements().into_iter().filter(|v| (0..m.group().order()).all(|g| &m.act(g, v) == v)).collect();
    let zero = HashSet::from([vec![0; m.rank()]]);
    quotient_of_sets(m, &fixed, &zero)
}

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

/// (Ĥ^0, Ĥ^{−1}) = (M^G / N M, ker N / I_G M) by enumeration.
pub fn norm_oracle(m: &GModule) -> (FinAb, FinAb) {
    let elems = m.elements();
    let order = m.group().order();
    let fixed: Vec<Vec<u64>> = elems.iter().filter(|v| (0..order).all(|g| &m.act(g, v) == *v)).cloned().collect();
    let norms: HashSet<Vec<u64>> = elems.iter().map(|v| norm(m, v)).collect();
    let kernel: Vec<Vec<u64>> = elems.iter().filter(|v| norm(m, v).iter().all(|&x| x == 0)).cloned().collect();
    let aug: Vec<Vec<u64>> = elems.iter().flat_map(|v| (0..order).map(|g| m.sub(&m.act(g, v), v)).collect::<Vec<_>>()).collect();
    (quotient_of_sets(m, &fixed, &norms), quotient_of_sets(m, &kernel, &span(m, &aug)))
}
