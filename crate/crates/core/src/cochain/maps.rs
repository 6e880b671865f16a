//! Restriction, inflation and corestriction on cochain complexes.

use std::sync::Arc;

use super::{check_cap, cochain_complex, tuple_count, tuple_index, tuple_of, DEGREE_CAP};
use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::module::GModule;

/// A subgroup U ≤ G as a group in its own right, with its sorted elements in G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupOf {
    pub group: Arc<FiniteGroup>,
    /// elems[i] is the image of element i of `group`.
    pub elems: Vec<usize>,
}

impl SubgroupOf {
    pub fn new(g: &FiniteGroup, elems: &[usize]) -> Result<Self> {
        let group = Arc::new(g.subgroup(elems)?);
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        Ok(SubgroupOf { group, elems })
    }

    pub fn index_of(&self, g: usize) -> Option<usize> {
        self.elems.binary_search(&g).ok()
    }
}

/// G/N for a normal subgroup N, with cosets ordered by least element, and the projection.
pub fn quotient_group(g: &FiniteGroup, n: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
    g.check_subgroup(n)?;
    if !g.is_normal(n) {
        return Err(Error::NotNormal(format!("{n:?} is not normal in {}", g.label())));
    }
    let cosets = g.left_cosets(n);
    let mut proj = vec![0; g.order()];
    for (k, c) in cosets.iter().enumerate() {
        for &x in c {
            proj[x] = k;
        }
    }
    let table = cosets.iter().map(|a| cosets.iter().map(|b| proj[g.mul(a[0], b[0])]).collect()).collect();
    let q = FiniteGroup::from_table_with_cap(table, Some(format!("{}/{}", g.label(), n.len())), usize::MAX)?;
    Ok((q, proj))
}

/// Pullback of cochains along φ: H → G, C(G, M) → C(H, φ^*M), in degrees 0..=top.
pub fn pullback(m: &GModule, h: Arc<FiniteGroup>, phi: &[usize], top: usize) -> Result<ChainMap> {
    check_cap(top as i64, DEGREE_CAP + 1)?;
    let target_module = m.restrict(h.clone(), phi)?;
    let src = cochain_complex(m, top)?;
    let tgt = cochain_complex(&target_module, top)?;
    let (ng, nh, r) = (m.group().order(), h.order(), m.rank());
    Ok(ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |deg| {
        let mut f = Matrix::zeros(src.rank(deg), tgt.rank(deg));
        if deg < 0 {
            return f;
        }
        let deg = deg as usize;
        for s in 0..tuple_count(nh, deg) {
            let image: Vec<usize> = tuple_of(s, deg, nh).iter().map(|&x| phi[x]).collect();
            let t = tuple_index(&image, ng);
            for k in 0..r {
                f.set(t * r + k, s * r + k, 1);
            }
        }
        f
    }))
}

/// Restriction C(G, M) → C(U, Res M).
pub fn restriction(m: &GModule, u: &SubgroupOf, top: usize) -> Result<ChainMap> {
    pullback(m, u.group.clone(), &u.elems, top)
}

/// Inflation C(G/N, M) → C(G, Inf M) for a G/N-module M and the projection G → G/N.
pub fn inflation(m: &GModule, g: Arc<FiniteGroup>, proj: &[usize], top: usize) -> Result<ChainMap> {
    pullback(m, g, proj, top)
}

/// Corestriction C(U, Res M) → C(G, M). With left coset representatives σ and
/// the U-equivariant retraction ρ(g) = g·r(g)^{-1} (r(g) the least element of Ug),
/// (cor c)(g_1,…,g_n) = Σ_σ σ·f(ρ(σ^{-1}), ρ(σ^{-1}g_1), …, ρ(σ^{-1}g_1⋯g_n))
/// where f(u_0,…,u_n) = u_0·c(u_0^{-1}u_1, …, u_{n−1}^{-1}u_n).
pub fn corestriction(m: &GModule, u: &SubgroupOf, top: usize) -> Result<ChainMap> {
    check_cap(top as i64, DEGREE_CAP + 1)?;
    let g = m.group().clone();
    let res = m.restrict(u.group.clone(), &u.elems)?;
    let src = cochain_complex(&res, top)?;
    let tgt = cochain_complex(m, top)?;
    let ring = *m.ring();
    let (ng, nu, r) = (g.order(), u.group.order(), m.rank());
    let reps: Vec<usize> = g.left_cosets(&u.elems).iter().map(|c| c[0]).collect();
    let mut right_rep = vec![0; ng];
    for c in g.right_cosets(&u.elems) {
        for &x in &c {
            right_rep[x] = c[0];
        }
    }
    let rho = |x: usize| g.mul(x, g.inv(right_rep[x]));
    let actions: Vec<Matrix> = (0..ng).map(|x| m.action(x).into_owned()).collect();
    Ok(ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |deg| {
        let mut f = Matrix::zeros(src.rank(deg), tgt.rank(deg));
        if deg < 0 {
            return f;
        }
        let deg = deg as usize;
        for s in 0..tuple_count(ng, deg) {
            let t = tuple_of(s, deg, ng);
            for &sigma in &reps {
                let mut prefix = g.inv(sigma);
                let mut us = vec![rho(prefix)];
                for &x in &t {
                    prefix = g.mul(prefix, x);
                    us.push(rho(prefix));
                }
                let inner: Vec<usize> =
                    us.windows(2).map(|w| u.index_of(g.mul(g.inv(w[0]), w[1])).expect("ρ lands in U")).collect();
                let row = tuple_index(&inner, nu);
                let a = &actions[g.mul(sigma, us[0])];
                for k in 0..r {
                    for l in 0..r {
                        let v = a.get(k, l);
                        if v != 0 {
                            let cur = f.get(row * r + k, s * r + l);
                            f.set(row * r + k, s * r + l, ring.add(cur, v));
                        }
                    }
                }
            }
        }
        f
    }))
}
