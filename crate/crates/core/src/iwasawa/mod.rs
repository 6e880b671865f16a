//! Induced modules _U M = Hom_R(R[Γ/U], M) and M_U = R[Γ/U]^ι ⊗_R M at a
//! finite level Γ = G, their transition maps, the Kronecker and duality
//! isomorphisms, Shapiro maps and towers of cohomology groups.

mod tower;

pub use tower::{
    colim_cohomology, f_gamma_level, ff_gamma_level, lim_cohomology, z_mod_pk_tower, ColimTower, LevelValue, LimTower, Stabilization,
    TowerCohomology, TowerSpec, DEFAULT_WINDOW,
};

use std::sync::Arc;

use crate::cochain::{check_cap, cochain_complex, quotient_group, restriction, tuple_count, SubgroupOf, DEGREE_CAP};
use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{Matrix, Subquotient};
use crate::module::{GModule, LambdaAction, ModuleMap};
use crate::random::permutation_module;

/// A group G with a normal subgroup U and the quotient Γ/U = G/U. Cosets are
/// ordered by least element; coset 0 is U itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDatum {
    group: Arc<FiniteGroup>,
    normal: Vec<usize>,
    quotient: Arc<FiniteGroup>,
    proj: Vec<usize>,
    reps: Vec<usize>,
}

impl QuotientDatum {
    pub fn new(group: Arc<FiniteGroup>, normal: &[usize]) -> Result<Self> {
        let (q, proj) = quotient_group(&group, normal)?;
        let mut normal = normal.to_vec();
        normal.sort_unstable();
        normal.dedup();
        let reps = group.left_cosets(&normal).iter().map(|c| c[0]).collect();
        Ok(QuotientDatum { group, normal, quotient: Arc::new(q), proj, reps })
    }

    /// The datum with U = G.
    pub fn whole(group: Arc<FiniteGroup>) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        Self::new(group, &all).expect("G is normal in itself")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn normal(&self) -> &[usize] {
        &self.normal
    }

    pub fn quotient(&self) -> &Arc<FiniteGroup> {
        &self.quotient
    }

    /// The projection G → Γ/U.
    pub fn proj(&self) -> &[usize] {
        &self.proj
    }

    /// Least element of each coset.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn index(&self) -> usize {
        self.quotient.order()
    }

    pub fn subgroup(&self) -> Result<SubgroupOf> {
        SubgroupOf::new(&self.group, &self.normal)
    }
}

/// Permutation matrix of β ↦ f(β) on R[Γ/U].
fn perm_matrix(k: usize, f: impl Fn(usize) -> usize) -> Matrix {
    let mut m = Matrix::zeros(k, k);
    for b in 0..k {
        m.set(b, f(b), 1);
    }
    m
}

/// The group algebra R[Γ/U] at exponent `a`, with G acting through ρ and
/// Λ acting by left and right multiplication.
pub fn group_algebra(q: &QuotientDatum, ring: crate::RingSpec, a: u32) -> GModule {
    let quo = &q.quotient;
    let k = quo.order();
    let left = (0..k).map(|x| perm_matrix(k, |b| quo.mul(x, b))).collect();
    let right = (0..k).map(|x| perm_matrix(k, |b| quo.mul(b, x))).collect();
    permutation_module(ring, q.group.clone(), &q.normal, a).with_lambda(LambdaAction { quotient: (**quo).clone(), left, right })
}

fn kron_id(p: &Matrix, r: usize, ring: &crate::RingSpec) -> Matrix {
    p.kron(&Matrix::identity(r), ring)
}

/// M_U = R[Γ/U]^ι ⊗_R M with basis β ⊗ e_j at β·rank M + j; G acts diagonally,
/// γ·(β ⊗ x) = βγ^{-1} ⊗ x and (β ⊗ x)·γ = γ^{-1}β ⊗ x.
pub fn induce_tensor(q: &QuotientDatum, m: &GModule) -> Result<GModule> {
    check_group(q, m)?;
    let ring = *m.ring();
    let alg = group_algebra(q, ring, ring.e()).iota_twist()?;
    let lam = alg.lambda().expect("group algebra carries Λ").clone();
    let r = m.rank();
    let left = lam.left.iter().map(|p| kron_id(p, r, &ring)).collect();
    let right = lam.right.iter().map(|p| kron_id(p, r, &ring)).collect();
    Ok(alg.without_lambda().tensor(m).with_lambda(LambdaAction { quotient: lam.quotient.clone(), left, right }))
}

/// _U M = Hom_R(R[Γ/U], M), a function f stored as (f(β))_β at β·rank M + j;
/// (gf)(β) = g·f(g^{-1}β), (γf)(β) = f(βγ), (fγ)(β) = f(γβ).
pub fn induce_hom(q: &QuotientDatum, m: &GModule) -> Result<GModule> {
    check_group(q, m)?;
    let ring = *m.ring();
    let g = &q.group;
    let quo = &q.quotient;
    let (k, r) = (quo.order(), m.rank());
    let exps = m.exps().repeat(k);
    // Row (γ, j) is the function δ_γ e_j; its image is nonzero at the single coset listed.
    let move_deltas = |to: &dyn Fn(usize) -> usize, a: &Matrix| {
        let mut out = Matrix::zeros(k * r, k * r);
        for c in 0..k {
            out.set_block(c * r, to(c) * r, a);
        }
        out
    };
    let id = Matrix::identity(r);
    let action = (0..g.order()).map(|x| move_deltas(&|c| quo.mul(q.proj[x], c), &m.action(x))).collect();
    let left = (0..k).map(|x| move_deltas(&|c| quo.mul(c, quo.inv(x)), &id)).collect();
    let right = (0..k).map(|x| move_deltas(&|c| quo.mul(quo.inv(x), c), &id)).collect();
    Ok(GModule::new(ring, g.clone(), exps, action)?.with_lambda(LambdaAction { quotient: (**quo).clone(), left, right }))
}

fn check_group(q: &QuotientDatum, m: &GModule) -> Result<()> {
    if **m.group() != *q.group {
        return Err(Error::DimensionMismatch(format!("module is over {}, datum over {}", m.group().label(), q.group.label())));
    }
    Ok(())
}

/// Whether F intertwines the Λ-actions of source and target, where the source
/// level maps to the target level by `proj` (the identity when the levels agree).
pub fn lambda_compatible(f: &ModuleMap, proj: Option<&[usize]>) -> Result<bool> {
    let ls = f.source.lambda().ok_or(Error::NoLambdaAction)?;
    let lt = f.target.lambda().ok_or(Error::NoLambdaAction)?;
    let ring = *f.source.ring();
    let exps = f.target.exps();
    let id: Vec<usize> = (0..ls.quotient.order()).collect();
    let proj = proj.unwrap_or(&id);
    if proj.len() != ls.quotient.order() || proj.iter().any(|&x| x >= lt.quotient.order()) {
        return Err(Error::DimensionMismatch("level projection has the wrong shape".into()));
    }
    for (x, &y) in proj.iter().enumerate() {
        for (a, b) in [(&ls.left[x], &lt.left[y]), (&ls.right[x], &lt.right[y])] {
            let mut lhs = a.mul(&f.matrix, &ring);
            let mut rhs = f.matrix.mul(b, &ring);
            lhs.reduce_columns(exps, &ring);
            rhs.reduce_columns(exps, &ring);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn lambda_iso(source: GModule, target: GModule, matrix: Matrix, what: &str) -> Result<ModuleMap> {
    let f = ModuleMap::new(source, target, matrix)?;
    if !lambda_compatible(&f, None)? {
        return Err(Error::InvalidModule(format!("{what} does not respect the Λ-actions")));
    }
    if !f.is_bijective() {
        return Err(Error::InvalidModule(format!("{what} is not bijective")));
    }
    Ok(f)
}

/// M_U → _U M, Σ β ⊗ x_β ↦ Σ x_β δ_β.
pub fn kronecker_iso(q: &QuotientDatum, m: &GModule) -> Result<ModuleMap> {
    let src = induce_tensor(q, m)?;
    let tgt = induce_hom(q, m)?;
    // β ⊗ e_j ↦ δ_β e_j, which is the basis vector with the same index.
    let f = Matrix::identity(src.rank());
    lambda_iso(src, tgt, f, "Kronecker map")
}

/// (M_U)^∨ → (_U(M^∨))^ι, sending φ to β ↦ (x ↦ φ(β ⊗ x)).
pub fn dfm_duality(q: &QuotientDatum, m: &GModule) -> Result<ModuleMap> {
    let src = induce_tensor(q, m)?.dual();
    let tgt = induce_hom(q, &m.dual())?.iota_twist()?;
    // The dual basis of β ⊗ e_j is sent to δ_β e_j^∨.
    let f = Matrix::identity(src.rank());
    lambda_iso(src, tgt, f, "duality map")
}

/// f_U = 1 ⊗ f: M_U → N_U.
pub fn induced_tensor_map(q: &QuotientDatum, f: &ModuleMap) -> Result<ModuleMap> {
    let ring = *f.source.ring();
    let mat = Matrix::identity(q.index()).kron(&f.matrix, &ring);
    ModuleMap::new(induce_tensor(q, &f.source)?, induce_tensor(q, &f.target)?, mat)
}

/// _U f = f ∘ −: _U M → _U N.
pub fn induced_hom_map(q: &QuotientDatum, f: &ModuleMap) -> Result<ModuleMap> {
    let ring = *f.source.ring();
    let mat = Matrix::identity(q.index()).kron(&f.matrix, &ring);
    ModuleMap::new(induce_hom(q, &f.source)?, induce_hom(q, &f.target)?, mat)
}

/// The four maps induced by pr: R[Γ/U] → R[Γ/V] and Tr: gV ↦ Σ_{v ∈ V/U} gvU.
#[derive(Clone, Debug)]
pub struct TransitionMaps {
    /// pr^*: _V M → _U M.
    pub pr_star_hom: ModuleMap,
    /// Tr^*: _U M → _V M.
    pub tr_star_hom: ModuleMap,
    /// pr_*: M_U → M_V.
    pub pr_star_ten: ModuleMap,
    /// Tr_*: M_V → M_U.
    pub tr_star_ten: ModuleMap,
    /// Coset projection Γ/U → Γ/V.
    pub level_proj: Vec<usize>,
}

/// Coset projection Γ/U → Γ/V for U ⊆ V.
pub fn level_projection(fine: &QuotientDatum, coarse: &QuotientDatum) -> Result<Vec<usize>> {
    if fine.group != coarse.group {
        return Err(Error::NotNested("data live over different groups".into()));
    }
    if !fine.normal.iter().all(|x| coarse.normal.binary_search(x).is_ok()) {
        return Err(Error::NotNested(format!("{:?} is not contained in {:?}", fine.normal, coarse.normal)));
    }
    Ok(fine.reps.iter().map(|&r| coarse.proj[r]).collect())
}

pub fn transition_maps(fine: &QuotientDatum, coarse: &QuotientDatum, m: &GModule) -> Result<TransitionMaps> {
    let pr = level_projection(fine, coarse)?;
    let ring = *m.ring();
    let (ku, kv) = (fine.index(), coarse.index());
    // Row β → column pr(β): the matrix of pr, and also of Tr^* on functions.
    let p = Matrix::from_fn_rows(ku, kv, |b| (0..kv).map(|c| u64::from(pr[b] == c)).collect());
    let t = p.transpose();
    let r = m.rank();
    let big = |a: &Matrix| kron_id(a, r, &ring);
    let (hu, hv) = (induce_hom(fine, m)?, induce_hom(coarse, m)?);
    let (tu, tv) = (induce_tensor(fine, m)?, induce_tensor(coarse, m)?);
    Ok(TransitionMaps {
        pr_star_hom: ModuleMap::new(hv.clone(), hu.clone(), big(&t))?,
        tr_star_hom: ModuleMap::new(hu, hv, big(&p))?,
        pr_star_ten: ModuleMap::new(tu.clone(), tv.clone(), big(&p))?,
        tr_star_ten: ModuleMap::new(tv, tu, big(&t))?,
        level_proj: pr,
    })
}

/// Maps of group algebras pr: R[Γ/U] → R[Γ/V] and Tr: R[Γ/V] → R[Γ/U].
pub fn pr_and_trace(fine: &QuotientDatum, coarse: &QuotientDatum, ring: crate::RingSpec) -> Result<(ModuleMap, ModuleMap)> {
    let pr = level_projection(fine, coarse)?;
    let (ku, kv) = (fine.index(), coarse.index());
    let p = Matrix::from_fn_rows(ku, kv, |b| (0..kv).map(|c| u64::from(pr[b] == c)).collect());
    let (au, av) = (group_algebra(fine, ring, ring.e()), group_algebra(coarse, ring, ring.e()));
    Ok((ModuleMap::new(au.clone(), av.clone(), p.clone())?, ModuleMap::new(av, au, p.transpose())?))
}

/// Ind_U^G M = Z[G/U] ⊗ M for any subgroup U (left cosets by least element);
/// for normal U this is M_U without its Λ-actions.
pub fn induced_module(m: &GModule, u: &SubgroupOf) -> GModule {
    let ring = *m.ring();
    permutation_module(ring, m.group().clone(), &u.elems, ring.e()).tensor(m)
}

/// Shapiro map C(G, Ind M) → C(U, M): restriction to U followed by evaluation
/// at the trivial coset, in cochain degrees 0..=top.
pub fn shapiro_map(m: &GModule, u: &SubgroupOf, top: usize) -> Result<ChainMap> {
    check_cap(top as i64, DEGREE_CAP + 1)?;
    let ind = induced_module(m, u);
    let res = restriction(&ind, u, top)?;
    let m_u = m.restrict(u.group.clone(), &u.elems)?;
    let tgt = cochain_complex(&m_u, top)?;
    let ring = *m.ring();
    let r = m.rank();
    let ev = Matrix::from_fn_rows(ind.rank(), r, |row| {
        let mut v = vec![0; r];
        if row < r {
            v[row] = 1;
        }
        v
    });
    let nu = u.group.order();
    let proj = ChainMap::from_fn(res.target.clone(), tgt, |n| {
        if n < 0 {
            return Matrix::zeros(0, 0);
        }
        Matrix::identity(tuple_count(nu, n as usize)).kron(&ev, &ring)
    })?;
    Ok(res.then(&proj))
}

/// M^U as a module over G/U, in the coordinates of the invariant-factor
/// generators of M^U.
pub fn invariant_submodule(q: &QuotientDatum, m: &GModule) -> Result<GModule> {
    check_group(q, m)?;
    let ring = *m.ring();
    let sub = SubgroupOf::new(&q.group, &q.normal)?;
    let mu = m.restrict(sub.group.clone(), &sub.elems)?;
    let sq = Subquotient::new(&mu.fixed_points(), &Matrix::zeros(0, m.rank()), m.exps(), &ring)?;
    let gens = sq.generators().clone();
    let exps = sq.factor_exps();
    let action = q
        .reps
        .iter()
        .map(|&g| Matrix::from_fn_rows(gens.rows(), exps.len(), |i| sq.coords(&m.act(g, gens.row(i))).expect("M^U is G-stable")))
        .collect();
    GModule::new(ring, q.quotient.clone(), exps, action)
}
