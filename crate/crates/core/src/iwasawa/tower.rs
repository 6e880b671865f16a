//! Towers of finite levels and the colimits and limits of cohomology along them.

use std::sync::Arc;

use super::{induce_hom, induce_tensor, level_projection, transition_maps, QuotientDatum};
use crate::cochain::{check_cap, cochain_complex, tuple_count, tuple_index, tuple_of, DEGREE_CAP};
use crate::complex::{induced_between, InducedMap};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{FinAb, Matrix, RingSpec, Subgroup, Subquotient};
use crate::module::{GModule, ModuleMap};

pub const DEFAULT_WINDOW: usize = 2;

/// Levels Γ/U_1 ← Γ/U_2 ← ⋯ ← Γ/U_K given by a decreasing chain of normal
/// subgroups U_1 ⊇ ⋯ ⊇ U_K of one finite group, with a stabilization window.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    levels: Vec<QuotientDatum>,
    /// surjections[k]: level k+2 → level k+1 (1-based levels).
    surjections: Vec<Vec<usize>>,
    window: usize,
}

impl TowerSpec {
    pub fn new(levels: Vec<QuotientDatum>, window: usize) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidGroup("a tower needs at least one level".into()));
        }
        if window == 0 {
            return Err(Error::InvalidGroup("stabilization window must be positive".into()));
        }
        let surjections = levels.windows(2).map(|w| level_projection(&w[1], &w[0])).collect::<Result<_>>()?;
        Ok(TowerSpec { levels, surjections, window })
    }

    /// Γ = Z/p^K with U_k = p^k Γ, so that level k is Z/p^k.
    pub fn cyclic_p_tower(p: u64, levels: usize, window: usize) -> Result<Self> {
        let n = (p as usize).checked_pow(levels as u32).filter(|&n| n <= 1 << 12).ok_or_else(|| {
            Error::CapExceeded { requested: levels as i64, cap: (12.0 / (p as f64).log2()).floor() as i64 }
        })?;
        let g = Arc::new(FiniteGroup::cyclic(n));
        let data = (1..=levels)
            .map(|k| {
                let step = (p as usize).pow(k as u32);
                let u: Vec<usize> = (0..n).step_by(step).collect();
                QuotientDatum::new(g.clone(), &u)
            })
            .collect::<Result<_>>()?;
        Self::new(data, window)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window.max(1);
        self
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.levels[0].group()
    }

    /// Level k, 1-based.
    pub fn level(&self, k: usize) -> Result<&QuotientDatum> {
        if k == 0 || k > self.levels.len() {
            return Err(Error::LevelOutOfRange { level: k, levels: self.levels.len() });
        }
        Ok(&self.levels[k - 1])
    }

    /// The surjection from level k+1 onto level k.
    pub fn surjection(&self, k: usize) -> Result<&[usize]> {
        if k == 0 || k >= self.levels.len() {
            return Err(Error::LevelOutOfRange { level: k + 1, levels: self.levels.len() });
        }
        Ok(&self.surjections[k - 1])
    }
}

/// One level of F_Γ or 𝔽_Γ with its transition map to the neighbouring level.
#[derive(Clone, Debug)]
pub struct LevelValue {
    pub module: GModule,
    /// For F_Γ: pr^* into level k+1. For 𝔽_Γ: pr_* from level k+1.
    pub transition: Option<ModuleMap>,
}

/// Level k of F_Γ(M) = colim _U M.
pub fn f_gamma_level(t: &TowerSpec, m: &GModule, k: usize) -> Result<LevelValue> {
    let q = t.level(k)?;
    let transition = match t.level(k + 1) {
        Ok(next) => Some(transition_maps(next, q, m)?.pr_star_hom),
        Err(_) => None,
    };
    Ok(LevelValue { module: induce_hom(q, m)?, transition })
}

/// Level k of 𝔽_Γ(M) = lim M_U.
pub fn ff_gamma_level(t: &TowerSpec, m: &GModule, k: usize) -> Result<LevelValue> {
    let q = t.level(k)?;
    let transition = match t.level(k + 1) {
        Ok(next) => Some(transition_maps(next, q, m)?.pr_star_ten),
        Err(_) => None,
    };
    Ok(LevelValue { module: induce_tensor(q, m)?, transition })
}

/// Outcome of stabilization detection; an inconclusive run is not an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilization {
    Stable { level: usize, value: FinAb },
    Inconclusive { levels: usize, window: usize },
}

#[derive(Clone, Debug)]
pub struct TowerCohomology {
    pub degree: usize,
    pub window: usize,
    /// H^i at each level.
    pub levels: Vec<FinAb>,
    /// Whether each transition is an isomorphism.
    pub transitions_iso: Vec<bool>,
    pub stabilization: Stabilization,
    /// The chain of levels is taken to be cofinal; this is not verified.
    pub cofinality_assumed: bool,
}

impl TowerCohomology {
    pub fn value(&self) -> Option<&FinAb> {
        match &self.stabilization {
            Stabilization::Stable { value, .. } => Some(value),
            Stabilization::Inconclusive { .. } => None,
        }
    }
}

/// Direct system of groups A_k with maps A_k → A_{k+1}.
#[derive(Clone, Debug)]
pub struct ColimTower {
    pub maps: Vec<InducedMap>,
    pub values: Vec<FinAb>,
}

/// Inverse system of groups A_k with maps A_{k+1} → A_k.
#[derive(Clone, Debug)]
pub struct LimTower {
    pub maps: Vec<InducedMap>,
    pub values: Vec<FinAb>,
}

/// Subgroups of a group ⊕ Z/p^{a_i} given by generator rows.
struct Coords {
    ring: RingSpec,
}

impl Coords {
    fn order_log(&self, gens: &Matrix, exps: &[u32]) -> u64 {
        if exps.is_empty() {
            return 0;
        }
        Subgroup::new(gens, exps, &self.ring).order_log(&self.ring)
    }

    fn invariants(&self, gens: &Matrix, exps: &[u32]) -> FinAb {
        if exps.is_empty() {
            return FinAb::zero(self.ring.p());
        }
        Subquotient::new(gens, &Matrix::zeros(0, exps.len()), exps, &self.ring).expect("zero is a subgroup").invariants()
    }

    fn image(&self, gens: &Matrix, f: &InducedMap) -> Matrix {
        let mut m = gens.mul(&f.matrix, &self.ring);
        m.reduce_columns(&f.target_exps, &self.ring);
        m
    }
}

fn coords_for(p: u64, maps: &[InducedMap], values: &[FinAb]) -> Coords {
    let e = values.iter().flat_map(|v| v.exps().iter().copied()).chain(maps.iter().flat_map(|m| m.source_exps.iter().copied())).max().unwrap_or(1);
    Coords { ring: RingSpec::new(p, e.max(1)).expect("valid ring") }
}

impl ColimTower {
    /// With V_1 = A_1 and V_k = t_{k−1}(A_{k−1}), the system is stable at k when,
    /// for w consecutive j ≥ k, t_j maps V_j injectively onto t_j(A_j); the value is V_k.
    pub fn stabilize(&self, window: usize) -> Stabilization {
        let n = self.values.len();
        let Some(first) = self.values.first() else { return Stabilization::Inconclusive { levels: 0, window } };
        let c = coords_for(first.p(), &self.maps, &self.values);
        let mut v: Vec<Matrix> = vec![Matrix::identity(first.exps().len())];
        for f in &self.maps {
            v.push(f.matrix.clone());
        }
        let good = |j: usize| {
            let f = &self.maps[j];
            let img_v = c.image(&v[j], f);
            let ov = c.order_log(&img_v, &f.target_exps);
            ov == c.order_log(&v[j], &f.source_exps) && ov == c.order_log(&f.matrix, &f.target_exps)
        };
        for k in 0..n {
            if k + window > self.maps.len() {
                break;
            }
            if (k..k + window).all(good) {
                let exps = if k == 0 { self.maps[0].source_exps.clone() } else { self.maps[k - 1].target_exps.clone() };
                return Stabilization::Stable { level: k + 1, value: c.invariants(&v[k], &exps) };
            }
        }
        Stabilization::Inconclusive { levels: n, window }
    }
}

impl LimTower {
    /// With U_k = s_k(A_{k+1}), the system is stable at k when, for w consecutive
    /// j ≥ k, s_j maps U_{j+1} injectively onto U_j; the value is U_k.
    pub fn stabilize(&self, window: usize) -> Stabilization {
        let n = self.values.len();
        let Some(first) = self.values.first() else { return Stabilization::Inconclusive { levels: 0, window } };
        let c = coords_for(first.p(), &self.maps, &self.values);
        let u: Vec<&Matrix> = self.maps.iter().map(|s| &s.matrix).collect();
        let good = |j: usize| {
            let s = &self.maps[j];
            let img = c.image(u[j + 1], s);
            let oi = c.order_log(&img, &s.target_exps);
            oi == c.order_log(u[j + 1], &s.source_exps) && oi == c.order_log(u[j], &s.target_exps)
        };
        for k in 0..n {
            if k + window + 1 > self.maps.len() {
                break;
            }
            if (k..k + window).all(good) {
                return Stabilization::Stable { level: k + 1, value: c.invariants(u[k], &self.maps[k].target_exps) };
            }
        }
        Stabilization::Inconclusive { levels: n, window }
    }
}

/// M^U as a G/U-module together with its inclusion generators in M.
fn invariants_with_gens(q: &QuotientDatum, m: &GModule) -> Result<(GModule, Subquotient)> {
    let ring = *m.ring();
    let sub = q.subgroup()?;
    let mu = m.restrict(sub.group.clone(), &sub.elems)?;
    let sq = Subquotient::new(&mu.fixed_points(), &Matrix::zeros(0, m.rank()), m.exps(), &ring)?;
    Ok((super::invariant_submodule(q, m)?, sq))
}

/// Matrix in degree n of f ↦ a ∘ f ∘ s^n: C^n(H, A) → C^n(G, B) for s: G → H.
fn cochain_pushpull<'a>(a: &'a Matrix, ra: usize, rb: usize, s: &'a [usize], nh: usize, n: usize) -> impl Fn(&[u64]) -> Vec<u64> + 'a {
    let ng = s.len();
    move |f: &[u64]| {
        let mut out = vec![0u64; tuple_count(ng, n) * rb];
        for t in 0..tuple_count(ng, n) {
            let image: Vec<usize> = tuple_of(t, n, ng).iter().map(|&x| s[x]).collect();
            let src = tuple_index(&image, nh);
            let v = &f[src * ra..(src + 1) * ra];
            for (col, o) in out[t * rb..(t + 1) * rb].iter_mut().enumerate() {
                let mut acc = 0u64;
                for (row, &x) in v.iter().enumerate() {
                    acc += x * a.get(row, col);
                }
                *o = acc;
            }
        }
        out
    }
}

/// colim_k H^i(Γ/U_k, M^{U_k}) along inflation, for a module M over the top group.
pub fn colim_cohomology(t: &TowerSpec, m: &GModule, i: usize) -> Result<TowerCohomology> {
    check_cap(i as i64, DEGREE_CAP)?;
    let ring = *m.ring();
    let lv: Vec<(GModule, Subquotient)> = (1..=t.len()).map(|k| invariants_with_gens(t.level(k)?, m)).collect::<Result<_>>()?;
    let sqs: Vec<Subquotient> =
        lv.iter().map(|(mk, _)| Ok(cochain_complex(mk, i + 1)?.cohomology_sq(i as i64))).collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for k in 0..t.len() - 1 {
        let (mk, sk) = &lv[k];
        let (mn, sn) = &lv[k + 1];
        // Inclusion M^{U_k} ⊆ M^{U_{k+1}} in invariant-factor coordinates.
        let incl = Matrix::from_fn_rows(mk.rank(), mn.rank(), |r| sn.coords(sk.generators().row(r)).expect("invariants grow"));
        let s = t.surjection(k + 1)?;
        let f = cochain_pushpull(&incl, mk.rank(), mn.rank(), s, mk.group().order(), i);
        let tgt_exps = crate::cochain::cochain_exps(mn, i);
        maps.push(induced_between(&sqs[k], &sqs[k + 1], |v| {
            let mut w = f(v);
            for (x, &a) in w.iter_mut().zip(&tgt_exps) {
                *x %= ring.pow(a);
            }
            w
        }));
    }
    let values: Vec<FinAb> = sqs.iter().map(|s| s.invariants()).collect();
    let tower = ColimTower { maps, values };
    Ok(report(i, t.window(), tower.values.clone(), &tower.maps, tower.stabilize(t.window())))
}

fn report(i: usize, window: usize, levels: Vec<FinAb>, maps: &[InducedMap], stabilization: Stabilization) -> TowerCohomology {
    TowerCohomology {
        degree: i,
        window,
        levels,
        transitions_iso: maps.iter().map(InducedMap::is_bijective).collect(),
        stabilization,
        cofinality_assumed: true,
    }
}

/// The tower M_k = Z/p^k (trivial action) with reductions M_{k+1} → M_k.
pub fn z_mod_pk_tower(group: Arc<FiniteGroup>, p: u64, levels: usize) -> Result<(Vec<GModule>, Vec<ModuleMap>)> {
    let ring = RingSpec::new(p, levels as u32)?;
    let mods: Vec<GModule> = (1..=levels).map(|k| GModule::trivial(ring, group.clone(), vec![k as u32])).collect();
    let maps = mods.windows(2).map(|w| ModuleMap::new(w[1].clone(), w[0].clone(), Matrix::identity(1))).collect::<Result<_>>()?;
    Ok((mods, maps))
}

/// lim_k H^i(G, M_k) for a tower of G-modules with surjections M_{k+1} → M_k.
pub fn lim_cohomology(modules: &[GModule], maps: &[ModuleMap], i: usize, window: usize) -> Result<TowerCohomology> {
    check_cap(i as i64, DEGREE_CAP)?;
    if modules.is_empty() || maps.len() + 1 != modules.len() || window == 0 {
        return Err(Error::InvalidModule("a module tower needs K modules, K − 1 maps and a positive window".into()));
    }
    for (k, f) in maps.iter().enumerate() {
        if f.source != modules[k + 1] || f.target != modules[k] {
            return Err(Error::InvalidModule(format!("map {k} does not go from level {} to level {}", k + 2, k + 1)));
        }
        let ring = *f.source.ring();
        let img = Subgroup::new(&f.matrix, f.target.exps(), &ring);
        if img.order_log(&ring) != f.target.order_log() {
            return Err(Error::InvalidModule(format!("transition from level {} is not surjective", k + 2)));
        }
    }
    let sqs: Vec<Subquotient> =
        modules.iter().map(|mk| Ok(cochain_complex(mk, i + 1)?.cohomology_sq(i as i64))).collect::<Result<_>>()?;
    let ids: Vec<usize> = (0..modules[0].group().order()).collect();
    let mut out = Vec::new();
    for (k, f) in maps.iter().enumerate() {
        let (src, tgt) = (&modules[k + 1], &modules[k]);
        let ring = *tgt.ring();
        let push = cochain_pushpull(&f.matrix, src.rank(), tgt.rank(), &ids, ids.len(), i);
        let exps = crate::cochain::cochain_exps(tgt, i);
        out.push(induced_between(&sqs[k + 1], &sqs[k], |v| {
            let mut w = push(v);
            for (x, &a) in w.iter_mut().zip(&exps) {
                *x %= ring.pow(a);
            }
            w
        }));
    }
    let values: Vec<FinAb> = sqs.iter().map(|s| s.invariants()).collect();
    let tower = LimTower { maps: out, values };
    Ok(report(i, window, tower.values.clone(), &tower.maps, tower.stabilize(window)))
}
