//! Finite modules ⊕ Z/p^{a_i} with a group acting by matrices.

use std::borrow::Cow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::subgroup::{check_map, kernel_unchecked, solve_unchecked};
use crate::linalg::{FinAb, Matrix, RingSpec};

/// Left and right actions of a quotient group Γ/U (the finite level of the
/// Iwasawa algebra), one matrix per element, stored independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaAction {
    pub quotient: FiniteGroup,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
}

/// A G-module. Acting matrices follow the row convention: g·v = v · A_g,
/// hence A_{gh} = A_h · A_g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    ring: RingSpec,
    group: Arc<FiniteGroup>,
    exps: Vec<u32>,
    /// A_g for g = 1..n; the identity is implicit.
    action: Vec<Matrix>,
    lambda: Option<Arc<LambdaAction>>,
}

impl GModule {
    /// Validates a full list of action matrices, one per group element.
    pub fn new(ring: RingSpec, group: Arc<FiniteGroup>, exps: Vec<u32>, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidModule(format!("{} action matrices for a group of order {}", action.len(), group.order())));
        }
        let mut m = Self::new_unchecked(ring, group, exps, action.into_iter().skip(1).collect());
        m.validate()?;
        if m.exps.iter().any(|&a| a == 0 || a > ring.e()) {
            return Err(Error::InvalidModule(format!("exponents {:?} must lie in 1..={}", m.exps, ring.e())));
        }
        for a in &mut m.action {
            a.reduce_columns(&m.exps, &ring);
        }
        Ok(m)
    }

    /// Builds the action from images of generators by closing under products.
    pub fn from_generators(ring: RingSpec, group: Arc<FiniteGroup>, exps: Vec<u32>, gens: &[(usize, Matrix)]) -> Result<Self> {
        let n = group.order();
        let mut act: Vec<Option<Matrix>> = vec![None; n];
        act[0] = Some(Matrix::identity(exps.len()));
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for (g, ag) in gens {
                if *g >= n {
                    return Err(Error::InvalidModule(format!("generator {g} is not a group element")));
                }
                // A_{xg} = A_g · A_x
                let y = group.mul(x, *g);
                let ay = ag.mul(act[x].as_ref().expect("visited"), &ring);
                match &act[y] {
                    None => {
                        act[y] = Some(ay);
                        frontier.push(y);
                    }
                    Some(prev) => {
                        let mut a = ay.clone();
                        let mut b = prev.clone();
                        a.reduce_columns(&exps, &ring);
                        b.reduce_columns(&exps, &ring);
                        if a != b {
                            return Err(Error::InvalidModule(format!("generator images do not define an action (conflict at element {y})")));
                        }
                    }
                }
            }
        }
        let action: Option<Vec<Matrix>> = act.into_iter().collect();
        let action = action.ok_or_else(|| Error::InvalidModule("generators do not generate the group".into()))?;
        Self::new(ring, group, exps, action)
    }

    pub(crate) fn new_unchecked(ring: RingSpec, group: Arc<FiniteGroup>, exps: Vec<u32>, action: Vec<Matrix>) -> Self {
        GModule { ring, group, exps, action, lambda: None }
    }

    /// Trivial action on ⊕ Z/p^{exps}.
    pub fn trivial(ring: RingSpec, group: Arc<FiniteGroup>, exps: Vec<u32>) -> Self {
        let n = exps.len();
        let action = vec![Matrix::identity(n); group.order() - 1];
        GModule { ring, group, exps, action, lambda: None }
    }

    /// A module over the trivial group; used for cochain terms.
    pub fn plain(ring: RingSpec, exps: Vec<u32>) -> Self {
        GModule { ring, group: Arc::new(FiniteGroup::trivial()), exps, action: Vec::new(), lambda: None }
    }

    /// Rank-one module on which g acts by the unit `chi[g]`.
    pub fn character(ring: RingSpec, group: Arc<FiniteGroup>, a: u32, chi: &Character) -> Result<Self> {
        let action = (0..group.order()).map(|g| Matrix::from_rows(1, &[vec![chi.value(g)]])).collect();
        Self::new(ring, group, vec![a], action)
    }

    /// Checks exponents, order congruences, identity and the action law.
    pub fn validate(&self) -> Result<()> {
        let n = self.group.order();
        for g in 1..n {
            let a = &self.action[g - 1];
            check_map(a, &self.exps, &self.exps, &self.ring)
                .map_err(|e| Error::InvalidModule(format!("action of element {g}: {e}")))?;
        }
        for g in 0..n {
            for h in 0..n {
                let lhs = self.reduced(&self.action_matrix(self.group.mul(g, h)));
                let rhs = self.reduced(&self.action_matrix(h).mul(&self.action_matrix(g), &self.ring));
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "action is not a homomorphism: A({g}*{h}) differs from the composite of A({h}) and A({g})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn reduced(&self, m: &Matrix) -> Matrix {
        let mut m = m.clone();
        m.reduce_columns(&self.exps, &self.ring);
        m
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn finab(&self) -> FinAb {
        FinAb::new(self.ring.p(), self.exps.iter().copied())
    }

    pub fn order_log(&self) -> u64 {
        self.exps.iter().map(|&a| a as u64).sum()
    }

    pub fn lambda(&self) -> Option<&LambdaAction> {
        self.lambda.as_deref()
    }

    pub fn with_lambda(mut self, lambda: LambdaAction) -> Self {
        self.lambda = Some(Arc::new(lambda));
        self
    }

    pub fn without_lambda(mut self) -> Self {
        self.lambda = None;
        self
    }

    /// The acting matrix A_g.
    pub fn action(&self, g: usize) -> Cow<'_, Matrix> {
        if g == 0 {
            Cow::Owned(Matrix::identity(self.rank()))
        } else {
            Cow::Borrowed(&self.action[g - 1])
        }
    }

    fn action_matrix(&self, g: usize) -> Matrix {
        self.action(g).into_owned()
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = Matrix::identity(self.rank());
        self.action.iter().all(|a| self.reduced(a) == id)
    }

    /// g·v.
    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        if g == 0 {
            return v.to_vec();
        }
        self.reduce_vec(self.action[g - 1].apply(v, &self.ring))
    }

    pub fn reduce_vec(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (x, &a) in v.iter_mut().zip(&self.exps) {
            *x %= self.ring.pow(a);
        }
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.reduce_vec(a.iter().zip(b).map(|(&x, &y)| x + y).collect())
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let q = self.ring.modulus();
        self.reduce_vec(a.iter().zip(b).map(|(&x, &y)| x + q - y % q).collect())
    }

    pub fn scale(&self, c: u64, a: &[u64]) -> Vec<u64> {
        self.reduce_vec(a.iter().map(|&x| self.ring.mul(c, x)).collect())
    }

    /// Every element, in lexicographic order (test oracle; small modules only).
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &a in &self.exps {
            let m = self.ring.pow(a);
            out = out.into_iter().flat_map(|v| (0..m).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    /// The same abelian group and action, with G replaced by `h` acting
    /// through the homomorphism `phi: H → G`.
    pub fn restrict(&self, h: Arc<FiniteGroup>, phi: &[usize]) -> Result<Self> {
        h.check_hom(&self.group, phi)?;
        let action = (1..h.order()).map(|x| self.action_matrix(phi[x])).collect();
        Ok(GModule { ring: self.ring, group: h, exps: self.exps.clone(), action, lambda: None })
    }

    /// Same underlying group with the G-action forgotten.
    pub fn underlying(&self) -> Self {
        Self::plain(self.ring, self.exps.clone())
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<Self> {
        self.check_compatible(other)?;
        let exps = [self.exps.clone(), other.exps.clone()].concat();
        let action = (1..self.group.order()).map(|g| self.action[g - 1].direct_sum(&other.action[g - 1])).collect();
        Ok(GModule { ring: self.ring, group: self.group.clone(), exps, action, lambda: None })
    }

    pub fn direct_sum_all(parts: &[GModule], ring: RingSpec, group: Arc<FiniteGroup>) -> Result<Self> {
        let mut m = GModule::trivial(ring, group, Vec::new());
        for p in parts {
            m = m.direct_sum(p)?;
        }
        Ok(m)
    }

    pub(crate) fn check_compatible(&self, other: &GModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DimensionMismatch(format!("rings {} and {} differ", self.ring, other.ring)));
        }
        if self.group != other.group {
            return Err(Error::DimensionMismatch(format!("groups {} and {} differ", self.group.label(), other.group.label())));
        }
        Ok(())
    }

    /// Generators of the fixed points M^G.
    pub fn fixed_points(&self) -> Matrix {
        let n = self.rank();
        let id = Matrix::identity(n);
        if self.group.order() == 1 {
            return id;
        }
        // Kernel of v ↦ (v(A_g − 1))_g.
        let mut big = Matrix::zeros(n, 0);
        let mut tgt = Vec::new();
        for a in &self.action {
            big = big.hstack(&a.sub(&id, &self.ring));
            tgt.extend_from_slice(&self.exps);
        }
        kernel_unchecked(&big, &self.exps, &tgt, &self.ring)
    }

    /// The Pontryagin dual Hom(M, Z/p^e) in dual-basis coordinates, with
    /// (σf)(m) = f(σ^{-1}m). A functional with coordinates y sends e_i to
    /// p^{e-a_i} y_i.
    /// Λ-level actions dualize as (λφ)(m) = φ(mλ) and (φλ)(m) = φ(λm).
    pub fn dual(&self) -> Self {
        let dm = |a: &Matrix| dual_matrix(a, &self.exps, &self.exps, &self.ring);
        let action = (1..self.group.order()).map(|g| dm(&self.action_matrix(self.group.inv(g)))).collect();
        let lambda = self.lambda.as_ref().map(|l| {
            Arc::new(LambdaAction { quotient: l.quotient.clone(), left: l.right.iter().map(dm).collect(), right: l.left.iter().map(dm).collect() })
        });
        GModule { ring: self.ring, group: self.group.clone(), exps: self.exps.clone(), action, lambda }
    }

    /// M^ι: the left Λ-action becomes γ ↦ (right action of γ^{-1}) and the
    /// right Λ-action becomes γ ↦ (left action of γ^{-1}); the G-action is unchanged.
    pub fn iota_twist(&self) -> Result<Self> {
        let l = self.lambda.as_ref().ok_or(Error::NoLambdaAction)?;
        let q = &l.quotient;
        let left = (0..q.order()).map(|x| l.right[q.inv(x)].clone()).collect();
        let right = (0..q.order()).map(|x| l.left[q.inv(x)].clone()).collect();
        let mut m = self.clone();
        m.lambda = Some(Arc::new(LambdaAction { quotient: q.clone(), left, right }));
        Ok(m)
    }

    /// Evaluation pairing M^∨ ⊗ M → Z/p^e (trivial action).
    pub fn evaluation_pairing(&self) -> ModuleMap {
        let dual = self.dual();
        let t = dual.tensor(self);
        let target = GModule::trivial(self.ring, self.group.clone(), vec![self.ring.e()]);
        let n = self.rank();
        let m = Matrix::from_fn_rows(n * n, 1, |k| {
            let (i, j) = (k / n, k % n);
            vec![if i == j { self.ring.pow(self.ring.e() - self.exps[i]) } else { 0 }]
        });
        ModuleMap::new_unchecked(t, target, m)
    }

    /// Action matrices multiplied by a character.
    pub fn twist(&self, chi: &Character) -> Result<Self> {
        if chi.values.len() != self.group.order() {
            return Err(Error::InvalidModule("character defined on a different group".into()));
        }
        let mut m = self.clone();
        m.lambda = None;
        for g in 1..self.group.order() {
            m.action[g - 1] = self.reduced(&self.action[g - 1].scale(chi.value(g), &self.ring));
        }
        Ok(m)
    }

    /// M ⊗ N with basis e_i ⊗ f_j at index i·rank(N) + j, exponents min(a_i, b_j)
    /// and diagonal action.
    pub fn tensor(&self, other: &GModule) -> Self {
        let exps = tensor_exps(&self.exps, &other.exps);
        let action = (1..self.group.order())
            .map(|g| {
                let mut k = self.action[g - 1].kron(&other.action[g - 1], &self.ring);
                k.reduce_columns(&exps, &self.ring);
                k
            })
            .collect();
        GModule { ring: self.ring, group: self.group.clone(), exps, action, lambda: None }
    }

    /// Hom(M, N) with conjugation action (gf)(m) = g f(g^{-1} m); the
    /// coordinate (i, j) at index i·rank(N) + j holds F[i][j] / p^{max(0, b_j - a_i)}.
    pub fn hom(&self, other: &GModule) -> Self {
        let exps = tensor_exps(&self.exps, &other.exps);
        let action = (1..self.group.order())
            .map(|g| {
                let ainv = self.action_matrix(self.group.inv(g));
                let b = other.action_matrix(g);
                Matrix::from_fn_rows(exps.len(), exps.len(), |k| {
                    let f = hom_basis(k, &self.exps, &other.exps, &self.ring);
                    hom_coords(&ainv.mul(&f, &self.ring).mul(&b, &self.ring), &self.exps, &other.exps, &self.ring)
                })
            })
            .collect();
        GModule { ring: self.ring, group: self.group.clone(), exps, action, lambda: None }
    }
}

pub fn tensor_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x.min(y))).collect()
}

/// Matrix of the homomorphism with a single nonzero entry at hom-coordinate k.
pub fn hom_basis(k: usize, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Matrix {
    let (i, j) = (k / tgt.len(), k % tgt.len());
    let mut f = Matrix::zeros(src.len(), tgt.len());
    f.set(i, j, ring.pow(tgt[j].saturating_sub(src[i])));
    f
}

/// Hom coordinates of a matrix F: M → N.
pub fn hom_coords(f: &Matrix, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Vec<u64> {
    let mut out = Vec::with_capacity(src.len() * tgt.len());
    for (i, &a) in src.iter().enumerate() {
        for (j, &b) in tgt.iter().enumerate() {
            let x = f.get(i, j) % ring.pow(b);
            out.push(x / ring.pow(b.saturating_sub(a)) % ring.pow(a.min(b)));
        }
    }
    out
}

/// Matrix of a hom from its coordinates.
pub fn hom_from_coords(c: &[u64], src: &[u32], tgt: &[u32], ring: &RingSpec) -> Matrix {
    let mut f = Matrix::zeros(src.len(), tgt.len());
    for (i, &a) in src.iter().enumerate() {
        for (j, &b) in tgt.iter().enumerate() {
            f.set(i, j, ring.mul(c[i * tgt.len() + j], ring.pow(b.saturating_sub(a))));
        }
    }
    f
}

/// Matrix of f^∨: N^∨ → M^∨ in dual-basis coordinates, for f: M → N.
pub fn dual_matrix(f: &Matrix, src: &[u32], tgt: &[u32], ring: &RingSpec) -> Matrix {
    let e = ring.e();
    let q = ring.modulus();
    Matrix::from_fn_rows(tgt.len(), src.len(), |j| {
        (0..src.len())
            .map(|i| {
                let x = f.get(i, j) % q * ring.pow(e - tgt[j]) % q;
                let s = ring.pow(e - src[i]);
                debug_assert_eq!(x % s, 0);
                x / s % ring.pow(src[i])
            })
            .collect()
    })
}

/// A homomorphism G → (Z/p^e)^×.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<u64>,
}

impl Character {
    pub fn new(group: &FiniteGroup, ring: &RingSpec, values: Vec<u64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::InvalidModule(format!("character has {} values for a group of order {}", values.len(), group.order())));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % ring.modulus()).collect();
        if let Some(g) = (0..group.order()).find(|&g| !ring.is_unit(values[g])) {
            return Err(Error::InvalidModule(format!("character value at {g} is not a unit")));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if values[group.mul(a, b)] != ring.mul(values[a], values[b]) {
                    return Err(Error::InvalidModule(format!("character is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(Character { values })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Character { values: vec![1; group.order()] }
    }

    pub fn value(&self, g: usize) -> u64 {
        self.values[g]
    }

    pub fn inverse(&self, ring: &RingSpec) -> Self {
        Character { values: self.values.iter().map(|&v| ring.inv_unit(v)).collect() }
    }
}

/// An equivariant homomorphism of G-modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: GModule,
    pub target: GModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: GModule, target: GModule, matrix: Matrix) -> Result<Self> {
        source.check_compatible(&target)?;
        let ring = source.ring;
        check_map(&matrix, &source.exps, &target.exps, &ring)?;
        let mut matrix = matrix;
        matrix.reduce_columns(&target.exps, &ring);
        let f = ModuleMap { source, target, matrix };
        f.check_equivariant()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: GModule, target: GModule, mut matrix: Matrix) -> Self {
        matrix.reduce_columns(&target.exps, &source.ring);
        ModuleMap { source, target, matrix }
    }

    pub fn check_equivariant(&self) -> Result<()> {
        let ring = &self.source.ring;
        for g in 1..self.source.group.order() {
            let lhs = self.target.reduced(&self.source.action[g - 1].mul(&self.matrix, ring));
            let rhs = self.target.reduced(&self.matrix.mul(&self.target.action[g - 1], ring));
            if lhs != rhs {
                return Err(Error::InvalidModule(format!("map does not commute with the action of element {g}")));
            }
        }
        Ok(())
    }

    pub fn identity(m: &GModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.rank()) }
    }

    pub fn zero(source: &GModule, target: &GModule) -> Self {
        ModuleMap { source: source.clone(), target: target.clone(), matrix: Matrix::zeros(source.rank(), target.rank()) }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.target.reduce_vec(self.matrix.apply(v, &self.source.ring))
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.target.exps != other.source.exps {
            return Err(Error::DimensionMismatch("composable maps need matching middle module".into()));
        }
        Ok(ModuleMap::new_unchecked(self.source.clone(), other.target.clone(), self.matrix.mul(&other.matrix, &self.source.ring)))
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix, &self.source.ring))
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg(&self.source.ring))
    }

    pub fn kernel(&self) -> Matrix {
        kernel_unchecked(&self.matrix, &self.source.exps, &self.target.exps, &self.source.ring)
    }

    pub fn solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        solve_unchecked(&self.matrix, y, &self.source.exps, &self.target.exps, &self.source.ring)
    }

    /// f^∨: N^∨ → M^∨.
    pub fn dual(&self) -> ModuleMap {
        let m = dual_matrix(&self.matrix, &self.source.exps, &self.target.exps, &self.source.ring);
        ModuleMap::new_unchecked(self.target.dual(), self.source.dual(), m)
    }

    pub fn tensor(&self, other: &ModuleMap) -> ModuleMap {
        let ring = self.source.ring;
        let m = self.matrix.kron(&other.matrix, &ring);
        ModuleMap::new_unchecked(self.source.tensor(&other.source), self.target.tensor(&other.target), m)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.source.order_log() == self.target.order_log()
    }
}

/// The canonical map M → (M^∨)^∨ in dual-basis coordinates.
pub fn double_dual_map(m: &GModule) -> ModuleMap {
    ModuleMap::new_unchecked(m.clone(), m.dual().dual(), Matrix::identity(m.rank()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sign_module() -> GModule {
        let ring = RingSpec::new(3, 1).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let chi = Character::new(&g, &ring, vec![1, 2]).unwrap();
        GModule::character(ring, g, 1, &chi).unwrap()
    }

    #[test]
    fn dual_of_sign_is_sign() {
        let m = sign_module();
        assert_eq!(m.dual(), m);
    }

    #[test]
    fn tensor_and_hom_orders() {
        let ring = RingSpec::new(2, 2).unwrap();
        let g = Arc::new(FiniteGroup::trivial());
        let z4 = GModule::trivial(ring, g.clone(), vec![2]);
        let z2 = GModule::trivial(ring, g, vec![1]);
        assert_eq!(z4.tensor(&z2).finab().to_string(), "Z/2");
        assert_eq!(z2.hom(&z4).finab().to_string(), "Z/2");
    }
}
