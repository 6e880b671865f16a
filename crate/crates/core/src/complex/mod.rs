//! Bounded cochain complexes of G-modules, chain maps and homotopies.

mod les;
mod ops;
mod triangle;

pub use ops::{
    adjunction_first, adjunction_maps, adjunction_second, cone, cone_cup, curry, dd_zero, fiber, hom_complex, hom_precompose, shift, shift_map, tensor_complex, tensor_map, translation_hom,
    translation_tensor_left, translation_tensor_right, truncate, ConeCup, ConeData, GradedLayout, Truncation, TruncationKind,
};
pub use les::{check_short_exact, connecting_map, long_exact_sequence, LesReport, LesTerm};
pub use triangle::{two_out_of_three, Triangle, TrianglePair, TwoOfThreeReport};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::subgroup::{check_map, kernel_unchecked};
use crate::linalg::{FinAb, Matrix, RingSpec, Subquotient};
use crate::module::GModule;

/// A complex X^lo → … → X^hi; terms outside the range are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    ring: RingSpec,
    group: Arc<FiniteGroup>,
    lo: i64,
    terms: Vec<GModule>,
    /// diffs[k]: terms[k] → terms[k+1].
    diffs: Vec<Matrix>,
}

impl Complex {
    /// Validates shapes, order congruences, equivariance and d∘d = 0.
    pub fn new(lo: i64, terms: Vec<GModule>, diffs: Vec<Matrix>, ring: RingSpec, group: Arc<FiniteGroup>) -> Result<Self> {
        let c = Self::new_unchecked(lo, terms, diffs, ring, group);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(lo: i64, terms: Vec<GModule>, mut diffs: Vec<Matrix>, ring: RingSpec, group: Arc<FiniteGroup>) -> Self {
        for (k, d) in diffs.iter_mut().enumerate() {
            d.reduce_columns(terms[k + 1].exps(), &ring);
        }
        Complex { ring, group, lo, terms, diffs }
    }

    pub fn zero(ring: RingSpec, group: Arc<FiniteGroup>) -> Self {
        Complex { ring, group, lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// A single module placed in degree `deg`.
    pub fn concentrated(m: GModule, deg: i64) -> Self {
        Complex { ring: *m.ring(), group: m.group().clone(), lo: deg, terms: vec![m], diffs: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.diffs.len() + 1 != self.terms.len() && !(self.terms.is_empty() && self.diffs.is_empty()) {
            return Err(Error::NotAComplex(format!("{} terms but {} differentials", self.terms.len(), self.diffs.len())));
        }
        for t in &self.terms {
            if t.ring() != &self.ring || t.group() != &self.group {
                return Err(Error::NotAComplex("terms over different rings or groups".into()));
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let deg = self.lo + k as i64;
            check_map(d, self.terms[k].exps(), self.terms[k + 1].exps(), &self.ring)
                .map_err(|e| Error::NotAComplex(format!("d^{deg}: {e}")))?;
            crate::module::ModuleMap::new_unchecked(self.terms[k].clone(), self.terms[k + 1].clone(), d.clone())
                .check_equivariant()
                .map_err(|e| Error::NotAComplex(format!("d^{deg}: {e}")))?;
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let mut dd = self.diffs[k].mul(&self.diffs[k + 1], &self.ring);
            dd.reduce_columns(self.terms[k + 2].exps(), &self.ring);
            if let Some((i, j)) = first_nonzero(&dd) {
                let deg = self.lo + k as i64;
                return Err(Error::NotAComplex(format!(
                    "d^{} ∘ d^{deg} ≠ 0: basis vector {i} of degree {deg} maps to {} in coordinate {j}",
                    deg + 1,
                    dd.get(i, j)
                )));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top degree; below `lo` for the zero complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn in_range(&self, i: i64) -> bool {
        i >= self.lo && i <= self.hi()
    }

    pub fn term(&self, i: i64) -> GModule {
        if self.in_range(i) {
            self.terms[(i - self.lo) as usize].clone()
        } else {
            GModule::trivial(self.ring, self.group.clone(), Vec::new())
        }
    }

    pub fn term_ref(&self, i: i64) -> Option<&GModule> {
        self.in_range(i).then(|| &self.terms[(i - self.lo) as usize])
    }

    pub fn exps(&self, i: i64) -> &[u32] {
        self.term_ref(i).map(|t| t.exps()).unwrap_or(&[])
    }

    pub fn rank(&self, i: i64) -> usize {
        self.exps(i).len()
    }

    /// d^i: X^i → X^{i+1}.
    pub fn diff(&self, i: i64) -> Matrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.rank(i), self.rank(i + 1))
        }
    }

    pub fn diff_ref(&self, i: i64) -> Option<&Matrix> {
        (i >= self.lo && i < self.hi()).then(|| &self.diffs[(i - self.lo) as usize])
    }

    /// Applies d^i to a vector of X^i.
    pub fn apply_diff(&self, i: i64, v: &[u64]) -> Vec<u64> {
        match self.diff_ref(i) {
            Some(d) => self.reduce(i + 1, d.apply(v, &self.ring)),
            None => vec![0; self.rank(i + 1)],
        }
    }

    pub fn reduce(&self, i: i64, mut v: Vec<u64>) -> Vec<u64> {
        for (x, &a) in v.iter_mut().zip(self.exps(i)) {
            *x %= self.ring.pow(a);
        }
        v
    }

    /// Cocycles Z^i as generators.
    pub fn cocycles(&self, i: i64) -> Matrix {
        if self.rank(i) == 0 {
            return Matrix::zeros(0, 0);
        }
        match self.diff_ref(i) {
            Some(d) => kernel_unchecked(d, self.exps(i), self.exps(i + 1), &self.ring),
            None => Matrix::identity(self.rank(i)),
        }
    }

    /// Coboundaries B^i as generators.
    pub fn coboundaries(&self, i: i64) -> Matrix {
        match self.diff_ref(i - 1) {
            Some(d) => d.clone(),
            None => Matrix::zeros(0, self.rank(i)),
        }
    }

    /// H^i with coordinates and representatives.
    pub fn cohomology_sq(&self, i: i64) -> Subquotient {
        let n = self.rank(i);
        let z = self.cocycles(i);
        let z = if z.cols() != n { Matrix::zeros(0, n) } else { z };
        Subquotient::new(&z, &self.coboundaries(i), self.exps(i), &self.ring).expect("coboundaries are cocycles")
    }

    pub fn cohomology(&self, i: i64) -> FinAb {
        if self.rank(i) == 0 {
            return FinAb::zero(self.ring.p());
        }
        self.cohomology_sq(i).invariants()
    }

    pub fn is_acyclic(&self) -> bool {
        (self.lo..=self.hi()).all(|i| self.cohomology(i).is_zero())
    }

    /// Same complex regarded over the trivial group.
    pub fn underlying(&self) -> Complex {
        let group = Arc::new(FiniteGroup::trivial());
        let terms = self.terms.iter().map(|t| t.underlying()).collect();
        Complex { ring: self.ring, group, lo: self.lo, terms, diffs: self.diffs.clone() }
    }
}

pub(crate) fn first_nonzero(m: &Matrix) -> Option<(usize, usize)> {
    (0..m.rows()).find_map(|i| m.row(i).iter().position(|&x| x != 0).map(|j| (i, j)))
}

/// A morphism of complexes, given degreewise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Complex,
    pub target: Complex,
    /// Components for degrees lo..=hi of the union range; zero elsewhere.
    lo: i64,
    comps: Vec<Matrix>,
}

impl ChainMap {
    /// Components are given for degrees `lo..lo + comps.len()`; others are zero.
    pub fn new(source: Complex, target: Complex, lo: i64, comps: Vec<Matrix>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, lo, comps);
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Complex, target: Complex, lo: i64, comps: Vec<Matrix>) -> Self {
        let mut f = ChainMap { source, target, lo, comps };
        for k in 0..f.comps.len() {
            let i = lo + k as i64;
            let exps = f.target.exps(i).to_vec();
            f.comps[k].reduce_columns(&exps, &f.source.ring);
        }
        f
    }

    /// Builds components from a closure over the union degree range.
    pub fn from_fn(source: Complex, target: Complex, f: impl FnMut(i64) -> Matrix) -> Result<Self> {
        let (lo, hi) = union_range(&source, &target);
        let comps = (lo..=hi).map(f).collect();
        Self::new(source, target, lo, comps)
    }

    pub(crate) fn from_fn_unchecked(source: Complex, target: Complex, f: impl FnMut(i64) -> Matrix) -> Self {
        let (lo, hi) = union_range(&source, &target);
        let comps = (lo..=hi).map(f).collect();
        Self::new_unchecked(source, target, lo, comps)
    }

    pub fn identity(x: &Complex) -> Self {
        Self::from_fn_unchecked(x.clone(), x.clone(), |i| Matrix::identity(x.rank(i)))
    }

    pub fn zero(x: &Complex, y: &Complex) -> Self {
        Self::from_fn_unchecked(x.clone(), y.clone(), |i| Matrix::zeros(x.rank(i), y.rank(i)))
    }

    pub fn component(&self, i: i64) -> Matrix {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            Matrix::zeros(self.source.rank(i), self.target.rank(i))
        }
    }

    pub fn apply(&self, i: i64, v: &[u64]) -> Vec<u64> {
        self.target.reduce(i, self.component(i).apply(v, &self.source.ring))
    }

    pub fn validate(&self) -> Result<()> {
        let ring = self.source.ring;
        if self.source.ring != self.target.ring || self.source.group != self.target.group {
            return Err(Error::NotAChainMap("source and target over different rings or groups".into()));
        }
        let (lo, hi) = union_range(&self.source, &self.target);
        for i in lo..=hi {
            let f = self.component(i);
            if f.rows() != self.source.rank(i) || f.cols() != self.target.rank(i) {
                return Err(Error::NotAChainMap(format!("component {i} has shape {}x{}", f.rows(), f.cols())));
            }
            check_map(&f, self.source.exps(i), self.target.exps(i), &ring).map_err(|e| Error::NotAChainMap(format!("degree {i}: {e}")))?;
            crate::module::ModuleMap::new_unchecked(self.source.term(i), self.target.term(i), f.clone())
                .check_equivariant()
                .map_err(|e| Error::NotAChainMap(format!("degree {i}: {e}")))?;
        }
        for i in lo - 1..=hi {
            let lhs = self.component(i).mul(&self.target.diff(i), &ring);
            let rhs = self.source.diff(i).mul(&self.component(i + 1), &ring);
            let mut diff = lhs.sub(&rhs, &ring);
            diff.reduce_columns(self.target.exps(i + 1), &ring);
            if let Some((r, c)) = first_nonzero(&diff) {
                return Err(Error::NotAChainMap(format!(
                    "d∘f ≠ f∘d in degree {i}: basis vector {r} differs in coordinate {c} of degree {}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        let ring = self.source.ring;
        Self::from_fn_unchecked(self.source.clone(), other.target.clone(), |i| self.component(i).mul(&other.component(i), &ring))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        let ring = self.source.ring;
        Self::from_fn_unchecked(self.source.clone(), self.target.clone(), |i| self.component(i).add(&other.component(i), &ring))
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        let ring = self.source.ring;
        Self::from_fn_unchecked(self.source.clone(), self.target.clone(), |i| self.component(i).sub(&other.component(i), &ring))
    }

    pub fn neg(&self) -> ChainMap {
        let ring = self.source.ring;
        Self::from_fn_unchecked(self.source.clone(), self.target.clone(), |i| self.component(i).neg(&ring))
    }

    pub fn scale(&self, c: u64) -> ChainMap {
        let ring = self.source.ring;
        Self::from_fn_unchecked(self.source.clone(), self.target.clone(), |i| self.component(i).scale(c, &ring))
    }

    /// The map induced on H^i.
    pub fn induced(&self, i: i64) -> InducedMap {
        let src = self.source.cohomology_sq(i);
        let tgt = self.target.cohomology_sq(i);
        induced_between(&src, &tgt, |v| self.apply(i, v))
    }

    pub fn is_quasi_iso_in(&self, i: i64) -> bool {
        self.induced(i).is_bijective()
    }

    /// Induced maps in every degree of the union range and whether all are bijective.
    pub fn quasi_iso_report(&self) -> QuasiIsoReport {
        let (lo, hi) = union_range(&self.source, &self.target);
        let maps: Vec<(i64, InducedMap)> = (lo..=hi).map(|i| (i, self.induced(i))).collect();
        let is_quasi_iso = maps.iter().all(|(_, m)| m.is_bijective());
        QuasiIsoReport { maps, is_quasi_iso }
    }

    pub fn is_quasi_iso(&self) -> bool {
        let (lo, hi) = union_range(&self.source, &self.target);
        (lo..=hi).all(|i| self.is_quasi_iso_in(i))
    }

    pub fn degree_range(&self) -> (i64, i64) {
        union_range(&self.source, &self.target)
    }
}

pub(crate) fn union_range(x: &Complex, y: &Complex) -> (i64, i64) {
    match (x.terms.is_empty(), y.terms.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (y.lo, y.hi()),
        (false, true) => (x.lo, x.hi()),
        (false, false) => (x.lo.min(y.lo), x.hi().max(y.hi())),
    }
}

/// A homomorphism between two subquotients, in their invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source: FinAb,
    pub target: FinAb,
    pub source_exps: Vec<u32>,
    pub target_exps: Vec<u32>,
    pub matrix: Matrix,
}

impl InducedMap {
    pub fn is_injective(&self) -> bool {
        if self.source_exps.is_empty() {
            return true;
        }
        let ring = RingSpec::new(self.source.p(), self.max_exp()).expect("valid ring");
        kernel_unchecked(&self.matrix, &self.source_exps, &self.target_exps, &ring).is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        if self.target_exps.is_empty() {
            return true;
        }
        let ring = RingSpec::new(self.source.p(), self.max_exp()).expect("valid ring");
        let img = crate::linalg::Subgroup::new(&self.matrix, &self.target_exps, &ring);
        img.order_log(&ring) == self.target.order_log()
    }

    pub fn is_bijective(&self) -> bool {
        self.source == self.target && self.is_injective()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn max_exp(&self) -> u32 {
        self.source_exps.iter().chain(&self.target_exps).copied().max().unwrap_or(1)
    }
}

/// Matrix of the map src → tgt induced by `f` on representatives.
pub fn induced_between(src: &Subquotient, tgt: &Subquotient, f: impl Fn(&[u64]) -> Vec<u64>) -> InducedMap {
    let gens = src.generators();
    let cols = tgt.factor_exps().len();
    let matrix = Matrix::from_fn_rows(gens.rows(), cols, |k| tgt.coords(&f(gens.row(k))).expect("image of a cocycle is a cocycle"));
    InducedMap {
        source: src.invariants(),
        target: tgt.invariants(),
        source_exps: src.factor_exps(),
        target_exps: tgt.factor_exps(),
        matrix,
    }
}

#[derive(Clone, Debug)]
pub struct QuasiIsoReport {
    pub maps: Vec<(i64, InducedMap)>,
    pub is_quasi_iso: bool,
}

/// s^i: X^i → Y^{i-1} with target − source = d∘s + s∘d.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub source_map: ChainMap,
    pub target_map: ChainMap,
    lo: i64,
    comps: Vec<Matrix>,
}

impl Homotopy {
    pub fn new(source_map: ChainMap, target_map: ChainMap, lo: i64, comps: Vec<Matrix>) -> Result<Self> {
        let h = Homotopy { source_map, target_map, lo, comps };
        h.validate()?;
        Ok(h)
    }

    pub fn component(&self, i: i64) -> Matrix {
        let k = i - self.lo;
        let x = &self.source_map.source;
        let y = &self.source_map.target;
        if k >= 0 && (k as usize) < self.comps.len() {
            self.comps[k as usize].clone()
        } else {
            Matrix::zeros(x.rank(i), y.rank(i - 1))
        }
    }

    pub fn validate(&self) -> Result<()> {
        let x = &self.source_map.source;
        let y = &self.source_map.target;
        if &self.target_map.source != x || &self.target_map.target != y {
            return Err(Error::BadHomotopy("maps have different endpoints".into()));
        }
        let ring = *x.ring();
        let (lo, hi) = union_range(x, y);
        for i in lo..=hi {
            let s = self.component(i);
            if s.rows() != x.rank(i) || s.cols() != y.rank(i - 1) {
                return Err(Error::BadHomotopy(format!("component {i} has shape {}x{}", s.rows(), s.cols())));
            }
            let lhs = self.target_map.component(i).sub(&self.source_map.component(i), &ring);
            let rhs = s.mul(&y.diff(i - 1), &ring).add(&x.diff(i).mul(&self.component(i + 1), &ring), &ring);
            let mut d = lhs.sub(&rhs, &ring);
            d.reduce_columns(y.exps(i), &ring);
            if let Some((r, c)) = first_nonzero(&d) {
                return Err(Error::BadHomotopy(format!(
                    "target − source ≠ d∘s + s∘d in degree {i}: basis vector {r}, coordinate {c}"
                )));
            }
        }
        Ok(())
    }
}
