use super::{first_nonzero, union_range, ChainMap, Complex, Homotopy};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RingSpec, Subquotient};
use crate::module::{hom_basis, hom_coords, GModule};

fn sign(ring: &RingSpec, k: i64) -> u64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        ring.modulus() - 1
    }
}

/// X[n]: X[n]^i = X^{n+i} with differential (−1)^n d^{n+i}.
pub fn shift(x: &Complex, n: i64) -> Complex {
    let s = sign(&x.ring, n);
    let diffs = x.diffs.iter().map(|d| d.scale(s, &x.ring)).collect();
    Complex::new_unchecked(x.lo - n, x.terms.clone(), diffs, x.ring, x.group.clone())
}

/// f[n]^i = f^{n+i}.
pub fn shift_map(f: &ChainMap, n: i64) -> ChainMap {
    let src = shift(&f.source, n);
    let tgt = shift(&f.target, n);
    ChainMap::from_fn_unchecked(src, tgt, |i| f.component(i + n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationKind {
    SigmaLe,
    TauLe,
    SigmaGe,
    TauGe,
}

/// A truncation together with its canonical map: X → σ≤X, τ≤X → X,
/// σ≥X → X or X → τ≥X.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub complex: Complex,
    pub map: ChainMap,
}

pub fn truncate(x: &Complex, kind: TruncationKind, i: i64) -> Truncation {
    let ring = x.ring;
    let g = x.group.clone();
    match kind {
        TruncationKind::SigmaLe | TruncationKind::SigmaGe => {
            let keep = |j: i64| if kind == TruncationKind::SigmaLe { j <= i } else { j >= i };
            let (lo, hi) = if kind == TruncationKind::SigmaLe { (x.lo, x.hi().min(i)) } else { (x.lo.max(i), x.hi()) };
            let t = sub_range(x, lo, hi);
            let map = if kind == TruncationKind::SigmaLe {
                ChainMap::from_fn_unchecked(x.clone(), t.clone(), |j| if keep(j) { Matrix::identity(x.rank(j)) } else { Matrix::zeros(x.rank(j), 0) })
            } else {
                ChainMap::from_fn_unchecked(t.clone(), x.clone(), |j| if keep(j) { Matrix::identity(x.rank(j)) } else { Matrix::zeros(0, x.rank(j)) })
            };
            Truncation { complex: t, map }
        }
        TruncationKind::TauLe => {
            if i >= x.hi() {
                return Truncation { complex: x.clone(), map: ChainMap::identity(x) };
            }
            if i < x.lo {
                let z = Complex::zero(ring, g);
                return Truncation { map: ChainMap::zero(&z, x), complex: z };
            }
            let sq = Subquotient::new(&x.cocycles(i), &Matrix::zeros(0, x.rank(i)), x.exps(i), &ring).expect("zero subgroup");
            let gens = sq.generators().clone();
            let term = subquotient_term(&x.term(i), &sq);
            let mut terms: Vec<GModule> = (x.lo..i).map(|j| x.term(j)).collect();
            terms.push(term);
            let mut diffs: Vec<Matrix> = (x.lo..i - 1).map(|j| x.diff(j)).collect();
            if i > x.lo {
                let d = x.diff(i - 1);
                diffs.push(Matrix::from_fn_rows(d.rows(), gens.rows(), |r| sq.coords(d.row(r)).expect("image lies in the kernel")));
            }
            let t = Complex::new_unchecked(x.lo, terms, diffs, ring, g);
            let map = ChainMap::from_fn_unchecked(t.clone(), x.clone(), |j| if j < i { Matrix::identity(x.rank(j)) } else if j == i { gens.clone() } else { Matrix::zeros(0, x.rank(j)) });
            Truncation { complex: t, map }
        }
        TruncationKind::TauGe => {
            if i <= x.lo {
                return Truncation { complex: x.clone(), map: ChainMap::identity(x) };
            }
            if i > x.hi() {
                let z = Complex::zero(ring, g);
                return Truncation { map: ChainMap::zero(x, &z), complex: z };
            }
            let n = x.rank(i);
            let sq = Subquotient::new(&Matrix::identity(n), &x.diff(i - 1), x.exps(i), &ring).expect("image is a subgroup");
            let gens = sq.generators().clone();
            let term = subquotient_term(&x.term(i), &sq);
            let proj = Matrix::from_fn_rows(n, gens.rows(), |r| sq.coords(Matrix::identity(n).row(r)).expect("ambient"));
            let mut terms = vec![term];
            terms.extend((i + 1..=x.hi()).map(|j| x.term(j)));
            let mut diffs = Vec::new();
            if i < x.hi() {
                diffs.push(gens.mul(&x.diff(i), &ring));
            }
            diffs.extend((i + 1..x.hi()).map(|j| x.diff(j)));
            let t = Complex::new_unchecked(i, terms, diffs, ring, g);
            let map = ChainMap::from_fn_unchecked(x.clone(), t.clone(), |j| if j > i { Matrix::identity(x.rank(j)) } else if j == i { proj.clone() } else { Matrix::zeros(x.rank(j), 0) });
            Truncation { complex: t, map }
        }
    }
}

fn sub_range(x: &Complex, lo: i64, hi: i64) -> Complex {
    if hi < lo {
        return Complex::zero(x.ring, x.group.clone());
    }
    let terms = (lo..=hi).map(|j| x.term(j)).collect();
    let diffs = (lo..hi).map(|j| x.diff(j)).collect();
    Complex::new_unchecked(lo, terms, diffs, x.ring, x.group.clone())
}

/// A G-stable subquotient of `m` as a module in its own coordinates.
fn subquotient_term(m: &GModule, sq: &Subquotient) -> GModule {
    let gens = sq.generators();
    let action = (1..m.group().order())
        .map(|g| Matrix::from_fn_rows(gens.rows(), gens.rows(), |t| sq.coords(&m.act(g, gens.row(t))).expect("submodule is G-stable")))
        .collect();
    GModule::new_unchecked(*m.ring(), m.group().clone(), sq.factor_exps(), action)
}

/// Cone(f)^i = Y^i ⊕ X^{i+1}, with (y, x) ↦ (dy + f(x), −dx).
#[derive(Clone, Debug)]
pub struct ConeData {
    pub cone: Complex,
    /// Y → Cone(f).
    pub inclusion: ChainMap,
    /// Cone(f) → X[1].
    pub projection: ChainMap,
}

pub fn cone(f: &ChainMap) -> ConeData {
    let (x, y) = (&f.source, &f.target);
    let ring = x.ring;
    let (lo, hi) = union_range(y, &shift(x, 1));
    let terms: Vec<GModule> = (lo..=hi).map(|i| y.term(i).direct_sum(&x.term(i + 1)).expect("same group")).collect();
    let diffs = (lo..hi)
        .map(|i| {
            let (ny, nx, ny1, nx1) = (y.rank(i), x.rank(i + 1), y.rank(i + 1), x.rank(i + 2));
            let mut d = Matrix::zeros(ny + nx, ny1 + nx1);
            d.set_block(0, 0, &y.diff(i));
            d.set_block(ny, 0, &f.component(i + 1));
            d.set_block(ny, ny1, &x.diff(i + 1).neg(&ring));
            d
        })
        .collect();
    let c = if hi < lo { Complex::zero(ring, x.group.clone()) } else { Complex::new_unchecked(lo, terms, diffs, ring, x.group.clone()) };
    let x1 = shift(x, 1);
    let inclusion = ChainMap::from_fn_unchecked(y.clone(), c.clone(), |i| {
        let mut m = Matrix::zeros(y.rank(i), c.rank(i));
        m.set_block(0, 0, &Matrix::identity(y.rank(i)));
        m
    });
    let projection = ChainMap::from_fn_unchecked(c.clone(), x1.clone(), |i| {
        let mut m = Matrix::zeros(c.rank(i), x1.rank(i));
        m.set_block(y.rank(i), 0, &Matrix::identity(x1.rank(i)));
        m
    });
    ConeData { cone: c, inclusion, projection }
}

/// Cone(f)[−1] written with the source first: E^i = X^i ⊕ Y^{i−1} and
/// d(a, b) = (da, −f(a) − db). Returns E with its projection E → X.
pub fn fiber(f: &ChainMap) -> (Complex, ChainMap) {
    let (x, y) = (&f.source, &f.target);
    let ring = x.ring;
    let y1 = shift(y, -1);
    let (lo, hi) = union_range(x, &y1);
    let terms: Vec<GModule> = (lo..=hi).map(|i| x.term(i).direct_sum(&y.term(i - 1)).expect("same group")).collect();
    let diffs = (lo..hi)
        .map(|i| {
            let (na, nb, na1, nb1) = (x.rank(i), y.rank(i - 1), x.rank(i + 1), y.rank(i));
            let mut d = Matrix::zeros(na + nb, na1 + nb1);
            d.set_block(0, 0, &x.diff(i));
            d.set_block(0, na1, &f.component(i).neg(&ring));
            d.set_block(na, na1, &y.diff(i - 1).neg(&ring));
            d
        })
        .collect();
    let e = if hi < lo { Complex::zero(ring, x.group.clone()) } else { Complex::new_unchecked(lo, terms, diffs, ring, x.group.clone()) };
    let proj = ChainMap::from_fn_unchecked(e.clone(), x.clone(), |i| {
        let mut m = Matrix::zeros(e.rank(i), x.rank(i));
        m.set_block(0, 0, &Matrix::identity(x.rank(i)));
        m
    });
    (e, proj)
}

/// Offsets of the summands of one degree of a tensor or Hom complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLayout {
    /// (index i, offset, length) of each nonzero summand, by increasing i.
    pub blocks: Vec<(i64, usize, usize)>,
    pub total: usize,
}

impl GradedLayout {
    fn build(items: impl Iterator<Item = (i64, usize)>) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for (i, len) in items {
            if len > 0 {
                blocks.push((i, off, len));
                off += len;
            }
        }
        GradedLayout { blocks, total: off }
    }

    pub fn offset(&self, i: i64) -> Option<usize> {
        self.blocks.iter().find(|b| b.0 == i).map(|b| b.1)
    }

    /// Summands M^i ⊗ L^{n−i} of (M ⊗ L)^n.
    pub fn tensor(m: &Complex, l: &Complex, n: i64) -> Self {
        Self::build((m.lo..=m.hi()).map(|i| (i, m.rank(i) * l.rank(n - i))))
    }

    /// Factors Hom(M^i, N^{i+n}) of Hom^n(M, N).
    pub fn hom(m: &Complex, nn: &Complex, n: i64) -> Self {
        Self::build((m.lo..=m.hi()).map(|i| (i, m.rank(i) * nn.rank(i + n))))
    }
}

fn tensor_range(m: &Complex, l: &Complex) -> (i64, i64) {
    if m.terms.is_empty() || l.terms.is_empty() {
        (0, -1)
    } else {
        (m.lo + l.lo, m.hi() + l.hi())
    }
}

/// (M ⊗ L)^n = ⊕ M^i ⊗ L^{n−i} with d(m⊗l) = dm⊗l + (−1)^{deg m} m⊗dl.
pub fn tensor_complex(m: &Complex, l: &Complex) -> Complex {
    let ring = m.ring;
    let (lo, hi) = tensor_range(m, l);
    if hi < lo {
        return Complex::zero(ring, m.group.clone());
    }
    let term = |n: i64| {
        let parts: Vec<GModule> =
            GradedLayout::tensor(m, l, n).blocks.iter().map(|&(i, _, _)| m.term(i).tensor(&l.term(n - i))).collect();
        GModule::direct_sum_all(&parts, ring, m.group.clone()).expect("same group")
    };
    let terms: Vec<GModule> = (lo..=hi).map(term).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let src = GradedLayout::tensor(m, l, n);
            let tgt = GradedLayout::tensor(m, l, n + 1);
            let mut d = Matrix::zeros(src.total, tgt.total);
            for &(i, off, _) in &src.blocks {
                let j = n - i;
                let idl = Matrix::identity(l.rank(j));
                if let Some(t) = tgt.offset(i + 1) {
                    d.set_block(off, t, &m.diff(i).kron(&idl, &ring));
                }
                if let Some(t) = tgt.offset(i) {
                    let idm = Matrix::identity(m.rank(i));
                    d.set_block(off, t, &idm.kron(&l.diff(j), &ring).scale(sign(&ring, i), &ring));
                }
            }
            d
        })
        .collect();
    Complex::new_unchecked(lo, terms, diffs, ring, m.group.clone())
}

/// f ⊗ g: M ⊗ L → M' ⊗ L', acting as f^i ⊗ g^j on each summand.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let ring = f.source.ring;
    let src = tensor_complex(&f.source, &g.source);
    let tgt = tensor_complex(&f.target, &g.target);
    ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |n| {
        let sl = GradedLayout::tensor(&f.source, &g.source, n);
        let tl = GradedLayout::tensor(&f.target, &g.target, n);
        let mut m = Matrix::zeros(src.rank(n), tgt.rank(n));
        for &(i, off, _) in &sl.blocks {
            if let Some(t) = tl.offset(i) {
                m.set_block(off, t, &f.component(i).kron(&g.component(n - i), &ring));
            }
        }
        m
    })
}

fn hom_range(m: &Complex, n: &Complex) -> (i64, i64) {
    if m.terms.is_empty() || n.terms.is_empty() {
        (0, -1)
    } else {
        (n.lo - m.hi(), n.hi() - m.lo)
    }
}

/// Hom^n(M, N) = Π Hom(M^i, N^{i+n}) with df = d∘f − (−1)^n f∘d, so that
/// the degree-0 cocycles are exactly the chain maps.
pub fn hom_complex(m: &Complex, nn: &Complex) -> Complex {
    let ring = m.ring;
    let (lo, hi) = hom_range(m, nn);
    if hi < lo {
        return Complex::zero(ring, m.group.clone());
    }
    let terms: Vec<GModule> = (lo..=hi)
        .map(|n| {
            let parts: Vec<GModule> = GradedLayout::hom(m, nn, n).blocks.iter().map(|&(i, _, _)| m.term(i).hom(&nn.term(i + n))).collect();
            GModule::direct_sum_all(&parts, ring, m.group.clone()).expect("same group")
        })
        .collect();
    let diffs = (lo..hi)
        .map(|n| {
            let src = GradedLayout::hom(m, nn, n);
            let tgt = GradedLayout::hom(m, nn, n + 1);
            let mut d = Matrix::zeros(src.total, tgt.total);
            let s = ring.neg(sign(&ring, n));
            for &(i, off, len) in &src.blocks {
                let (ea, eb) = (m.exps(i), nn.exps(i + n));
                for k in 0..len {
                    let f = hom_basis(k, ea, eb, &ring);
                    if let Some(t) = tgt.offset(i) {
                        let df = f.mul(&nn.diff(i + n), &ring);
                        let c = hom_coords(&df, ea, nn.exps(i + n + 1), &ring);
                        add_into_row(&mut d, off + k, t, &c, &ring);
                    }
                    if let Some(t) = tgt.offset(i - 1) {
                        let fd = m.diff(i - 1).mul(&f, &ring).scale(s, &ring);
                        let c = hom_coords(&fd, m.exps(i - 1), eb, &ring);
                        add_into_row(&mut d, off + k, t, &c, &ring);
                    }
                }
            }
            d
        })
        .collect();
    Complex::new_unchecked(lo, terms, diffs, ring, m.group.clone())
}

fn add_into_row(d: &mut Matrix, row: usize, col: usize, v: &[u64], ring: &RingSpec) {
    for (k, &x) in v.iter().enumerate() {
        let cur = d.get(row, col + k);
        d.set(row, col + k, ring.add(cur, x));
    }
}

/// Hom(M, N)[n] → Hom(M, N[n]), f ↦ f.
pub fn translation_hom(m: &Complex, nn: &Complex, n: i64) -> ChainMap {
    let src = shift(&hom_complex(m, nn), n);
    let tgt = hom_complex(m, &shift(nn, n));
    ChainMap::from_fn_unchecked(src.clone(), tgt, |i| Matrix::identity(src.rank(i)))
}

/// (M[n]) ⊗ L → (M ⊗ L)[n], m⊗l ↦ m⊗l.
pub fn translation_tensor_left(m: &Complex, l: &Complex, n: i64) -> ChainMap {
    let src = tensor_complex(&shift(m, n), l);
    let tgt = shift(&tensor_complex(m, l), n);
    ChainMap::from_fn_unchecked(src.clone(), tgt, |i| Matrix::identity(src.rank(i)))
}

/// M ⊗ (L[n]) → (M ⊗ L)[n], m⊗l ↦ (−1)^{n·deg m} m⊗l.
pub fn translation_tensor_right(m: &Complex, l: &Complex, n: i64) -> ChainMap {
    let ring = m.ring;
    let l_n = shift(l, n);
    let src = tensor_complex(m, &l_n);
    let tgt = shift(&tensor_complex(m, l), n);
    ChainMap::from_fn_unchecked(src.clone(), tgt, |k| {
        let lay = GradedLayout::tensor(m, &l_n, k);
        let mut d = Matrix::zeros(lay.total, lay.total);
        for &(i, off, len) in &lay.blocks {
            d.set_block(off, off, &Matrix::identity(len).scale(sign(&ring, n * i), &ring));
        }
        d
    })
}

/// Value f(a ⊗ b) of a degreewise family of homs on the tensor complex,
/// for basis vectors a of M^i and b of L^j.
fn tensor_row(layout: &GradedLayout, i: i64, a: usize, l_rank: usize, b: usize) -> Option<usize> {
    layout.offset(i).map(|off| off + a * l_rank + b)
}

/// The adjunction Hom(M⊗L, N) → Hom(M, Hom(L, N)), f ↦ (m ↦ (l ↦ f(m⊗l))).
pub fn adjunction_first(m: &Complex, l: &Complex, nn: &Complex) -> ChainMap {
    adjunction(m, l, nn, false)
}

/// The adjunction Hom(M⊗L, N) → Hom(L, Hom(M, N)),
/// f ↦ (l ↦ (m ↦ (−1)^{deg m · deg l} f(m⊗l))).
pub fn adjunction_second(m: &Complex, l: &Complex, nn: &Complex) -> ChainMap {
    adjunction(m, l, nn, true)
}

pub fn adjunction_maps(m: &Complex, l: &Complex, nn: &Complex) -> (ChainMap, ChainMap) {
    (adjunction_first(m, l, nn), adjunction_second(m, l, nn))
}

fn adjunction(m: &Complex, l: &Complex, nn: &Complex, second: bool) -> ChainMap {
    let ring = m.ring;
    let t = tensor_complex(m, l);
    let src = hom_complex(&t, nn);
    // Outer variable x (M, or L when `second`), inner variable y.
    let (outer, inner) = if second { (l, m) } else { (m, l) };
    let inner_hom = hom_complex(inner, nn);
    let tgt = hom_complex(outer, &inner_hom);
    ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |n| {
        let src_lay = GradedLayout::hom(&t, nn, n);
        let tgt_lay = GradedLayout::hom(outer, &inner_hom, n);
        let mut out = Matrix::zeros(src.rank(n), tgt.rank(n));
        for &(tdeg, soff, slen) in &src_lay.blocks {
            let t_lay = GradedLayout::tensor(m, l, tdeg);
            let (t_exps, n_exps) = (t.exps(tdeg), nn.exps(tdeg + n));
            for k in 0..slen {
                let f = hom_basis(k, t_exps, n_exps, &ring);
                for &(xi, toff, _) in &tgt_lay.blocks {
                    let yi = tdeg - xi;
                    if inner.rank(yi) == 0 {
                        continue;
                    }
                    let ih_lay = GradedLayout::hom(inner, nn, xi + n);
                    let Some(ih_off) = ih_lay.offset(yi) else { continue };
                    let ih_exps = inner_hom.exps(xi + n);
                    // Row a of `phi`: image of outer basis a in Hom(inner, N)^{xi+n}.
                    let phi = Matrix::from_fn_rows(outer.rank(xi), ih_exps.len(), |a| {
                        let inner_mat = Matrix::from_fn_rows(inner.rank(yi), n_exps.len(), |b| {
                            let (mi, ma, lj, lb) = if second { (yi, b, xi, a) } else { (xi, a, yi, b) };
                            let row = tensor_row(&t_lay, mi, ma, l.rank(lj), lb).expect("summand present");
                            let s = if second { sign(&ring, mi * lj) } else { 1 };
                            f.row(row).iter().map(|&v| ring.mul(v, s)).collect()
                        });
                        let c = hom_coords(&inner_mat, inner.exps(yi), n_exps, &ring);
                        let mut v = vec![0u64; ih_exps.len()];
                        v[ih_off..ih_off + c.len()].copy_from_slice(&c);
                        v
                    });
                    let c = hom_coords(&phi, outer.exps(xi), ih_exps, &ring);
                    add_into_row(&mut out, soff + k, toff, &c, &ring);
                }
            }
        }
        out
    })
}

/// Output of [`cone_cup`]: the two products E1⊗E2 → E3 on the fibres
/// E_j = Cone(f_j)[−1] and the homotopy s between them.
#[derive(Clone, Debug)]
pub struct ConeCup {
    pub e1: Complex,
    pub e2: Complex,
    pub e3: Complex,
    pub cup0: ChainMap,
    pub cup1: ChainMap,
    /// s((a1,b1)⊗(a2,b2)) = (0, (−1)^{deg a1 + 1} b1∪b2), so that
    /// cup1 − cup0 = d∘s + s∘d.
    pub homotopy: Homotopy,
}

/// Evaluates a product P: X⊗Y → Z on vectors x ∈ X^i, y ∈ Y^j.
pub(crate) fn eval_pairing(p: &ChainMap, x_cx: &Complex, y_cx: &Complex, i: i64, x: &[u64], j: i64, y: &[u64]) -> Vec<u64> {
    let ring = x_cx.ring;
    let lay = GradedLayout::tensor(x_cx, y_cx, i + j);
    let n_out = p.target.rank(i + j);
    let mut out = vec![0u64; n_out];
    let Some(off) = lay.offset(i) else { return out };
    let comp = p.component(i + j);
    let ny = y.len();
    for (a, &xa) in x.iter().enumerate() {
        if xa == 0 {
            continue;
        }
        for (b, &yb) in y.iter().enumerate() {
            if yb == 0 {
                continue;
            }
            let c = ring.mul(xa, yb);
            for (o, &r) in out.iter_mut().zip(comp.row(off + a * ny + b)) {
                *o = ring.add(*o, ring.mul(c, r));
            }
        }
    }
    p.target.reduce(i + j, out)
}

fn check_pairing_shape(cup: &ChainMap, x: &Complex, y: &Complex, name: &str) -> Result<()> {
    if cup.source != tensor_complex(x, y) {
        return Err(Error::IncompatiblePairings(format!("{name} is not defined on the tensor product of its factors")));
    }
    Ok(())
}

pub fn cone_cup(cup_a: &ChainMap, cup_b: &ChainMap, f1: &ChainMap, f2: &ChainMap, f3: &ChainMap) -> Result<ConeCup> {
    let (a1, a2, a3) = (&f1.source, &f2.source, &f3.source);
    let (b1, b2, b3) = (&f1.target, &f2.target, &f3.target);
    let ring = a1.ring;
    check_pairing_shape(cup_a, a1, a2, "∪_A")?;
    check_pairing_shape(cup_b, b1, b2, "∪_B")?;
    if &cup_a.target != a3 || &cup_b.target != b3 {
        return Err(Error::IncompatiblePairings("products do not land in A3, B3".into()));
    }
    for i in a1.lo..=a1.hi() {
        for j in a2.lo..=a2.hi() {
            let id1 = Matrix::identity(a1.rank(i));
            let id2 = Matrix::identity(a2.rank(j));
            for x in 0..a1.rank(i) {
                for y in 0..a2.rank(j) {
                    let lhs = f3.apply(i + j, &eval_pairing(cup_a, a1, a2, i, id1.row(x), j, id2.row(y)));
                    let rhs = eval_pairing(cup_b, b1, b2, i, &f1.apply(i, id1.row(x)), j, &f2.apply(j, id2.row(y)));
                    if lhs != rhs {
                        return Err(Error::IncompatiblePairings(format!(
                            "f3∘∪_A ≠ ∪_B∘(f1⊗f2) on basis vectors ({i}:{x}) ⊗ ({j}:{y})"
                        )));
                    }
                }
            }
        }
    }
    let (e1, _) = fiber(f1);
    let (e2, _) = fiber(f2);
    let (e3, _) = fiber(f3);
    let t = tensor_complex(&e1, &e2);
    let (e1r, e2r, e3r) = (&e1, &e2, &e3);
    let unit = |n: usize, k: usize| {
        let mut v = vec![0u64; n];
        v[k] = 1;
        v
    };
    // Builds the matrix of a bilinear rule on E1^i ⊗ E2^j → E3^{i+j+shift}.
    let build = |shift_deg: i64, rule: &dyn Fn(i64, usize, i64, usize) -> Vec<u64>| {
        let (lo, hi) = union_range(&t, e3r);
        let comps: Vec<Matrix> = (lo..=hi)
            .map(|n| {
                let lay = GradedLayout::tensor(e1r, e2r, n);
                let cols = e3r.rank(n + shift_deg);
                let mut m = Matrix::zeros(t.rank(n), cols);
                for &(i, off, _) in &lay.blocks {
                    let j = n - i;
                    let n2 = e2r.rank(j);
                    for u in 0..e1r.rank(i) {
                        for v in 0..n2 {
                            let row = rule(i, u, j, v);
                            m.row_mut(off + u * n2 + v).copy_from_slice(&row);
                        }
                    }
                }
                m
            })
            .collect();
        (lo, comps)
    };
    let split = |v: &[u64], na: usize| (v[..na].to_vec(), v[na..].to_vec());
    let (unit, split) = (&unit, &split);
    let cup_rule = move |which: u8| {
        move |i: i64, u: usize, j: i64, v: usize| -> Vec<u64> {
            let (na1, na2) = (a1.rank(i), a2.rank(j));
            let (x1, y1) = split(&unit(e1r.rank(i), u), na1);
            let (x2, y2) = split(&unit(e2r.rank(j), v), na2);
            let mut out = eval_pairing(cup_a, a1, a2, i, &x1, j, &x2);
            let b_part = if which == 0 {
                let fa = f1.apply(i, &x1);
                let r = eval_pairing(cup_b, b1, b2, i, &fa, j - 1, &y2);
                r.iter().map(|&z| ring.mul(z, sign(&ring, i))).collect::<Vec<u64>>()
            } else {
                let fa = f2.apply(j, &x2);
                eval_pairing(cup_b, b1, b2, i - 1, &y1, j, &fa)
            };
            out.extend(b_part);
            e3r.reduce(i + j, out)
        }
    };
    let (lo0, c0) = build(0, &cup_rule(0));
    let (lo1, c1) = build(0, &cup_rule(1));
    let cup0 = ChainMap::new(t.clone(), e3r.clone(), lo0, c0).map_err(|e| Error::IncompatiblePairings(format!("∪_0: {e}")))?;
    let cup1 = ChainMap::new(t.clone(), e3r.clone(), lo1, c1).map_err(|e| Error::IncompatiblePairings(format!("∪_1: {e}")))?;
    let s_rule = |i: i64, u: usize, j: i64, v: usize| -> Vec<u64> {
        let (na1, na2) = (a1.rank(i), a2.rank(j));
        let (_, y1) = split(&unit(e1r.rank(i), u), na1);
        let (_, y2) = split(&unit(e2r.rank(j), v), na2);
        let mut out = vec![0u64; a3.rank(i + j - 1)];
        let r = eval_pairing(cup_b, b1, b2, i - 1, &y1, j - 1, &y2);
        out.extend(r.iter().map(|&z| ring.mul(z, sign(&ring, i + 1))));
        e3r.reduce(i + j - 1, out)
    };
    let (slo, sc) = build(-1, &s_rule);
    let homotopy = Homotopy::new(cup0.clone(), cup1.clone(), slo, sc)?;
    Ok(ConeCup { e1, e2, e3, cup0, cup1, homotopy })
}

/// Checks d∘d = 0 directly on a complex (used by property tests).
pub fn dd_zero(x: &Complex) -> bool {
    (x.lo..x.hi()).all(|i| {
        let mut dd = x.diff(i).mul(&x.diff(i + 1), &x.ring);
        dd.reduce_columns(x.exps(i + 2), &x.ring);
        first_nonzero(&dd).is_none()
    })
}

/// The adjoint X → Hom(L, N) of a chain map P: X ⊗ L → N,
/// x ↦ (l ↦ P(x⊗l)).
pub fn curry(p: &ChainMap, x: &Complex, l: &Complex) -> Result<ChainMap> {
    if p.source != tensor_complex(x, l) {
        return Err(Error::DimensionMismatch("curry: map is not defined on X ⊗ L".into()));
    }
    let ring = x.ring;
    let nn = &p.target;
    let tgt = hom_complex(l, nn);
    let comps = (x.lo..=x.hi())
        .map(|i| {
            let h_lay = GradedLayout::hom(l, nn, i);
            let mut out = Matrix::zeros(x.rank(i), tgt.rank(i));
            for &(j, hoff, _) in &h_lay.blocks {
                let comp = p.component(i + j);
                let Some(toff) = GradedLayout::tensor(x, l, i + j).offset(i) else { continue };
                let (le, ne) = (l.exps(j), nn.exps(i + j));
                for a in 0..x.rank(i) {
                    let inner = Matrix::from_fn_rows(l.rank(j), ne.len(), |b| comp.row(toff + a * l.rank(j) + b).to_vec());
                    let c = hom_coords(&inner, le, ne, &ring);
                    add_into_row(&mut out, a, hoff, &c, &ring);
                }
            }
            out
        })
        .collect();
    ChainMap::new(x.clone(), tgt, x.lo, comps)
}

/// Precomposition Hom(B, N) → Hom(A, N), φ ↦ φ∘g, for a chain map g: A → B.
pub fn hom_precompose(g: &ChainMap, nn: &Complex) -> ChainMap {
    let ring = nn.ring;
    let (a, b) = (&g.source, &g.target);
    let src = hom_complex(b, nn);
    let tgt = hom_complex(a, nn);
    ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |n| {
        let s_lay = GradedLayout::hom(b, nn, n);
        let t_lay = GradedLayout::hom(a, nn, n);
        let mut out = Matrix::zeros(src.rank(n), tgt.rank(n));
        for &(i, soff, slen) in &s_lay.blocks {
            let Some(toff) = t_lay.offset(i) else { continue };
            let gi = g.component(i);
            for k in 0..slen {
                let f = hom_basis(k, b.exps(i), nn.exps(i + n), &ring);
                let c = hom_coords(&gi.mul(&f, &ring), a.exps(i), nn.exps(i + n), &ring);
                add_into_row(&mut out, soff + k, toff, &c, &ring);
            }
        }
        out
    })
}
