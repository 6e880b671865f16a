//! Cup products on cochains and on hypercochains.

use super::{check_cap, cochain_complex, hyper_cochain_complex, tuple_count, tuple_of, tuple_product, DEGREE_CAP};
use crate::complex::{tensor_complex, ChainMap, Complex, GradedLayout};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::subgroup::check_map;
use crate::linalg::Matrix;
use crate::module::{tensor_exps, GModule, ModuleMap};

/// An equivariant bilinear map L × R → T, stored as a matrix on L ⊗ R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    left: GModule,
    right: GModule,
    target: GModule,
    matrix: Matrix,
}

impl Pairing {
    pub fn new(left: GModule, right: GModule, target: GModule, matrix: Matrix) -> Result<Self> {
        left.check_compatible(&right)?;
        left.check_compatible(&target)?;
        let src = tensor_exps(left.exps(), right.exps());
        if matrix.rows() != src.len() || matrix.cols() != target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "pairing matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                src.len(),
                target.rank()
            )));
        }
        let ring = *left.ring();
        check_map(&matrix, &src, target.exps(), &ring)?;
        for g in 1..left.group().order() {
            let mut lhs = left.action(g).kron(&right.action(g), &ring).mul(&matrix, &ring);
            let mut rhs = matrix.mul(&target.action(g), &ring);
            lhs.reduce_columns(target.exps(), &ring);
            rhs.reduce_columns(target.exps(), &ring);
            if lhs != rhs {
                return Err(Error::NonEquivariantPairing(format!("⟨g·x, g·y⟩ ≠ g·⟨x, y⟩ for group element {g}")));
            }
        }
        Ok(Pairing { left, right, target, matrix })
    }

    /// A pairing from an equivariant map L ⊗ R → T.
    pub fn from_map(left: GModule, right: GModule, map: &ModuleMap) -> Result<Self> {
        Self::new(left, right, map.target.clone(), map.matrix.clone())
    }

    /// The evaluation pairing M^∨ × M → Z/p^e.
    pub fn evaluation(m: &GModule) -> Self {
        let ev = m.evaluation_pairing();
        Pairing { left: m.dual(), right: m.clone(), target: ev.target.clone(), matrix: ev.matrix }
    }

    pub fn left(&self) -> &GModule {
        &self.left
    }

    pub fn right(&self) -> &GModule {
        &self.right
    }

    pub fn target(&self) -> &GModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let ring = *self.left.ring();
        let nr = self.right.rank();
        let mut out = vec![0u64; self.target.rank()];
        for (k, &x) in a.iter().enumerate() {
            for (l, &y) in b.iter().enumerate() {
                let c = ring.mul(x, y);
                if c == 0 {
                    continue;
                }
                for (o, &r) in out.iter_mut().zip(self.matrix.row(k * nr + l)) {
                    *o = ring.add(*o, ring.mul(c, r));
                }
            }
        }
        self.target.reduce_vec(out)
    }
}

/// Writes ε·(α ∪ β) for the basis cochains of C^a(G, X) ⊗ C^b(G, Y) into `out`.
/// `pm` is the pairing block X ⊗ Y → Z; rows are placed at
/// row0 + (index of α)·row_stride + (index of β), columns at col0.
#[allow(clippy::too_many_arguments)]
fn fill_cup(
    out: &mut Matrix,
    g: &FiniteGroup,
    y: &GModule,
    rx: usize,
    rz: usize,
    pm: &Matrix,
    a: usize,
    b: usize,
    eps: u64,
    row0: usize,
    row_stride: usize,
    col0: usize,
) {
    let ring = *y.ring();
    let ry = y.rank();
    let n = g.order();
    // twisted[h] = (1 ⊗ A_h)·P, so that row (k, l) is ⟨e_k, h·e_l⟩.
    let twisted: Vec<Matrix> = (0..n).map(|h| Matrix::identity(rx).kron(&y.action(h), &ring).mul(pm, &ring)).collect();
    let nb = tuple_count(n, b);
    for ta in 0..tuple_count(n, a) {
        let h = tuple_product(g, &tuple_of(ta, a, n));
        for tb in 0..nb {
            let s = ta * nb + tb;
            for k in 0..rx {
                for l in 0..ry {
                    let row = row0 + (ta * rx + k) * row_stride + tb * ry + l;
                    let src = twisted[h].row(k * ry + l);
                    for (z, &v) in src.iter().enumerate() {
                        if v != 0 {
                            out.set(row, col0 + s * rz + z, ring.mul(eps, v));
                        }
                    }
                }
            }
        }
    }
}

/// The cup product C^i(G, L) ⊗ C^j(G, R) → C^{i+j}(G, T) as a matrix; rows are
/// indexed by (index in C^i)·rank C^j + (index in C^j).
pub fn cup_matrix(pairing: &Pairing, i: usize, j: usize) -> Result<Matrix> {
    check_cap((i + j) as i64, DEGREE_CAP + 1)?;
    let g = pairing.left.group();
    let n = g.order();
    let (rl, rr, rt) = (pairing.left.rank(), pairing.right.rank(), pairing.target.rank());
    let rows_j = tuple_count(n, j) * rr;
    let mut out = Matrix::zeros(tuple_count(n, i) * rl * rows_j, tuple_count(n, i + j) * rt);
    fill_cup(&mut out, g, &pairing.right, rl, rt, &pairing.matrix, i, j, 1, 0, rows_j, 0);
    Ok(out)
}

/// The cup product as a chain map C(G, L) ⊗ C(G, R) → C(G, T) on cochains of
/// degree at most `top`.
pub fn pairing_chain_map(pairing: &Pairing, top: usize) -> Result<ChainMap> {
    let cl = cochain_complex(&pairing.left, top)?;
    let cr = cochain_complex(&pairing.right, top)?;
    let ct = cochain_complex(&pairing.target, top)?;
    let src = tensor_complex(&cl, &cr);
    let ring = *pairing.left.ring();
    let mut comps = Vec::new();
    for deg in src.lo()..=src.hi() {
        let lay = GradedLayout::tensor(&cl, &cr, deg);
        let mut m = Matrix::zeros(src.rank(deg), ct.rank(deg));
        if deg <= top as i64 {
            for &(i, off, _) in &lay.blocks {
                let j = (deg - i) as usize;
                let block = cup_matrix(pairing, i as usize, j)?;
                m.set_block(off, 0, &block);
            }
        }
        m.reduce_columns(ct.exps(deg), &ring);
        comps.push(m);
    }
    ChainMap::new(src.clone(), ct, src.lo(), comps).map_err(|e| Error::IncompatiblePairings(format!("cup is not a chain map: {e}")))
}

/// The cup product C(G, X) ⊗ C(G, Y) → C(G, Z) on hypercochains induced by a
/// chain map X ⊗ Y → Z; the summand C^a(X^i) ⊗ C^b(Y^k) carries the sign (−1)^{ak}.
/// Products of cochain degree above `top` vanish.
pub fn total_cup(x: &Complex, y: &Complex, pairing: &ChainMap, top: usize) -> Result<ChainMap> {
    if pairing.source != tensor_complex(x, y) {
        return Err(Error::IncompatiblePairings("pairing is not defined on X ⊗ Y".into()));
    }
    let z = &pairing.target;
    let ring = *x.ring();
    let g = x.group().clone();
    let (tx, lx) = hyper_cochain_complex(x, top)?;
    let (ty, ly) = hyper_cochain_complex(y, top)?;
    let (tz, lz) = hyper_cochain_complex(z, top)?;
    let src = tensor_complex(&tx, &ty);
    let mut comps = Vec::new();
    for n in src.lo()..=src.hi() {
        let lay = GradedLayout::tensor(&tx, &ty, n);
        let mut m = Matrix::zeros(src.rank(n), tz.rank(n));
        for &(p, off, _) in &lay.blocks {
            let q = n - p;
            let stride = ty.rank(q);
            for &(i, a, offa, _) in lx.blocks(p) {
                for &(k, b, offb, _) in ly.blocks(q) {
                    if a + b > top as i64 {
                        continue;
                    }
                    let Some((col0, _)) = lz.block(n, i + k) else { continue };
                    let pl = GradedLayout::tensor(x, y, i + k);
                    let Some(poff) = pl.offset(i) else { continue };
                    let (rx, ryk) = (x.rank(i), y.rank(k));
                    let pm = pairing.component(i + k).block(poff, 0, rx * ryk, z.rank(i + k));
                    let ym = y.term(k);
                    let eps = ring.sign(a * k, 1);
                    fill_cup(&mut m, &g, &ym, rx, z.rank(i + k), &pm, a as usize, b as usize, eps, off + offa * stride + offb, stride, col0);
                }
            }
        }
        m.reduce_columns(tz.exps(n), &ring);
        comps.push(m);
    }
    ChainMap::new(src.clone(), tz, src.lo(), comps).map_err(|e| Error::IncompatiblePairings(format!("total cup is not a chain map: {e}")))
}
