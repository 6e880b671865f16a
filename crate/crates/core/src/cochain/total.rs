//! Total complexes ⊕_{i+c=n} K^c(M^i) of a coefficient complex M and a
//! cochain-type column construction K, with differential
//! (d_M)_* + (−1)^i δ on K^c(M^i).

use std::sync::Arc;

use super::{check_cap, cochain_complex, tuple_count, DEGREE_CAP};
use crate::complex::{ChainMap, Complex};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::linalg::Matrix;
use crate::module::GModule;

/// Blocks (module degree i, cochain degree c, offset, length) of each total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalLayout {
    pub lo: i64,
    pub hi: i64,
    blocks: Vec<Vec<(i64, i64, usize, usize)>>,
}

impl TotalLayout {
    pub fn blocks(&self, n: i64) -> &[(i64, i64, usize, usize)] {
        if n < self.lo || n > self.hi {
            return &[];
        }
        &self.blocks[(n - self.lo) as usize]
    }

    /// (offset, length) of K^{n−i}(M^i) inside the total degree n.
    pub fn block(&self, n: i64, i: i64) -> Option<(usize, usize)> {
        self.blocks(n).iter().find(|b| b.0 == i).map(|b| (b.2, b.3))
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks(n).iter().map(|b| b.3).sum()
    }
}

/// Total complex of the columns K(M^i), one per degree i of `coeff` starting
/// at coeff.lo(); every column lives in cochain degrees clo..=chi and
/// K^c(M^i) is `slots(c)` copies of M^i.
pub fn total_complex(coeff: &Complex, columns: &[Complex], clo: i64, chi: i64, slots: impl Fn(i64) -> usize) -> (Complex, TotalLayout) {
    let ring = *coeff.ring();
    let trivial = Arc::new(FiniteGroup::trivial());
    if columns.is_empty() || chi < clo {
        let layout = TotalLayout { lo: 0, hi: -1, blocks: Vec::new() };
        return (Complex::zero(ring, trivial), layout);
    }
    let ilo = coeff.lo();
    let ihi = ilo + columns.len() as i64 - 1;
    let (lo, hi) = (ilo + clo, ihi + chi);
    let col = |i: i64| &columns[(i - ilo) as usize];
    let blocks: Vec<Vec<(i64, i64, usize, usize)>> = (lo..=hi)
        .map(|n| {
            let mut off = 0;
            let mut v = Vec::new();
            for i in ilo..=ihi {
                let c = n - i;
                if c < clo || c > chi {
                    continue;
                }
                let len = col(i).rank(c);
                if len > 0 {
                    v.push((i, c, off, len));
                    off += len;
                }
            }
            v
        })
        .collect();
    let layout = TotalLayout { lo, hi, blocks };
    let terms = (lo..=hi)
        .map(|n| {
            let exps: Vec<u32> = layout.blocks(n).iter().flat_map(|&(i, c, _, _)| col(i).exps(c).to_vec()).collect();
            GModule::plain(ring, exps)
        })
        .collect();
    let diffs = (lo..hi)
        .map(|n| {
            let mut d = Matrix::zeros(layout.rank(n), layout.rank(n + 1));
            for &(i, c, off, _) in layout.blocks(n) {
                if let Some((t, _)) = layout.block(n + 1, i + 1) {
                    d.set_block(off, t, &Matrix::identity(slots(c)).kron(&coeff.diff(i), &ring));
                }
                if let Some((t, _)) = layout.block(n + 1, i) {
                    d.set_block(off, t, &col(i).diff(c).scale(ring.sign(i, 1), &ring));
                }
            }
            d
        })
        .collect();
    (Complex::new_unchecked(lo, terms, diffs, ring, trivial), layout)
}

/// A map of total complexes that is block diagonal in (i, c); `block(i, c)`
/// gives the component K^c(M^i) → K'^c(M'^i).
pub fn total_map(
    source: &(Complex, TotalLayout),
    target: &(Complex, TotalLayout),
    mut block: impl FnMut(i64, i64) -> Matrix,
) -> ChainMap {
    let (src, sl) = source;
    let (tgt, tl) = target;
    ChainMap::from_fn_unchecked(src.clone(), tgt.clone(), |n| {
        let mut m = Matrix::zeros(src.rank(n), tgt.rank(n));
        for &(i, c, off, _) in sl.blocks(n) {
            if let Some((t, _)) = tl.block(n, i) {
                m.set_block(off, t, &block(i, c));
            }
        }
        m
    })
}

/// C(G, M•) with cochain degrees 0..=top; equal to the ordinary cochain
/// complex when M• is a single module in degree 0.
pub fn hyper_cochain_complex(x: &Complex, top: usize) -> Result<(Complex, TotalLayout)> {
    check_cap(top as i64, DEGREE_CAP + 1)?;
    let n = x.group().order();
    let columns: Vec<Complex> = if x.hi() < x.lo() {
        Vec::new()
    } else {
        (x.lo()..=x.hi()).map(|i| cochain_complex(&x.term(i), top)).collect::<Result<_>>()?
    };
    Ok(total_complex(x, &columns, 0, top as i64, |c| tuple_count(n, c as usize)))
}
