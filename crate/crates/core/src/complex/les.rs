//! Long exact cohomology sequences of short exact sequences of complexes.

use super::{induced_between, union_range, ChainMap, InducedMap};
use crate::error::{Error, Result};
use crate::linalg::subgroup::{kernel_unchecked, solve_unchecked};
use crate::linalg::{FinAb, Matrix, RingSpec, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesTerm {
    /// "X", "Y" or "Z" for 0 → X → Y → Z → 0.
    pub label: &'static str,
    pub degree: i64,
    pub group: FinAb,
}

/// ⋯ → H^n(X) → H^n(Y) → H^n(Z) → H^{n+1}(X) → ⋯ over a window of degrees.
#[derive(Clone, Debug)]
pub struct LesReport {
    pub terms: Vec<LesTerm>,
    /// maps[k]: terms[k] → terms[k+1].
    pub maps: Vec<InducedMap>,
    /// Exactness at terms[k] for every term except the last.
    pub exact: Vec<bool>,
    /// The connecting map into the first term, H^{lo−1}(Z) → H^lo(X).
    pub incoming: InducedMap,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.exact.iter().all(|&b| b)
    }

    /// Connecting maps H^n(Z) → H^{n+1}(X), by degree n.
    pub fn connecting(&self) -> Vec<(i64, &InducedMap)> {
        self.terms.iter().zip(&self.maps).filter(|(t, _)| t.label == "Z").map(|(t, m)| (t.degree, m)).collect()
    }
}

pub(crate) fn image_order_log(m: &InducedMap, ring: &RingSpec) -> u64 {
    if m.target_exps.is_empty() || m.source_exps.is_empty() {
        return 0;
    }
    Subgroup::new(&m.matrix, &m.target_exps, ring).order_log(ring)
}

/// Whether `g` is exact at its source given the incoming `f`.
pub(crate) fn exact_at(f: &InducedMap, g: &InducedMap, ring: &RingSpec) -> bool {
    let mut comp = if f.matrix.cols() == 0 || g.matrix.cols() == 0 {
        Matrix::zeros(f.matrix.rows(), g.matrix.cols())
    } else {
        f.matrix.mul(&g.matrix, ring)
    };
    comp.reduce_columns(&g.target_exps, ring);
    let ker_g = g.source.order_log() - image_order_log(g, ring);
    comp.is_zero() && ker_g == image_order_log(f, ring)
}

/// Checks that 0 → X → Y → Z → 0 is degreewise exact.
pub fn check_short_exact(i: &ChainMap, p: &ChainMap) -> Result<()> {
    let ring = *i.source.ring();
    if i.target != p.source {
        return Err(Error::NotExact("maps are not composable".into()));
    }
    let (x, y, z) = (&i.source, &i.target, &p.target);
    let (l1, h1) = union_range(x, y);
    let (l2, h2) = union_range(y, z);
    let (lo, hi) = (l1.min(l2), h1.max(h2));
    for n in lo..=hi {
        let (fi, fp) = (i.component(n), p.component(n));
        if x.rank(n) > 0 && !kernel_unchecked(&fi, x.exps(n), y.exps(n), &ring).is_zero() {
            return Err(Error::NotExact(format!("X → Y is not injective in degree {n}")));
        }
        let z_log: u64 = z.exps(n).iter().map(|&a| a as u64).sum();
        if z.rank(n) > 0 && Subgroup::new(&fp, z.exps(n), &ring).order_log(&ring) != z_log {
            return Err(Error::NotExact(format!("Y → Z is not surjective in degree {n}")));
        }
        if y.rank(n) > 0 {
            let ker = if z.rank(n) == 0 { Matrix::identity(y.rank(n)) } else { kernel_unchecked(&fp, y.exps(n), z.exps(n), &ring) };
            let im = if x.rank(n) == 0 { Matrix::zeros(0, y.rank(n)) } else { fi };
            if Subgroup::new(&im, y.exps(n), &ring) != Subgroup::new(&ker, y.exps(n), &ring) {
                return Err(Error::NotExact(format!("image of X differs from kernel of Y → Z in degree {n}")));
            }
        }
    }
    Ok(())
}

/// The connecting map H^n(Z) → H^{n+1}(X): lift along p, apply d, pull back along i.
pub fn connecting_map(i: &ChainMap, p: &ChainMap, n: i64) -> InducedMap {
    let ring = *i.source.ring();
    let (x, y, z) = (&i.source, &i.target, &p.target);
    let src = z.cohomology_sq(n);
    let tgt = x.cohomology_sq(n + 1);
    let (pn, in1) = (p.component(n), i.component(n + 1));
    induced_between(&src, &tgt, |v| {
        let lift = solve_unchecked(&pn, v, y.exps(n), z.exps(n), &ring).expect("Y → Z is surjective");
        let dy = y.apply_diff(n, &lift);
        if x.rank(n + 1) == 0 {
            return Vec::new();
        }
        solve_unchecked(&in1, &dy, x.exps(n + 1), y.exps(n + 1), &ring).expect("d of a lift lies in X")
    })
}

/// The long exact sequence in degrees lo..=hi.
pub fn long_exact_sequence(i: &ChainMap, p: &ChainMap, lo: i64, hi: i64) -> Result<LesReport> {
    check_short_exact(i, p)?;
    let ring = *i.source.ring();
    let (x, y, z) = (&i.source, &i.target, &p.target);
    let mut terms = Vec::new();
    let mut maps = Vec::new();
    for n in lo..=hi {
        terms.push(LesTerm { label: "X", degree: n, group: x.cohomology(n) });
        terms.push(LesTerm { label: "Y", degree: n, group: y.cohomology(n) });
        terms.push(LesTerm { label: "Z", degree: n, group: z.cohomology(n) });
        maps.push(i.induced(n));
        maps.push(p.induced(n));
        if n < hi {
            maps.push(connecting_map(i, p, n));
        }
    }
    let incoming = connecting_map(i, p, lo - 1);
    let mut exact = vec![exact_at(&incoming, &maps[0], &ring)];
    for k in 1..maps.len() {
        exact.push(exact_at(&maps[k - 1], &maps[k], &ring));
    }
    Ok(LesReport { terms, maps, exact, incoming })
}
